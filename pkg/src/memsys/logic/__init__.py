"""Temporal logic with past operators and counting quantifiers."""

from . import ast
from .brute import brute_force_check
from .checker import MODES, check_all, model_check, prepare
from .eliminate import BindError, UnboundVariable, UnknownName, bind, eliminate_counting, simplify
from .evaluate import LogicModel, Verdict, eval_at
from .parser import FormulaSyntaxError, parse_formula, read_formula_file

__all__ = [
    "ast", "MODES", "BindError", "UnboundVariable", "UnknownName", "FormulaSyntaxError",
    "LogicModel", "Verdict", "bind", "brute_force_check", "check_all", "eliminate_counting",
    "eval_at", "model_check", "parse_formula", "prepare", "read_formula_file", "simplify",
]
