"""Presburger arithmetic, semilinear sets, Parikh automata and computed predicates."""

from .family import (
    BOTTOM,
    SpecReport,
    SystemFamily,
    TableRow,
    check_semilinear_spec,
    computed_predicate_table,
    family_from_dict,
    load_family,
    table_to_csv,
)
from .parikh import (
    AlphabetError,
    NonemptinessReport,
    ParikhAutomaton,
    pa_accepts,
    pa_bounded_nonempty,
    parikh_image,
    projection,
    system_to_parikh,
)
from .presburger import (
    DimensionError,
    PresburgerSyntaxError,
    eval_presburger,
    parse_presburger,
    read_spec_file,
)
from .semilinear import LinearSet, SemilinearSet, enumerate_members, semilinear_membership

__all__ = [
    "BOTTOM", "AlphabetError", "DimensionError", "LinearSet", "NonemptinessReport",
    "ParikhAutomaton", "PresburgerSyntaxError", "SemilinearSet", "SpecReport", "SystemFamily",
    "TableRow", "check_semilinear_spec", "computed_predicate_table", "enumerate_members",
    "eval_presburger", "family_from_dict", "load_family", "pa_accepts", "pa_bounded_nonempty",
    "parikh_image", "parse_presburger", "projection", "read_spec_file", "semilinear_membership",
    "system_to_parikh", "table_to_csv",
]
