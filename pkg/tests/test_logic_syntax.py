import pytest

from memsys.logic import ast as A
from memsys.logic.eliminate import (
    BindError,
    UnboundVariable,
    UnknownName,
    bind,
    eliminate_counting,
)
from memsys.logic.parser import FormulaSyntaxError, parse_formula, read_formula_file
from memsys.system import MemorySystem

EXAMPLES = [
    "#x. g@x = 30 & #x. b@x = 70",
    "exists x (x in I -> [] (x in I))",
    "[] ((Y g@i -> b@i) & (Y b@i -> g@i))",
    "(i in I & #x. (x in I & Y g@x) > 5) -> g@i",
    "<> [] forall x. g@x",
    "<> [] forall x. ~g@x",
]


@pytest.mark.parametrize("text", EXAMPLES)
def test_examples_parse_and_roundtrip(text):
    f = parse_formula(text)
    assert parse_formula(A.to_text(f)) == f


def test_counting_conjunction_shape():
    f = parse_formula("#x. g@x = 30 & #x. b@x = 70")
    counts = [g for g in A.subformulas(f) if isinstance(g, A.Count)]
    assert [(c.op, c.k) for c in counts] == [("=", 30), ("=", 70)]


def test_exists_is_count_positive():
    f = parse_formula("exists x (x in I -> [] (x in I))")
    assert isinstance(f, A.Count) and f.op == ">" and f.k == 0


def test_unicode_aliases():
    assert parse_formula("◇□∀x. g@x") == parse_formula("<> [] forall x. g@x")
    assert parse_formula("⊖ g@1 ∧ ⟐ b@2") == parse_formula("Y g@1 & P- b@2")


def test_stable_and_emergence_sugar():
    assert parse_formula("stable(g)") == A.stable("g")
    assert isinstance(parse_formula("emergence"), A.Emergence)


def test_free_variables():
    assert A.free_vars(parse_formula("g@x & #y. b@y > 0")) == {"x"}


@pytest.mark.parametrize("bad", ["g@", "#x. g@x", "<> (g@x", "x ==", "g@x & & b@x", "#x g@x > 1"])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(bad)
    assert info.value.pos >= 0


def test_formula_file_comments():
    lines = read_formula_file("# comment\n\n#x. g@x > 0\n  <> g@1\n")
    assert [(n, src) for n, src, _ in lines] == [(3, "#x. g@x > 0"), (4, "<> g@1")]


def test_eliminate_forall(maj1):
    f = eliminate_counting(bind(parse_formula("forall x. g@x"), maj1), maj1)
    assert f == A.Threshold(">=", 3, tuple(A.Sig("g", A.Agent(i)) for i in range(3)))


def test_eliminate_nested_membership_folds(pred3):
    f = eliminate_counting(bind(parse_formula("#x. (x in I12 & Y g@x) > 1"), pred3), pred3)
    # agent 3 is outside I12, so only two instances remain
    assert isinstance(f, A.Threshold) and len(f.args) == 2
    assert not any(isinstance(g, (A.In, A.Count)) for g in A.subformulas(f))


def test_eliminate_count_ge_one():
    sys = MemorySystem.build(["G"], ["g"], {"G": "g"}, 2, {"N": ["1", "2"]}, [], ["G", "G"])
    f = eliminate_counting(bind(parse_formula("#x. g@x >= 1"), sys), sys)
    assert f == A.Threshold(">=", 1, (A.Sig("g", A.Agent(0)), A.Sig("g", A.Agent(1))))


def test_neighbourhood_at_expands(maj1):
    f = eliminate_counting(bind(parse_formula("g@N"), maj1), maj1)
    assert f == eliminate_counting(bind(parse_formula("forall x. g@x"), maj1), maj1)


def test_bind_errors(maj1):
    with pytest.raises(UnboundVariable):
        bind(parse_formula("g@x"), maj1)
    with pytest.raises(UnknownName):
        bind(parse_formula("x in J"), maj1, {"x": "1"})
    with pytest.raises(UnknownName):
        bind(parse_formula("g@x"), maj1, {"x": "9"})
    with pytest.raises(UnknownName):
        bind(parse_formula("p@1"), maj1, strict=True)


def test_threshold_out_of_range(maj1):
    with pytest.raises(BindError):
        bind(parse_formula("#x. g@x > 4"), maj1)


def test_bind_assignment(maj1):
    f = bind(parse_formula("g@x"), maj1, {"x": "2"})
    assert f == A.Sig("g", A.Agent(1))
