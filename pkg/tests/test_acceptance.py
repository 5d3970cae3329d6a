"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line."""

import json
import random
import time

import pytest

from memsys.computability import (check_semilinear_spec, computed_predicate_table, load_family,
                                  pa_bounded_nonempty, parikh_image, read_spec_file,
                                  system_to_parikh)
from memsys.emergence import FAIRNESS_MODES, brute_force_emergence, check_emergence
from memsys.graph import FINITE, LASSO, BudgetExceeded, build_graph
from memsys.logic import MODES, brute_force_check, check_all, model_check, read_formula_file
from memsys.logic import ast as A
from memsys.logic.checker import prepare
from memsys.logic.evaluate import LogicModel, eval_at
from memsys.system import MemorySystem, TransitionEntry, distribution_of
from randsys import random_formula, random_system, random_valuation
from refsem import random_history

from conftest import DATA, GOLDEN

# pinned limits
FIXTURE_SECONDS = 1.0
EMERGENCE_SYSTEMS, EMERGENCE_SECONDS = 500, 60.0
LOGIC_PAIRS, LOGIC_SECONDS, LOGIC_DEPTH = 300, 120.0, 3
LOGIC_BOUND_SLACK, LOGIC_WALK_BUDGET = 4, 20_000
FAMILY_N_MAX, FAMILY_SECONDS = 6, 60.0
SLOPE_RATIO = 3.0
SEMANTICS_SECONDS = 5.0
PARIKH_RANDOM_SYSTEMS = 200


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_1_fixture_verdicts(fixtures, report):
    expected = {"maj1": (True, "g"), "even2": (False, None), "pred3": (True, "b")}
    ok, parts = True, []
    for name, (supports, signal) in expected.items():
        t = time.perf_counter()
        v = check_emergence(fixtures[name])
        dt = time.perf_counter() - t
        got = (v.supports, v.signal if v.supports else None)
        ok &= got == (supports, signal) and dt < FIXTURE_SECONDS
        parts.append(f"{name}={got[1] or ('none' if not got[0] else '?')} ({dt * 1000:.1f} ms)")
    report(1, ok, ", ".join(parts))


def test_2_emergence_oracle(report):
    rng = random.Random(2024)
    t = time.perf_counter()
    disagree = 0
    for i in range(EMERGENCE_SYSTEMS):
        sys = random_system(rng)
        fairness = FAIRNESS_MODES[i % len(FAIRNESS_MODES)]
        if check_emergence(sys, fairness).supports != brute_force_emergence(sys, 12, fairness).supports:
            disagree += 1
    dt = time.perf_counter() - t
    report(2, disagree == 0 and dt < EMERGENCE_SECONDS,
           f"{EMERGENCE_SYSTEMS - disagree}/{EMERGENCE_SYSTEMS} agree in {dt:.1f} s")


def test_3_logic_oracle(report):
    rng = random.Random(77)
    t = time.perf_counter()
    done = disagree = redrawn = 0
    while done < LOGIC_PAIRS:
        sys = random_system(rng)
        val = random_valuation(rng, sys)
        f = random_formula(rng, sys, depth=rng.randint(1, LOGIC_DEPTH), size=rng.randint(2, 7))
        mode = rng.choice(MODES)
        fairness = rng.choice(FAIRNESS_MODES)
        bound = len(build_graph(sys)) + LOGIC_BOUND_SLACK
        try:
            want = brute_force_check(sys, val, f, stem_bound=bound, mode=mode, fairness=fairness,
                                     walk_budget=LOGIC_WALK_BUDGET).holds
        except BudgetExceeded:
            redrawn += 1
            continue
        done += 1
        if model_check(sys, val, f, mode=mode, fairness=fairness).holds is not want:
            disagree += 1
    dt = time.perf_counter() - t
    report(3, disagree == 0 and dt < LOGIC_SECONDS,
           f"{done - disagree}/{done} agree in {dt:.1f} s ({redrawn} over-budget draws replaced)")


def test_4_example_formulas(fixtures, report):
    goldens = json.loads((GOLDEN / "examples.json").read_text())
    bad = []
    for name, sys in fixtures.items():
        formulas = [f for _, _, f in read_formula_file((DATA / f"{name}.ltl").read_text())]
        assert len(formulas) == 6
        for mode in MODES:
            got = [v.holds for v in check_all(sys, {}, formulas, mode=mode)]
            if got != goldens[name][mode]:
                bad.append(f"{name}/{mode}")
    report(4, not bad, "18 formulas x 2 modes match goldens" if not bad else f"differ: {bad}")


def test_5_family_predicate(report):
    fam = load_family(DATA / "fam_maj.json")
    spec = read_spec_file((DATA / "majority.pres").read_text())
    t = time.perf_counter()
    table = computed_predicate_table(fam, FAMILY_N_MAX)
    rep = check_semilinear_spec(table, spec)
    dt = time.perf_counter() - t
    report(5, rep.ok and dt < FAMILY_SECONDS,
           f"{rep.checked} cells, {len(rep.mismatches)} mismatches, "
           f"{len(rep.inconclusive)} inconclusive in {dt:.1f} s")


def cycling_system(n: int, m: int = 7) -> MemorySystem:
    """Each agent steps through ``m`` states on its own: m**n configurations, n*m**n edges."""
    states = [f"Q{i}" for i in range(m)]
    agents = [str(i) for i in range(1, n + 1)]
    rule = tuple(("s", q, states[(i + 1) % m]) for i, q in enumerate(states))
    entries = [TransitionEntry(f"step{a}", f"I{a}", (1,), rule) for a in agents]
    return MemorySystem.build(states, ["s"], {q: "s" for q in states}, agents,
                              {f"I{a}": [a] for a in agents}, entries, ["Q0"] * n)


def test_6_linear_scaling(report):
    formula = "[] (p@1 -> <> p@2)"
    val = {"Q0": ["p"]}
    sizes, times = [], []
    for n in (2, 3, 4):
        sys = cycling_system(n)
        graph = build_graph(sys)
        best = min(_timed(lambda: model_check(sys, val, formula, mode="spanning-only", graph=graph))
                   for _ in range(5))
        sizes.append(len(graph.edges))
        times.append(best)
    slopes = [(times[i + 1] - times[i]) / (sizes[i + 1] - sizes[i]) for i in range(2)]
    ratio = max(slopes) / min(slopes) if min(slopes) > 0 else float("inf")
    detail = ", ".join(f"{e} edges {t * 1000:.1f} ms" for e, t in zip(sizes, times))
    report(6, ratio <= SLOPE_RATIO, f"{detail}; slope ratio {ratio:.2f}")


def _timed(fn) -> float:
    t = time.perf_counter()
    fn()
    return time.perf_counter() - t


def test_7_semantics(report):
    rng = random.Random(7)
    t = time.perf_counter()
    failures = []
    for _ in range(150):
        sys = random_system(rng)
        model = LogicModel(sys)
        h = random_history(rng, sys)
        f = prepare(random_formula(rng, sys, depth=2, size=4), sys)
        last = len(h.configs) - 1
        if eval_at(h, 0, A.Prev(f), model).holds is not False:
            failures.append("previous at 0")
        if h.kind == FINITE and eval_at(h, last, A.Next(f), model).holds is not False:
            failures.append("next at end")
        horizon = range(len(h.configs)) if h.kind != LASSO else range(3 * len(h.configs) + 2)
        for k in range(len(h.configs)):
            vals = {j: eval_at(h, j, f, model).holds for j in horizon}
            if eval_at(h, k, A.always(f), model).holds != all(vals[j] for j in horizon if j >= k):
                failures.append("always")
            if eval_at(h, k, A.Eventually(f), model).holds != any(vals[j] for j in horizon if j >= k):
                failures.append("eventually")
            if eval_at(h, k, A.historically(f), model).holds != all(vals[j] for j in range(k + 1)):
                failures.append("historically")
            if eval_at(h, k, A.Once(f), model).holds != any(vals[j] for j in range(k + 1)):
                failures.append("once")
        body = random_formula(rng, sys, depth=1, size=3, bound=("x",))
        for k in range(1, sys.n_agents + 1):
            hi = prepare(A.Count("x", body, ">=", k), sys)
            lo = prepare(A.Count("x", body, ">=", k - 1), sys)
            for pos in range(len(h.configs)):
                if eval_at(h, pos, hi, model).holds and not eval_at(h, pos, lo, model).holds:
                    failures.append("count monotone")
        for c in h.configs:
            for nb in sys.neighbourhoods:
                if sum(distribution_of(sys, c, nb.name)) != len(nb):
                    failures.append("distribution sum")
        u = "".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        v = "".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        pu, pv = parikh_image(u, "ab"), parikh_image(v, "ab")
        if parikh_image(u + v, "ab") != (pu[0] + pv[0], pu[1] + pv[1]):
            failures.append("parikh")
    dt = time.perf_counter() - t
    report(7, not failures and dt < SEMANTICS_SECONDS,
           f"{len(failures)} violations in {dt:.2f} s" + (f" ({sorted(set(failures))})" if failures else ""))


def test_8_parikh_consistency(fixtures, report):
    rng = random.Random(88)
    systems = list(fixtures.values()) + [random_system(rng) for _ in range(PARIKH_RANDOM_SYSTEMS)]
    disagree = 0
    for sys in systems:
        pa = system_to_parikh(sys)
        stable = any(c.stable_signal is not None for c in check_emergence(sys).classes)
        if pa_bounded_nonempty(pa, len(pa.states)).found != stable:
            disagree += 1
    report(8, disagree == 0, f"{len(systems) - disagree}/{len(systems)} agree")
