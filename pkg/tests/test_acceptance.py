"""
Acceptance criteria 1-9, each with its stated tolerance and runtime bound.

Every test records a one-line verdict that conftest prints in the terminal
summary.  Criteria that cannot be met as literally worded are kept as strict
xfails next to the test that checks what the source data supports.
"""

from __future__ import annotations

import itertools
import json
import time
from contextlib import contextmanager
from pathlib import Path

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from conftest import ACCEPTANCE
from parcohom.analysis import format_order, matrix_order
from parcohom.convolution import (
    _key,
    check_jordan,
    convolve,
    fiber_types,
    local_predictions,
    predicted_rank,
    rank_drop,
    slot_roles,
)
from parcohom.elliptic import kodaira_classify
from parcohom.jobs import EXIT_OK, projective_charpoly, run_job, self_check
from parcohom.lattice import GramForm, IntMatrix, form_invariants
from parcohom.local_system import SYMPLECTIC_J, MonodromyTuple

import test_braids
import test_elliptic
import test_local_system
import test_pairing

RIGID = json.loads((Path(__file__).parent / "data" / "rigid_tuples.json").read_text())


@contextmanager
def criterion(key: str, limit: float | None = None, note: str = ""):
    """Times the block and records PASS or FAIL; the block may append notes."""
    notes = [note] if note else []
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield notes
        elapsed = time.perf_counter() - start
        assert limit is None or elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        bound = f" (limit {limit:g}s)" if limit is not None else ""
        ACCEPTANCE[key] = (status, "  ".join([f"{elapsed:.3f}s{bound}"] + notes))


def run_case(dataset, case_id):
    out = run_job(dataset.case(case_id).as_job())
    assert out.exit_code == EXIT_OK, out.error or out.mismatches
    return out.report["result"]


# Kodaira table rows as printed: orders (with a second representative where an
# inequality allows one), type, monodromy; the Euler number equals ord(Delta).
KODAIRA_TABLE = [
    ([(0, 0, 0), (3, 0, 0)], "I0", [[1, 0], [0, 1]]),
    ([(0, 0, 1), (0, 0, 7)], "I{n}", None),
    ([(1, 1, 2), (3, 1, 2)], "II", [[1, 1], [-1, 0]]),
    ([(1, 2, 3), (1, 4, 3)], "III", [[0, 1], [-1, 0]]),
    ([(2, 2, 4), (5, 2, 4)], "IV", [[0, 1], [-1, -1]]),
    ([(2, 3, 6), (2, 4, 6)], "I0*", [[-1, 0], [0, -1]]),
    ([(2, 3, 7), (2, 3, 11)], "I{n}*", None),
    ([(3, 4, 8), (4, 4, 8)], "IV*", [[-1, -1], [1, 0]]),
    ([(3, 5, 9)], "III*", [[0, -1], [1, 0]]),
    ([(4, 5, 10), (7, 5, 10)], "II*", [[0, -1], [1, 1]]),
]


def test_criterion_1_kodaira_table():
    with criterion("1") as notes:
        worst = 0.0
        for patterns, name, mono in KODAIRA_TABLE:
            for a, b, c in patterns:
                best = float("inf")
                for _ in range(3):
                    t0 = time.perf_counter()
                    f = kodaira_classify(a, b, c)
                    best = min(best, time.perf_counter() - t0)
                worst = max(worst, best)
                n = c - 6 if name == "I{n}*" else c
                assert f.name == name.format(n=n)
                assert f.euler == c
                want = mono or ([[1, n], [0, 1]] if name == "I{n}" else [[-1, -n], [0, -1]])
                assert f.local_monodromy == IntMatrix(want)
        notes.append(f"slowest classification {worst * 1e6:.0f} us (limit 1 ms)")
        assert worst < 1e-3


def test_criterion_2_worked_example(dataset):
    with criterion("2", limit=30):
        r = run_case(dataset, "worked-example-mh")
        assert r["W"]["rank"] == 10
        assert abs(r["W"]["det"]) == 12
        assert r["W"]["disc"] == [2, 6]
        assert r["infinity"] == "-I"


def test_criterion_3_printed_block(dataset):
    with criterion("3"):
        block = dataset.block("worked-example-block").data
        assert len(block["monodromy"]) == 12
        out = self_check(block)
        assert out["product_ok"] and all(out["preserves_gram"]) and len(out["preserves_gram"]) == 12
        assert out["det_ok"] and out["disc_ok"]


def test_criterion_4_family1(dataset):
    with criterion("4", limit=5):
        r = run_case(dataset, "family1-twist-none")
        assert (r["W"]["rank"], r["W"]["det"], r["W"]["disc"]) == (2, 3, [3])
        printed = dataset.block("family1-twist-none").data
        printed_polys = [projective_charpoly(IntMatrix.from_json(m)) for m in printed["monodromy"]]
        assert r["monodromy"]["charpolys_projective"] == printed_polys
        inv = form_invariants(GramForm(IntMatrix.from_json(printed["gram"])))
        assert (abs(inv.det), list(inv.disc)) == (3, [3])


def test_criterion_5_n5_split(dataset):
    # T invariants come from the stated normal form; sympy is the oracle
    Q = sympy.Matrix([[10, 0, 0], [0, 0, 1], [0, 1, 0]])
    det = int(Q.det())
    disc = [abs(int(d)) for d in smith_normal_form(Q, domain=sympy.ZZ).diagonal()
            if abs(d) > 1]
    pos = sum(1 for v in Q.eigenvals() if v > 0)
    with criterion("5", limit=10, note="traces at sigma-, sigma+, inf are 1, 1, 3; sigma0 is -1 (see 5b)"):
        r = run_case(dataset, "n5-split")
        assert r["W"]["rank"] == 4
        s = r["split"]
        assert (s["fixed_rank"], s["T"]["rank"]) == (1, 3)
        assert (s["T"]["det"], s["T"]["disc"], s["T"]["signature"]) == (det, disc, [pos, 3 - pos])
        traces = s["T"]["traces"]
        assert (traces[0], traces[2], traces[3]) == (1, 1, 3)
        printed = dataset.block("vn-table-n5").data
        assert traces == [IntMatrix.from_json(m).trace() for m in printed["monodromy"]]


@pytest.mark.xfail(strict=True, reason="the printed N=5 table and the computation both give trace -1 at sigma0")
def test_criterion_5b_all_three_finite_traces_equal_one(dataset):
    ACCEPTANCE["5b"] = ("XFAIL", "literal claim of trace 1 at all three finite points; sigma0 has trace -1")
    r = run_case(dataset, "n5-split")
    assert r["split"]["T"]["traces"] == [1, 1, 1, 3]


SWEEP = ["I1,I1,I1,I9", "I3,I3,I3,I3", "I1,I1,I8,II", "I1,I2,I6,III", "I1,I1,I6,IV", "I1,I5,III"]


def sweep_inputs():
    """Rigid four-fibre tuples and their twists at pairs of slots, covering every fibre kind."""
    tuples = {name: RIGID["families"][name] for name in SWEEP} | RIGID["i0_star"]
    for name, mats in tuples.items():
        mats = [IntMatrix(m) for m in mats]
        for pair in [()] + list(itertools.combinations(range(4), 2)):
            signed = [-g if k in pair else g for k, g in enumerate(mats)]
            yield name, MonodromyTuple(tuple(signed), ("p1", "p2", "p3", "inf"), SYMPLECTIC_J)


SWEEP_TIME: list[float] = []


@pytest.fixture(scope="module")
def sweep_results():
    start = time.perf_counter()
    out = []
    for name, t in sweep_inputs():
        for k in range(t.r):
            out.append((name, t, k, convolve(t, k)))
    SWEEP_TIME.append(time.perf_counter() - start)
    return out


def test_criterion_6_rank_sweep(sweep_results):
    with criterion("6", note=f"{len(sweep_results)} MC/MH computations in {SWEEP_TIME[0]:.1f}s"):
        categories = set()
        for name, t, k, res in sweep_results:
            f = fiber_types(t)[k]
            categories.add(rank_drop(f))
            assert res.rank == predicted_rank(t, k), (name, k)
        assert {1, 2, 3, 4} <= categories


def jordan_tally(results, source):
    tally: dict[tuple[str, str], list[int]] = {}
    for name, t, k, res in results:
        preds = local_predictions(t, k, source)
        for role, f, M, pred in zip(slot_roles(t.r, k), fiber_types(t), res.monodromy.mats, preds):
            if pred is None:
                continue
            row = tally.setdefault((role, _key(f)), [0, 0])
            row[0] += 1
            row[1] += bool(check_jordan(M, pred))
    return tally


def test_criterion_7_jordan_sweep(sweep_results):
    with criterion("7", note="corrected tables everywhere; printed tables on all but the I_N* and twisted I0 rows (see 7b)"):
        katz = jordan_tally(sweep_results, "katz")
        assert {key for key in katz} >= {("finite", "I"), ("finite", "II"), ("finite", "I*"), ("finite", "I0"),
                                          ("mh_twisted", "I0"), ("finite", "I0*")}
        assert all(bad == 0 for _, bad in katz.values())
        printed = jordan_tally(sweep_results, "printed")
        for (role, key), (_, bad) in printed.items():
            if key == "I*" or (role == "mh_twisted" and key == "I0"):
                continue
            assert bad == 0, (role, key)


@pytest.mark.xfail(strict=True, reason="printed I_N* rows and the twisted smooth-point row disagree with Katz's rule")
def test_criterion_7b_printed_I_star_and_I0_rows(sweep_results):
    ACCEPTANCE["7b"] = ("XFAIL", "printed I_N* rows and twisted I0 row contradict the computation and Katz's rule")
    printed = jordan_tally(sweep_results, "printed")
    bad = {key: v for key, v in printed.items() if key[1] == "I*" or key == ("mh_twisted", "I0")}
    assert bad and all(b == 0 for _, b in bad.values())


def test_criterion_8_appendix(dataset):
    with criterion("8", limit=60):
        rows = [b for b in dataset.printed if b.id.startswith("appendix-")]
        assert len(rows) >= 6
        for b in rows:
            out = self_check(b.data)
            assert out["ok"] and out["det_ok"] and out["orders_ok"], b.id
        for case_id, block_id, det in [("appendix-I1I1I1I9-1-mc-rotated", "appendix-I1I1I1I9-1", -144),
                                       ("appendix-I3I3I3I3-4", "appendix-I3I3I3I3-4", -432)]:
            r = run_case(dataset, case_id)
            printed = dataset.block(block_id).data
            Q = GramForm(IntMatrix.from_json(printed["gram"]))
            inv = form_invariants(Q)
            assert r["W"]["rank"] == Q.rank == 3
            assert abs(r["W"]["det"]) == abs(int(printed["det"])) == abs(det)
            assert r["W"]["disc"] == list(inv.disc)
            assert r["monodromy"]["orders_sorted"] == sorted(printed["orders"])
            assert sorted(format_order(matrix_order(IntMatrix.from_json(m))) for m in printed["monodromy"]) \
                == sorted(printed["orders"])


PROPERTY_SUITES = [
    ("braid relations for Phi", test_braids.test_phi_braid_relation),
    ("far commutation for Phi", test_braids.test_phi_far_commutation),
    ("H and E preserved by Phi", test_braids.test_phi_preserves_H_and_E),
    ("H and E preserved by Psi", test_braids.test_psi_preserves_H_and_E),
    ("coboundaries pair to zero", test_pairing.test_coboundaries_pair_to_zero),
    ("u_i choice independence", test_pairing.test_u_choice_independence),
    ("eta preserves Q", test_pairing.test_eta_preserves_Q_on_twist_families),
    ("rank formula, 200 tuples", test_local_system.test_rank_formula_on_random_tuples),
    ("twist_fiber involution", test_elliptic.test_twist_fiber_is_an_involution),
    ("Euler change under twisting", test_elliptic.test_euler_changes_by_twelve_or_zero_under_twisting),
]


def test_criterion_9_property_suites():
    with criterion("9") as notes:
        times = {}
        for label, suite in PROPERTY_SUITES:
            t0 = time.perf_counter()
            suite()
            times[label] = time.perf_counter() - t0
        slowest = max(times, key=times.get)
        notes.append(f"{len(times)} suites; slowest {slowest!r} {times[slowest]:.1f}s (limit 60s each)")
        assert all(t < 60 for t in times.values())
