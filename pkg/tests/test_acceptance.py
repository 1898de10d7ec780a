"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

import time

import pytest

from tripletphase import checks
from tripletphase.symfun import SymPoly

RESULTS: dict[int, str] = {}

# Pinned limits.
RUNTIME_LIMIT = {1: 1.0, 2: 30.0, 3: 60.0, 6: 300.0, 10: 10.0}
CRYSTAL_TOL = 1e-6
# Leading part a + b*D + c*D^2 of N exactly as stated in criterion 2.
STATED_HEAD = (135, -31, 1)


def record(number: int, passed: bool, detail: str) -> None:
    RESULTS[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(RESULTS[number])


def within(number: int, seconds: float) -> bool:
    return seconds < RUNTIME_LIMIT.get(number, float("inf"))


def test_criterion_01_n2_identity():
    r = checks.check_n2_identity()
    ok = r.passed and within(1, r.seconds)
    record(1, ok, f"residual terms {r.detail['residual_terms']}, {r.seconds:.2f}s")
    assert ok


def test_criterion_02_n3_quotient_as_stated():
    r = checks.check_n3_quotient(points=100, head=STATED_HEAD)
    ok = r.passed and within(2, r.seconds)
    record(2, ok, f"E2*D - N residual terms {r.detail['residual_terms']}, "
                  f"{r.detail['agree']}/{r.detail['points']} points agree, {r.seconds:.2f}s")
    assert ok, "the stated N does not satisfy E2*D = N (see ledger)"


def test_n3_quotient_corrected_head():
    # The same N with leading part 60 - 19 D + 2 D^2 is an identity.
    r = checks.check_n3_quotient(points=100)
    assert r.passed and r.detail["residual_terms"] == 0 and r.detail["agree"] == 100


def test_criterion_03_subduction_coefficients():
    r = checks.check_subduction()
    # Canonical ordering on both sides, then a textual comparison.
    symbolwise = all(
        SymPoly.parse(checks.REFERENCE[k]).format() == SymPoly.parse(v["computed"]).format()
        for k, v in r.detail.items()
    )
    ok = r.passed and symbolwise and within(3, r.seconds)
    matched = sum(v["match"] for v in r.detail.values())
    record(3, ok, f"{matched}/{len(r.detail)} polynomials identical, {r.seconds:.2f}s")
    assert ok


def test_criterion_04_reduction_oracle():
    r = checks.check_reduction(points=50)
    d = r.detail
    ok = r.passed and d["worked_point"]["corrected"] == "28"
    counts = ", ".join(f"{k}: {v['exact']}/{v['points']}" for k, v in d.items() if k.startswith("n="))
    record(4, ok, f"{counts}; worked point {d['worked_point']['corrected']}")
    assert ok


def test_criterion_05_relation_preservers():
    r = checks.check_relations(3)
    record(5, r.passed, f"{r.detail['preserving']} of 720 preserve, equal to embedded G: {r.passed}")
    assert r.passed


def test_criterion_06_denominator_sweeps():
    r = checks.check_denominators()
    ok = r.passed and within(6, r.seconds)
    s, p = r.detail["single"], r.detail["pairs"]
    record(6, ok, f"single {s['preserved']}+{s['annihilated']} of {s['checked']}, "
                  f"pairs {p['preserved']}+{p['annihilated']} of {p['checked']}, {r.seconds:.1f}s")
    assert ok


def test_criterion_07_witnesses():
    r = checks.check_witnesses()
    n4 = r.detail["n4"]
    cp = n4["certified_pair"]
    record(7, r.passed, f"n=5..12 all pass; n=4 reference pair passed={n4['reference_pair_passed']}, "
                        f"certified k={cp['k']} {cp['x_exps']} vs {cp['y_exps']}")
    assert r.passed


def test_criterion_08_newton_palindromy():
    r = checks.check_newton_palindromy()
    record(8, r.passed, f"round trips to r=12, palindromic {r.detail['palindromic']}")
    assert r.passed


def test_criterion_09_reynolds_invariance():
    r = checks.check_invariance(samples=100)
    record(9, r.passed, ", ".join(f"{k} {v}" for k, v in r.detail.items()))
    assert r.passed


def test_criterion_10_symmetrization_n2():
    r = checks.check_symmetrization(points=20)
    ok = r.passed and within(10, r.seconds)
    record(10, ok, f"{r.detail['agree']}/{r.detail['evaluations']} evaluations exact, {r.seconds:.2f}s")
    assert ok


def test_criterion_11_crystallography():
    r = checks.check_crystal(cells=20, tol=CRYSTAL_TOL)
    parts = [f"{k}: max |dcos| {v['max_cos_error']:.1e}, exact {v['exact_rational']}/{v['cells']}, "
             f"redrawn {v['redrawn']}"
             for k, v in r.detail.items()]
    record(11, r.passed, "; ".join(parts))
    assert r.passed


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
