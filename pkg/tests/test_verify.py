import json

import numpy as np
import pytest

from eulerlab.catalog import get_entry
from eulerlab.operator import Coefficients, GridFunction, HalfPlaneRect
from eulerlab.solver import BoundarySpec, solve
from eulerlab.verify import (DEFAULT_SEED, SUITES, VerificationReport, VerifyError,
                             check_almost_monotonicity, check_continuity, check_harnack_local,
                             check_max_principle, check_poly_x_bounds, check_unspecifiability,
                             confirm_violation, gradient_growth, harnack_suite,
                             measure_gradient_bound, run_suite, unspecifiability_pair)


def _harnack_solve(b2=1.0, Lambda=1.0, y0=1.0, n=129, s=1.0):
    w = 4 * Lambda * y0
    d = HalfPlaneRect(-w, w, y0, n, n).scaled(s)
    top = lambda x: 2 + np.cos(np.asarray(x) / s)
    bc = BoundarySpec(top, 2 + np.cos(w), 2 + np.cos(w))
    return solve(Coefficients.constant(b2=b2), d, bc).solution


def test_harnack_examples():
    d = HalfPlaneRect(-4, 4, 1, 33, 33)
    r = check_harnack_local(GridFunction(d, np.ones((33, 33))), 1.0, 1.0)
    assert abs(r.margin - 8 / 9) < 1e-15 and r.passed
    r = check_harnack_local(_harnack_solve(), 1.0, 1.0)
    assert r.margin >= 0


def test_harnack_suite_all_pass():
    reps = harnack_suite(DEFAULT_SEED)
    assert len(reps) == 52
    assert all(r.passed for r in reps)
    assert min(r.margin for r in reps) >= -1e-6


def test_harnack_domain_mismatch():
    d = HalfPlaneRect(-1, 1, 1, 9, 9)
    with pytest.raises(VerifyError):
        check_harnack_local(GridFunction(d, np.ones((9, 9))), 1.0, 1.0)


def test_max_principle_examples():
    d = HalfPlaneRect(-1, 1, 1, 33, 33)
    assert check_max_principle(GridFunction(d, np.full((33, 33), 3.0)), "sub").passed
    rep = solve(Coefficients.constant(b2=3.0), d,
                BoundarySpec(lambda x: 1 + np.cos(3 * x), 1 + np.cos(3), 1 + np.cos(3)))
    assert check_max_principle(rep.solution, "sub").passed
    assert check_max_principle(rep.solution, "super").passed
    r = confirm_violation(get_entry("bessel_k_maxfail"), "max_principle")
    assert not r.passed and r.consistent


def test_gradient_examples():
    rng = np.random.default_rng(0)
    pts = np.column_stack([rng.uniform(-2, 2, 50), rng.uniform(0.01, 5, 50)])
    q = lambda x, y: np.asarray(y, float) ** 0.25 + 0 * np.asarray(x, float)
    r = measure_gradient_bound(q, pts)
    assert abs(r.measured_constants["D"] - 0.25) <= 1e-6
    assert abs(r.measured_constants["D_min"] - 0.25) <= 1e-6
    d = HalfPlaneRect(-1, 1, 1, 33, 33)
    assert measure_gradient_bound(GridFunction(d, np.full((33, 33), 2.0))).measured_constants["D"] == 0
    e = get_entry("superfunction")
    gp = e.meta["gradient_path"]
    g = gradient_growth(e, gp["near"], gp["far"], e.length_scale)
    assert g.measured_constants["growth"] >= 5 and not g.passed


def test_gradient_grid_stability():
    d = HalfPlaneRect(-1, 1, 1, 65, 65)
    f = GridFunction.from_callable(lambda x, y: np.exp(x) * (2 + y), d)
    r = measure_gradient_bound(f, bound=5.0)
    # y |grad log f| = y sqrt(1 + (2 + y)^-2) peaks on the last interior row
    yt = 1 - 1 / 64
    exact = yt * np.sqrt(1 + (2 + yt) ** -2)
    assert r.passed and abs(r.measured_constants["D"] - exact) < 1e-3
    assert abs(r.measured_constants["stability"] - 1) < 0.05


def test_almost_monotonicity_examples():
    assert check_almost_monotonicity(lambda x, y: 1 + 0 * y, 0.0, (0.1, 10)
                                     ).measured_constants["delta_inv"] == 1
    r = check_almost_monotonicity(lambda x, y: np.asarray(y, float) ** -2.0, 0.0, (0.1, 10))
    assert r.passed and r.measured_constants["delta_inv"] == 1
    r = confirm_violation(get_entry("other_halfplane"), "almost_monotonicity")
    assert not r.passed
    assert r.measured_constants["delta_inv"] > 1


def test_unspecifiability_examples():
    r3 = unspecifiability_pair(3.0)
    assert r3.passed and min(r3.measured_constants["ratios"]) >= 1.8
    r05 = unspecifiability_pair(0.5, expect_pass=False)
    assert not r05.passed
    disc = np.array(r05.measured_constants["discrepancy"])
    assert np.all(disc > 1e-2)
    z = lambda t: np.zeros_like(np.asarray(t, float))
    bc = BoundarySpec(z, z, z, bottom=lambda t: 1 + 0 * np.asarray(t), mode="four_sided")
    r = check_unspecifiability(Coefficients.constant(b2=3.0), bc, bc, 3)
    assert r.passed and max(r.measured_constants["discrepancy"]) == 0
    with pytest.raises(VerifyError):
        check_unspecifiability(Coefficients.constant(b2=0.5), bc, bc, 3)


def test_poly_x_examples():
    r = check_poly_x_bounds(lambda x, y: 1 + 0 * np.asarray(x), y=0.5, half_width=20.0)
    assert r.passed and r.measured_constants["D_full"] == 0
    assert not confirm_violation(get_entry("strip_bessel_j"), "poly_x").passed
    D = []
    for n in (161, 321):
        dom = HalfPlaneRect(-20.0, 20.0, 1.0, n, (n - 1) // 16 + 1)
        rep = solve(Coefficients.constant(b2=2.0), dom,
                    BoundarySpec(lambda x: 2 + np.cos(x), 2 + np.cos(20.0), 2 + np.cos(20.0)))
        r = check_poly_x_bounds(rep.solution, 1.0, y=0.5)
        assert r.passed
        D.append(r.measured_constants["D_full"])
    assert np.isfinite(D).all()
    assert abs(D[1] - D[0]) <= 0.1 * max(D)


def test_continuity_examples():
    dom = HalfPlaneRect(-1, 1, 1, 129, 129)
    rep = solve(Coefficients.constant(b2=3.0), dom,
                BoundarySpec(lambda x: 1 + np.sin(2 * x), 1 + np.sin(-2), 1 + np.sin(2)))
    r = check_continuity(rep.solution, 0.0)
    osc = r.measured_constants["osc"]
    assert r.passed and all(b <= 0.8 * a for a, b in zip(osc, osc[1:]))
    assert check_continuity(GridFunction(dom, np.ones((129, 129))), 0.0).measured_constants["osc"] \
        == [0.0, 0.0, 0.0]
    r = confirm_violation(get_entry("step"), "continuity")
    assert not r.passed and min(r.measured_constants["osc"]) > 0.5


@pytest.mark.parametrize("s", [0.5, 2.0])
def test_scale_invariance(s):
    base = _harnack_solve(b2=2.0)
    scaled = _harnack_solve(b2=2.0, s=s)
    r1 = check_harnack_local(base, 1.0, 1.0)
    r2 = check_harnack_local(scaled, 1.0, s)
    assert r1.passed == r2.passed
    assert abs(r2.measured_constants["ratio"] / r1.measured_constants["ratio"] - 1) < 0.01
    m1 = check_almost_monotonicity(base, 0.0)
    m2 = check_almost_monotonicity(scaled, 0.0)
    assert m1.passed == m2.passed
    assert abs(m2.measured_constants["delta_inv"] / m1.measured_constants["delta_inv"] - 1) < 0.01
    c1, c2 = check_continuity(base, 0.0), check_continuity(scaled, 0.0)
    assert c1.passed == c2.passed
    g1 = measure_gradient_bound(base).measured_constants["D"]
    g2 = measure_gradient_bound(scaled).measured_constants["D"]
    assert abs(g2 / g1 - 1) < 0.01
    f = lambda x, y: np.exp(-np.asarray(x, float) ** 2) + 1.0 + np.asarray(y, float)
    p1 = check_poly_x_bounds(f, y=0.5, half_width=20.0)
    p2 = check_poly_x_bounds(lambda x, y: f(x / s, y / s), y=0.5 * s, half_width=20.0 * s)
    assert p1.passed == p2.passed
    assert abs(p1.measured_constants["D_full"] - p2.measured_constants["D_full"]) < 1e-12


def test_report_roundtrip():
    reps = run_suite("unspecifiability") + run_suite("gradient")
    for r in reps:
        s = r.to_json()
        back = VerificationReport.from_json(s)
        assert back.to_json() == s
        assert json.loads(s)["theorem_tag"] == r.theorem_tag


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_is_consistent(name):
    reps = run_suite(name)
    assert reps and all(r.consistent for r in reps), [r.label for r in reps if not r.consistent]


def test_unknown_suite():
    with pytest.raises(VerifyError):
        run_suite("nope")
