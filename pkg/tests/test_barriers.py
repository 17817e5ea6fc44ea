import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import solve_ivp

from eulerlab.barriers import (BARRIER_NAMES, BarrierError, corollary_case_barrier,
                               corollary_subsolution, harnack_g_y0, harnack_barrier_items,
                               harnack_lower, liouville_g, liouville_upper, make_barrier,
                               unspecifiability_super, xdecay_barrier, xdecay_profile)
from eulerlab.operator import Coefficients, HalfPlaneRect, apply_pointwise
from eulerlab.solver import BoundarySpec, solve


@pytest.mark.parametrize("y0", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("L", [1.0, 2.0, 5.0])
def test_harnack_lower_examples(y0, L):
    b = harnack_lower(y0, L)
    assert abs(float(b(0.0, 0.0)) - 1 / 9) < 1e-10
    half = 4 * y0 * L
    for y in (0.0, y0 / 2, y0):
        assert float(b(half, y)) <= 0 and float(b(-half, y)) <= 0
    items = harnack_barrier_items(y0, L)
    for key in ("i_stored", "iii", "iv", "v"):
        assert items[key]["passed"], (key, items[key])


@pytest.mark.parametrize("L", [1.0, 2.0, 5.0])
def test_harnack_item_ii_tracks_g_y0(L):
    # item (ii) on the top edge reduces at x = 0 to (10/9) g(y0) - 1 <= 1
    items = harnack_barrier_items(1.0, L)
    g = harnack_g_y0(L)
    assert items["ii"]["passed"] == (10 / 9 * g <= 2)
    assert items["ii"]["margin"] <= 1 - (10 / 9 * g - 1) + 1e-12


def test_harnack_g_y0_against_mpmath():
    for L in (1.0, 2.0, 5.0, 50.0):
        ref = mp.exp(-mp.pi / (8 * L)) * mp.hyp1f1((1 + mp.sqrt(3) * L) / 2, 1, mp.pi / (4 * L))
        assert abs(harnack_g_y0(L) - float(ref)) < 1e-10


def test_harnack_g_y0_decreasing_to_limit():
    Ls = [1, 2, 5, 10, 20, 50]
    g = [harnack_g_y0(L) for L in Ls]
    assert np.all(np.diff(g) < 0)
    assert abs(g[-1] - 1.804) <= 0.01
    limit = float(mp.besseli(0, 2 * mp.sqrt(mp.sqrt(3) * mp.pi / 8)))
    assert g[-1] > limit


def test_harnack_comparison_on_solver_grid():
    for y0, L in [(1.0, 1.0), (0.5, 2.0)]:
        b = harnack_lower(y0, L)
        w = 4 * L * y0
        d = HalfPlaneRect(-w, w, y0, 129, 129)
        top = lambda x: np.maximum(b(x, np.full_like(x, y0)), 0.0)
        f = solve(Coefficients.constant(b2=1.0), d, BoundarySpec(top, 0.0, 0.0)).solution.values
        X, Y = d.mesh()
        P = b(X, Y)
        assert np.min((f - P)[P >= 0]) >= -1e-6


@pytest.mark.parametrize("L", [1.0, 2.0, 5.0])
def test_xdecay_profile(L):
    g, y_bar, y_zero = xdecay_profile(L)
    assert abs(float(g(np.array(0.0))) - 1) < 1e-14
    ys = np.array([1e-6, 2e-6])
    slope = float(np.diff(g(ys))[0] / 1e-6)
    # g'(0) from the ODE itself is Lambda (see notes)
    assert abs(slope - L) < 1e-4
    assert g(np.array(y_zero - 1e-3)) > 0 > g(np.array(y_zero + 1e-3))
    assert abs(float(g(np.array(y_bar), 1))) < 1e-8


def test_xdecay_zero_exists_lambda_10():
    g, y_bar, y_zero = xdecay_profile(10.0)
    assert y_bar < y_zero


def test_xdecay_profile_against_solve_ivp():
    L = 2.0
    g, y_bar, y_zero = xdecay_profile(L)
    y1 = y_bar + 0.5

    def rhs(t, u):
        return [u[1], -(L * t * u[1] + (t * t - L * t) * u[0]) / (t * t)]

    sol = solve_ivp(rhs, (y_bar, y1), [float(g(np.array(y_bar))), 0.0], rtol=1e-12, atol=1e-14)
    assert abs(sol.y[0, -1] - float(g(np.array(y1)))) < 1e-8


def test_xdecay_barrier():
    L, y_d = 2.0, 1.0
    b = xdecay_barrier(L, y_d)
    x = np.array([0.0, 1.0, 5.0])
    assert np.max(np.abs(b(x, np.full(3, y_d)))) < 1e-8
    chk = b.sign_check(40, tol=1e-8)
    assert chk["passed"]
    s = b.meta["scale"]
    xs, ys = np.array([0.5, 2.0, 3.0]), np.array([0.3, 0.3, 0.3])
    assert np.allclose(b(xs, ys) / b(0 * xs, ys), np.exp(-s * xs), rtol=1e-12)


def test_liouville_profile():
    for L in (2.0, 3.0, 5.0, 10.0):
        assert abs(float(liouville_g(L, np.array(0.0))[0]) - 1) < 1e-14
        ref = mp.re(mp.exp(-1j / L) * mp.hyp1f1((1 + 1j * L) / 2, 1, 2j / L))
        assert abs(float(liouville_g(L, np.array(1.0))[0]) - float(ref)) < 1e-10
    y = np.linspace(0, 1, 50)
    g = liouville_g(3.0, y)[0]
    assert np.all(np.diff(g) < 0) and np.all(g > 0)
    # the bound 0.22 holds from Lambda ~ 5.85 on; the limit is J0(2)
    assert float(liouville_g(10.0, np.array(1.0))[0]) >= 0.22
    assert float(liouville_g(1e4, np.array(1.0))[0]) == pytest.approx(float(mp.besselj(0, 2)),
                                                                     abs=1e-4)


def test_liouville_rejects_small_lambda():
    with pytest.raises(BarrierError):
        liouville_upper(1.5)


def test_unspecifiability_super_examples():
    b0 = unspecifiability_super(0.0, 1.0, 2.0)
    x, y = np.linspace(-1, 1, 20), np.linspace(0.01, 1, 20)
    assert np.max(apply_pointwise(Coefficients.constant(b2=1.0), b0, x, y)) <= 1e-8
    b2 = unspecifiability_super(2.0, 1.0)
    assert np.allclose(b2(x, y), 1 / y)
    r = apply_pointwise(Coefficients.constant(b2=3.0), b2, x, y)
    assert np.allclose(r, -1 / y, rtol=1e-8)
    assert float(b2(0.0, 1e-6)) > 1e5 and float(b0(0.0, 1e-6)) > 10
    with pytest.raises(BarrierError):
        unspecifiability_super(-0.5)


def test_corollary_lambda_two():
    b = corollary_case_barrier(2.0)
    X, Y = np.meshgrid(np.linspace(-2, 2, 41), np.linspace(0.05, 1, 41))
    r = apply_pointwise(Coefficients.constant(b2=-1.0), b, X.ravel(), Y.ravel())
    assert np.max(np.abs(r)) <= 1e-8
    xs = np.linspace(-1, 1, 21)
    assert np.max(np.abs(b(xs, 0 * xs))) < 1e-15
    assert np.allclose(b(np.array([-1.5, 1.5]), np.zeros(2)), [0.5, 0.5])
    y = np.logspace(-3, -2, 20)
    expo = np.polyfit(np.log(y), np.log(b(0 * y, y)), 1)[0]
    assert abs(expo - 2.0) <= 0.01


@pytest.mark.parametrize("lam", [0.25, 1.0, 2.0, 3.0])
def test_corollary_and_unspec_sign_checks(lam):
    for b in (corollary_case_barrier(lam), corollary_subsolution(lam),
              unspecifiability_super(lam)):
        assert b.sign_check(40, tol=1e-8)["passed"], b.name


@pytest.mark.parametrize("L", [1.0, 2.0, 5.0])
def test_lambda_family_sign_checks(L):
    barriers = [harnack_lower(1.0, L), xdecay_barrier(L, 1.0)]
    if L >= 2:
        barriers.append(liouville_upper(L))
    for b in barriers:
        assert b.sign_check(40, tol=1e-8)["passed"], b.name


def test_make_barrier_names():
    for name in BARRIER_NAMES:
        assert make_barrier(name).name
    with pytest.raises(KeyError):
        make_barrier("nope")
