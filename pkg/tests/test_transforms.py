import numpy as np
import pytest
import sympy as sp

from eulerlab.operator import Coefficients, GridFunction, HalfPlaneRect, residual_grid
from eulerlab.transforms import (PROBE_FUNCTIONS, TransformError, abreu_reduction,
                                 consistency_check, heston_printed_constants, heston_to_euler,
                                 keldysh_to_euler, population_to_euler, power_multiplier,
                                 probe_points, pullback_check, sabr_general_recipe,
                                 sabr_rho0_to_euler)


def _b2(res, x=0.3, y=0.7):
    return float(res.coeffs.evaluate(np.array(x), np.array(y))[1])


def test_keldysh_examples():
    assert _b2(keldysh_to_euler(3)) == 3
    assert abs(_b2(keldysh_to_euler(1e6)) - 1.000002) < 1e-9
    assert abs(_b2(keldysh_to_euler(-1)) - 1 / 3) < 1e-15
    with pytest.raises(TransformError):
        keldysh_to_euler(2)


@pytest.mark.parametrize("k", [-3, -1, -0.5, 3, 4, 10])
def test_keldysh_classification(k):
    b2 = _b2(keldysh_to_euler(k))
    assert (0 < b2 < 1) == (k < 0)


def test_population_examples():
    assert _b2(population_to_euler(1)) == 1
    assert _b2(population_to_euler(2)) == 3


def test_population_chain_rule_roundtrip():
    res = population_to_euler(2.0)
    # f(u) = u pulled back: F(x, y) = y1(x, y) = y^2 / 4, dF/dy = y / 2
    x, y = probe_points(20, seed=4)
    F = lambda xx, yy: res.map.inverse(xx, yy)[1]
    h = 1e-5
    num = (F(x, y + h) - F(x, y - h)) / (2 * h)
    assert np.max(np.abs(num - y / 2)) < 1e-8


def test_heston_printed_constants_special_case():
    kappa, theta, sigma = 1.3, 0.05, 0.4
    c = heston_printed_constants(kappa, theta, sigma, 0.0, 0.0, 0.0)
    assert abs(c["b1"]) < 1e-15
    assert abs(c["b2"] - np.sqrt(2) * kappa * theta / sigma) < 1e-15
    assert abs(c["B2"] + np.sqrt(2) * kappa / sigma) < 1e-15


def test_heston_kappa_zero():
    res = heston_to_euler(0.0, 0.0, 0.04, 0.3, 0.2, 0.01, 0.0)
    assert res.meta["constants"]["B2"] == 0
    assert heston_printed_constants(0.0, 0.04, 0.3, 0.2, 0.01, 0.0)["B2"] == 0


def test_heston_printed_against_sympy():
    k, th, s, rho, r, lam = sp.symbols("kappa theta sigma rho r lambda")
    sq = sp.sqrt(1 - rho ** 2)
    formulas = {
        "b1": sp.sqrt(2) * s / sq * (r * s + (lam - k * th) * rho),
        "B1": sp.sqrt(2) * s / sq * (rho * k - sp.Rational(1, 2)),
        "b2": sp.sqrt(2) / s * (k * th - lam),
        "B2": -sp.sqrt(2) * k / s,
    }
    vals = {k: 1, th: sp.Rational(4, 100), s: sp.Rational(1, 2), rho: 0, r: sp.Rational(2, 100),
            lam: 0}
    got = heston_printed_constants(1, 0.04, 0.5, 0, 0.02, 0)
    for name, expr in formulas.items():
        assert abs(got[name] - float(expr.subs(vals))) < 1e-14
    # and the c term: -r y scaled by the prefactor's sqrt2/sigma
    res = heston_to_euler(0.0, 1, 0.04, 0.5, 0, 0.02, 0)
    assert abs(res.meta["constants"]["c_per_y"] + np.sqrt(2) * 0.02 / 0.5) < 1e-15


def test_heston_errors():
    with pytest.raises(TransformError):
        heston_to_euler(0, 1, 0.04, 0.0, 0, 0, 0)


def test_sabr_examples():
    res = sabr_rho0_to_euler(0.0, 0.4)
    b1, b2, c, _ = res.coeffs.evaluate(np.array([0.3, -1.0]), np.array([0.5, 2.0]))
    assert np.all(b1 == 0) and np.all(b2 == 0) and np.all(c == 0)
    half = sabr_rho0_to_euler(0.5, 0.4)
    assert abs(_b2(half, 0.0, 1.0) + 0.5) < 1e-15
    with pytest.raises(TransformError):
        sabr_rho0_to_euler(1.0, 0.4)


def test_sabr_pullback_of_w():
    res = sabr_rho0_to_euler(0.5, 0.4)
    x, y = probe_points(30, seed=7)
    f = lambda F, a: a / 0.4
    e, s, rel = pullback_check(res, f, x, y)
    assert np.max(rel) < 1e-7
    assert np.all(res.prefactor(x, y) > 0)


def test_sabr_general_recipe_reduces_to_rho0():
    rec = sabr_general_recipe(0.5, 0.4, 0.0, np.pi / 2)
    m = sabr_rho0_to_euler(0.5, 0.4).map
    F, a = np.array([0.5, 1.3]), np.array([0.2, 0.9])
    assert np.allclose(rec["forward"](F, a), m.forward(F, a), atol=1e-12)


def test_power_multiplier_identity():
    pm = power_multiplier(0.0)
    f = lambda x, y: np.sin(x) + y
    assert pm.forward(f)(0.3, 0.7) == f(0.3, 0.7)
    assert pm.source.b2(0, 1) == pm.target.b2(0, 1) == 1


def test_power_multiplier_lambda_two():
    pm = power_multiplier(2.0)
    d = HalfPlaneRect(-1, 1, 1, 21, 21)
    ft = GridFunction.from_callable(pm.forward(lambda x, y: np.ones_like(x * y)), d)
    assert residual_grid(pm.target, ft).meta["max_abs"] <= 1e-10


def test_abreu_reduction():
    pm = abreu_reduction()
    assert pm.target.b2(0, 1) == -1 and pm.source.b2(0, 1) == 3
    # phi = y^2 solves y Lap phi - phi_y = 0; y^-2 phi = 1 solves the b2 = 3 equation
    phi = lambda x, y: np.asarray(y, float) ** 2 + 0 * x
    d = HalfPlaneRect(-1, 1, 1, 11, 11)
    assert residual_grid(pm.target, GridFunction.from_callable(phi, d)).meta["max_abs"] < 1e-12
    back = pm.inverse(phi)
    assert residual_grid(pm.source, GridFunction.from_callable(back, d, trace=lambda x: 1 + 0 * x)
                         ).meta["max_abs"] < 1e-12


@pytest.mark.parametrize("name", ["keldysh", "population", "heston", "sabr"])
def test_pullback_consistency_all_probes(name):
    out = consistency_check(name, n=50, seed=0)
    assert set(PROBE_FUNCTIONS) <= set(out)
    assert out["max"] <= 1e-6


@pytest.mark.parametrize("res", [keldysh_to_euler(3), keldysh_to_euler(-1), population_to_euler(2),
                                 heston_to_euler(0.05, 1.5, 0.04, 0.3, 0.5, 0.02, 0.1),
                                 sabr_rho0_to_euler(0.5, 0.4)])
def test_map_roundtrip(res):
    x, y = probe_points(50, seed=2)
    p, q = res.map.inverse(x, y)
    x2, y2 = res.map.forward(p, q)
    assert np.max(np.abs(x2 - x)) < 1e-12 and np.max(np.abs(y2 - y)) < 1e-12
    assert res.map.roundtrip_error(p, q) < 1e-12


def test_unknown_transform():
    with pytest.raises(TransformError):
        consistency_check("nope")
