from pathlib import Path

import numpy as np
import pytest
from scipy import special

from eulerlab.catalog import get_entry
from eulerlab.operator import Coefficients, HalfPlaneRect
from eulerlab.solver import (BoundarySpec, Problem, SolverError, load_problem, observed_orders,
                             refinement_study, solve)

DEMO_PROBLEMS = Path(__file__).resolve().parents[1] / "demos" / "problems"


def test_linear_data_reproduced_four_sided():
    d = HalfPlaneRect(-1, 1, 1, 33, 33)
    f = lambda x, y: np.asarray(x, float) + 0 * np.asarray(y, float)
    rep = solve(Coefficients.constant(), d, BoundarySpec.from_function(f, d, mode="four_sided"))
    X, Y = d.mesh()
    assert np.max(np.abs(rep.solution.values - X)) < 1e-10
    assert rep.linear_residual <= 1e-10
    assert rep.closure_rule_used == "dirichlet"


def test_abreu_linear_degenerate_closed():
    d = HalfPlaneRect(-1, 1, 1, 33, 33)
    f = lambda x, y: np.asarray(x, float) + 0 * np.asarray(y, float)
    rep = solve(Coefficients.constant(b2=3.0), d, BoundarySpec.from_function(f, d))
    X, _ = d.mesh()
    assert np.max(np.abs(rep.solution.values - X)) < 1e-10
    assert rep.closure_rule_used == "transport"


def test_i0_sqrt_order():
    co = Coefficients(b2=1.0, c=lambda x, y: -np.asarray(y, float) / 4 + 0 * x)
    exact = lambda x, y: special.i0(np.sqrt(np.asarray(y, float))) + 0 * np.asarray(x, float)
    d = HalfPlaneRect(-1, 1, 1, 17, 17)
    pr = Problem(co, d, BoundarySpec.from_function(exact, d), exact=exact,
                 probes=((0.0, 0.5), (0.5, 0.25), (-0.5, 0.75)))
    study = refinement_study(pr, 4)
    orders = observed_orders(study)
    assert np.all(orders >= 1.0)
    assert study[-1][1] < study[0][1]


def test_laplace_second_order():
    exact = lambda x, y: np.exp(x) * np.cos(y)
    d = HalfPlaneRect(-1, 1, 2, 9, 17, y_min=1.0)
    pr = Problem(Coefficients.constant(), d, BoundarySpec.from_function(exact, d, mode="four_sided"),
                 exact=exact, probes=((0.0, 1.5), (0.5, 1.25)))
    orders = observed_orders(refinement_study(pr, 4))
    assert np.all(np.abs(orders - 2.0) <= 0.1)


def test_harmonic_quadratic_is_exact():
    exact = lambda x, y: x * x - y * y
    d = HalfPlaneRect(-1, 1, 1, 17, 17)
    rep = solve(Coefficients.constant(), d, BoundarySpec.from_function(exact, d, mode="four_sided"))
    X, Y = d.mesh()
    assert np.max(np.abs(rep.solution.values - exact(X, Y))) < 1e-12


def test_heston_1py_degenerate_closed():
    e = get_entry("heston_1py")
    d = HalfPlaneRect(-1, 1, 2, 17, 17)
    pr = Problem(e.coeffs, d, BoundarySpec.from_function(e.eval, d), exact=e.eval,
                 probes=((0.0, 1.0), (0.5, 0.5)))
    study = refinement_study(pr, 3)
    assert max(err for _, err in study) < 1e-10
    assert solve(e.coeffs, d, BoundarySpec.from_function(e.eval, d)).closure_rule_used == "transport"


def test_cf_equals_g_closure():
    # c = 1 + y, g = 2 (1 + y) has the solution f = 2
    co = Coefficients(b2=1.0, c=lambda x, y: 1 + np.asarray(y, float) + 0 * x,
                      g=lambda x, y: 2 * (1 + np.asarray(y, float)) + 0 * x)
    d = HalfPlaneRect(-1, 1, 1, 17, 17)
    rep = solve(co, d, BoundarySpec(2.0, 2.0, 2.0))
    assert rep.closure_rule_used == "cf=g"
    assert np.max(np.abs(rep.solution.values - 2)) < 1e-12


def test_unspecifiability_discrete():
    co = Coefficients.constant(b2=3.0)
    disc = []
    for k in range(3):
        d = HalfPlaneRect(-1, 1, 1, 16 * 2 ** k + 1, 16 * 2 ** k + 1)
        a = solve(co, d, BoundarySpec(0.0, 0.0, 0.0, 0.0, "four_sided")).solution.at(0.0, 0.5)
        b = solve(co, d, BoundarySpec(0.0, 0.0, 0.0, 1.0, "four_sided")).solution.at(0.0, 0.5)
        disc.append(abs(a - b))
    assert disc[0] > disc[1] > disc[2]


def test_discrete_max_principle():
    rng = np.random.default_rng(0)
    d = HalfPlaneRect(-1, 1, 1, 41, 41)
    for b1, b2 in [(0.0, 0.5), (0.7, 1.0), (-1.0, 3.0)]:
        c1, c2, c3, c4 = rng.normal(size=4)
        bc = BoundarySpec(lambda x: c1 * np.cos(3 * x), lambda y: c2 * y,
                          lambda y: c3 * np.sin(2 * y), lambda x: c4 * x, "four_sided")
        v = solve(Coefficients.constant(b1=b1, b2=b2), d, bc).solution.values
        edge = np.concatenate([v[0], v[-1], v[:, 0], v[:, -1]])
        assert v.max() <= edge.max() + 1e-12
        assert v.min() >= edge.min() - 1e-12


def test_degenerate_closed_nonnegative():
    d = HalfPlaneRect(-2, 2, 1, 65, 65)
    for b1, b2 in [(0.0, 1.0), (1.5, 2.0), (-0.5, 3.0)]:
        bc = BoundarySpec(lambda x: 1 + np.cos(3 * x), lambda y: y ** 2, 0.0)
        v = solve(Coefficients.constant(b1=b1, b2=b2), d, bc).solution.values
        assert v.min() >= -1e-10


def test_linearity():
    d = HalfPlaneRect(-1, 1, 1, 33, 33)
    co = Coefficients.constant(b1=0.4, b2=2.0)
    bc1 = BoundarySpec(np.cos, 0.3, lambda y: y)
    bc2 = BoundarySpec(lambda x: x ** 2, lambda y: np.sin(y), 1.0)
    a, b = 1.7, -2.3
    bc12 = BoundarySpec(lambda x: a * np.cos(x) + b * x ** 2, lambda y: a * 0.3 + b * np.sin(y),
                        lambda y: a * y + b)
    u1 = solve(co, d, bc1).solution.values
    u2 = solve(co, d, bc2).solution.values
    u12 = solve(co, d, bc12).solution.values
    assert np.max(np.abs(u12 - (a * u1 + b * u2))) < 1e-9


def test_mode_checks():
    d = HalfPlaneRect(-1, 1, 1, 9, 9)
    with pytest.raises(SolverError):
        solve(Coefficients.constant(b2=0.5), d, BoundarySpec(0.0, 0.0, 0.0))
    with pytest.raises(SolverError):
        BoundarySpec(0.0, 0.0, 0.0, 1.0, "degenerate_closed")
    with pytest.raises(SolverError):
        BoundarySpec(0.0, 0.0, 0.0, None, "four_sided")
    with pytest.raises(SolverError):
        BoundarySpec(0.0, 0.0, 0.0, mode="bogus")


def test_upwinding_reported():
    d = HalfPlaneRect(-1, 1, 1, 33, 33)
    rep = solve(Coefficients.constant(b1=8.0, b2=3.0), d, BoundarySpec(np.cos, 1.0, 0.0))
    assert rep.upwind_nodes > 0
    assert rep.linear_residual <= 1e-10


def test_refinement_needs_two_levels():
    d = HalfPlaneRect(-1, 1, 1, 9, 9)
    pr = Problem(Coefficients.constant(b2=2.0), d, BoundarySpec(1.0, 1.0, 1.0), probes=((0, 0.5),))
    with pytest.raises(ValueError):
        refinement_study(pr, 1)


@pytest.mark.parametrize("name", ["abreu_linear", "four_sided_b2_half", "harnack_cos"])
def test_demo_problem_files(name):
    pr = load_problem(DEMO_PROBLEMS / f"{name}.yaml")
    rep = solve(pr.coeffs, pr.domain, pr.bc)
    assert rep.linear_residual <= 1e-10
    assert np.all(np.isfinite(rep.solution.values))


def test_load_problem_errors():
    with pytest.raises(SolverError):
        load_problem({"domain": {"x_min": 0}})
    with pytest.raises(SolverError):
        load_problem({"domain": {"x_min": -1, "x_max": 1, "y_max": 1, "nx": 5, "ny": 5},
                      "coeffs": "nope", "bc": {"top": 0, "left": 0, "right": 0}})
