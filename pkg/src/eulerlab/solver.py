"""
Finite-difference Dirichlet solver for ``L(f) = g`` on half-plane rectangles.

Interior nodes use second-order central differences, switched to first-order
upwinding for the transport term where the cell Péclet number
``|b| h / (2 y)`` exceeds one.  On the degenerate edge ``y = 0`` two modes
are offered:

``degenerate_closed``
    No bottom data.  The bottom row carries the limit of the equation itself:
    ``c f = g`` where ``c(x, 0) != 0``, otherwise the first-order relation
    ``b1 f_x + b2 f_y + c_y f = g_y`` obtained by dividing by ``y``.  Only
    allowed when ``b2 >= 1`` along the edge.
``four_sided``
    Bottom values are pinned like any other Dirichlet edge.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import MatrixRankWarning, splu

from .operator import Coefficients, GridFunction, HalfPlaneRect, _ev

__all__ = [
    "SolverError",
    "BoundarySpec",
    "SolveReport",
    "Problem",
    "solve",
    "refinement_study",
    "observed_orders",
    "load_problem",
    "COEFF_PRESETS",
    "PROFILE_PRESETS",
    "LINEAR_TOL",
    "C_THRESHOLD",
]

LINEAR_TOL = 1e-10
C_THRESHOLD = 1e-8
MODES = ("degenerate_closed", "four_sided")


class SolverError(RuntimeError):
    """Singular system, mode/coefficient mismatch or non-convergence."""


def _as_profile(v):
    if v is None or callable(v):
        return v
    val = float(v)
    return lambda t: np.full_like(np.asarray(t, float), val)


@dataclass(frozen=True)
class BoundarySpec:
    """Dirichlet data on the edges of a :class:`HalfPlaneRect`.

    ``top`` and ``bottom`` are functions of ``x``; ``left`` and ``right``
    functions of ``y``.  Numbers are accepted as constant profiles.
    """

    top: Callable
    left: Callable
    right: Callable
    bottom: Optional[Callable] = None
    mode: str = "degenerate_closed"

    def __post_init__(self):
        if self.mode not in MODES:
            raise SolverError(f"unknown mode {self.mode!r}")
        for k in ("top", "left", "right", "bottom"):
            object.__setattr__(self, k, _as_profile(getattr(self, k)))
        if self.mode == "degenerate_closed" and self.bottom is not None:
            raise SolverError("degenerate_closed mode takes no bottom data")
        if self.mode == "four_sided" and self.bottom is None:
            raise SolverError("four_sided mode needs bottom data")

    @classmethod
    def from_function(cls, f, domain: HalfPlaneRect, mode="degenerate_closed", bottom=None):
        """Edge data sampled from ``f(x, y)`` on the edges of ``domain``.

        In four_sided mode the bottom is ``f(x, y_min)`` unless ``bottom`` is
        given.  Refined grids of the same extent reuse the spec.
        """
        d = domain
        one = lambda t: np.ones_like(np.asarray(t, float))
        top = lambda x: f(x, d.y_max * one(x))
        left = lambda y: f(d.x_min * one(y), y)
        right = lambda y: f(d.x_max * one(y), y)
        if mode == "four_sided" and bottom is None:
            bottom = lambda x: f(x, d.y_min * one(x))
        return cls(top, left, right, bottom if mode == "four_sided" else None, mode)


def _edge_data(bc: BoundarySpec, d: HalfPlaneRect):
    x, y = d.x, d.y
    top, left, right = (np.asarray(fn(t), float) + 0 * t
                        for fn, t in ((bc.top, x), (bc.left, y), (bc.right, y)))
    bottom = None if bc.bottom is None else np.asarray(bc.bottom(x), float) + 0 * x
    return top, left, right, bottom


@dataclass
class SolveReport:
    """Outcome of :func:`solve`.

    ``closure_rule_used`` is ``"dirichlet"`` (four_sided or a grid away from
    ``y = 0``), ``"cf=g"``, ``"transport"`` or ``"mixed"`` when the bottom
    row uses both closures.  ``upwind_nodes`` counts interior nodes switched
    to first-order upwinding.
    """

    solution: GridFunction
    linear_residual: float
    iterations: int
    closure_rule_used: str
    upwind_nodes: int = 0
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return {"linear_residual": self.linear_residual, "iterations": self.iterations,
                "closure_rule_used": self.closure_rule_used, "upwind_nodes": self.upwind_nodes,
                **self.solution.domain.to_dict()}


def _dy(fn, x, eps=1e-5):
    """One-sided ``d/dy`` at ``y = 0`` (second order)."""
    return (-3 * _ev(fn, x, 0 * x) + 4 * _ev(fn, x, 0 * x + eps) - _ev(fn, x, 0 * x + 2 * eps)) \
        / (2 * eps)


def _assemble(coeffs: Coefficients, d: HalfPlaneRect, bc: BoundarySpec):
    nx, ny = d.nx, d.ny
    hx, hy = d.hx, d.hy
    N = nx * ny
    idx = np.arange(N).reshape(nx, ny)
    rows, cols, vals = [], [], []
    rhs = np.zeros(N)

    def put(r, c, v):
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.broadcast_to(v, r.shape).ravel())

    # interior
    X, Y = d.mesh()
    xi, yi = X[1:-1, 1:-1], Y[1:-1, 1:-1]
    b1, b2, c, g = coeffs.evaluate(xi, yi)
    P = idx[1:-1, 1:-1]
    a_x, a_y = yi ** 2 / hx ** 2, yi ** 2 / hy ** 2
    tx, ty = yi * b1, yi * b2
    up_x = np.abs(tx) * hx > 2 * yi ** 2
    up_y = np.abs(ty) * hy > 2 * yi ** 2
    # x transport: central (t/2h) or upwind (t>0 forward, t<0 backward)
    e_x = np.where(up_x, np.maximum(tx, 0) / hx, tx / (2 * hx))
    w_x = np.where(up_x, np.maximum(-tx, 0) / hx, -tx / (2 * hx))
    n_y = np.where(up_y, np.maximum(ty, 0) / hy, ty / (2 * hy))
    s_y = np.where(up_y, np.maximum(-ty, 0) / hy, -ty / (2 * hy))
    diag = -2 * a_x - 2 * a_y + c - np.where(up_x, np.abs(tx) / hx, 0) \
        - np.where(up_y, np.abs(ty) / hy, 0)
    put(P, P, diag)
    put(P, idx[2:, 1:-1], a_x + e_x)
    put(P, idx[:-2, 1:-1], a_x + w_x)
    put(P, idx[1:-1, 2:], a_y + n_y)
    put(P, idx[1:-1, :-2], a_y + s_y)
    rhs[P.ravel()] = np.broadcast_to(g, P.shape).ravel()
    n_up = int(np.count_nonzero(up_x | up_y))

    top, left, right, bottom = _edge_data(bc, d)

    def dirichlet(p, v):
        put(p, p, np.ones(p.shape))
        rhs[p.ravel()] = v

    dirichlet(idx[:, -1], top)
    dirichlet(idx[0, :-1], left[:-1])
    dirichlet(idx[-1, :-1], right[:-1])

    closure = "dirichlet"
    xb = d.x[1:-1]
    pb = idx[1:-1, 0]
    if bc.mode == "four_sided":
        dirichlet(pb, bottom[1:-1])
    else:
        if not d.includes_degenerate_edge:
            raise SolverError("degenerate_closed mode needs a grid that reaches y = 0")
        b1b, b2b, cb, gb = coeffs.evaluate(xb, 0 * xb)
        if np.any(b2b < 1):
            raise SolverError(f"degenerate_closed needs b2 >= 1 on the bottom row "
                              f"(min {float(np.min(b2b)):.6g}); use four_sided data")
        use_cf = np.abs(cb) >= C_THRESHOLD
        if np.any(~use_cf & (np.abs(gb) > C_THRESHOLD)):
            raise SolverError("c(x,0) = 0 but g(x,0) != 0: equation has no solution at y = 0")
        cy, gy = _dy(coeffs.c, xb), _dy(coeffs.g, xb)
        b1t = np.where(use_cf, 0.0, b1b) / (2 * hx)
        b2t = np.where(use_cf, 0.0, b2b) / (2 * hy)
        put(pb, pb, np.where(use_cf, cb, cy - 3 * b2t))
        put(pb, idx[1:-1, 1], 4 * b2t)
        put(pb, idx[1:-1, 2], -b2t)
        put(pb, idx[2:, 0], b1t)
        put(pb, idx[:-2, 0], -b1t)
        rhs[pb] = np.where(use_cf, gb, gy)
        closure = "cf=g" if use_cf.all() else ("transport" if not use_cf.any() else "mixed")

    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(N, N))
    return A, rhs, closure, n_up


def solve(coeffs: Coefficients, domain: HalfPlaneRect, bc: BoundarySpec,
          tol: float = LINEAR_TOL, max_refine: int = 3) -> SolveReport:
    """Solve ``L(f) = g`` with the boundary treatment of ``bc.mode``.

    Rows are scaled to unit max-norm before a sparse LU solve; up to
    ``max_refine`` steps of iterative refinement bring the max-norm residual
    of the scaled system (relative to ``max(1, |f|_inf)``) below ``tol``.

    Raises
    ------
    SolverError
        On a singular matrix, a mode that does not fit ``b2``, or a residual
        that stays above ``tol``.
    """
    A, rhs, closure, n_up = _assemble(coeffs, domain, bc)
    s = 1.0 / np.maximum(abs(A).max(axis=1).toarray().ravel(), 1e-300)
    A = (sp.diags(s) @ A).tocsc()
    rhs = s * rhs
    with warnings.catch_warnings():
        warnings.simplefilter("error", MatrixRankWarning)
        try:
            lu = splu(A)
        except (RuntimeError, MatrixRankWarning) as exc:
            raise SolverError(f"singular system: {exc}") from None
    u = lu.solve(rhs)
    if not np.all(np.isfinite(u)):
        raise SolverError("singular system (non-finite solution)")

    def resid(u):
        return float(np.max(np.abs(A @ u - rhs)) / max(1.0, float(np.max(np.abs(u)))))

    res, it = resid(u), 0
    while res > tol * 1e-2 and it < max_refine:
        u = u + lu.solve(rhs - A @ u)
        it += 1
        res = resid(u)
    if res > tol:
        raise SolverError(f"linear residual {res:.3e} above tolerance {tol:.1e}")
    sol = GridFunction(domain, u.reshape(domain.nx, domain.ny),
                       meta={"mode": bc.mode, "closure": closure})
    return SolveReport(sol, res, it, closure, n_up)


# ---------------------------------------------------------------------------
# refinement studies

@dataclass
class Problem:
    """A solve plus what is needed to measure its error.

    ``exact(x, y)`` is optional; without it the finest level is the reference.
    ``probes`` are interior points kept fixed across levels (they must be
    nodes of the coarsest grid to avoid interpolation error).
    """

    coeffs: Coefficients
    domain: HalfPlaneRect
    bc: BoundarySpec
    exact: Optional[Callable] = None
    probes: tuple = ()
    name: str = ""


def refinement_study(problem: Problem, levels: int) -> list:
    """Errors at the probes on nested grids ``2^k (n - 1) + 1``, k = 0..levels-1.

    Returns
    -------
    list of ``(h, err)``: ``h = hx`` and the max error over the probes.
    """
    if levels < 2:
        raise ValueError("refinement_study needs at least 2 levels")
    if not problem.probes:
        raise ValueError("refinement_study needs probe points")
    px = np.array([p[0] for p in problem.probes], float)
    py = np.array([p[1] for p in problem.probes], float)
    vals, hs = [], []
    for k in range(levels):
        d = problem.domain.refined(2 ** k) if k else problem.domain
        rep = solve(problem.coeffs, d, problem.bc)
        vals.append(rep.solution.at(px, py))
        hs.append(d.hx)
    if problem.exact is not None:
        ref = np.asarray(problem.exact(px, py), float)
        errs = [float(np.max(np.abs(v - ref))) for v in vals]
    else:
        errs = [float(np.max(np.abs(v - vals[-1]))) for v in vals[:-1]]
        hs = hs[:-1]
    return list(zip(hs, errs))


def observed_orders(study: list) -> np.ndarray:
    """``log2`` ratios of successive errors in a halving study."""
    e = np.array([err for _, err in study], float)
    h = np.array([hh for hh, _ in study], float)
    return np.log(e[:-1] / e[1:]) / np.log(h[:-1] / h[1:])


# ---------------------------------------------------------------------------
# problem files

COEFF_PRESETS = {
    "laplace": lambda: Coefficients.constant(name="y^2 Lap"),
    "abreu": lambda: Coefficients.constant(b2=3.0, name="y^2 Lap + 3y d_y"),
    "b2_1": lambda: Coefficients.constant(b2=1.0, name="y^2 Lap + y d_y"),
    "b2_2": lambda: Coefficients.constant(b2=2.0, name="y^2 Lap + 2y d_y"),
    "i0_sqrt": lambda: Coefficients(b2=1.0, c=lambda x, y: -np.asarray(y, float) / 4 + 0 * x,
                                        name="y^2 Lap + y d_y - y/4"),
    "heston_1py": lambda: Coefficients(b2=lambda x, y: 1.0 + np.asarray(y, float) + 0 * x,
                                       c=lambda x, y: -np.asarray(y, float) + 0 * x,
                                       name="heston B2=+1"),
}

PROFILE_PRESETS = {
    "cos": np.cos,
    "two_plus_cos": lambda t: 2 + np.cos(t),
    "identity": lambda t: np.asarray(t, float),
    "one": lambda t: np.ones_like(np.asarray(t, float)),
    "zero": lambda t: np.zeros_like(np.asarray(t, float)),
}


def _coeffs_from(cfg):
    if isinstance(cfg, str):
        try:
            return COEFF_PRESETS[cfg]()
        except KeyError:
            raise SolverError(f"unknown coefficient preset {cfg!r}") from None
    if "preset" in cfg:
        return _coeffs_from(cfg["preset"])
    return Coefficients.constant(**{k: float(cfg.get(k, 0.0)) for k in ("b1", "b2", "c", "g")})


def _profile_from(v):
    if v is None or isinstance(v, (int, float)):
        return v
    try:
        return PROFILE_PRESETS[v]
    except KeyError:
        raise SolverError(f"unknown boundary profile {v!r}") from None


def load_problem(path_or_dict) -> Problem:
    """Read a YAML problem file (or an already parsed mapping).

    Keys: ``domain.{x_min,x_max,y_max,nx,ny[,y_min]}``; ``coeffs`` as a
    preset name or ``{b1,b2,c,g}`` constants; ``bc.{mode,top,left,right,
    bottom}`` as numbers or profile names; optional ``probes`` list.
    """
    if isinstance(path_or_dict, dict):
        cfg = path_or_dict
    else:
        import yaml
        with open(path_or_dict) as fh:
            cfg = yaml.safe_load(fh)
    try:
        dm = cfg["domain"]
        dom = HalfPlaneRect(float(dm["x_min"]), float(dm["x_max"]), float(dm["y_max"]),
                            int(dm["nx"]), int(dm["ny"]), float(dm.get("y_min", 0.0)))
        b = cfg["bc"]
        bc = BoundarySpec(_profile_from(b["top"]), _profile_from(b["left"]),
                          _profile_from(b["right"]), _profile_from(b.get("bottom")),
                          b.get("mode", "degenerate_closed"))
        coeffs = _coeffs_from(cfg.get("coeffs", "laplace"))
    except (KeyError, TypeError) as exc:
        raise SolverError(f"malformed problem file: missing {exc}") from None
    probes = tuple(tuple(map(float, p)) for p in cfg.get("probes", ()))
    return Problem(coeffs, dom, bc, probes=probes, name=str(cfg.get("name", "")))
