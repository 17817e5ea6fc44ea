"""
Numerical theorem checks with quantitative margins.

Every check returns a :class:`VerificationReport` whose ``margin`` is
non-negative exactly when the checked inequality holds on the sampled data.
Counterexamples are run with ``expect_pass=False``; a report is *consistent*
when ``passed == expect_pass``.

Half-plane statements are truncated to finite rectangles; empirical
constants (gradient bound ``D``, monotonicity ``1/delta``) are reported as
measurements, never compared with closed forms.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .operator import Coefficients, GridFunction, HalfPlaneRect
from .solver import BoundarySpec, SolverError, solve

__all__ = [
    "VerificationReport",
    "VerifyError",
    "DEFAULT_SEED",
    "check_harnack_local",
    "check_max_principle",
    "measure_gradient_bound",
    "gradient_growth",
    "check_almost_monotonicity",
    "check_unspecifiability",
    "check_poly_x_bounds",
    "check_continuity",
    "confirm_violation",
    "harnack_suite",
    "run_suite",
    "SUITES",
]

DEFAULT_SEED = 0x45554C45
HARNACK_TOL = 1e-6


class VerifyError(ValueError):
    """Input does not satisfy a check's preconditions."""


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass
class VerificationReport:
    """Outcome of one check.

    Parameters
    ----------
    theorem_tag : str
    margin : float
        ``>= 0`` iff the inequality holds.
    passed : bool
    expect_pass : bool
        ``False`` for counterexample controls.
    measured_constants : dict
        Empirical constants and intermediate measurements.
    grid_meta : dict
        Grid and refinement information.
    label : str
        Identifies the instance within a suite.
    """

    theorem_tag: str
    margin: float
    passed: bool
    expect_pass: bool = True
    measured_constants: dict = field(default_factory=dict)
    grid_meta: dict = field(default_factory=dict)
    label: str = ""

    @property
    def consistent(self) -> bool:
        return self.passed == self.expect_pass

    def to_dict(self) -> dict:
        return _clean(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "VerificationReport":
        d = json.loads(s)
        return cls(**d)


def _report(tag, margin, passed, expect_pass=True, measured=None, grid=None, label=""):
    return VerificationReport(tag, float(margin), bool(passed), bool(expect_pass),
                              dict(measured or {}), dict(grid or {}), label)


def _grid_meta(f: GridFunction) -> dict:
    return f.domain.to_dict()


# ---------------------------------------------------------------------------
# Harnack inequality at the degenerate edge

def check_harnack_local(f: GridFunction, Lambda: float, y0: float, tol: float = HARNACK_TOL,
                        expect_pass=True, label="") -> VerificationReport:
    """``margin = f(0, 0) - inf_{|x| <= 4 Lambda y0} f(x, y0) / 9``.

    ``f`` must live on a grid containing ``R_{y0} = [-4 Lambda y0, 4 Lambda y0] x [0, y0]``
    with nodes at ``(0, 0)`` and on the row ``y = y0``.
    """
    d = f.domain
    w = 4 * Lambda * y0
    if not d.includes_degenerate_edge or d.x_min > -w + 1e-12 * w or d.x_max < w - 1e-12 * w \
            or d.y_max < y0 * (1 - 1e-12):
        raise VerifyError("grid does not contain R_{y0}")
    i0, j0 = f.node_index(0.0, 0.0)
    _, jy = f.node_index(0.0, y0)
    if abs(d.x[i0]) > 1e-9 * w or abs(d.y[jy] - y0) > 1e-9 * y0:
        raise VerifyError("(0, 0) or the row y0 is not a grid node")
    xs = d.x
    row = f.values[(xs >= -w * (1 + 1e-12)) & (xs <= w * (1 + 1e-12)), jy]
    inf_row = float(np.min(row))
    f00 = float(f.values[i0, 0])
    margin = f00 - inf_row / 9.0
    return _report("harnack_local", margin, margin >= -tol, expect_pass,
                   {"f00": f00, "inf_row": inf_row, "ratio": f00 / inf_row if inf_row else None,
                    "Lambda": Lambda, "y0": y0}, _grid_meta(f), label)


def _random_top(rng, w, n_modes=6):
    a = rng.normal(size=n_modes) / np.arange(1, n_modes + 1)
    b = rng.normal(size=n_modes) / np.arange(1, n_modes + 1)
    k = np.arange(1, n_modes + 1) * np.pi / w

    def raw(x):
        x = np.asarray(x, float)[..., None]
        return np.sum(a * np.cos(k * x) + b * np.sin(k * x), axis=-1)

    lo = float(np.min(raw(np.linspace(-w, w, 4001))))
    shift = -lo + rng.uniform(0.05, 1.0)
    return lambda x: raw(x) + shift


def harnack_suite(seed: int = DEFAULT_SEED, n_draws: int = 50, b2_values=(1.0, 2.0, 3.0),
                  Lambda: float = 1.0, y0: float = 1.0, n: int = 129) -> list:
    """Seeded positive-data solves on ``R_{y0}`` plus two fixed controls.

    Draw ``k`` uses ``b2 = b2_values[k % len]`` with random positive
    trigonometric top data and positive linear side data.  The controls are
    ``f = 1`` (margin 8/9) and the solve with top data ``2 + cos x`` for
    ``y^2 Lap + y d_y``.
    """
    rng = np.random.default_rng(seed)
    w = 4 * Lambda * y0
    dom = HalfPlaneRect(-w, w, y0, n, n)
    out = []
    for k in range(n_draws):
        b2 = float(b2_values[k % len(b2_values)])
        top = _random_top(rng, w)
        l0, r0 = rng.uniform(0.05, 2.0, 2)
        tl, tr = float(top(-w)), float(top(w))
        left = lambda y, tl=tl, l0=l0: tl * np.asarray(y) / y0 + l0 * (1 - np.asarray(y) / y0)
        right = lambda y, tr=tr, r0=r0: tr * np.asarray(y) / y0 + r0 * (1 - np.asarray(y) / y0)
        rep = solve(Coefficients.constant(b2=b2), dom, BoundarySpec(top, left, right))
        r = check_harnack_local(rep.solution, Lambda, y0, label=f"draw{k:02d}")
        r.measured_constants["b2"] = b2
        r.grid_meta["linear_residual"] = rep.linear_residual
        out.append(r)
    one = GridFunction(dom, np.ones((n, n)))
    out.append(check_harnack_local(one, Lambda, y0, label="constant_one"))
    rep = solve(Coefficients.constant(b2=1.0), dom,
                BoundarySpec(lambda x: 2 + np.cos(x), 2 + np.cos(w), 2 + np.cos(w)))
    out.append(check_harnack_local(rep.solution, Lambda, y0, label="two_plus_cos"))
    return out


# ---------------------------------------------------------------------------
# weak maximum principle

def check_max_principle(f: GridFunction, kind: str, tol: float = 1e-10, expect_pass=True,
                        label="") -> VerificationReport:
    """No strict local extremum of the forbidden type at interior or ``∂₀`` nodes.

    ``kind="sub"`` forbids a strict local maximum (gap ``max(nbrs) - f(p)``),
    ``kind="super"`` a strict local minimum (gap ``f(p) - min(nbrs)``).
    Interior nodes use the 3x3 neighbourhood, bottom-edge nodes the 3x2 one.
    ``margin`` is the smallest gap; pass iff ``margin >= -tol * max|f|``.
    """
    if kind not in ("sub", "super"):
        raise VerifyError("kind must be 'sub' or 'super'")
    v = f.values
    nx, ny = v.shape
    sgn = 1.0 if kind == "sub" else -1.0
    u = sgn * v      # forbid strict local max of u
    pad = np.full((nx + 2, ny + 2), -np.inf)
    pad[1:-1, 1:-1] = u
    nb = np.full((nx, ny), -np.inf)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                nb = np.maximum(nb, pad[1 + di:nx + 1 + di, 1 + dj:ny + 1 + dj])
    gap = nb - u
    m = f.domain.interior_mask()
    d0, _ = f.domain.boundary_masks()
    m |= d0
    worst = float(np.min(gap[m]))
    k = np.unravel_index(np.argmin(np.where(m, gap, np.inf)), gap.shape)
    scale = max(float(np.max(np.abs(v))), 1e-300)
    return _report("max_principle", worst, worst >= -tol * scale, expect_pass,
                   {"kind": kind, "worst_x": f.domain.x[k[0]], "worst_y": f.domain.y[k[1]],
                    "scale": scale}, _grid_meta(f), label)


# ---------------------------------------------------------------------------
# interior gradient estimate

def _grid_gradient_sup(v, x, y):
    hx, hy = x[1] - x[0], y[1] - y[0]
    fi = v[1:-1, 1:-1]
    fx = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * hx)
    fy = (v[1:-1, 2:] - v[1:-1, :-2]) / (2 * hy)
    yy = y[None, 1:-1]
    return float(np.max(yy * np.hypot(fx, fy) / fi))


def measure_gradient_bound(f: Union[GridFunction, Callable], points=None, bound=None,
                           expect_pass=True, label="") -> VerificationReport:
    """Empirical ``D = sup y |grad log f|``.

    Grid mode (``f`` a :class:`GridFunction`): central differences at
    interior nodes with ``y > 0``, repeated on the grid coarsened by two;
    the ratio of the two values is reported as the refinement stability.
    Point mode (``f`` callable, ``points`` an ``(n, 2)`` array): fourth-order
    differences with step ``1e-3 y``.

    With ``bound`` the margin is ``bound - D``; otherwise the check is a
    pure measurement (margin 0, passed).
    """
    from .catalog import gradient_measure
    if isinstance(f, GridFunction):
        v = f.values
        if np.any(v[1:-1, 1:-1] <= 0):
            raise VerifyError("measure_gradient_bound needs f > 0 at interior nodes")
        d = f.domain
        D = _grid_gradient_sup(v, d.x, d.y)
        meas = {"D": D}
        if d.nx >= 5 and d.ny >= 5 and (d.nx - 1) % 2 == 0 and (d.ny - 1) % 2 == 0:
            D2 = _grid_gradient_sup(v[::2, ::2], d.x[::2], d.y[::2])
            meas.update(D_coarse=D2, stability=D / D2 if D2 else None)
        grid = _grid_meta(f)
    else:
        if points is None:
            raise VerifyError("point mode needs points")
        p = np.atleast_2d(np.asarray(points, float))
        vals = np.asarray(f(p[:, 0], p[:, 1]), float)
        if np.any(vals <= 0):
            raise VerifyError("measure_gradient_bound needs f > 0 at the probes")
        g = gradient_measure(f, p[:, 0], p[:, 1])
        D = float(np.max(g))
        meas = {"D": D, "D_min": float(np.min(g)), "n_points": len(p)}
        grid = {"mode": "points"}
    if bound is None:
        return _report("gradient_bound", 0.0, True, expect_pass, meas, grid, label)
    return _report("gradient_bound", bound - D, D <= bound, expect_pass, meas, grid, label)


def gradient_growth(f: Callable, near, far, length=None, factor: float = 5.0,
                    expect_pass=True, label="") -> VerificationReport:
    """Does ``y |grad log f|`` stay bounded along a path?

    ``growth = min(G(near)) / max(G(far))``; the bound is declared violated
    (``passed=False``) when ``growth >= factor``.  ``margin = factor - growth``.
    """
    from .catalog import gradient_measure
    near = np.atleast_2d(np.asarray(near, float))
    far = np.atleast_2d(np.asarray(far, float))
    gn = gradient_measure(f, near[:, 0], near[:, 1], length)
    gf = gradient_measure(f, far[:, 0], far[:, 1], length)
    growth = float(np.min(gn) / np.max(gf))
    return _report("gradient_bound", factor - growth, growth < factor, expect_pass,
                   {"growth": growth, "G_near": gn.tolist(), "G_far": gf.tolist()},
                   {"mode": "path"}, label)


# ---------------------------------------------------------------------------
# almost monotonicity

def check_almost_monotonicity(f: Union[GridFunction, Callable], x0: float = 0.0,
                              y_range=None, n: int = 400, expect_pass=True,
                              label="") -> VerificationReport:
    """Empirical ``1/delta = sup_{y2 > y1} f(x0, y2) / f(x0, y1)`` and tail trend.

    The trend is ``(f(x0, y_end) - inf) / (sup - inf)`` over the sampled
    column (0 for a constant column): near 0 the column settles toward its
    infimum as ``y`` grows, near 1 it climbs to its supremum, the failure
    mode on sub-half-planes.  Pass iff ``trend <= 0.5``; ``margin = 0.5 - trend``.
    """
    if isinstance(f, GridFunction):
        i, _ = f.node_index(x0, 0.0)
        col = f.values[i, :]
        ys = f.domain.y
        if y_range is not None:
            keep = (ys >= y_range[0]) & (ys <= y_range[1])
            col, ys = col[keep], ys[keep]
        grid = _grid_meta(f)
    else:
        if y_range is None:
            raise VerifyError("callable input needs y_range")
        ys = np.geomspace(y_range[0], y_range[1], n)
        col = np.asarray(f(np.full_like(ys, x0), ys), float)
        grid = {"y_range": list(y_range), "n": n, "spacing": "geometric"}
    if np.any(col <= 0):
        raise VerifyError("almost monotonicity needs f > 0 along the column")
    delta_inv = float(np.max(col / np.minimum.accumulate(col)))
    lo, hi = float(np.min(col)), float(np.max(col))
    trend = 0.0 if hi - lo <= 1e-14 * max(abs(hi), 1.0) else (float(col[-1]) - lo) / (hi - lo)
    return _report("almost_monotonicity", 0.5 - trend, trend <= 0.5, expect_pass,
                   {"delta_inv": delta_inv, "trend": trend, "inf": lo, "sup": hi, "x0": x0},
                   grid, label)


# ---------------------------------------------------------------------------
# boundary-value unspecifiability

def check_unspecifiability(coeffs: Coefficients, bc1: BoundarySpec, bc2: BoundarySpec,
                           levels: int = 4, domain: Optional[HalfPlaneRect] = None,
                           probe=(0.0, 0.5), min_factor: float = 1.8,
                           require_hypothesis: bool = True, expect_pass=True,
                           label="") -> VerificationReport:
    """Discrepancy at ``probe`` between two four_sided solves under refinement.

    ``bc1`` and ``bc2`` share their top and side data and differ on the
    bottom.  Grids are ``domain`` refined by ``2^k``, ``k < levels``
    (default 17 x 17 on ``[-1, 1] x [0, 1]``).  Pass iff the discrepancy
    shrinks by at least ``min_factor`` per level (or is below ``1e-14``
    throughout); ``margin`` is the smallest ratio minus ``min_factor``.
    """
    if bc1.mode != "four_sided" or bc2.mode != "four_sided":
        raise VerifyError("unspecifiability compares four_sided solves")
    dom = domain or HalfPlaneRect(-1.0, 1.0, 1.0, 17, 17)
    if require_hypothesis:
        b2 = coeffs.evaluate(dom.x, np.zeros(dom.nx))[1]
        if np.any(b2 < 1):
            raise VerifyError("unspecifiability needs b2 >= 1 on the degenerate edge")
    if levels < 2:
        raise VerifyError("need at least 2 levels")
    disc, hs = [], []
    for k in range(levels):
        d = dom.refined(2 ** k) if k else dom
        f1 = solve(coeffs, d, bc1).solution.at(*probe)
        f2 = solve(coeffs, d, bc2).solution.at(*probe)
        disc.append(float(abs(f1 - f2)))
        hs.append(d.hx)
    disc = np.array(disc)
    gap = float(np.max(np.abs(bc1.bottom(dom.x[1:-1]) - bc2.bottom(dom.x[1:-1]))))
    if np.all(disc <= 1e-14):
        ratios = np.full(levels - 1, np.inf)
        margin, ok = 0.0, True
    else:
        ratios = disc[:-1] / np.maximum(disc[1:], 1e-300)
        margin = float(np.min(ratios) - min_factor)
        ok = margin >= 0
    order = np.log2(ratios) if np.all(np.isfinite(ratios)) else ratios
    return _report("unspecifiability", margin, ok, expect_pass,
                   {"discrepancy": disc.tolist(), "ratios": np.asarray(ratios).tolist(),
                    "observed_order": np.asarray(order).tolist(), "data_gap": gap,
                    "final_relative": float(disc[-1] / gap) if gap else 0.0},
                   {"h": hs, "probe": list(probe), "base": dom.to_dict()}, label)


# ---------------------------------------------------------------------------
# polynomial growth in x

def check_poly_x_bounds(f: Union[GridFunction, Callable], Lambda: float = 1.0, y: float = None,
                        half_width: float = None, n_per_shell: int = 64, expect_pass=True,
                        label="") -> VerificationReport:
    """Growth exponent of ``|log f(x, y) / f(0, y)|`` in ``t = log(|x|/y + 1)``.

    ``M_k`` is the largest ``|log f(x, y)/f(0, y)|`` over ``|x|/y + 1 <= 2^(k+1)``
    for every complete dyadic shell inside ``|x| <= W``, and the shell
    exponents are ``D_k = (M_(k+1) - M_k)/log 2``.  A power-law envelope
    ``(|x|/y + 1)^D`` keeps ``D_k`` level, bounded data drives it to 0 and
    exponential growth doubles it per shell.  ``D_full`` is the largest
    exponent over all shells, ``D_half`` the same without the outermost
    shell (the window halved); pass iff ``D_full <= 1.25 D_half + 0.05``.
    ``Lambda`` is recorded only.
    """
    if isinstance(f, GridFunction):
        d = f.domain
        W = half_width or min(-d.x_min, d.x_max)
        y = y if y is not None else d.y[(d.ny - 1) // 2]
        g = lambda xx: f.at(xx, np.full_like(xx, y))
        grid = _grid_meta(f)
    else:
        if y is None or half_width is None:
            raise VerifyError("callable input needs y and half_width")
        W = half_width
        g = lambda xx: np.asarray(f(xx, np.full_like(xx, y)), float)
        grid = {"half_width": W, "y": y}
    K = int(np.floor(np.log2(W / y + 1) + 1e-12))
    if K < 3:
        raise VerifyError("window too narrow: need at least 3 dyadic shells")
    s = np.linspace(0, K, K * n_per_shell + 1)
    xp = y * (2.0 ** s - 1)
    xs = np.concatenate([-xp[::-1], xp[1:]])
    vals = g(xs)
    if np.any(vals <= 0):
        raise VerifyError("poly_x bounds need f > 0 on the sampled row")
    lr = np.abs(np.log(vals / g(np.array([0.0]))[0]))
    t = np.log2(np.abs(xs) / y + 1)
    M = np.array([np.max(lr[t <= k + 1e-12]) for k in range(K + 1)])
    Dk = np.diff(M) / np.log(2.0)
    D_full, D_half = float(np.max(Dk)), float(np.max(Dk[:-1]))
    margin = 1.25 * D_half + 0.05 - D_full
    return _report("poly_x", margin, margin >= 0, expect_pass,
                   {"D_full": D_full, "D_half": D_half, "D_shells": Dk.tolist(),
                    "Lambda": Lambda, "y": y}, grid, label)


# ---------------------------------------------------------------------------
# continuity at the degenerate edge

def check_continuity(f: GridFunction, p_x: float, r0: float = None, n_radii: int = 3,
                     ratio: float = 0.8, floor: float = 1e-12, expect_pass=True,
                     label="") -> VerificationReport:
    """Oscillation decay at ``(p_x, 0)``.

    ``osc(r)`` is ``max - min`` of ``f`` over nodes within distance ``r``;
    radii ``r0, r0/2, ...`` (``n_radii`` of them).  Pass iff each halving
    gives ``osc(r/2) <= ratio osc(r)`` or ``osc(r/2) <= floor``.
    ``margin`` is the smallest ``ratio osc(r) - osc(r/2)`` (0 when all are
    below ``floor``).
    """
    d = f.domain
    if not d.includes_degenerate_edge:
        raise VerifyError("continuity check needs the y = 0 row")
    h = max(d.hx, d.hy)
    if r0 is None:
        r0 = min(16 * h, 0.5 * d.y_max, 0.5 * (d.x_max - d.x_min))
    X, Y = d.mesh()
    dist = np.hypot(X - p_x, Y)
    radii = [r0 / 2 ** k for k in range(n_radii)]
    if radii[-1] < h:
        raise VerifyError("smallest radius is below the grid spacing")
    osc = []
    for r in radii:
        vals = f.values[dist <= r * (1 + 1e-12)]
        osc.append(float(np.max(vals) - np.min(vals)))
    gaps = [ratio * a - b if b > floor else max(ratio * a - b, 0.0)
            for a, b in zip(osc[:-1], osc[1:])]
    margin = float(min(gaps))
    return _report("continuity", margin, margin >= 0, expect_pass,
                   {"osc": osc, "radii": radii, "p_x": p_x}, _grid_meta(f), label)


# ---------------------------------------------------------------------------
# counterexample confirmation

def _entry_grid(entry, n=129):
    x0, x1, _, y1 = entry.box
    return entry.grid_function(HalfPlaneRect(x0, x1, y1, n, n))


def confirm_violation(entry, tag: str) -> VerificationReport:
    """Run the check named by ``tag`` on a catalog entry with ``expect_pass=False``.

    The entry's violation is confirmed when the returned report has
    ``passed=False``.
    """
    lab = f"{entry.name}:{tag}"
    m = entry.meta
    if tag == "continuity":
        return check_continuity(_entry_grid(entry), m.get("continuity_px", 0.0),
                                expect_pass=False, label=lab)
    if tag == "max_principle":
        return check_max_principle(_entry_grid(entry), m.get("max_kind", "sub"),
                                   expect_pass=False, label=lab)
    if tag == "poly_x":
        y = m.get("poly_x_y", 0.5 * m.get("j1", entry.box[3]))
        return check_poly_x_bounds(entry, y=y, half_width=m.get("poly_x_half_width", 20.0),
                                   expect_pass=False, label=lab)
    if tag == "almost_monotonicity":
        return check_almost_monotonicity(entry, m.get("mono_x0", 0.0), m["mono_y_range"],
                                         expect_pass=False, label=lab)
    if tag == "gradient_bound":
        gp = m["gradient_path"]
        return gradient_growth(entry, gp["near"], gp["far"], entry.length_scale,
                               expect_pass=False, label=lab)
    raise VerifyError(f"no check for tag {tag!r}")


# ---------------------------------------------------------------------------
# suites

def _suite_max_principle(seed):
    from .catalog import get_entry
    out = []
    dom = HalfPlaneRect(-1.0, 1.0, 1.0, 65, 65)
    rep = solve(Coefficients.constant(b2=3.0), dom,
                BoundarySpec(lambda x: 1 + np.cos(3 * x), lambda y: 1 + np.cos(3) + 0 * y,
                             lambda y: 1 + np.cos(3) + 0 * y))
    out.append(check_max_principle(rep.solution, "sub", label="solver_b2_3_sub"))
    out.append(check_max_principle(rep.solution, "super", label="solver_b2_3_super"))
    out.append(check_max_principle(GridFunction(dom, np.full((65, 65), 2.0)), "sub",
                                   label="constant"))
    out.append(confirm_violation(get_entry("bessel_k_maxfail"), "max_principle"))
    return out


def _suite_gradient(seed):
    from .catalog import get_entry
    rng = np.random.default_rng(seed)
    pts = np.column_stack([rng.uniform(-2, 2, 50), rng.uniform(0.01, 5, 50)])
    q = lambda x, y: np.asarray(y, float) ** 0.25 + 0 * np.asarray(x, float)
    r = measure_gradient_bound(q, pts, label="y^(1/4)")
    r.margin = 1e-6 - max(abs(r.measured_constants["D"] - 0.25),
                          abs(r.measured_constants["D_min"] - 0.25))
    r.passed = r.margin >= 0
    out = [r]
    e = get_entry("superfunction")
    gp = e.meta["gradient_path"]
    out.append(gradient_growth(e, gp["near"], gp["far"], e.length_scale, expect_pass=False,
                               label="superfunction:gradient_bound"))
    out.append(confirm_violation(get_entry("heston_exp"), "gradient_bound"))
    return out


def _suite_monotonicity(seed):
    from .catalog import get_entry
    out = [check_almost_monotonicity(lambda x, y: 1 + 0 * np.asarray(y), 0.0, (0.1, 10.0),
                                     label="constant"),
           check_almost_monotonicity(lambda x, y: np.asarray(y, float) ** -2.0, 0.0, (0.1, 10.0),
                                     label="y^-2")]
    out[-1].measured_constants["note"] = "solves y^2 Lap + 3y d_y"
    for name in ("other_halfplane", "heston_1py", "heston_exp", "elliptic_E"):
        out.append(confirm_violation(get_entry(name), "almost_monotonicity"))
    return out


def unspecifiability_pair(b2: float, levels: int = 4, gap: float = 1.0, label="",
                          expect_pass=True) -> VerificationReport:
    """Bottom data 0 versus ``gap`` for ``y^2 Lap + b2 y d_y`` (zero top and sides)."""
    z = lambda t: np.zeros_like(np.asarray(t, float))
    bc1 = BoundarySpec(z, z, z, bottom=z, mode="four_sided")
    bc2 = BoundarySpec(z, z, z, bottom=lambda t: gap + 0 * np.asarray(t, float), mode="four_sided")
    return check_unspecifiability(Coefficients.constant(b2=b2), bc1, bc2, levels,
                                  require_hypothesis=b2 >= 1, expect_pass=expect_pass,
                                  label=label or f"b2={b2:g}")


def _suite_unspecifiability(seed):
    out = [unspecifiability_pair(3.0), unspecifiability_pair(0.5, expect_pass=False)]
    z = lambda t: np.zeros_like(np.asarray(t, float))
    bc = BoundarySpec(z, z, z, bottom=lambda t: 1 + 0 * np.asarray(t), mode="four_sided")
    out.append(check_unspecifiability(Coefficients.constant(b2=3.0), bc, bc, 3,
                                      label="identical_bottoms"))
    return out


def _suite_poly_x(seed):
    from .catalog import get_entry
    out = [check_poly_x_bounds(lambda x, y: 1 + 0 * np.asarray(x), y=0.5, half_width=20.0,
                               label="constant")]
    for n in (161, 321):
        dom = HalfPlaneRect(-20.0, 20.0, 1.0, n, (n - 1) // 16 + 1)
        rep = solve(Coefficients.constant(b2=2.0), dom,
                    BoundarySpec(lambda x: 2 + np.cos(x), 2 + np.cos(20.0), 2 + np.cos(20.0)))
        out.append(check_poly_x_bounds(rep.solution, 1.0, y=0.5, label=f"solver_b2_2_n{n}"))
    out.append(confirm_violation(get_entry("strip_bessel_j"), "poly_x"))
    return out


def _suite_continuity(seed):
    from .catalog import get_entry
    dom = HalfPlaneRect(-1.0, 1.0, 1.0, 129, 129)
    rep = solve(Coefficients.constant(b2=3.0), dom,
                BoundarySpec(lambda x: 1 + np.sin(2 * x), lambda y: 1 + np.sin(-2) + 0 * y,
                             lambda y: 1 + np.sin(2) + 0 * y))
    out = [check_continuity(rep.solution, 0.0, label="solver_b2_3"),
           check_continuity(GridFunction(dom, np.ones((129, 129))), 0.0, label="constant"),
           confirm_violation(get_entry("step"), "continuity")]
    return out


def _suite_counterexamples(seed):
    from .catalog import catalog_entries
    return [confirm_violation(e, tag) for e in catalog_entries() for tag in e.violates]


SUITES = {
    "harnack": lambda seed: harnack_suite(seed),
    "max_principle": _suite_max_principle,
    "gradient": _suite_gradient,
    "monotonicity": _suite_monotonicity,
    "unspecifiability": _suite_unspecifiability,
    "poly_x": _suite_poly_x,
    "continuity": _suite_continuity,
    "counterexamples": _suite_counterexamples,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list:
    """Reports of a named suite, or of every suite for ``"all"`` (fixed order)."""
    if name == "all":
        return [r for k in SUITES for r in SUITES[k](seed)]
    try:
        return SUITES[name](seed)
    except KeyError:
        raise VerifyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'") \
            from None
