"""
Euler-type operators on half-plane rectangles.

The operator is::

    L(f) = y^2 (f_xx + f_yy) + y (b1 f_x + b2 f_y) + c f

acting on functions of ``(x, y)`` with ``y > 0``.  Coefficients are plain
vectorized callables so that merely measurable (piecewise) coefficients can
be represented; nothing here differentiates them.

``SecondOrderOperator`` is the general linear second-order form used for the
operators that only become Euler type after a change of variables.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "Const",
    "Coefficients",
    "SecondOrderOperator",
    "HalfPlaneRect",
    "GridFunction",
    "GridError",
    "apply_pointwise",
    "pointwise_residual",
    "residual_grid",
    "fd_derivatives",
    "write_csv",
]


class GridError(ValueError):
    """Invalid grid geometry or a grid too coarse for the requested stencil."""


class Const:
    """Constant coefficient function with a readable repr.

    Calling it broadcasts the constant to the shape of ``x`` and ``y``.
    """

    __slots__ = ("value",)

    def __init__(self, value: float):
        self.value = float(value)

    def __call__(self, x, y):
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, self.value)

    def __repr__(self):
        return f"Const({self.value!r})"

    def __eq__(self, other):
        return isinstance(other, Const) and other.value == self.value

    def __hash__(self):
        return hash(("Const", self.value))


ZERO = Const(0.0)


def _as_fn(v):
    return v if callable(v) else Const(v)


def _ev(fn, x, y):
    return np.broadcast_to(np.asarray(fn(x, y), dtype=float),
                           np.broadcast(np.asarray(x), np.asarray(y)).shape)


@dataclass(frozen=True)
class Coefficients:
    """Coefficient functions ``b1, b2, c`` and source ``g`` of an Euler operator.

    Parameters
    ----------
    b1, b2, c, g : callable or float
        Vectorized functions of ``(x, y)``; numbers are wrapped in :class:`Const`.
    lambda_bound : float, optional
        The bound Λ on ``|b1|, |b2|, |c|, |g|``.  If omitted it is measured by
        :meth:`sample_bounds` on demand.
    name : str
        Label used in reports and CSV output.
    """

    b1: Callable = ZERO
    b2: Callable = ZERO
    c: Callable = ZERO
    g: Callable = ZERO
    lambda_bound: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        for k in ("b1", "b2", "c", "g"):
            object.__setattr__(self, k, _as_fn(getattr(self, k)))

    @classmethod
    def constant(cls, b1=0.0, b2=0.0, c=0.0, g=0.0, lambda_bound=None, name=""):
        return cls(Const(b1), Const(b2), Const(c), Const(g), lambda_bound, name)

    def evaluate(self, x, y):
        """Return ``(b1, b2, c, g)`` sampled at the broadcast points."""
        return tuple(_ev(fn, x, y) for fn in (self.b1, self.b2, self.c, self.g))

    def is_constant(self) -> bool:
        return all(isinstance(fn, Const) for fn in (self.b1, self.b2, self.c, self.g))

    def with_source(self, g) -> "Coefficients":
        return Coefficients(self.b1, self.b2, self.c, g, self.lambda_bound, self.name)

    def sample_bounds(self, x_range, y_range, n=400, seed=0) -> dict:
        """Sample the coefficients on a box and report bounds and flags.

        Returns a dict with ``max_abs`` (the empirical Λ) and the flags
        ``b2_ge_1``, ``c_ge_0``, ``c_zero``.
        """
        rng = np.random.default_rng(seed)
        x = rng.uniform(*x_range, n)
        y = rng.uniform(*y_range, n)
        b1, b2, c, g = self.evaluate(x, y)
        max_abs = float(max(np.abs(b1).max(), np.abs(b2).max(), np.abs(c).max(), np.abs(g).max()))
        return {
            "max_abs": max_abs,
            "b2_ge_1": bool((b2 >= 1).all()),
            "c_ge_0": bool((c >= 0).all()),
            "c_zero": bool((c == 0).all()),
            "within_lambda": self.lambda_bound is None or max_abs <= self.lambda_bound,
        }

    def as_general(self) -> "SecondOrderOperator":
        """The same operator written in general second-order form."""
        b1, b2 = self.b1, self.b2
        return SecondOrderOperator(
            axx=lambda x, y: y * y + 0 * x,
            ayy=lambda x, y: y * y + 0 * x,
            bx=lambda x, y: y * _ev(b1, x, y),
            by=lambda x, y: y * _ev(b2, x, y),
            c=self.c,
            g=self.g,
            name=self.name,
        )


@dataclass(frozen=True)
class SecondOrderOperator:
    """``axx f_xx + 2 axy f_xy + ayy f_yy + bx f_x + by f_y + c f`` (minus ``g``)."""

    axx: Callable = ZERO
    axy: Callable = ZERO
    ayy: Callable = ZERO
    bx: Callable = ZERO
    by: Callable = ZERO
    c: Callable = ZERO
    g: Callable = ZERO
    name: str = ""

    def __post_init__(self):
        for k in ("axx", "axy", "ayy", "bx", "by", "c", "g"):
            object.__setattr__(self, k, _as_fn(getattr(self, k)))

    def apply(self, f, x, y, step=None, derivs=None):
        """``L(f)`` at points, with derivatives from ``derivs`` or finite differences.

        ``step`` is the absolute finite-difference step (array or scalar);
        by default ``1e-3 * max(|x|, |y|, 1)`` is used, which suits smooth
        functions away from singular sets.
        """
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if derivs is not None:
            d = derivs(x, y)
        else:
            if step is None:
                step = 1e-3 * np.maximum(np.maximum(np.abs(x), np.abs(y)), 1.0)
            d = fd_derivatives(f, x, y, step, mixed=not isinstance(self.axy, Const)
                               or self.axy.value != 0)
        fv, fx, fy, fxx, fyy, fxy = d
        out = (_ev(self.axx, x, y) * fxx + 2 * _ev(self.axy, x, y) * fxy
               + _ev(self.ayy, x, y) * fyy + _ev(self.bx, x, y) * fx
               + _ev(self.by, x, y) * fy + _ev(self.c, x, y) * fv)
        return out


# five-point, fourth-order stencils
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFF = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


def fd_derivatives(f, x, y, h, mixed=True):
    """Fourth-order central differences of ``f`` at ``(x, y)`` with step ``h``.

    Returns ``(f, f_x, f_y, f_xx, f_yy, f_xy)``; ``f_xy`` is zero unless
    ``mixed`` is true.
    """
    x, y, h = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float),
                                  np.asarray(h, float))
    fx_s = [np.asarray(f(x + o * h, y), float) for o in _OFF]
    fy_s = [np.asarray(f(x, y + o * h), float) for o in _OFF]
    f0 = fx_s[2]
    fx = sum(w * v for w, v in zip(_D1, fx_s)) / h
    fxx = sum(w * v for w, v in zip(_D2, fx_s)) / (h * h)
    fy = sum(w * v for w, v in zip(_D1, fy_s)) / h
    fyy = sum(w * v for w, v in zip(_D2, fy_s)) / (h * h)
    fxy = np.zeros_like(f0)
    if mixed:
        for i, wi in zip(_OFF, _D1):
            if wi == 0:
                continue
            for j, wj in zip(_OFF, _D1):
                if wj == 0:
                    continue
                fxy = fxy + wi * wj * np.asarray(f(x + i * h, y + j * h), float)
        fxy = fxy / (h * h)
    return f0, fx, fy, fxx, fyy, fxy


def apply_pointwise(coeffs: Coefficients, f, x, y, derivs=None, rel_step=1e-3):
    """Evaluate ``L(f)`` at points with ``y > 0`` (the source ``g`` is not subtracted).

    Parameters
    ----------
    coeffs : Coefficients
    f : callable
        Vectorized ``f(x, y)``.
    x, y : float or array
    derivs : callable, optional
        ``(x, y) -> (f, f_x, f_y, f_xx, f_yy, f_xy)`` with analytic derivatives.
    rel_step : float
        Finite-difference step relative to ``y``.  The default ``1e-3`` with
        the fourth-order stencil gives about ten significant digits for
        functions that vary on the scale ``y``.

    Raises
    ------
    ValueError
        If any ``y <= 0``.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if np.any(y <= 0):
        raise ValueError("apply_pointwise: the operator is evaluated only for y > 0")
    if derivs is None:
        d = fd_derivatives(f, x, y, rel_step * y, mixed=False)
    else:
        d = derivs(x, y)
    fv, fx, fy, fxx, fyy, _ = d
    b1, b2, c, _ = coeffs.evaluate(x, y)
    return y * y * (fxx + fyy) + y * (b1 * fx + b2 * fy) + c * fv


def pointwise_residual(coeffs: Coefficients, f, x, y, **kw):
    """``L(f) - g`` at points with ``y > 0``."""
    return apply_pointwise(coeffs, f, x, y, **kw) - coeffs.evaluate(x, y)[3]


@dataclass(frozen=True)
class HalfPlaneRect:
    """Uniform grid on ``[x_min, x_max] x [y_min, y_max]``.

    ``y_min = 0`` (the default) puts the bottom row on the degenerate edge;
    a positive ``y_min`` describes a rectangle strictly inside the half-plane,
    whose four edges are all non-degenerate.
    """

    x_min: float
    x_max: float
    y_max: float
    nx: int
    ny: int
    y_min: float = 0.0

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise GridError("grid counts nx, ny must be >= 3")
        if not self.x_max > self.x_min:
            raise GridError("need x_max > x_min")
        if not (self.y_max > self.y_min >= 0):
            raise GridError("need y_max > y_min >= 0")

    @property
    def includes_degenerate_edge(self) -> bool:
        return self.y_min == 0.0

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self):
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def hx(self):
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def hy(self):
        return (self.y_max - self.y_min) / (self.ny - 1)

    def mesh(self):
        """``(X, Y)`` arrays of shape ``(nx, ny)`` (index ``[i, j]``)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def boundary_masks(self):
        """Boolean masks ``(d0, d1)`` of the degenerate and ordinary boundary.

        ``d0`` is the bottom row without its two corners (empty if the
        rectangle does not touch ``y = 0``); ``d1`` is every other boundary
        node.  They are disjoint and together cover the boundary.
        """
        d0 = np.zeros((self.nx, self.ny), bool)
        d1 = np.zeros((self.nx, self.ny), bool)
        d1[0, :] = d1[-1, :] = True
        d1[:, -1] = True
        if self.includes_degenerate_edge:
            d0[1:-1, 0] = True
        else:
            d1[:, 0] = True
        return d0, d1

    def interior_mask(self):
        m = np.zeros((self.nx, self.ny), bool)
        m[1:-1, 1:-1] = True
        return m

    def scaled(self, s: float) -> "HalfPlaneRect":
        """The grid under ``(x, y) -> (s x, s y)``."""
        return HalfPlaneRect(s * self.x_min, s * self.x_max, s * self.y_max,
                             self.nx, self.ny, s * self.y_min)

    def refined(self, factor: int = 2) -> "HalfPlaneRect":
        """Grid with spacings divided by ``factor`` (old nodes are kept)."""
        return HalfPlaneRect(self.x_min, self.x_max, self.y_max,
                             factor * (self.nx - 1) + 1, factor * (self.ny - 1) + 1, self.y_min)

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max, "y_min": self.y_min,
                "y_max": self.y_max, "nx": self.nx, "ny": self.ny}


@dataclass
class GridFunction:
    """Values ``values[i, j] = f(x_i, y_j)`` on a :class:`HalfPlaneRect`.

    ``limit_row`` marks that the ``y = 0`` row holds boundary limits rather
    than point values of a formula.
    """

    domain: HalfPlaneRect
    values: np.ndarray
    limit_row: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.domain.nx, self.domain.ny):
            raise GridError(f"values shape {self.values.shape} does not match grid "
                            f"({self.domain.nx}, {self.domain.ny})")
        if not np.isfinite(self.values[1:-1, 1:-1]).all():
            raise GridError("non-finite value at an interior node")

    @classmethod
    def from_callable(cls, f, domain: HalfPlaneRect, trace=None, **meta):
        """Sample ``f`` on the grid.

        ``trace(x)`` supplies the ``y = 0`` row when ``f`` is singular or
        undefined there; the row is then flagged as limit-derived.
        """
        X, Y = domain.mesh()
        vals = np.empty(X.shape)
        if domain.includes_degenerate_edge and trace is not None:
            vals[:, 1:] = f(X[:, 1:], Y[:, 1:])
            vals[:, 0] = trace(X[:, 0])
            return cls(domain, vals, limit_row=True, meta=dict(meta))
        vals[:] = f(X, Y)
        return cls(domain, vals, meta=dict(meta))

    def max_abs(self) -> float:
        return float(np.nanmax(np.abs(self.values)))

    def copy(self):
        return GridFunction(self.domain, self.values.copy(), self.limit_row, dict(self.meta))

    def combine(self, alpha, other: "GridFunction", beta) -> "GridFunction":
        if other.domain != self.domain:
            raise GridError("grids differ")
        return GridFunction(self.domain, alpha * self.values + beta * other.values,
                            self.limit_row or other.limit_row)

    def at(self, x, y):
        """Bilinear interpolation (exact at nodes)."""
        d = self.domain
        fi = np.clip((np.asarray(x, float) - d.x_min) / d.hx, 0, d.nx - 1)
        fj = np.clip((np.asarray(y, float) - d.y_min) / d.hy, 0, d.ny - 1)
        i0 = np.minimum(np.floor(fi + 1e-12).astype(int), d.nx - 2)
        j0 = np.minimum(np.floor(fj + 1e-12).astype(int), d.ny - 2)
        tx = np.clip(fi - i0, 0, 1)
        ty = np.clip(fj - j0, 0, 1)
        v = self.values
        out = ((1 - tx) * (1 - ty) * v[i0, j0] + tx * (1 - ty) * v[i0 + 1, j0]
               + (1 - tx) * ty * v[i0, j0 + 1] + tx * ty * v[i0 + 1, j0 + 1])
        return out

    def node_index(self, x, y):
        """Indices of the node nearest to ``(x, y)``."""
        d = self.domain
        i = int(round((x - d.x_min) / d.hx))
        j = int(round((y - d.y_min) / d.hy))
        return min(max(i, 0), d.nx - 1), min(max(j, 0), d.ny - 1)

    def to_csv(self, path):
        """Write ``x,y,value`` rows, x-index outer, 17 significant digits."""
        X, Y = self.domain.mesh()
        write_csv(path, ["x", "y", "value"],
                  np.column_stack([X.ravel(), Y.ravel(), self.values.ravel()]))

    @classmethod
    def from_csv(cls, path) -> "GridFunction":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        xs = np.unique(data[:, 0])
        ys = np.unique(data[:, 1])
        dom = HalfPlaneRect(float(xs[0]), float(xs[-1]), float(ys[-1]), len(xs), len(ys),
                            float(ys[0]))
        vals = data[:, 2].reshape(len(xs), len(ys))
        return cls(dom, vals)


def write_csv(path, header, rows):
    """CSV with ``%.17g`` numbers; ``rows`` is a 2-D array or list of rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else format(float(v), ".17g") for v in row])


def residual_grid(coeffs: Coefficients, f: GridFunction) -> GridFunction:
    """``L(f) - g`` at interior nodes by second-order central differences.

    Boundary nodes are set to NaN.  ``meta['max_abs']`` holds the max-norm.
    """
    d = f.domain
    if d.nx < 3 or d.ny < 3:
        raise GridError("residual_grid needs at least 3 nodes per direction")
    X, Y = d.mesh()
    v = f.values
    hx, hy = d.hx, d.hy
    xi, yi = X[1:-1, 1:-1], Y[1:-1, 1:-1]
    fxx = (v[2:, 1:-1] - 2 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / hx ** 2
    fyy = (v[1:-1, 2:] - 2 * v[1:-1, 1:-1] + v[1:-1, :-2]) / hy ** 2
    fx = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * hx)
    fy = (v[1:-1, 2:] - v[1:-1, :-2]) / (2 * hy)
    b1, b2, c, g = coeffs.evaluate(xi, yi)
    res = np.full(v.shape, np.nan)
    res[1:-1, 1:-1] = yi ** 2 * (fxx + fyy) + yi * (b1 * fx + b2 * fy) + c * v[1:-1, 1:-1] - g
    out = GridFunction(d, res, meta={})
    out.meta["max_abs"] = float(np.nanmax(np.abs(res[1:-1, 1:-1])))
    return out
