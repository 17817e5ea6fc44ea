"""
Closed-form solutions, sub/supersolutions and counterexamples.

Each :class:`ClosedForm` is bound to its operator, a sampling box with a
``y`` floor (and an optional exclusion predicate for singular rays), its
expected classification and the list of theorem tags it is known to violate.
:func:`check_entry` recomputes the classification and confirms every listed
violation numerically through :mod:`eulerlab.verify`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from .operator import (Coefficients, GridFunction, HalfPlaneRect, SecondOrderOperator,
                       apply_pointwise, fd_derivatives)
from .specfun import TaylorTable, bessel, bessel_first_zero, hyp2f1, misc_integrals

__all__ = [
    "ClosedForm",
    "CatalogError",
    "catalog_entries",
    "get_entry",
    "entry_names",
    "check_entry",
    "holder_fit",
    "step_entry",
    "impulse_entry",
    "ode_reduction_entry",
    "superfunction",
    "superfunction_derivs",
    "gradient_measure",
    "RESIDUAL_TOL",
    "SIGN_TOL",
]

RESIDUAL_TOL = 1e-7
SIGN_TOL = 1e-8


class CatalogError(KeyError):
    """Unknown catalog entry."""


@dataclass(frozen=True)
class ClosedForm:
    """A named closed-form function with its operator and classification.

    Parameters
    ----------
    name : str
    eval : callable
        Vectorized ``f(x, y)`` for ``y > 0``.
    coeffs : Coefficients
        Euler-form operator (ignored for the residual when ``general`` is set).
    region : callable
        ``(x, y) -> bool`` on which the classification is claimed.
    kind : {"solution", "subsolution", "supersolution"}
    box : tuple
        ``(x_min, x_max, y_floor, y_max)`` sampling box.
    boundary_regularity : float, optional
        Claimed Hölder exponent at ``y = 0``.
    violates : tuple of str
        Theorem tags the entry is a counterexample to.
    trace : callable, optional
        ``x -> f(x, 0+)``.
    derivs : callable, optional
        Analytic ``(f, f_x, f_y, f_xx, f_yy, f_xy)``.
    general : SecondOrderOperator, optional
        Operator that is not of Euler form (used instead of ``coeffs``).
    length_scale : callable, optional
        ``(x, y) -> local length`` for finite-difference steps; defaults to ``y``.
    meta : dict
        Parameters and the inputs for the violation checks.
    """

    name: str
    eval: Callable
    coeffs: Coefficients
    region: Callable
    kind: str
    box: tuple
    boundary_regularity: Optional[float] = None
    violates: tuple = ()
    trace: Optional[Callable] = None
    derivs: Optional[Callable] = None
    general: Optional[SecondOrderOperator] = None
    length_scale: Optional[Callable] = None
    description: str = ""
    meta: dict = field(default_factory=dict)

    def __call__(self, x, y):
        return self.eval(x, y)

    def residual(self, x, y):
        """``L(f) - g`` at points with ``y > 0``."""
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        if self.general is not None:
            h = 1e-3 * (y if self.length_scale is None else self.length_scale(x, y))
            return (self.general.apply(self.eval, x, y, step=h, derivs=self.derivs)
                    - self.general.g(x, y))
        if self.derivs is not None:
            d = self.derivs(x, y)
        else:
            h = 1e-3 * (y if self.length_scale is None else self.length_scale(x, y))
            d = fd_derivatives(self.eval, x, y, h, mixed=False)
        return (apply_pointwise(self.coeffs, None, x, y, derivs=lambda *_: d)
                - self.coeffs.evaluate(x, y)[3])

    def sample_points(self, n=60):
        x0, x1, y0, y1 = self.box
        X, Y = np.meshgrid(np.linspace(x0, x1, n), np.linspace(y0, y1, n), indexing="ij")
        m = np.asarray(self.region(X, Y), bool)
        return X[m], Y[m]

    def grid_function(self, domain: HalfPlaneRect) -> GridFunction:
        """Sample on a grid; the ``y = 0`` row comes from ``trace`` when present."""
        return GridFunction.from_callable(self.eval, domain, trace=self.trace, entry=self.name)


def _box_region(x0, x1, y0, y1, exclude=None):
    def region(x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        m = (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)
        if exclude is not None:
            m &= ~exclude(x, y)
        return m
    return region


def _homog_derivs(F, dF, d2F):
    """Derivatives of ``f = F(x/y)`` from those of ``F``."""
    def derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        z = x / y
        f0, f1, f2 = F(z), dF(z), d2F(z)
        return (f0, f1 / y, -z * f1 / y, f2 / y ** 2, (z * z * f2 + 2 * z * f1) / y ** 2,
                -(z * f2 + f1) / y ** 2)
    return derivs


# ---------------------------------------------------------------------------
# entries

def step_entry(b2: float = 0.5) -> ClosedForm:
    """Step-like ``F(x/y)`` with ``b1 = c = 0``, ``0 < b2 < 1``, from 0 to 1 across ``x = 0``.

    ``F(z) = C1 z 2F1(1/2, beta; 3/2; -z^2) + C2`` with ``beta = (2 - b2)/2``;
    since ``z 2F1(...) = int_0^z (1 + t^2)^-beta dt`` the limits are
    ``+-F_inf`` with ``F_inf = (sqrt(pi)/2) Gamma(beta - 1/2)/Gamma(beta)``,
    so ``C1 = 1/(2 F_inf)`` and ``C2 = 1/2``.
    """
    if not (0 < b2 < 1):
        raise ValueError("step_entry needs 0 < b2 < 1")
    beta = (2.0 - b2) / 2.0
    f_inf = 0.5 * np.sqrt(np.pi) * special.gamma(beta - 0.5) / special.gamma(beta)
    C1, C2 = 1.0 / (2.0 * f_inf), 0.5

    def F(z):
        z = np.asarray(z, float)
        return C1 * z * hyp2f1(0.5, beta, 1.5, -z * z).value + C2

    dF = lambda z: C1 * (1 + z * z) ** (-beta)
    d2F = lambda z: -2 * beta * C1 * z * (1 + z * z) ** (-beta - 1)

    def ev(x, y):
        return F(np.asarray(x, float) / np.asarray(y, float))

    def trace(x):
        return 0.5 + 0.5 * np.sign(np.asarray(x, float))

    return ClosedForm(
        "step", ev, Coefficients.constant(b2=b2, name=f"y^2 Lap + {b2:g} y d_y"),
        _box_region(-1, 1, 0.01, 1), "solution", (-1.0, 1.0, 0.01, 1.0),
        boundary_regularity=1.0 - b2, violates=("continuity",), trace=trace,
        derivs=_homog_derivs(F, dF, d2F),
        description="bounded step at y=0; discontinuous boundary values when b2<1",
        meta={"b2": b2, "C1": C1, "C2": C2, "F_inf": f_inf, "holder_x0": 0.5,
              "continuity_px": 0.0})


def impulse_entry(b1: float = 0.3, b2: float = 0.5) -> ClosedForm:
    """Impulse kernel ``K = (1/y)(1 + z^2)^((b2-2)/2) exp(-b1 atan z)``, ``z = x/y``."""
    p = (b2 - 2.0) / 2.0

    def ev(x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        z = x / y
        return (1 + z * z) ** p * np.exp(-b1 * np.arctan(z)) / y

    return ClosedForm(
        "impulse", ev, Coefficients.constant(b1=b1, b2=b2, name="impulse operator"),
        _box_region(-1, 1, 0.05, 1), "solution", (-1.0, 1.0, 0.05, 1.0),
        description="point singularity at the origin; normalizable iff b2<1",
        meta={"b1": b1, "b2": b2})


def ode_reduction_entry(b1: float = 0.3, b2: float = 0.5, c: float = -0.2,
                        z_max: float = 110.0) -> ClosedForm:
    """``F(x/y)`` solving ``(1 + z^2) F'' + (b1 + (2 - b2) z) F' + c F = 0``, ``F(0) = 1``, ``F'(0) = 0``.

    ``F`` is tabulated by Taylor continuation (singular points at ``z = +-i``).
    """
    k = 2.0 - b2

    def poly(t):
        return ((1 + t * t, 2 * t, 1.0), (b1 + k * t, k, 0.0), (c, 0.0, 0.0))

    table = TaylorTable(poly, lambda t: np.sqrt(1 + t * t), 0.0, 1.0, 0.0, -z_max, z_max,
                        frac=0.25, max_step=2.0)
    F = lambda z: table(z)
    derivs = _homog_derivs(F, lambda z: table(z, 1), lambda z: table(z, 2))

    def ev(x, y):
        return table(np.asarray(x, float) / np.asarray(y, float))

    return ClosedForm(
        "ode_reduction", ev, Coefficients.constant(b1=b1, b2=b2, c=c, name="constant coeffs"),
        _box_region(-1, 1, 0.01, 1), "solution", (-1.0, 1.0, 0.01, 1.0), derivs=derivs,
        description="homogeneous solution F(x/y) from the reduced ODE",
        meta={"b1": b1, "b2": b2, "c": c, "table": table})


def _bessel_k_entry(lam: float = 0.5, C: float = 0.0) -> ClosedForm:
    nu = lam / 2.0
    k0 = 2 ** (nu - 1) * special.gamma(nu)   # limit of y^nu K_nu(y) at 0

    def ev(x, y):
        y = np.asarray(y, float)
        return y ** nu * bessel("K", nu, y).value * np.cos(x) + C

    def trace(x):
        return k0 * np.cos(x) + C

    return ClosedForm(
        "bessel_k_maxfail", ev, Coefficients.constant(b2=1 - lam, name=f"b2={1 - lam:g}"),
        _box_region(-np.pi / 2, np.pi / 2, 0.01, 1), "solution",
        (-np.pi / 2, np.pi / 2, 0.01, 1.0), boundary_regularity=lam,
        violates=("max_principle",), trace=trace,
        description="maximum attained at the degenerate boundary point (0,0)",
        meta={"lambda": lam, "nu": nu, "C": C, "holder_x0": 0.0, "max_kind": "sub"})


def _strip_j_entry(lam: float = 1.0) -> ClosedForm:
    nu = lam / 2.0
    j1 = bessel_first_zero(nu)
    t0 = 0.5 ** nu / special.gamma(nu + 1)

    def ev(x, y):
        y = np.asarray(y, float)
        return y ** (-nu) * bessel("J", nu, y).value * np.exp(x)

    return ClosedForm(
        "strip_bessel_j", ev, Coefficients.constant(b2=1 + lam, name=f"b2={1 + lam:g}"),
        _box_region(-2, 2, 0.01, j1), "solution", (-2.0, 2.0, 0.01, j1),
        violates=("poly_x",), trace=lambda x: t0 * np.exp(x),
        description="non-negative on the strip below the first Bessel zero, exponential in x",
        meta={"lambda": lam, "nu": nu, "j1": j1, "poly_x_half_width": 20.0})


def _other_halfplane_entry(lam: float = 2.0) -> ClosedForm:
    def ev(x, y):
        return 1.0 - np.asarray(y, float) ** (-lam) + 0 * np.asarray(x)

    def derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return (ev(x, y), 0 * x, lam * y ** (-lam - 1), 0 * x,
                -lam * (lam + 1) * y ** (-lam - 2), 0 * x)

    return ClosedForm(
        "other_halfplane", ev, Coefficients.constant(b2=1 + lam, name=f"b2={1 + lam:g}"),
        _box_region(-1, 1, 1, 10), "solution", (-1.0, 1.0, 1.0, 10.0),
        violates=("almost_monotonicity",), derivs=derivs,
        description="positive solution on y>=1 that increases to its supremum",
        meta={"lambda": lam, "mono_y_range": (1.1, 50.0)})


def _heston_entries():
    def exp_ev(x, y):
        return np.exp(np.asarray(y, float)) + 0 * np.asarray(x)

    def lin_derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        z = 0 * x
        return 1.0 + y, z, z + 1.0, z, z, z

    def exp_derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        e = np.exp(y)
        z = 0 * x
        return e, z, e, z, e, z

    e1 = ClosedForm(
        "heston_1py", lambda x, y: 1.0 + np.asarray(y, float) + 0 * np.asarray(x),
        Coefficients(b2=lambda x, y: 1.0 + np.asarray(y, float) + 0 * x,
                     c=lambda x, y: -np.asarray(y, float) + 0 * x, name="heston B2=+1"),
        _box_region(-1, 1, 0.01, 2), "solution", (-1.0, 1.0, 0.01, 2.0),
        violates=("almost_monotonicity",), trace=lambda x: np.ones_like(np.asarray(x, float)),
        derivs=lin_derivs, description="entire positive solution with unbounded coefficients",
        meta={"mono_y_range": (0.1, 50.0)})
    e2 = ClosedForm(
        "heston_exp", exp_ev,
        Coefficients(b2=lambda x, y: 1.0 - np.asarray(y, float) + 0 * x,
                     c=lambda x, y: -np.asarray(y, float) + 0 * x, name="heston B2=-1"),
        _box_region(-1, 1, 0.01, 2), "solution", (-1.0, 1.0, 0.01, 2.0),
        violates=("almost_monotonicity", "gradient_bound"),
        trace=lambda x: np.ones_like(np.asarray(x, float)), derivs=exp_derivs,
        description="entire positive solution; y|grad log f| = y is unbounded",
        meta={"mono_y_range": (0.1, 20.0),
              "gradient_path": {"near": [(0.0, 100.0)], "far": [(0.0, 1.0)]}})
    return [e1, e2]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)
_GL_T = 0.25 * np.pi * (_GL_X + 1)
_GL_W = 0.25 * np.pi * _GL_W
_S2 = np.sin(_GL_T) ** 2


def _elliptic_entry() -> ClosedForm:
    def ev(x, y):
        y = np.asarray(y, float)
        return misc_integrals("elliptic_E", -y * y).value + 0 * np.asarray(x)

    def derivs(x, y):
        # E(-y^2) = int_0^(pi/2) sqrt(1 + y^2 sin^2 t) dt, differentiated under the integral
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        q = 1 + y[..., None] ** 2 * _S2
        f = np.sum(_GL_W * np.sqrt(q), axis=-1)
        fy = np.sum(_GL_W * y[..., None] * _S2 / np.sqrt(q), axis=-1)
        fyy = np.sum(_GL_W * _S2 / q ** 1.5, axis=-1)
        z = 0 * x
        return f, z, fy, z, fyy, z

    return ClosedForm(
        "elliptic_E", ev,
        Coefficients(b2=1.0, c=lambda x, y: -np.asarray(y, float) ** 2 / (1 + np.asarray(y, float) ** 2)
                     + 0 * x, name="c = -y^2/(1+y^2)"),
        _box_region(-1, 1, 0.01, 3), "solution", (-1.0, 1.0, 0.01, 3.0),
        violates=("almost_monotonicity",), derivs=derivs,
        trace=lambda x: np.full_like(np.asarray(x, float), np.pi / 2),
        description="bounded negative c; solution grows linearly in y",
        meta={"mono_y_range": (0.1, 50.0)})


def _piecewise_entry() -> ClosedForm:
    def F(y):
        y = np.asarray(y, float)
        yy = np.maximum(y, 1.0)
        return np.where(y <= 1, 1.0, yy ** -0.5 * (1 + 0.5 * np.log(yy)))

    def derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        yy = np.maximum(y, 1.0)
        L = np.log(yy)
        up = y > 1
        f = F(y)
        fy = np.where(up, -0.25 * yy ** -1.5 * L, 0.0)
        fyy = np.where(up, yy ** -2.5 * (0.375 * L - 0.25), 0.0)
        z = 0 * x
        return f, z, fy, z, fyy, z

    c = lambda x, y: np.where(np.asarray(y) > 1, 0.25, 0.0) + 0 * np.asarray(x)
    return ClosedForm(
        "piecewise_c11", lambda x, y: F(y) + 0 * np.asarray(x),
        Coefficients(b2=2.0, c=c, name="b2=2, c piecewise"),
        _box_region(-1, 1, 0.01, 5, exclude=lambda x, y: np.abs(np.asarray(y) - 1) < 1e-3),
        "solution", (-1.0, 1.0, 0.01, 5.0), derivs=derivs,
        trace=lambda x: np.ones_like(np.asarray(x, float)),
        description="bounded, positive, non-constant C^{1,1} weak solution with c>=0",
        meta={"break": 1.0})


def _superfunction_parts(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    u = 1 - x * x - y * y
    s = np.sqrt(u * u + 4 * x * x)
    # u + s without cancellation when u < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = np.where(u >= 0, u + s, 4 * x * x / (s - u))
    return u, s, inner


def superfunction(x, y):
    """``y^-2 (sqrt2 - sqrt(u + sqrt(u^2 + 4 x^2)))`` with ``u = 1 - x^2 - y^2``.

    Evaluated in the equivalent cancellation-free form
    ``4 / ((1 + x^2 + y^2 + s)(sqrt2 + sqrt(u + s)))``, ``s = sqrt(u^2 + 4x^2)``,
    which also gives the trace ``1/(sqrt2 (1 + x^2))`` at ``y = 0``.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    u, s, inner = _superfunction_parts(x, y)
    return 4.0 / ((1 + x * x + y * y + s) * (np.sqrt(2.0) + np.sqrt(inner)))


def superfunction_derivs(x, y):
    """Analytic ``(f, f_x, f_y, f_xx, f_yy, f_xy)`` of :func:`superfunction`.

    Uses ``sqrt(u + sqrt(u^2 + 4x^2)) = sqrt2 Re G`` with
    ``G = sqrt((1 + i x)^2 - y^2)`` (principal branch, cut on the singular
    ray), so ``f = sqrt2 (1 - Re G)/y^2`` and all derivatives of ``G`` follow
    from ``G_i = Z_i/(2G)``, ``G_ij = Z_ij/(2G) - Z_i Z_j/(4 G^3)``.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    p = 1 + 1j * x
    Z = p * p - y * y
    G = np.sqrt(Z)
    Zx, Zy = 2j * p, -2 * y
    Gx, Gy = Zx / (2 * G), Zy / (2 * G)
    Gxx = -2 / (2 * G) - Zx * Zx / (4 * G ** 3)
    Gyy = -2 / (2 * G) - Zy * Zy / (4 * G ** 3)
    Gxy = -Zx * Zy / (4 * G ** 3)
    R, Rx, Ry, Rxx, Ryy, Rxy = (np.real(v) for v in (G, Gx, Gy, Gxx, Gyy, Gxy))
    r2 = np.sqrt(2.0)
    one_m = 1 - R
    f = superfunction(x, y)
    fx = -r2 * Rx / y ** 2
    fy = r2 * (-Ry / y ** 2 - 2 * one_m / y ** 3)
    fxx = -r2 * Rxx / y ** 2
    fyy = r2 * (-Ryy / y ** 2 + 4 * Ry / y ** 3 + 6 * one_m / y ** 4)
    fxy = r2 * (-Rxy / y ** 2 + 2 * Rx / y ** 3)
    return f, fx, fy, fxx, fyy, fxy


def _dist_to_ray(x, y):
    """Distance to the singular set ``{x = 0, y >= 1}``."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    return np.where(y >= 1, np.abs(x), np.hypot(x, y - 1))


def _superfunction_entry() -> ClosedForm:
    length = lambda x, y: np.minimum(np.asarray(y, float), _dist_to_ray(x, y))
    return ClosedForm(
        "superfunction", superfunction, Coefficients.constant(b2=3.0, name="y^2 Lap + 3 y d_y"),
        _box_region(-2, 2, 0.01, 3, exclude=lambda x, y: _dist_to_ray(x, y) < 1e-3),
        "supersolution", (-2.0, 2.0, 0.01, 3.0), violates=("gradient_bound",),
        trace=lambda x: 1.0 / (np.sqrt(2.0) * (1 + np.asarray(x, float) ** 2)),
        derivs=superfunction_derivs, length_scale=length,
        description="bounded superfunction, solution off the ray x=0, y>=1; C^{0,1/2} at (0,1)",
        meta={"gradient_path": {"near": [(1e-3, 1.0), (0.0, 1 - 1e-3)],
                                "far": [(1e-1, 1.0), (0.0, 1 - 1e-1)]}})


def _bessel_sqrt_entries():
    def i0_ev(x, y):
        return bessel("I", 0.0, np.sqrt(np.asarray(y, float))).value + 0 * np.asarray(x)

    def em_ev(x, y):
        return np.exp(-np.sqrt(np.asarray(y, float))) + 0 * np.asarray(x)

    e1 = ClosedForm(
        "i0_sqrt_y", i0_ev,
        Coefficients(b2=1.0, c=lambda x, y: -0.25 * np.asarray(y, float) + 0 * x,
                     name="y^2 Lap + y d_y - y/4"),
        _box_region(-1, 1, 0.01, 4), "solution", (-1.0, 1.0, 0.01, 4.0),
        trace=lambda x: np.ones_like(np.asarray(x, float)),
        description="entire, smooth, non-negative, non-constant (c = -y/4 unbounded)")
    e2 = ClosedForm(
        "exp_neg_sqrt_y", em_ev,
        Coefficients(b2=0.5, c=lambda x, y: -0.25 * np.asarray(y, float) + 0 * x,
                     name="y^2 Lap + y/2 d_y - y/4"),
        _box_region(-1, 1, 0.01, 4), "solution", (-1.0, 1.0, 0.01, 4.0),
        boundary_regularity=0.5, trace=lambda x: np.ones_like(np.asarray(x, float)),
        description="C^{0,1/2} counterpart of the I0 example", meta={"holder_x0": 0.0})
    return [e1, e2]


def _keldysh_k2_entry() -> ClosedForm:
    k = np.sqrt(2.0) / 3.0

    def ev(x, y):
        return np.asarray(y, float) ** (1 / 3) * np.cosh(k * np.asarray(x, float))

    def derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        p, ch, sh = y ** (1 / 3), np.cosh(k * x), np.sinh(k * x)
        return (p * ch, k * p * sh, p * ch / (3 * y), k * k * p * ch,
                -2 * p * ch / (9 * y * y), k * p * sh / (3 * y))

    op = SecondOrderOperator(axx=1.0, ayy=lambda x, y: np.asarray(y, float) ** 2 + 0 * x,
                             name="d_xx + y^2 d_yy")
    return ClosedForm(
        "keldysh_k2", ev, Coefficients(name="(general operator)"),
        _box_region(-1, 1, 0.01, 1), "solution", (-1.0, 1.0, 0.01, 1.0), general=op,
        derivs=derivs,
        trace=lambda x: np.zeros_like(np.asarray(x, float)), boundary_regularity=1 / 3,
        description="k=2 Keldysh operator: non-constant positive solution",
        meta={"holder_x0": 0.0})


def _power_quarter_entry() -> ClosedForm:
    def ev(x, y):
        return np.asarray(y, float) ** 0.25 + 0 * np.asarray(x)

    def derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        z = 0 * x
        return y ** 0.25, z, 0.25 * y ** -0.75, z, -0.1875 * y ** -1.75, z

    return ClosedForm(
        "power_quarter", ev, Coefficients.constant(b2=0.75, name="y^2 Lap + 3/4 y d_y"),
        _box_region(-1, 1, 0.01, 1), "solution", (-1.0, 1.0, 0.01, 1.0),
        boundary_regularity=0.25, derivs=derivs,
        trace=lambda x: np.zeros_like(np.asarray(x, float)),
        description="unbounded non-negative solution, only C^{0,1/4} at y=0",
        meta={"holder_x0": 0.0})


def catalog_entries() -> list:
    """All catalog entries, in a fixed order."""
    return [step_entry(), impulse_entry(), ode_reduction_entry(), _bessel_k_entry(),
            _strip_j_entry(), _other_halfplane_entry(), *_heston_entries(), _elliptic_entry(),
            _piecewise_entry(), _superfunction_entry(), *_bessel_sqrt_entries(),
            _keldysh_k2_entry(), _power_quarter_entry()]


def entry_names() -> list:
    return [e.name for e in catalog_entries()]


def get_entry(name: str, **params) -> ClosedForm:
    """Entry by name; ``step`` accepts ``b2``, ``impulse`` accepts ``b1, b2``."""
    if name == "step":
        return step_entry(**params)
    if name == "impulse":
        return impulse_entry(**params)
    if name == "ode_reduction":
        return ode_reduction_entry(**params)
    for e in catalog_entries():
        if e.name == name:
            return e
    raise CatalogError(f"unknown catalog entry {name!r}")


# ---------------------------------------------------------------------------
# measurements

def holder_fit(entry: ClosedForm, x0: float, y_range=(1e-4, 1e-2), n: int = 25) -> float:
    """Least-squares slope of ``log|f(x0, y) - f(x0, 0+)|`` against ``log y``."""
    if entry.trace is None:
        raise ValueError(f"{entry.name}: no boundary trace")
    y = np.logspace(np.log10(y_range[0]), np.log10(y_range[1]), n)
    d = np.abs(entry(np.full_like(y, x0), y) - entry.trace(np.asarray(x0, float)))
    return float(np.polyfit(np.log(y), np.log(d), 1)[0])


def gradient_measure(f, x, y, length=None):
    """``y |grad log f|`` at points by fourth-order differences.

    The step is ``1e-3`` times ``length(x, y)`` (default ``y``), so points
    close to a singular set can be probed with a correspondingly small step.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    h = 1e-3 * (y if length is None else length(x, y))
    f0, fx, fy, *_ = fd_derivatives(f, x, y, h, mixed=False)
    return y * np.hypot(fx, fy) / np.abs(f0)


def check_entry(name: str, grid: Optional[HalfPlaneRect] = None, confirm_violations=True) -> dict:
    """Residual classification plus confirmation of the listed violations.

    Parameters
    ----------
    name : str
    grid : HalfPlaneRect, optional
        Sampling grid for the residual (default: 60 x 60 over the entry box).

    Returns
    -------
    dict with ``max_residual`` (max |L f - g|), ``min_residual``,
    ``classified`` (bool), ``holder`` (fit or None), ``violations``
    (tag -> dict with ``confirmed``), and ``n_points``.
    """
    e = get_entry(name)
    if grid is None:
        x, y = e.sample_points(60)
    else:
        X, Y = grid.mesh()
        m = e.region(X, Y) & (Y > 0)
        x, y = X[m], Y[m]
    r = e.residual(x, y)
    out = {"name": e.name, "kind": e.kind, "n_points": int(r.size),
           "max_residual": float(np.max(np.abs(r))), "min_residual": float(np.min(r)),
           "max_signed": float(np.max(r))}
    if e.kind == "solution":
        out["classified"] = out["max_residual"] <= RESIDUAL_TOL
    elif e.kind == "subsolution":
        out["classified"] = out["min_residual"] >= -SIGN_TOL
    else:
        out["classified"] = out["max_signed"] <= SIGN_TOL
    out["holder"] = None
    if e.boundary_regularity is not None and "holder_x0" in e.meta:
        out["holder"] = holder_fit(e, e.meta["holder_x0"])
    out["violations"] = {}
    if confirm_violations:
        from . import verify
        for tag in e.violates:
            rep = verify.confirm_violation(e, tag)
            out["violations"][tag] = {"confirmed": not rep.passed, "margin": rep.margin,
                                      "measured": rep.measured_constants}
    return out
