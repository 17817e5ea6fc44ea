"""
Comparison functions (sub- and supersolutions) for Euler-type operators.

Every :class:`Barrier` stores the operator it is checked against, so that
``barrier.sign_check()`` is self-contained.  Barriers that certify an
inequality for a whole class of operators (bounds on ``b1``, ``b2``, ``c``)
additionally carry ``class_residual``, the pointwise worst case of ``L(psi)``
over that class.

The one-dimensional profiles are products ``exp(-k y) W(a; b; 2 k y)`` with
``W`` one of Kummer's functions ``M`` or ``U``.  Their derivatives come from
the contiguous relations ``M' = (a/b) M(a+1; b+1)`` and ``U' = -a U(a+1, b+1)``,
so no finite differences are involved in the sign checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .operator import Coefficients, apply_pointwise
from .specfun import TaylorTable, bessel, hyp1f1, hyperu

__all__ = [
    "Barrier",
    "BarrierError",
    "XDecayProfile",
    "harnack_lower",
    "harnack_g_y0",
    "harnack_barrier_items",
    "xdecay_profile",
    "xdecay_barrier",
    "liouville_upper",
    "liouville_g",
    "unspecifiability_super",
    "corollary_case_barrier",
    "corollary_subsolution",
    "BARRIER_NAMES",
    "make_barrier",
]

REALNESS_TOL = 1e-8


class BarrierError(ValueError):
    """Barrier parameters out of range, or a profile that does not behave as required."""


@dataclass(frozen=True)
class Barrier:
    """An evaluable comparison function.

    Parameters
    ----------
    name : str
    eval : callable
        Vectorized ``psi(x, y)``.
    region : callable
        ``(x, y) -> bool`` mask of the validity region.
    certifies : {"subsolution", "supersolution"}
    operator : Coefficients
        The operator the sign check uses.
    meta : dict
        Named parameters.
    box : tuple
        ``(x_min, x_max, y_min, y_max)`` bounding the region, for sampling.
    derivs : callable, optional
        ``(x, y) -> (f, f_x, f_y, f_xx, f_yy, f_xy)``.
    class_residual : callable, optional
        Worst case of ``L(psi)`` over the operator class of ``meta['class']``
        (minimum for a subsolution, maximum for a supersolution).
    """

    name: str
    eval: Callable
    region: Callable
    certifies: str
    operator: Coefficients
    meta: dict = field(default_factory=dict)
    box: tuple = (-1.0, 1.0, 0.0, 1.0)
    derivs: Optional[Callable] = None
    class_residual: Optional[Callable] = None

    def __call__(self, x, y):
        return self.eval(x, y)

    def residual(self, x, y):
        """``L(psi)`` for the stored operator (``y > 0``)."""
        return apply_pointwise(self.operator, self.eval, x, y, derivs=self.derivs)

    def sample(self, n=40, y_floor=None):
        """``n x n`` sample of the box with ``y > 0``, masked by the region."""
        x0, x1, y0, y1 = self.box
        lo = y0 if y0 > 0 else (y1 / n if y_floor is None else y_floor)
        X, Y = np.meshgrid(np.linspace(x0, x1, n), np.linspace(lo, y1, n), indexing="ij")
        m = np.asarray(self.region(X, Y), bool)
        return X[m], Y[m]

    def sign_check(self, n=40, tol=1e-8, use_class=False) -> dict:
        """Check the certified inequality on ``region`` where ``psi >= 0``.

        Returns ``{"passed", "worst", "n_points"}``; ``worst`` is the
        minimum of ``L(psi)`` for a subsolution and the maximum for a
        supersolution.
        """
        x, y = self.sample(n)
        keep = self.eval(x, y) >= 0
        x, y = x[keep], y[keep]
        if use_class:
            if self.class_residual is None:
                raise BarrierError(f"{self.name}: no operator class attached")
            r = self.class_residual(x, y)
        else:
            r = self.residual(x, y)
        if self.certifies == "subsolution":
            worst = float(np.min(r)) if r.size else 0.0
            ok = worst >= -tol
        else:
            worst = float(np.max(r)) if r.size else 0.0
            ok = worst <= tol
        return {"passed": bool(ok), "worst": worst, "n_points": int(r.size)}


# ---------------------------------------------------------------------------
# exp(-k y) W(a; b; 2 k y) and derivatives

def _expkummer(k, a, b, y, kind="M"):
    """``u, u', u''`` for ``u(y) = exp(-k y) W(a; b; 2 k y)`` (complex)."""
    y = np.asarray(y, float)
    z = 2.0 * k * y
    if kind == "M":
        w0 = hyp1f1(a, b, z).value
        w1 = (a / b) * hyp1f1(a + 1, b + 1, z).value
        w2 = (a * (a + 1) / (b * (b + 1))) * hyp1f1(a + 2, b + 2, z).value
    else:
        w0 = hyperu(a, b, z).value
        w1 = -a * hyperu(a + 1, b + 1, z).value
        w2 = a * (a + 1) * hyperu(a + 2, b + 2, z).value
    e = np.exp(-k * y)
    u = e * w0
    du = e * k * (2.0 * w1 - w0)
    d2u = e * k * k * (w0 - 4.0 * w1 + 4.0 * w2)
    return u, du, d2u


def _real(vals, what):
    for v in vals:
        im = np.max(np.abs(np.imag(v))) if np.size(v) else 0.0
        if im > REALNESS_TOL * max(1.0, float(np.max(np.abs(v)))):
            raise BarrierError(f"{what}: imaginary residue {im:.3g} exceeds {REALNESS_TOL}")
    return tuple(np.real(v) for v in vals)


# ---------------------------------------------------------------------------
# Harnack lower barrier

def _harnack_params(y0, Lambda):
    if y0 <= 0 or Lambda < 1:
        raise BarrierError("harnack_lower needs y0 > 0 and Lambda >= 1")
    return np.pi / (8.0 * y0 * Lambda), 0.5 * (1.0 + np.sqrt(3.0) * Lambda)


def harnack_g_y0(Lambda: float) -> float:
    """``exp(-pi/(8 Lambda)) M((1 + sqrt3 Lambda)/2; 1; pi/(4 Lambda))``.

    The value of the y-profile on the top edge, independent of ``y0``.
    It decreases in ``Lambda`` towards ``I0(2 sqrt(sqrt3 pi / 8)) = 1.80496``.
    """
    alpha = 0.5 * (1.0 + np.sqrt(3.0) * Lambda)
    return float(np.real(np.exp(-np.pi / (8 * Lambda))
                         * hyp1f1(alpha, 1.0, np.pi / (4 * Lambda)).value))


def harnack_lower(y0: float, Lambda: float) -> Barrier:
    """Lower barrier on ``R = [-4 y0 Lambda, 4 y0 Lambda] x [0, y0]``.

    ``psi = (10/9) H(y) cos(a x) - 1`` with ``a = pi/(8 y0 Lambda)`` and
    ``H(y) = exp(-a y) M((1 + sqrt3 Lambda)/2; 1; 2 a y)``.

    The stored operator is ``y^2 Lap + y d_y``.  ``class_residual`` is the
    minimum of ``L(psi)`` over ``|b1| <= Lambda``, ``1 <= b2 <= Lambda``,
    ``c >= 0`` at points where ``psi >= 0``.
    """
    a, alpha = _harnack_params(y0, Lambda)

    def H(y):
        return _real(_expkummer(a, alpha, 1.0, y), "harnack profile")

    def ev(x, y):
        return (10.0 / 9.0) * H(y)[0] * np.cos(a * np.asarray(x, float)) - 1.0

    def derivs(x, y):
        h, dh, d2h = H(y)
        cx, sx = np.cos(a * x), np.sin(a * x)
        k = 10.0 / 9.0
        return (k * h * cx - 1.0, -k * a * h * sx, k * dh * cx, -k * a * a * h * cx,
                k * d2h * cx, -k * a * dh * sx)

    def class_residual(x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        h, dh, d2h = H(y)
        X, dX, d2X = np.cos(a * x), -a * np.sin(a * x), -a * a * np.cos(a * x)
        b2_term = np.minimum(X * dh, Lambda * X * dh)
        return (10.0 / 9.0) * (y * y * (d2X * h + X * d2h) + y * b2_term
                               - Lambda * y * np.abs(dX) * h)

    half = 4.0 * y0 * Lambda
    region = lambda x, y: (np.abs(x) <= half) & (y >= 0) & (y <= y0)
    return Barrier("harnack_lower", ev, region, "subsolution",
                   Coefficients.constant(b2=1.0, name="y^2 Lap + y d_y"),
                   {"y0": y0, "Lambda": Lambda, "a": a, "alpha": alpha,
                    "class": "|b1| <= Lambda, 1 <= b2 <= Lambda, c >= 0"},
                   (-half, half, 0.0, y0), derivs, class_residual)


def harnack_barrier_items(y0: float, Lambda: float, n: int = 41) -> dict:
    """Numerical status of the five listed properties of :func:`harnack_lower`.

    Each entry is ``{"passed": bool, "margin": float}`` with ``margin >= 0``
    meaning the property holds on the sample:

    * ``i``: min of the class residual where ``psi >= 0``, over an
      ``n x n`` sample plus ``100 n`` points on the top edge (the residual is
      most negative there, next to the zero set of ``psi``); ``i_stored`` is
      the same for the stored operator.
    * ``ii``: ``min(2 cos(a x) - 1 - psi(x, y0))`` over ``n`` top-edge points.
    * ``iii``: ``-max psi`` on the side edges.
    * ``iv``: ``-max |psi(x, 0) - (10/9 cos(a x) - 1)|``.
    * ``v``: ``-|psi(0, 0) - 1/9|``.
    """
    b = harnack_lower(y0, Lambda)
    a = b.meta["a"]
    half = 4.0 * y0 * Lambda
    xs = np.linspace(-half, half, n)
    out = {}
    xt = np.linspace(-half, half, 100 * n)
    yt = np.full_like(xt, y0)
    keep = b(xt, yt) >= 0
    for key, use_class in (("i", True), ("i_stored", False)):
        chk = b.sign_check(n=n, use_class=use_class)
        r = b.class_residual(xt[keep], yt[keep]) if use_class else b.residual(xt[keep], yt[keep])
        worst = min(chk["worst"], float(r.min()))
        out[key] = {"passed": worst >= -1e-8, "margin": worst}
    m2 = float(np.min(2 * np.cos(a * xs) - 1 - b(xs, np.full_like(xs, y0))))
    out["ii"] = {"passed": m2 >= 0, "margin": m2}
    ys = np.linspace(0.0, y0, n)
    m3 = -float(max(np.max(b(np.full_like(ys, half), ys)), np.max(b(np.full_like(ys, -half), ys))))
    out["iii"] = {"passed": m3 >= -1e-12, "margin": m3}
    m4 = -float(np.max(np.abs(b(xs, np.zeros_like(xs)) - (10 / 9 * np.cos(a * xs) - 1))))
    out["iv"] = {"passed": m4 >= -1e-10, "margin": m4}
    m5 = -abs(float(b(0.0, 0.0)) - 1.0 / 9.0)
    out["v"] = {"passed": m5 >= -1e-10, "margin": m5}
    return out


# ---------------------------------------------------------------------------
# x-decay profile

class XDecayProfile:
    """Piecewise profile solving the two-branch barrier ODE.

    Branch 1 (``0 <= y <= y_bar``) solves ``y^2 g'' + y g' + (y^2 - Lambda y) g = 0``
    with ``g(0) = 1``; branch 2 solves the same equation with ``Lambda y g'``
    in place of ``y g'`` and is fitted to be ``C^1`` at the maximum ``y_bar``.
    ``y_zero`` is the first zero past ``y_bar``.

    Unpacks as ``g, y_bar, y_zero``.
    """

    def __init__(self, Lambda):
        if Lambda < 1:
            raise BarrierError("xdecay_profile needs Lambda >= 1")
        self.Lambda = float(Lambda)
        L = self.Lambda
        self._a1 = 0.5 * (1.0 - 1j * L)
        self._a2 = 0.5 * (L - 1j * L)
        self.y_bar = self._find_max()
        g_bar = self._b1(self.y_bar)[0]
        # closed-form branch 2: value and derivative match at y_bar (g' = 0 there)
        u1, v1 = self._branch2_basis(self.y_bar)
        A = np.array([[u1[0], v1[0]], [u1[1], v1[1]]])
        self.C1, self.C2 = np.linalg.solve(A, np.array([g_bar, 0.0]))
        # Evaluating U by quadrature at every sample point is slow, so branch 2
        # is evaluated from a Taylor table of its ODE started from the same
        # data; branch2_closed_form() is kept for cross-checks.
        self._table = TaylorTable(self._b2_poly, lambda t: t, self.y_bar, g_bar, 0.0,
                                  self.y_bar, self.y_bar + self.SPAN, frac=0.25, max_step=0.25)
        self.y_zero = self._find_zero()

    def _b1(self, y):
        return _real(_expkummer(1j, self._a1, 1.0, y), "x-decay branch 1")

    def _branch2_basis(self, y):
        m = _real(_expkummer(1j, self._a2, self.Lambda, y), "x-decay branch 2")
        u = tuple(np.real(v) for v in _expkummer(1j, self._a2, self.Lambda, y, kind="U"))
        return m, u

    SPAN = 12.0

    def _b2_poly(self, t):
        # y^2 g'' + Lambda y g' + (y^2 - Lambda y) g expanded about t
        L = self.Lambda
        return ((t * t, 2 * t, 1.0), (L * t, L, 0.0), (t * t - L * t, 2 * t - L, 1.0))

    def branch2_closed_form(self, y):
        """``C1 Re[e^(-iy) M] + C2 Re[e^(-iy) U]`` and its two derivatives."""
        m, u = self._branch2_basis(y)
        return tuple(self.C1 * mi + self.C2 * ui for mi, ui in zip(m, u))

    def _b2(self, y):
        y = np.asarray(y, float)
        if np.any(y > self.y_bar + self.SPAN):
            raise BarrierError("x-decay profile evaluated beyond its table")
        return self._table(y), self._table(y, 1), self._table(y, 2)

    def _find_max(self):
        step = 0.05
        t = step
        d_prev = self._b1(t)[1]
        while t < 24.0:
            d = self._b1(t + step)[1]
            if d_prev > 0 >= d:
                return optimize.brentq(lambda s: float(self._b1(s)[1]), t, t + step, xtol=1e-13)
            t += step
            d_prev = d
        raise BarrierError("x-decay profile: no maximum found within the evaluation envelope")

    def _find_zero(self):
        step = 0.05
        t = self.y_bar
        upper = min(1e3 * self.y_bar, self.y_bar + self.SPAN - step)
        v_prev = self._b2(t)[0]
        while t < upper:
            v = self._b2(t + step)[0]
            if v_prev > 0 >= v:
                return optimize.brentq(lambda s: float(self._b2(s)[0]), t, t + step, xtol=1e-13)
            t += step
            v_prev = v
        raise BarrierError("x-decay profile: no zero bracketed past the maximum")

    def __call__(self, y, deriv=0):
        """``g``, ``g'`` or ``g''`` at ``y >= 0``."""
        y = np.asarray(y, float)
        out = np.empty(y.shape)
        lo = y <= self.y_bar
        if lo.any():
            out[lo] = self._b1(y[lo])[deriv]
        if (~lo).any():
            out[~lo] = self._b2(y[~lo])[deriv]
        return out

    def __iter__(self):
        return iter((self, self.y_bar, self.y_zero))


def xdecay_profile(Lambda: float) -> XDecayProfile:
    return XDecayProfile(Lambda)


def xdecay_barrier(Lambda: float, y_d: float, C1: float = 1.0) -> Barrier:
    """``psi = C1 g(s y) exp(-s x)`` with ``s = y_zero / y_d``, on ``x >= 0``, ``0 <= y <= y_d``.

    The stored operator is ``y^2 Lap + y d_y``; ``class_residual`` is the
    minimum of ``L(psi)`` over ``|b1| <= Lambda``, ``1 <= b2 <= Lambda``,
    ``c >= 0`` where ``psi >= 0``.
    """
    if y_d <= 0 or C1 <= 0:
        raise BarrierError("xdecay_barrier needs y_d > 0 and C1 > 0")
    prof = XDecayProfile(Lambda)
    s = prof.y_zero / y_d

    def ev(x, y):
        return C1 * prof(s * np.asarray(y, float)) * np.exp(-s * np.asarray(x, float))

    def derivs(x, y):
        x = np.asarray(x, float)
        Y = s * np.asarray(y, float)
        e = C1 * np.exp(-s * x)
        g, dg, d2g = prof(Y), prof(Y, 1), prof(Y, 2)
        return (e * g, -s * e * g, s * e * dg, s * s * e * g, s * s * e * d2g, -s * s * e * dg)

    def class_residual(x, y):
        x = np.asarray(x, float)
        Y = s * np.asarray(y, float)
        e = C1 * np.exp(-s * x)
        g, dg, d2g = prof(Y), prof(Y, 1), prof(Y, 2)
        b2_term = np.where(dg >= 0, dg, Lambda * dg)
        return e * (Y * Y * (d2g + g) - Lambda * Y * np.abs(g) + Y * b2_term)

    region = lambda x, y: (np.asarray(x) >= 0) & (np.asarray(y) >= 0) & (np.asarray(y) <= y_d)
    return Barrier("xdecay", ev, region, "subsolution",
                   Coefficients.constant(b2=1.0, name="y^2 Lap + y d_y"),
                   {"Lambda": Lambda, "y_d": y_d, "C1": C1, "y_zero": prof.y_zero,
                    "y_bar": prof.y_bar, "scale": s,
                    "class": "|b1| <= Lambda, 1 <= b2 <= Lambda, c >= 0"},
                   (0.0, 5.0 * y_d, 0.0, y_d), derivs, class_residual)


# ---------------------------------------------------------------------------
# Liouville upper barrier

def liouville_g(Lambda: float, y):
    """``g, g', g''`` for ``g = exp(-i y/Lambda) M((1 + i Lambda)/2; 1; 2 i y/Lambda)``.

    ``g`` is real; an imaginary residue above ``1e-8`` raises :class:`BarrierError`.
    """
    return _real(_expkummer(1j / Lambda, 0.5 * (1 + 1j * Lambda), 1.0, y), "liouville profile")


def liouville_upper(Lambda: float, C1: float = 1.0, x_half: float = 4.0) -> Barrier:
    """``G = C1 cosh(x/Lambda) g(y)`` on the strip ``0 <= y <= 1``.

    The stored operator is ``y^2 Lap + y d_y``; ``class_residual`` is the
    maximum of ``L(G)`` over ``|b1| <= Lambda``, ``b2 >= 1``, ``c = 0``,
    valid where ``g > 0`` and ``g' < 0``.  ``x_half`` only sets the sampling box.
    """
    if Lambda < 2:
        raise BarrierError("liouville_upper needs Lambda >= 2")

    def ev(x, y):
        return C1 * np.cosh(np.asarray(x, float) / Lambda) * liouville_g(Lambda, y)[0]

    def derivs(x, y):
        x = np.asarray(x, float)
        g, dg, d2g = liouville_g(Lambda, y)
        ch, sh = np.cosh(x / Lambda), np.sinh(x / Lambda)
        return (C1 * ch * g, C1 * sh * g / Lambda, C1 * ch * dg, C1 * ch * g / Lambda ** 2,
                C1 * ch * d2g, C1 * sh * dg / Lambda)

    def class_residual(x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        g, dg, d2g = liouville_g(Lambda, y)
        ch, sh = np.cosh(x / Lambda), np.sinh(x / Lambda)
        b2_term = np.where(dg < 0, dg, Lambda * dg)
        return C1 * (y * y * (ch * g / Lambda ** 2 + ch * d2g) + y * np.abs(sh) * np.abs(g)
                     + y * ch * b2_term)

    region = lambda x, y: (np.asarray(y) >= 0) & (np.asarray(y) <= 1)
    return Barrier("liouville_upper", ev, region, "supersolution",
                   Coefficients.constant(b2=1.0, name="y^2 Lap + y d_y"),
                   {"Lambda": Lambda, "C1": C1, "class": "|b1| <= Lambda, b2 >= 1, c = 0"},
                   (-x_half, x_half, 0.0, 1.0), derivs, class_residual)


# ---------------------------------------------------------------------------
# unspecifiability supersolution

def unspecifiability_super(lam: float, epsilon: float = 1.0, diam: float = 1.0) -> Barrier:
    """``eps y^(-lam/2)``, or ``eps (log diam - log y)`` for ``lam = 0``.

    ``lam = inf b2 - 1``.  The stored operator is ``y^2 Lap + (1 + lam) y d_y``
    and ``L(psi) = -eps lam^2/4 y^(-lam/2) <= 0``; the same holds for every
    operator with ``b2 >= 1 + lam`` and ``c <= lam^2/4``, which is what
    ``class_residual`` evaluates.
    """
    if lam < 0:
        raise BarrierError("unspecifiability_super needs lam >= 0")
    if epsilon <= 0 or diam <= 0:
        raise BarrierError("epsilon and diam must be positive")

    if lam == 0:
        def ev(x, y):
            return epsilon * (np.log(diam) - np.log(np.asarray(y, float))) + 0 * np.asarray(x)

        def derivs(x, y):
            y = np.asarray(y, float) + 0 * np.asarray(x)
            return (ev(x, y), 0 * y, -epsilon / y, 0 * y, epsilon / y ** 2, 0 * y)
    else:
        def ev(x, y):
            return epsilon * np.asarray(y, float) ** (-lam / 2) + 0 * np.asarray(x)

        def derivs(x, y):
            y = np.asarray(y, float) + 0 * np.asarray(x)
            p = -lam / 2
            return (epsilon * y ** p, 0 * y, epsilon * p * y ** (p - 1), 0 * y,
                    epsilon * p * (p - 1) * y ** (p - 2), 0 * y)

    op = Coefficients.constant(b2=1.0 + lam, name=f"y^2 Lap + {1 + lam:g} y d_y")

    def class_residual(x, y):
        d = derivs(x, y)
        y = np.asarray(y, float)
        return y * y * d[4] + (1 + lam) * y * d[2] + 0.25 * lam * lam * d[0]

    region = lambda x, y: (np.asarray(y) > 0) & (np.asarray(y) <= diam)
    return Barrier("unspecifiability_super", ev, region, "supersolution", op,
                   {"lambda": lam, "epsilon": epsilon, "diam": diam,
                    "class": "b2 >= 1 + lambda, c <= lambda^2/4"},
                   (-diam, diam, 0.0, diam), derivs, class_residual)


# ---------------------------------------------------------------------------
# b2 < 1 pinching barriers

def _b2_lt1_op(lam):
    return Coefficients.constant(b2=1.0 - lam, name=f"y^2 Lap + {1 - lam:g} y d_y")


def corollary_case_barrier(lam: float) -> Barrier:
    """Supersolution for ``y^2 Lap + (1 - lam) y d_y`` with ``O(y^lam)`` behavior at the origin.

    * ``0 < lam < 1``: ``y^lam + x^2/2 - y/(1 - lam)`` on ``y <= 1``;
    * ``lam = 1``: the classical Hopf case; ``meta['hopf']`` is set and the
      barrier is ``y`` itself;
    * ``1 < lam < 2``: ``y^lam + x^2/2 - y^2/(2 (2 - lam))``;
    * ``lam >= 2``: ``-1 + (sqrt((x-1)^2 + y^2) + sqrt((x+1)^2 + y^2))/2``,
      an exact solution for ``lam = 2`` and a strict supersolution beyond.
    """
    if lam <= 0:
        raise BarrierError("corollary_case_barrier needs lam > 0")
    op = _b2_lt1_op(lam)
    meta = {"lambda": lam, "hopf": False}
    box = (-1.0, 1.0, 0.0, 1.0)
    if lam < 1:
        case = "(0,1)"

        def ev(x, y):
            x = np.asarray(x, float)
            y = np.asarray(y, float)
            return y ** lam + 0.5 * x * x - y / (1 - lam)

        def derivs(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            return (ev(x, y), x, lam * y ** (lam - 1) - 1 / (1 - lam), np.ones_like(x),
                    lam * (lam - 1) * y ** (lam - 2), 0 * x)
    elif lam == 1:
        case = "hopf"
        meta["hopf"] = True

        def ev(x, y):
            return np.asarray(y, float) + 0 * np.asarray(x)

        def derivs(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            return (y.copy(), 0 * x, np.ones_like(x), 0 * x, 0 * x, 0 * x)
    elif lam < 2:
        case = "(1,2)"

        def ev(x, y):
            x = np.asarray(x, float)
            y = np.asarray(y, float)
            return y ** lam + 0.5 * x * x - y * y / (2 * (2 - lam))

        def derivs(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            return (ev(x, y), x, lam * y ** (lam - 1) - y / (2 - lam), np.ones_like(x),
                    lam * (lam - 1) * y ** (lam - 2) - 1 / (2 - lam), 0 * x)
    else:
        case = "two-focus"
        box = (-2.0, 2.0, 0.0, 1.0)

        def ev(x, y):
            x = np.asarray(x, float)
            y = np.asarray(y, float)
            return -1 + 0.5 * (np.hypot(x - 1, y) + np.hypot(x + 1, y))

        def derivs(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            r1, r2 = np.hypot(x - 1, y), np.hypot(x + 1, y)
            fx = 0.5 * ((x - 1) / r1 + (x + 1) / r2)
            fy = 0.5 * (y / r1 + y / r2)
            fxx = 0.5 * (y * y / r1 ** 3 + y * y / r2 ** 3)
            fyy = 0.5 * ((x - 1) ** 2 / r1 ** 3 + (x + 1) ** 2 / r2 ** 3)
            fxy = -0.5 * ((x - 1) * y / r1 ** 3 + (x + 1) * y / r2 ** 3)
            return ev(x, y), fx, fy, fxx, fyy, fxy
    meta["case"] = case
    if lam < 1:
        region = lambda x, y: (np.asarray(y) >= 0) & (np.asarray(y) <= 1) & (np.abs(x) <= 1)
    else:
        region = lambda x, y: (np.asarray(y) >= 0) & (np.asarray(y) <= box[3]) & (np.abs(x) <= box[1])
    return Barrier(f"corollary_{case}", ev, region, "supersolution", op, meta, box, derivs)


def corollary_subsolution(lam: float) -> Barrier:
    """``y^(lam/2) I_(lam/2)(y) cos x``, an exact solution of ``y^2 Lap + (1 - lam) y d_y``.

    Certified as a subsolution on ``[-pi/2, pi/2] x [0, 1]``.
    """
    if lam <= 0:
        raise BarrierError("corollary_subsolution needs lam > 0")
    nu = lam / 2

    def prof(y):
        y = np.asarray(y, float)
        i0 = bessel("I", nu, y).value
        # (y^nu I_nu)' = y^nu I_(nu-1), and I_(nu-1) = I_(nu+1) + 2 nu I_nu / y
        ip = bessel("I", nu + 1, y).value
        im = ip + 2 * nu * i0 / y
        h = y ** nu * i0
        dh = y ** nu * im
        d2h = h - (1 - lam) * dh / y
        return h, dh, d2h

    def ev(x, y):
        y = np.asarray(y, float)
        x = np.asarray(x, float)
        out = np.zeros(np.broadcast(x, y).shape)
        yb = np.broadcast_to(y, out.shape)
        pos = yb > 0
        out[pos] = (yb[pos] ** nu * bessel("I", nu, yb[pos]).value
                    * np.cos(np.broadcast_to(x, out.shape)[pos]))
        return out

    def derivs(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        h, dh, d2h = prof(y)
        c, s = np.cos(x), np.sin(x)
        return h * c, -h * s, dh * c, -h * c, d2h * c, -dh * s

    region = lambda x, y: (np.abs(x) <= np.pi / 2) & (np.asarray(y) >= 0) & (np.asarray(y) <= 1)
    return Barrier("corollary_sub", ev, region, "subsolution", _b2_lt1_op(lam),
                   {"lambda": lam}, (-np.pi / 2, np.pi / 2, 0.0, 1.0), derivs)


# ---------------------------------------------------------------------------

BARRIER_NAMES = ("harnack_lower", "xdecay", "liouville_upper", "unspecifiability_super",
                 "corollary", "corollary_sub")


def make_barrier(name: str, y0=1.0, Lambda=2.0, lam=2.0, y_d=1.0, C1=1.0, epsilon=1.0,
                 diam=1.0) -> Barrier:
    """Construct a barrier by name with keyword parameters (used by the CLI)."""
    if name == "harnack_lower":
        return harnack_lower(y0, Lambda)
    if name == "xdecay":
        return xdecay_barrier(Lambda, y_d, C1)
    if name == "liouville_upper":
        return liouville_upper(Lambda, C1)
    if name == "unspecifiability_super":
        return unspecifiability_super(lam, epsilon, diam)
    if name == "corollary":
        return corollary_case_barrier(lam)
    if name == "corollary_sub":
        return corollary_subsolution(lam)
    raise KeyError(f"unknown barrier {name!r}; choose from {', '.join(BARRIER_NAMES)}")
