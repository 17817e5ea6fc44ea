"""
Impulse kernel for constant-coefficient operators with ``c = 0`` and ``b2 < 1``.

    K(x, y) = (1/y) (1 + z^2)^((b2 - 2)/2) exp(-b1 atan z),   z = x/y

solves ``y^2 Lap K + y (b1 K_x + b2 K_y) = 0``.  Its x-integral is finite
exactly when ``b2 < 1``; the normalized kernel then turns bounded boundary
data ``f0`` into a solution with ``f(x, 0) = f0(x)``.

With ``z = tan(theta)`` the mass becomes the finite-interval integral
``int cos(theta)^(-b2) exp(-b1 theta) dtheta`` over ``(-pi/2, pi/2)``, whose
endpoint singularity is handled exactly by an algebraic quadrature weight,
so no tail truncation is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .operator import Coefficients

__all__ = [
    "KernelError",
    "KernelDivergenceError",
    "KernelSpec",
    "FourierMode",
    "make_kernel",
    "kernel",
    "kernel_mass",
    "convolve_boundary",
    "boundary_recovery_rate",
    "BOUNDARY_PRESETS",
]

HALF_PI = 0.5 * np.pi


class KernelError(RuntimeError):
    """Quadrature did not reach the requested accuracy."""


class KernelDivergenceError(ValueError):
    """The kernel is not normalizable (``b2 >= 1``)."""


@dataclass(frozen=True)
class KernelSpec:
    """Impulse kernel parameters.

    ``normalizable`` is ``b2 < 1``; ``mass_at(y)`` integrates ``K(., y)``.
    """

    b1: float
    b2: float

    @property
    def normalizable(self) -> bool:
        return self.b2 < 1

    def mass_at(self, y: float) -> float:
        return kernel_mass(self, y)

    @property
    def coeffs(self) -> Coefficients:
        return Coefficients.constant(b1=self.b1, b2=self.b2, name=f"impulse b1={self.b1:g} b2={self.b2:g}")


def make_kernel(b1: float = 0.0, b2: float = 0.0) -> KernelSpec:
    return KernelSpec(float(b1), float(b2))


def kernel(spec: KernelSpec, x, y):
    """Unnormalized ``K(x, y)`` for ``y > 0``."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    z = x / y
    return (1 + z * z) ** ((spec.b2 - 2) / 2) * np.exp(-spec.b1 * np.arctan(z)) / y


def _check(spec):
    if not spec.normalizable:
        raise KernelDivergenceError(
            f"b2 = {spec.b2:g} >= 1: the impulse kernel has infinite mass (not normalizable)")


def _smooth_factor(spec, th):
    # cos(th)^(-b2) = [(th + pi/2)(pi/2 - th)]^(-b2) * [cos th / ((th + pi/2)(pi/2 - th))]^(-b2)
    q = (th + HALF_PI) * (HALF_PI - th)
    ratio = np.where(q > 0, np.cos(th) / np.where(q > 0, q, 1.0), 1.0 / np.pi)
    return ratio ** (-spec.b2) * np.exp(-spec.b1 * th)


def _ratio(c, d):
    # cos(theta)/distance-to-endpoint, which tends to 1 at the endpoint
    return c / d if d > 1e-300 else 1.0


def kernel_mass(spec: KernelSpec, y0: float = 1.0, method: str = "theta") -> float:
    """``int K(x, y0) dx`` over the real line.

    ``method="theta"`` integrates in ``theta = atan(x/y0)`` with the weight
    ``[(theta + pi/2)(pi/2 - theta)]^(-b2)`` (relative error ~1e-14).
    ``method="direct"`` integrates ``K(x, y0)`` in ``x`` on ``[-y0, y0]`` and
    maps each tail by ``x = +-y0/s``, ``s in (0, 1]``, where the integrand
    behaves like ``s^(-b2)``; an independent check of the ``y0``-independence.

    Raises
    ------
    KernelDivergenceError
        If ``b2 >= 1``.
    """
    _check(spec)
    if y0 <= 0:
        raise ValueError("kernel_mass needs y0 > 0")
    if method == "theta":
        val, err = integrate.quad(lambda t: _smooth_factor(spec, t), -HALF_PI, HALF_PI,
                                  weight="alg", wvar=(-spec.b2, -spec.b2),
                                  epsabs=0, epsrel=1e-13, limit=200)
    elif method == "direct":
        f = lambda x: float(kernel(spec, x, y0))

        def tail(sign):
            def g(s):
                if s == 0:
                    return np.exp(-spec.b1 * sign * HALF_PI) / y0 ** spec.b2 * y0 ** spec.b2
                return float(kernel(spec, sign * y0 / s, y0)) * y0 / s ** 2 * s ** spec.b2
            return integrate.quad(g, 0, 1, weight="alg", wvar=(-spec.b2, 0.0),
                                  epsabs=0, epsrel=1e-13, limit=200)

        parts = [tail(-1.0), integrate.quad(f, -y0, y0, epsabs=0, epsrel=1e-13, limit=200),
                 tail(1.0)]
        val, err = sum(p[0] for p in parts), sum(p[1] for p in parts)
    else:
        raise ValueError(f"unknown method {method!r}")
    if err > 1e-8 * abs(val):
        raise KernelError(f"mass quadrature error {err:.2e} too large")
    return float(val)


@dataclass(frozen=True)
class FourierMode:
    """Boundary data ``amp * cos(omega t + phase)``; convolved in closed form."""

    omega: float = 1.0
    phase: float = 0.0
    amp: float = 1.0

    def __call__(self, t):
        return self.amp * np.cos(self.omega * np.asarray(t, float) + self.phase)


def _symbol(spec: KernelSpec, k: float, mass: float) -> complex:
    """Normalized ``int Q(z) exp(-i k z) dz`` with ``Q(z) = (1 + z^2)^p e^{-b1 atan z}``."""
    if k == 0:
        return 1.0 + 0j
    if spec.b1 == 0:
        nu = (1 - spec.b2) / 2
        ak = abs(k)
        return complex(2 * np.sqrt(np.pi) / special.gamma(nu + 0.5) * (ak / 2) ** nu
                       * special.kv(nu, ak) / mass)
    p = (spec.b2 - 2) / 2
    qp = lambda z: (1 + z * z) ** p * np.exp(-spec.b1 * np.arctan(z))
    qm = lambda z: (1 + z * z) ** p * np.exp(spec.b1 * np.arctan(z))
    ak = abs(k)
    c1 = integrate.quad(qp, 0, np.inf, weight="cos", wvar=ak, limlst=200)
    c2 = integrate.quad(qm, 0, np.inf, weight="cos", wvar=ak, limlst=200)
    s1 = integrate.quad(qp, 0, np.inf, weight="sin", wvar=ak, limlst=200)
    s2 = integrate.quad(qm, 0, np.inf, weight="sin", wvar=ak, limlst=200)
    # int_R Q e^{-ikz} = int_0^inf [qp + qm] cos(kz) - i sign(k) [qp - qm] sin(kz)
    re = c1[0] + c2[0]
    im = -np.sign(k) * (s1[0] - s2[0])
    return complex(re, im) / mass


def convolve_boundary(spec: KernelSpec, f0: Callable, pts, tol: float = 1e-10) -> np.ndarray:
    """``f(x, y) = (1/mass) int K(x - t, y) f0(t) dt`` at each ``(x, y)`` in ``pts``.

    With ``t = x - y tan(theta)`` the integral is
    ``int cos(theta)^(-b2) exp(-b1 theta) f0(x - y tan theta) dtheta``.
    A :class:`FourierMode` ``f0`` is evaluated through the kernel's Fourier
    symbol instead, which avoids the infinitely oscillating integrand.

    Raises
    ------
    KernelDivergenceError
        If ``b2 >= 1``.
    KernelError
        If the quadrature error estimate exceeds ``1e-6`` relative.
    """
    _check(spec)
    pts = np.atleast_2d(np.asarray(pts, float))
    mass = kernel_mass(spec)
    out = np.empty(len(pts))
    if isinstance(f0, FourierMode):
        cache = {}
        for n, (x, y) in enumerate(pts):
            k = f0.omega * y
            if k not in cache:
                cache[k] = _symbol(spec, k, mass)
            out[n] = f0.amp * np.real(np.exp(1j * (f0.omega * x + f0.phase)) * cache[k])
        return out
    for n, (x, y) in enumerate(pts):
        if y <= 0:
            raise ValueError("convolve_boundary needs y > 0")
        # split at t = 0 (theta* = atan(x/y)) where preset data may jump
        ts = np.arctan(x / y)
        lo = lambda th: _ratio(np.cos(th), th + HALF_PI) ** (-spec.b2) \
            * np.exp(-spec.b1 * th) * f0(x - y * np.tan(th))
        hi = lambda th: _ratio(np.cos(th), HALF_PI - th) ** (-spec.b2) \
            * np.exp(-spec.b1 * th) * f0(x - y * np.tan(th))
        v1, e1 = integrate.quad(lo, -HALF_PI, ts, weight="alg", wvar=(-spec.b2, 0.0),
                                epsabs=tol, epsrel=tol, limit=400)
        v2, e2 = integrate.quad(hi, ts, HALF_PI, weight="alg", wvar=(0.0, -spec.b2),
                                epsabs=tol, epsrel=tol, limit=400)
        val, err = v1 + v2, e1 + e2
        if err > 1e-6 * max(abs(val), 1.0):
            raise KernelError(f"convolution quadrature error {err:.2e} at ({x:g}, {y:g})")
        out[n] = val / mass
    return out


def boundary_recovery_rate(spec: KernelSpec, f0: Callable = None, x0: float = 0.0,
                           y_range=(1e-4, 1e-2), n: int = 15) -> float:
    """Slope of ``log|f(x0, y) - f0(x0)|`` against ``log y`` (default ``f0 = cos``)."""
    f0 = FourierMode() if f0 is None else f0
    y = np.logspace(np.log10(y_range[0]), np.log10(y_range[1]), n)
    f = convolve_boundary(spec, f0, np.column_stack([np.full(n, x0), y]))
    d = np.abs(f - f0(x0))
    return float(np.polyfit(np.log(y), np.log(d), 1)[0])


BOUNDARY_PRESETS = {
    "cos": FourierMode(),
    "one": lambda t: np.ones_like(np.asarray(t, float)),
    "bump": lambda t: 1.0 / (1.0 + np.asarray(t, float) ** 2),
    "gauss": lambda t: np.exp(-np.asarray(t, float) ** 2),
    "step": lambda t: (np.asarray(t, float) > 0).astype(float),
}
