"""
Changes of variables that bring applied operators into Euler form.

Each transform returns a :class:`TransformResult` holding the coordinate map,
the Euler coefficients on the target half-plane, the operator in its original
coordinates and the positive prefactor ``P`` with::

    (Euler operator applied to f o inverse)(x, y) = P(x, y) * (original operator f)(inverse(x, y))

The prefactor is kept explicit rather than divided out so that problems with
a source term stay representable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .operator import Coefficients, SecondOrderOperator, _ev, fd_derivatives

__all__ = [
    "CoordinateMap",
    "TransformResult",
    "PowerMultiplier",
    "TransformError",
    "keldysh_to_euler",
    "population_to_euler",
    "heston_to_euler",
    "heston_printed_constants",
    "sabr_rho0_to_euler",
    "sabr_general_recipe",
    "power_multiplier",
    "abreu_reduction",
    "pullback_check",
    "PROBE_FUNCTIONS",
    "TRANSFORM_PRESETS",
    "HESTON_DEFAULTS",
    "probe_points",
    "consistency_check",
]


class TransformError(ValueError):
    """Parameters outside the range where the transform is defined."""


@dataclass(frozen=True)
class CoordinateMap:
    """Forward map from original coordinates ``(p, q)`` to ``(x, y)`` and back.

    ``names`` records what ``p`` and ``q`` stand for in the source model.
    """

    forward: Callable
    inverse: Callable
    jacobian_ok_region: Callable
    names: tuple = ("p", "q")

    def roundtrip_error(self, p, q) -> float:
        x, y = self.forward(p, q)
        p2, q2 = self.inverse(x, y)
        scale = np.maximum(1.0, np.maximum(np.abs(p), np.abs(q)))
        return float(np.max(np.maximum(np.abs(p2 - p), np.abs(q2 - q)) / scale))


@dataclass(frozen=True)
class TransformResult:
    map: CoordinateMap
    coeffs: Coefficients
    prefactor: Callable
    original: SecondOrderOperator
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------

def keldysh_to_euler(k: float) -> TransformResult:
    """Keldysh/Tricomi operator ``f_tt + u^k f_uu`` on ``u > 0``.

    With ``x = t`` and ``y = (2/|2-k|) u^((2-k)/2)`` the operator becomes
    ``y^-2`` times the Euler operator with ``b1 = 0``, ``b2 = k/(k-2)``,
    ``c = 0``.  The absolute value keeps ``y > 0`` for ``k > 2`` as well,
    where the map exchanges ``u = 0`` and ``u = inf``.  ``k = 2`` has no
    power change of this kind and is rejected.

    Original coordinates are ``(t, u)``.
    """
    if k == 2:
        raise TransformError("k = 2: the logarithmic change does not give Euler-type degeneracy")
    p = (2.0 - k) / 2.0
    C = 2.0 / abs(2.0 - k)
    b2 = k / (k - 2.0)

    def forward(t, u):
        return np.asarray(t, float), C * np.asarray(u, float) ** p

    def inverse(x, y):
        return np.asarray(x, float), (np.asarray(y, float) / C) ** (1.0 / p)

    cmap = CoordinateMap(forward, inverse, lambda t, u: np.asarray(u) > 0, ("t", "u"))
    original = SecondOrderOperator(axx=1.0, ayy=lambda t, u: np.asarray(u, float) ** k,
                                   name=f"keldysh k={k:g}")
    coeffs = Coefficients.constant(b2=b2, name=f"keldysh k={k:g}")
    return TransformResult(cmap, coeffs, lambda x, y: np.asarray(y, float) ** 2, original,
                           {"k": k, "b2": b2})


def population_to_euler(b1: float = 1.0) -> TransformResult:
    """Population-dynamics operator ``f_x1x1 + y1 f_y1y1 + b1 f_y1``.

    ``x = x1``, ``y = 2 sqrt(y1)`` gives the Euler operator with
    ``b2 = 2 b1 - 1`` and prefactor ``y^2``.  Original coordinates are
    ``(x1, y1)``.
    """
    def forward(x1, y1):
        return np.asarray(x1, float), 2.0 * np.sqrt(np.asarray(y1, float))

    def inverse(x, y):
        return np.asarray(x, float), (np.asarray(y, float) / 2.0) ** 2

    cmap = CoordinateMap(forward, inverse, lambda x1, y1: np.asarray(y1) > 0, ("x1", "y1"))
    original = SecondOrderOperator(axx=1.0, ayy=lambda x1, y1: np.asarray(y1, float) + 0 * x1,
                                   by=b1, name=f"population b1={b1:g}")
    coeffs = Coefficients.constant(b2=2.0 * b1 - 1.0, name=f"population b1={b1:g}")
    return TransformResult(cmap, coeffs, lambda x, y: np.asarray(y, float) ** 2, original,
                           {"b1": b1, "b2": 2.0 * b1 - 1.0})


def heston_printed_constants(kappa, theta, sigma, rho, r, lambda_price) -> dict:
    """The four constants exactly as printed next to the Heston change of variables.

    Kept for comparison only; :func:`heston_to_euler` uses constants that are
    consistent with the change of variables itself (they agree for ``B2``
    always and for ``b2`` when ``sigma = sqrt 2``).
    """
    s = np.sqrt(1.0 - rho ** 2)
    return {
        "b1": np.sqrt(2.0) * sigma / s * (r * sigma + (lambda_price - kappa * theta) * rho),
        "B1": np.sqrt(2.0) * sigma / s * (rho * kappa - 0.5),
        "b2": np.sqrt(2.0) / sigma * (kappa * theta - lambda_price),
        "B2": -np.sqrt(2.0) * kappa / sigma,
    }


def heston_to_euler(mu, kappa, theta, sigma, rho, r, lambda_price) -> TransformResult:
    """Stationary Heston operator in Euler form.

    The original operator in ``(S, v)`` is::

        1/2 v S^2 U_SS + rho sigma v S U_Sv + 1/2 sigma^2 v U_vv
            + r S U_S + (kappa (theta - v) - lambda) U_v - r U

    (``mu`` does not enter the pricing operator and is accepted only for
    signature compatibility).  With

        x = sqrt2/sqrt(1-rho^2) log S - sqrt2 rho/(sigma sqrt(1-rho^2)) v,
        y = sqrt2 v / sigma,

    the second-order part becomes ``(sigma/sqrt2) y (U_xx + U_yy)``.  The Euler
    coefficients are ``b1 + B1 y``, ``b2 + B2 y`` and ``c = -(sqrt2/sigma) r y``
    with::

        b1 = 2 (r sigma + (lambda - kappa theta) rho) / (sigma^2 sqrt(1-rho^2))
        B1 = sqrt2 (rho kappa - sigma/2) / (sigma sqrt(1-rho^2))
        b2 = 2 (kappa theta - lambda) / sigma^2
        B2 = -sqrt2 kappa / sigma

    and prefactor ``sqrt2 y / sigma``.
    """
    if sigma <= 0:
        raise TransformError("sigma must be positive")
    if not (0.0 <= rho < 1.0):
        raise TransformError("rho must lie in [0, 1)")
    s = np.sqrt(1.0 - rho ** 2)
    sq2 = np.sqrt(2.0)
    alpha = sq2 / s
    gamma = sq2 * rho / (sigma * s)
    delta = sq2 / sigma
    consts = {
        "b1": 2.0 * (r * sigma + (lambda_price - kappa * theta) * rho) / (sigma ** 2 * s),
        "B1": sq2 * (rho * kappa - sigma / 2.0) / (sigma * s),
        "b2": 2.0 * (kappa * theta - lambda_price) / sigma ** 2,
        "B2": -sq2 * kappa / sigma,
        "c_per_y": -sq2 * r / sigma,
    }

    def forward(S, v):
        S = np.asarray(S, float)
        v = np.asarray(v, float)
        return alpha * np.log(S) - gamma * v, delta * v

    def inverse(x, y):
        v = np.asarray(y, float) / delta
        return np.exp((np.asarray(x, float) + gamma * v) / alpha), v

    cmap = CoordinateMap(forward, inverse,
                         lambda S, v: (np.asarray(S) > 0) & (np.asarray(v) > 0), ("S", "v"))
    original = SecondOrderOperator(
        axx=lambda S, v: 0.5 * v * S ** 2,
        axy=lambda S, v: 0.5 * rho * sigma * v * S,
        ayy=lambda S, v: 0.5 * sigma ** 2 * v + 0 * S,
        bx=lambda S, v: r * S + 0 * v,
        by=lambda S, v: kappa * (theta - v) - lambda_price + 0 * S,
        c=-r,
        name="heston",
    )
    coeffs = Coefficients(
        b1=lambda x, y: consts["b1"] + consts["B1"] * np.asarray(y, float) + 0 * x,
        b2=lambda x, y: consts["b2"] + consts["B2"] * np.asarray(y, float) + 0 * x,
        c=lambda x, y: consts["c_per_y"] * np.asarray(y, float) + 0 * x,
        name="heston",
    )
    meta = {"constants": consts,
            "printed": heston_printed_constants(kappa, theta, sigma, rho, r, lambda_price),
            "params": dict(mu=mu, kappa=kappa, theta=theta, sigma=sigma, rho=rho, r=r,
                           lambda_price=lambda_price)}
    return TransformResult(cmap, coeffs, lambda x, y: sq2 * np.asarray(y, float) / sigma + 0 * x,
                           original, meta)


def sabr_rho0_to_euler(beta: float, nu: float) -> TransformResult:
    """Uncorrelated SABR operator ``a^2 (F^(2 beta) P_FF + nu^2 P_aa)``.

    The composite map is ``z = F^(1-beta)/(1-beta)``, ``w = a/nu`` followed
    by ``x + iy = (w + iz)^2``.  With ``r = sqrt(x^2 + y^2)`` the Euler
    coefficients are::

        b1 = +(beta/2)/(1-beta) * y / r
        b2 = -(beta/2)/(1-beta) * (x + r) / r

    ``c = 0``, and the prefactor is ``y^2 / (2 nu^2 r (x + r))``.  Original
    coordinates are ``(F, a)``.
    """
    if beta == 1:
        raise TransformError("beta = 1 is excluded")
    if not (0.0 <= beta < 1.0) or nu <= 0:
        raise TransformError("need beta in [0, 1) and nu > 0")
    k = 0.5 * beta / (1.0 - beta)

    def forward(F, a):
        z = np.asarray(F, float) ** (1.0 - beta) / (1.0 - beta)
        w = np.asarray(a, float) / nu
        return w * w - z * z, 2.0 * z * w

    def inverse(x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        rr = np.hypot(x, y)
        w = np.sqrt((x + rr) / 2.0)
        z = y / (2.0 * w)
        return ((1.0 - beta) * z) ** (1.0 / (1.0 - beta)), nu * w

    def radius(x, y):
        return np.hypot(np.asarray(x, float), np.asarray(y, float))

    cmap = CoordinateMap(forward, inverse,
                         lambda F, a: (np.asarray(F) > 0) & (np.asarray(a) > 0), ("F", "a"))
    original = SecondOrderOperator(
        axx=lambda F, a: a ** 2 * F ** (2 * beta),
        ayy=lambda F, a: nu ** 2 * a ** 2 + 0 * F,
        name="sabr rho=0",
    )
    coeffs = Coefficients(
        b1=lambda x, y: k * np.asarray(y, float) / radius(x, y),
        b2=lambda x, y: -k * (np.asarray(x, float) + radius(x, y)) / radius(x, y),
        name="sabr rho=0",
    )

    def prefactor(x, y):
        rr = radius(x, y)
        return np.asarray(y, float) ** 2 / (2.0 * nu ** 2 * rr * (np.asarray(x, float) + rr))

    return TransformResult(cmap, coeffs, prefactor, original, {"beta": beta, "nu": nu})


def sabr_general_recipe(beta: float, nu: float, rho: float, theta: float) -> dict:
    """Composition recipe for correlated SABR (untested, see notes).

    Steps: ``z = F^(1-beta)/(1-beta)``, ``w = a/nu``; the affine step
    ``z' = z``, ``w' = (w - rho z)/sqrt(1 - rho)`` as printed; then
    ``x + iy = (w' + i z')^(pi/theta)``.  The branch of ``theta`` is not
    determined by the source, so the caller must supply it; ``theta = pi/2``
    with ``rho = 0`` reproduces :func:`sabr_rho0_to_euler`'s map.
    """
    if not (0 <= beta < 1) or nu <= 0 or not (-1 < rho < 1) or theta == 0:
        raise TransformError("invalid SABR parameters")
    expo = np.pi / theta

    def forward(F, a):
        z = np.asarray(F, float) ** (1.0 - beta) / (1.0 - beta)
        w = np.asarray(a, float) / nu
        wp = (w - rho * z) / np.sqrt(1.0 - rho)
        xi = (wp + 1j * z) ** expo
        return xi.real, xi.imag

    return {"forward": forward, "exponent": expo, "validated": rho == 0 and theta == np.pi / 2}


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerMultiplier:
    """The rewriting ``f -> y^lam f`` between ``b2 = 1 + lam`` and ``b2 = 1 - lam``.

    If ``f`` solves ``y^2 Lap f + (1+lam) y f_y = 0`` then ``y^lam f`` solves
    ``y^2 Lap + (1-lam) y d_y``; :meth:`inverse` goes back.
    """

    lam: float
    source: Coefficients
    target: Coefficients

    def forward(self, f):
        lam = self.lam
        return lambda x, y: np.asarray(y, float) ** lam * f(x, y)

    def inverse(self, ft):
        lam = self.lam
        return lambda x, y: np.asarray(y, float) ** (-lam) * ft(x, y)


def power_multiplier(lam: float) -> PowerMultiplier:
    return PowerMultiplier(lam, Coefficients.constant(b2=1.0 + lam, name=f"b2={1 + lam:g}"),
                           Coefficients.constant(b2=1.0 - lam, name=f"b2={1 - lam:g}"))


def abreu_reduction() -> PowerMultiplier:
    """Abreu reduction: ``y Lap phi - phi_y = 0`` is the ``b2 = -1`` Euler equation.

    ``phi -> y^-2 phi`` (the inverse direction of the ``lam = 2`` multiplier)
    turns it into the ``b2 = 3`` equation.
    """
    return power_multiplier(2.0)


# ---------------------------------------------------------------------------
# pull-back consistency

def _trig(p, q):
    return np.sin(0.7 * p + 0.3) * np.cos(0.4 * q) + 0.5


def _trig_d(p, q):
    s, c = np.sin(0.7 * p + 0.3), np.cos(0.7 * p + 0.3)
    sq, cq = np.sin(0.4 * q), np.cos(0.4 * q)
    return (s * cq + 0.5, 0.7 * c * cq, -0.4 * s * sq, -0.49 * s * cq, -0.16 * s * cq,
            -0.28 * c * sq)


def _exp(p, q):
    return np.exp(0.3 * p - 0.2 * q)


def _exp_d(p, q):
    e = _exp(p, q)
    return e, 0.3 * e, -0.2 * e, 0.09 * e, 0.04 * e, -0.06 * e


def _poly(p, q):
    return p * p + p * q + 2.0 * q


def _poly_d(p, q):
    one = np.ones_like(p * q)
    return _poly(p, q), 2 * p + q, p + 2.0, 2.0 * one, 0.0 * one, one


# name -> (f, analytic derivatives (f, f_p, f_q, f_pp, f_qq, f_pq))
PROBE_FUNCTIONS = {
    "trig": (_trig, _trig_d),
    "exp": (_exp, _exp_d),
    "poly": (_poly, _poly_d),
}


def pullback_check(result: TransformResult, f, x, y, rel_step=1e-3, derivs=None):
    """Compare the Euler residual of ``f o inverse`` with prefactor x original residual.

    ``f`` is a function of the original coordinates; ``derivs`` optionally
    gives its exact derivatives there (otherwise fourth-order differences
    with a step of ``1e-4`` times the coordinate size are used).  The Euler
    side is always differenced in ``(x, y)`` with step ``rel_step * y``.

    Returns ``(euler, scaled_original, rel_err)``.  The relative error is
    measured against the larger of the two sums of term magnitudes (Euler
    side, and prefactor times original side), so it stays meaningful where
    the residual itself happens to vanish.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    inv = result.map.inverse

    def F(xx, yy):
        p, q = inv(xx, yy)
        return f(p, q)

    dE = fd_derivatives(F, x, y, rel_step * y, mixed=False)
    b1, b2, c, _ = result.coeffs.evaluate(x, y)
    e_terms = [y * y * dE[3], y * y * dE[4], y * b1 * dE[1], y * b2 * dE[2], c * dE[0]]
    euler = sum(e_terms)
    p, q = inv(x, y)
    op = result.original
    if derivs is not None:
        d = derivs(p, q)
    else:
        d = fd_derivatives(f, p, q, 1e-4 * np.maximum(np.hypot(p, q), 1e-3), mixed=True)
    fv, fp, fq, fpp, fqq, fpq = d
    terms = [_ev(op.axx, p, q) * fpp, 2 * _ev(op.axy, p, q) * fpq, _ev(op.ayy, p, q) * fqq,
             _ev(op.bx, p, q) * fp, _ev(op.by, p, q) * fq, _ev(op.c, p, q) * fv]
    orig = sum(terms)
    scale = sum(np.abs(t) for t in terms)
    P = result.prefactor(x, y)
    scaled = P * orig
    denom = np.maximum(P * scale, sum(np.abs(t) for t in e_terms))
    rel = np.abs(euler - scaled) / np.maximum(denom, 1e-300)
    return euler, scaled, rel


# parameter sets used by the CLI and the consistency suite
HESTON_DEFAULTS = dict(mu=0.05, kappa=1.5, theta=0.04, sigma=0.3, rho=0.5, r=0.02,
                       lambda_price=0.1)

TRANSFORM_PRESETS = {
    "keldysh": lambda **kw: keldysh_to_euler(kw.get("k", 3.0)),
    "population": lambda **kw: population_to_euler(kw.get("b1", 2.0)),
    "heston": lambda **kw: heston_to_euler(**{k: kw.get(k, v) for k, v in HESTON_DEFAULTS.items()}),
    "sabr": lambda **kw: sabr_rho0_to_euler(kw.get("beta", 0.5), kw.get("nu", 0.4)),
}


def probe_points(n: int = 50, seed: int = 0, x_range=(-1.0, 1.0), y_range=(0.3, 2.0)):
    """Seeded uniform probe points in Euler coordinates."""
    rng = np.random.default_rng(seed)
    return rng.uniform(*x_range, n), rng.uniform(*y_range, n)


def consistency_check(name: str, n: int = 50, seed: int = 0, probes=None, **params) -> dict:
    """Worst pull-back relative error of a preset transform over the probe functions.

    Returns a dict ``{probe_name: max_rel}`` plus ``"max"`` and the points used.
    """
    try:
        res = TRANSFORM_PRESETS[name](**params)
    except KeyError:
        raise TransformError(f"unknown transform {name!r}; choose from "
                             f"{', '.join(TRANSFORM_PRESETS)}") from None
    x, y = probe_points(n, seed)
    out = {}
    for pname in probes or PROBE_FUNCTIONS:
        f, d = PROBE_FUNCTIONS[pname]
        out[pname] = float(np.max(pullback_check(res, f, x, y, derivs=d)[2]))
    out["max"] = max(out.values())
    out["x"], out["y"] = x, y
    return out
