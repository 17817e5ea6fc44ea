import mpmath as mp
import numpy as np
import pytest

from eulerlab.kernel import (BOUNDARY_PRESETS, FourierMode, KernelDivergenceError, KernelSpec,
                             boundary_recovery_rate, convolve_boundary, kernel, kernel_mass,
                             make_kernel)
from eulerlab.operator import apply_pointwise


def _mass_oracle(b1, b2):
    # int cos^-b2(t) e^(-b1 t) dt over (-pi/2, pi/2)
    return float(mp.pi * 2 ** b2 * mp.gamma(1 - b2)
                 / abs(mp.gamma(1 - mp.mpf(b2) / 2 + 1j * mp.mpf(b1) / 2)) ** 2)


def test_poisson_mass():
    assert abs(kernel_mass(make_kernel(0, 0)) - np.pi) < 1e-8


@pytest.mark.parametrize("b1,b2", [(0, 0.5), (0.7, 0.5), (-1.2, -0.5), (0.3, 0.9)])
def test_mass_matches_closed_form(b1, b2):
    spec = make_kernel(b1, b2)
    ref = _mass_oracle(b1, b2)
    assert abs(kernel_mass(spec) - ref) < 1e-8 * ref
    assert abs(kernel_mass(spec, method="direct") - ref) < 1e-8 * ref


@pytest.mark.parametrize("b1,b2", [(0, 0.0), (0, 0.5), (0.7, 0.5)])
def test_mass_independent_of_y0(b1, b2):
    spec = make_kernel(b1, b2)
    m = [kernel_mass(spec, y0, method="direct") for y0 in (0.5, 1.0, 2.0)]
    assert max(m) - min(m) < 1e-7 * m[1]


def test_divergence_at_b2_one():
    with pytest.raises(KernelDivergenceError):
        kernel_mass(make_kernel(0, 1.0))
    with pytest.raises(KernelDivergenceError):
        convolve_boundary(make_kernel(0, 1.5), np.cos, [(0, 1)])
    assert not KernelSpec(0, 1).normalizable


def test_kernel_is_solution():
    spec = make_kernel(0.4, 0.3)
    rng = np.random.default_rng(0)
    x, y = rng.uniform(-2, 2, 20), rng.uniform(0.1, 2, 20)
    f = lambda a, b: kernel(spec, a, b)
    assert np.max(np.abs(apply_pointwise(spec.coeffs, f, x, y) / f(x, y))) < 1e-8


def test_constant_data_preserved():
    spec = make_kernel(0.5, 0.5)
    pts = [(0.0, 0.1), (1.0, 1.0), (-3.0, 2.0)]
    assert np.max(np.abs(convolve_boundary(spec, BOUNDARY_PRESETS["one"], pts) - 1)) < 1e-6


def test_bump_against_direct_quadrature():
    spec = make_kernel(0, 0)
    got = convolve_boundary(spec, BOUNDARY_PRESETS["bump"], [(0.0, 0.5)])[0]
    ref = mp.quad(lambda t: 0.5 / (t * t + 0.25) / (1 + t * t), [-mp.inf, -1, 0, 1, mp.inf]) / mp.pi
    assert abs(got - float(ref)) < 1e-6 * float(ref)


def test_fourier_path_matches_direct_oscillatory_quadrature():
    spec = make_kernel(0.6, 0.4)
    x, y = 0.3, 0.7
    got = convolve_boundary(spec, FourierMode(), [(x, y)])[0]
    K = lambda t: (1 + ((x - t) / y) ** 2) ** ((spec.b2 - 2) / 2) \
        * mp.exp(-spec.b1 * mp.atan((x - t) / y)) / y
    ref = mp.quadosc(lambda t: K(t) * mp.cos(t), [-mp.inf, 0], omega=1) \
        + mp.quadosc(lambda t: K(t) * mp.cos(t), [0, mp.inf], omega=1)
    assert abs(got - float(ref) / kernel_mass(spec)) < 1e-8


def test_fourier_symbol_b1_zero_closed_form():
    spec = make_kernel(0, 0)
    y = np.array([0.1, 0.5, 2.0])
    got = convolve_boundary(spec, FourierMode(), np.column_stack([0 * y, y]))
    assert np.allclose(got, np.exp(-y), atol=1e-12)


def test_boundary_recovery_rate():
    assert abs(boundary_recovery_rate(make_kernel(0, 0.5)) - 0.5) <= 0.05
    assert abs(boundary_recovery_rate(make_kernel(0, 0.2)) - 0.8) <= 0.05


def test_convolution_residual():
    spec = make_kernel(0.3, 0.5)
    f0 = BOUNDARY_PRESETS["gauss"]
    f = lambda a, b: convolve_boundary(spec, f0, np.column_stack([np.ravel(a), np.ravel(b)])
                                       ).reshape(np.shape(a))
    rng = np.random.default_rng(3)
    x, y = rng.uniform(-1, 1, 20), rng.uniform(0.3, 1.5, 20)
    r = apply_pointwise(spec.coeffs, f, x, y, rel_step=1e-2)
    assert np.max(np.abs(r)) <= 1e-5


def test_positivity_and_translation():
    spec = make_kernel(-0.4, 0.6)
    rng = np.random.default_rng(8)
    pts = np.column_stack([rng.uniform(-2, 2, 15), rng.uniform(0.05, 2, 15)])
    for name in ("bump", "gauss", "step"):
        assert np.all(convolve_boundary(spec, BOUNDARY_PRESETS[name], pts) >= 0)
    s = 0.7
    f0 = BOUNDARY_PRESETS["gauss"]
    shifted = convolve_boundary(spec, lambda t: f0(np.asarray(t) - s), pts)
    moved = convolve_boundary(spec, f0, pts - np.array([s, 0.0]))
    assert np.max(np.abs(shifted - moved)) < 1e-8


def test_poisson_step_closed_form():
    # Poisson extension of the step is 1/2 + atan(x/y)/pi
    spec = make_kernel(0, 0)
    pts = np.array([[0.3, 0.2], [-1.0, 0.5], [0.0, 1.0]])
    got = convolve_boundary(spec, BOUNDARY_PRESETS["step"], pts)
    assert np.allclose(got, 0.5 + np.arctan(pts[:, 0] / pts[:, 1]) / np.pi, atol=1e-9)
