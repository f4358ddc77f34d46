import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from radnls.radial_spectral import (
    RadialField, RadialGrid, dst_forward, dst_inverse, frac_laplacian, inner, l2_norm,
    laplacian, lebesgue_norm, multiply_fourier, radial_derivative, relative_l2_error,
    resample, sample_function, spectral_l2_norm, zeros, apply_multiplier,
)

small = RadialGrid(16.0, 128)
finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_grid_validation():
    with pytest.raises(ValueError):
        RadialGrid(32.0, 1000)
    with pytest.raises(ValueError):
        RadialGrid(-1.0, 1024)
    with pytest.raises(ValueError):
        RadialGrid(32.0, 32)
    g = RadialGrid(8.0, 64)
    assert g.n == 63 and g.r[0] == pytest.approx(g.dr) and g.refined().M == 128


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_sample_function_reports_bad_node():
    with pytest.raises(ValueError, match="node m=1"):
        sample_function(small, lambda r: 1 / (r - small.r[0]))


def test_field_length_checked():
    with pytest.raises(ValueError):
        RadialField(small, np.zeros(5))


def test_gaussian_norms(gauss):
    # ||e^{-r^2/2}||_2 = pi^{3/4}, ||.||_3 = (2 pi / 3)^{1/2}
    assert l2_norm(gauss) == pytest.approx(math.pi ** 0.75, rel=1e-12)
    assert lebesgue_norm(gauss, 3) == pytest.approx((2 * math.pi / 3) ** 0.5, rel=1e-12)
    # sup sits at r = 0, reached by quadratic extrapolation: O(dr^2) error
    assert lebesgue_norm(gauss, math.inf) == pytest.approx(1.0, abs=1e-4)


def test_laplacian_of_gaussian(grid, gauss):
    exact = sample_function(grid, lambda r: (r ** 2 - 3) * np.exp(-r ** 2 / 2))
    assert relative_l2_error(laplacian(gauss), exact) < 1e-12


def test_radial_derivative(grid, gauss):
    exact = -grid.r * np.exp(-grid.r ** 2 / 2)
    assert np.max(np.abs(radial_derivative(gauss) - exact)) < 1e-12


def test_frac_laplacian_composes(gauss):
    a = frac_laplacian(frac_laplacian(gauss, 0.5), 0.5)
    assert relative_l2_error(a, frac_laplacian(gauss, 1.0)) < 1e-12
    assert relative_l2_error(frac_laplacian(frac_laplacian(gauss, 1.0), 1.0), laplacian(gauss) * -1) < 1e-12


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_multiplier_rejects_nonfinite(gauss):
    with pytest.raises(ValueError, match="non-finite multiplier"):
        apply_multiplier(dst_forward(gauss), lambda k: 1 / (k - k[0]))


@given(arrays(complex, small.n, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False,
                                                             allow_infinity=False)))
def test_dst_roundtrip_and_parseval(x):
    f = RadialField(small, x)
    c = dst_forward(f)
    assert np.allclose(dst_inverse(c).samples, x, atol=1e-9)
    assert spectral_l2_norm(c) == pytest.approx(l2_norm(f), rel=1e-10, abs=1e-10)


@given(arrays(complex, small.n, elements=st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                             allow_infinity=False)))
def test_laplacian_symmetric_nonpositive(x):
    f = RadialField(small, x)
    q = inner(laplacian(f), f)
    assert abs(q.imag) <= 1e-8 * (1 + abs(q))
    assert q.real <= 1e-8


def test_multiply_fourier_identity(gauss):
    assert relative_l2_error(multiply_fourier(gauss, 1.0), gauss) < 1e-14


def test_resample_identity_and_scaling(grid, gauss):
    out, info = resample(gauss, 1.0)
    assert relative_l2_error(out, gauss) < 1e-14 and info.truncation_loss < 1e-14
    # f(2r) for the Gaussian
    for method in ("cubic", "bandlimited"):
        out, _ = resample(gauss, 2.0, method=method)
        exact = sample_function(grid, lambda r: np.exp(-2 * r ** 2))
        assert relative_l2_error(out, exact) < 1e-6


def test_resample_flags_truncation(grid):
    wide = sample_function(grid, lambda r: np.exp(-((r - 20) ** 2)))
    _, info = resample(wide, 0.5)
    assert info.truncation_loss > 0.9


def test_resample_bad_arguments(gauss):
    with pytest.raises(ValueError):
        resample(gauss, 0.0)
    with pytest.raises(ValueError):
        resample(gauss, 1.0, method="linear")


def test_zero_field_properties(grid):
    z = zeros(grid)
    assert l2_norm(z) == 0 and z.boundary_ratio() == 0 and z.decays()


def test_boundary_ratio_flags_wide_data(grid):
    f = sample_function(grid, lambda r: np.ones_like(r))
    assert not f.decays(1e-6)
