import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radnls.corpus import corpus
from radnls.lp_decomp import (
    SplitFailure, cutoff_profile, dyadic_band, lp_multiplier, lp_pieces, project_dyadic,
    spatial_cutoff_values, split_high_low, square_function, weighted_tail,
)
from radnls.experiments import brute_force_N0
from radnls.radial_spectral import (
    RadialField, dst_forward, l2_norm, nodal_lebesgue_norm, relative_l2_error, sample_function, zeros,
)


def test_cutoff_profile_shape():
    x = np.linspace(0, 3, 3001)
    phi = cutoff_profile(x)
    assert np.all(phi[x <= 1] == 1) and np.all(phi[x >= 2] == 0)
    assert np.all(np.diff(phi) <= 1e-15)
    # C^1 joins: one-sided difference quotients vanish at 1 and 2
    h = 1e-4
    assert abs(cutoff_profile(1 + h) - 1) / h < 1e-6
    assert abs(cutoff_profile(2 - h)) / h < 1e-6


@given(st.integers(-3, 4), st.floats(0.01, 100))
def test_fattened_shell_contains_shell(j, r):
    chi = spatial_cutoff_values(r, j, "chi")
    assert chi * spatial_cutoff_values(r, j, "chi_tilde") == pytest.approx(chi, abs=1e-15)
    assert chi * spatial_cutoff_values(r, j, "chi_tilde2") == pytest.approx(chi, abs=1e-15)


def test_shells_telescope():
    r = np.linspace(0.01, 50, 2000)
    total = sum(spatial_cutoff_values(r, j, "chi") for j in range(-3, 7))
    expected = cutoff_profile(2.0 ** -6 * r) - cutoff_profile(2.0 ** 4 * r)
    assert np.allclose(total, expected, atol=1e-14)
    assert np.allclose(spatial_cutoff_values(r, 2, "chi_le") + spatial_cutoff_values(r, 2, "chi_ge"), 1)


def test_unknown_cutoff_kind():
    with pytest.raises(ValueError):
        spatial_cutoff_values(1.0, 0, "box")


def test_lp_partition_of_unity(grid):
    total = sum(lp_multiplier(grid.k, N) for N in dyadic_band(grid))
    assert np.allclose(total, 1.0, atol=1e-14)


@given(st.integers(0, 2 ** 32))
def test_reconstruction_and_square_function_bounds(seed):
    from radnls.radial_spectral import RadialGrid
    g = RadialGrid(32.0, 256)
    f = corpus(seed, "random_bandlimited", g)
    pieces = lp_pieces(f)
    total = RadialField(g, sum(p.samples for p in pieces.values()))
    assert relative_l2_error(total, f) < 1e-12
    # sum m_N^2 lies between 1/2 and 1 because at most two bands overlap
    sq = nodal_lebesgue_norm(g, square_function(f), 2)
    assert l2_norm(f) / math.sqrt(2) - 1e-12 <= sq <= l2_norm(f) + 1e-12


def test_projection_support(grid, gauss):
    N = dyadic_band(grid)[5]
    c = dst_forward(project_dyadic(gauss, N)).coeffs
    outside = (grid.k <= N / 2) | (grid.k >= 2 * N)
    assert np.max(np.abs(c[outside])) < 1e-15 * np.max(np.abs(c))


def test_split_gaussian_matches_brute_force(grid, gauss):
    rep = split_high_low(gauss, 1e-2)
    assert rep.N0 == 4.0 == brute_force_N0(gauss, 1e-2)
    assert rep.tail_norm <= 1e-2 < rep.tail_at_half
    assert relative_l2_error(rep.v0 + rep.w0, gauss) < 1e-15
    d = json.loads(rep.to_json())
    assert set(d) == {"delta0", "N0", "tail_norm", "tail_at_half_N0", "v_norms", "w_norms"}
    # the final-data map preserves the weighted/Sobolev pairing
    assert rep.v_norms["h12_Vplus"] == pytest.approx(rep.v_norms["weighted_half_v0"], rel=1e-4)


@given(st.integers(0, 10 ** 6))
def test_split_is_minimal(seed):
    from radnls.radial_spectral import RadialGrid
    g = RadialGrid(32.0, 512)
    f = corpus(seed, "gaussian_mix", g)
    rep = split_high_low(f, 1e-3)
    assert rep.N0 == brute_force_N0(f, 1e-3)
    assert weighted_tail(f, rep.N0) <= 1e-3


def test_split_zero_and_failures(grid, gauss):
    rep = split_high_low(zeros(grid), 1e-2)
    assert rep.N0 == 2 and rep.tail_norm == 0
    with pytest.raises(ValueError):
        split_high_low(gauss, 0.0)
    wide = sample_function(grid, lambda r: np.exp(-((r - 20) ** 2)))
    with pytest.raises(SplitFailure):
        split_high_low(wide, 1e-6)
