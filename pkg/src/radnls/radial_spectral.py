"""Radial grid, sine-spectral transforms and quadrature for radial fields on R^3.

A radial function f(|x|) is stored through g(r) = r f(r) on the interior nodes
r_m = m*dr (m = 1..M-1) of [0, R].  With Dirichlet conditions g(0) = g(R) = 0
the orthonormal DST-I diagonalises -Laplacian with eigenvalues k_n^2,
k_n = n*pi/R, and any radial Fourier multiplier m(|xi|) acts on the sine
coefficients of g as multiplication by m(k_n).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
from scipy.fft import dst, dct
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class RadialGrid:
    R: float = 32.0
    M: int = 2048

    def __post_init__(self):
        if not self.R > 0 or not np.isfinite(self.R):
            raise ValueError(f"truncation radius must be positive, got R={self.R}")
        M = int(self.M)
        if M != self.M or M < 64 or M & (M - 1):
            raise ValueError(f"M must be a power of two >= 64, got M={self.M}")

    @property
    def dr(self) -> float:
        return self.R / self.M

    @property
    def n(self) -> int:
        """Number of stored samples, M - 1."""
        return self.M - 1

    @cached_property
    def r(self) -> np.ndarray:
        return np.arange(1, self.M) * self.dr

    @cached_property
    def k(self) -> np.ndarray:
        return np.arange(1, self.M) * (np.pi / self.R)

    @property
    def k_min(self) -> float:
        return np.pi / self.R

    @property
    def k_max(self) -> float:
        return (self.M - 1) * np.pi / self.R

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(self.R, self.M * factor)


@dataclass(frozen=True)
class RadialField:
    """Samples g_m = r_m f(r_m) of a radial complex function."""

    grid: RadialGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.n,):
            raise ValueError(
                f"field has {s.shape} samples, grid expects ({self.grid.n},)")
        object.__setattr__(self, "samples", s)

    @property
    def values(self) -> np.ndarray:
        """f(r_m) = g_m / r_m."""
        return self.samples / self.grid.r

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.samples)))

    def boundary_ratio(self) -> float:
        peak = np.max(np.abs(self.samples))
        if peak == 0:
            return 0.0
        return float(abs(self.samples[-1]) / peak)

    def decays(self, boundary_tol: float = 1e-8) -> bool:
        ok = self.boundary_ratio() <= boundary_tol
        if not ok:
            logger.warning("field does not decay at r=R: |g_end|/max|g| = %.3e",
                           self.boundary_ratio())
        return ok

    def with_samples(self, samples) -> "RadialField":
        return RadialField(self.grid, samples)

    def conj(self) -> "RadialField":
        return RadialField(self.grid, np.conj(self.samples))

    def __add__(self, other: "RadialField") -> "RadialField":
        _check_same_grid(self, other)
        return RadialField(self.grid, self.samples + other.samples)

    def __sub__(self, other: "RadialField") -> "RadialField":
        _check_same_grid(self, other)
        return RadialField(self.grid, self.samples - other.samples)

    def __mul__(self, c) -> "RadialField":
        return RadialField(self.grid, self.samples * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralCoeffs:
    """Orthonormal DST-I coefficients of g at wavenumbers k_n = n pi / R."""

    grid: RadialGrid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.grid.n,):
            raise ValueError(
                f"got {c.shape} coefficients, grid expects ({self.grid.n},)")
        object.__setattr__(self, "coeffs", c)


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid} vs {b.grid}")


def zeros(grid: RadialGrid) -> RadialField:
    return RadialField(grid, np.zeros(grid.n, dtype=complex))


def sample_function(grid: RadialGrid, f: Callable[[np.ndarray], np.ndarray]) -> RadialField:
    """Sample g_m = r_m f(r_m); f must be vectorised over r."""
    r = grid.r
    vals = np.broadcast_to(np.asarray(f(r), dtype=complex), r.shape)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        m = bad[0]
        raise ValueError(f"non-finite sample at node m={m + 1} (r={r[m]:.6g})")
    return RadialField(grid, r * vals)


def dst_forward(field: RadialField) -> SpectralCoeffs:
    s = field.samples
    if s.shape != (field.grid.n,):
        raise ValueError("field length does not match grid")
    return SpectralCoeffs(field.grid, dst(s, type=1, norm="ortho"))


def dst_inverse(coeffs: SpectralCoeffs) -> RadialField:
    c = coeffs.coeffs
    if c.shape != (coeffs.grid.n,):
        raise ValueError("coefficient length does not match grid")
    return RadialField(coeffs.grid, dst(c, type=1, norm="ortho"))


def apply_multiplier(coeffs: SpectralCoeffs, m) -> SpectralCoeffs:
    """Multiply coefficient n by m(k_n).  ``m`` is a callable or an array."""
    vals = m(coeffs.grid.k) if callable(m) else m
    vals = np.broadcast_to(np.asarray(vals), coeffs.coeffs.shape)
    if not np.all(np.isfinite(vals)):
        n = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise ValueError(f"non-finite multiplier value at k_{n + 1}={coeffs.grid.k[n]:.6g}")
    return SpectralCoeffs(coeffs.grid, coeffs.coeffs * vals)


def multiply_fourier(field: RadialField, m) -> RadialField:
    """Shorthand for dst_inverse(apply_multiplier(dst_forward(field), m))."""
    return dst_inverse(apply_multiplier(dst_forward(field), m))


def frac_laplacian(field: RadialField, s: float) -> RadialField:
    """|nabla|^s f."""
    if s == 0:
        return field
    return multiply_fourier(field, field.grid.k ** s)


def laplacian(field: RadialField) -> RadialField:
    return multiply_fourier(field, -field.grid.k ** 2)


def radial_derivative(field: RadialField) -> np.ndarray:
    """Nodal values of d f / d r, using the spectral derivative of g.

    g = sum c_n sin(k_n r) gives g' = sum k_n c_n cos(k_n r); the cosine sum
    on nodes 0..M is a DCT-I of the zero-padded coefficient vector.
    """
    grid = field.grid
    c = dst_forward(field).coeffs * grid.k * np.sqrt(2.0 / grid.M)
    padded = np.concatenate(([0.0], c, [0.0]))
    gp = 0.5 * (dct(padded.real, type=1) + 1j * dct(padded.imag, type=1))[1:-1]
    r = grid.r
    return gp / r - field.samples / r ** 2


def inner(a: RadialField, b: RadialField) -> complex:
    """int_{R^3} a conj(b) dx."""
    _check_same_grid(a, b)
    return complex(FOUR_PI * a.grid.dr * np.sum(a.samples * np.conj(b.samples)))


def l2_norm(field: RadialField) -> float:
    return float(np.sqrt(FOUR_PI * field.grid.dr * np.sum(np.abs(field.samples) ** 2)))


def spectral_l2_norm(coeffs: SpectralCoeffs) -> float:
    """Parseval side: ||f||^2 = 4 pi dr sum |c_n|^2."""
    return float(np.sqrt(FOUR_PI * coeffs.grid.dr * np.sum(np.abs(coeffs.coeffs) ** 2)))


def _sup_norm_nodal(values: np.ndarray) -> float:
    # f(0) is not a node: quadratic extrapolation through the three first nodes
    f0 = 3 * values[0] - 3 * values[1] + values[2]
    return float(max(np.max(np.abs(values)), abs(f0)))


def lebesgue_norm(field: RadialField, p: float) -> float:
    """||f||_{L^p(R^3)} for p in [1, inf]."""
    if not p >= 1:
        raise ValueError(f"Lebesgue exponent must be >= 1, got p={p}")
    if np.isinf(p):
        return _sup_norm_nodal(field.values)
    grid = field.grid
    a = np.abs(field.samples)
    integrand = grid.r ** (2.0 - p) * a ** p
    return float((FOUR_PI * grid.dr * np.sum(integrand)) ** (1.0 / p))


def nodal_lebesgue_norm(grid: RadialGrid, values: np.ndarray, p: float) -> float:
    """L^p norm of nodal values f(r_m) (not r-weighted samples)."""
    if not p >= 1:
        raise ValueError(f"Lebesgue exponent must be >= 1, got p={p}")
    a = np.abs(values)
    if np.isinf(p):
        return _sup_norm_nodal(a)
    return float((FOUR_PI * grid.dr * np.sum(grid.r ** 2 * a ** p)) ** (1.0 / p))


@lru_cache(maxsize=8)
def _sine_synthesis(grid: RadialGrid, target: RadialGrid, alpha: float) -> np.ndarray:
    # rows: points alpha*r on the target grid; columns: sqrt(2/M) sin(k_n rho)
    return np.sqrt(2.0 / grid.M) * np.sin(np.outer(alpha * target.r, grid.k))


@dataclass(frozen=True)
class ResampleInfo:
    method: str
    out_of_range_nodes: int
    truncation_loss: float  # relative L^2 mass of the source never read


def resample(field: RadialField, alpha: float, phase=None, amplitude: complex = 1.0,
             conjugate: bool = False, method: str = "cubic",
             target: RadialGrid | None = None):
    """Return amplitude * phase(r) * [conj] f(alpha r) sampled on ``target``.

    ``target`` defaults to the field's own grid; a source on a larger grid
    lets alpha > 1 read past the target's R.  ``method`` is "cubic" (spline
    through g with g(0) = g(R) = 0) or "bandlimited" (direct evaluation of
    the sine series).  Requests beyond the source's last node read zero.
    """
    if not alpha > 0:
        raise ValueError(f"scale must be positive, got alpha={alpha}")
    grid = field.grid
    target = grid if target is None else target
    r = target.r
    rho = alpha * r
    r_last = grid.r[-1]
    outside = rho > r_last * (1 + 1e-12)
    if method == "cubic":
        nodes = np.concatenate(([0.0], grid.r, [grid.R]))
        vals = np.concatenate(([0.0], field.samples, [0.0]))
        g_src = CubicSpline(nodes, vals)(np.minimum(rho, grid.R))
    elif method == "bandlimited":
        g_src = _sine_synthesis(grid, target, float(alpha)) @ dst_forward(field).coeffs
    else:
        raise ValueError(f"unknown interpolation method {method!r}")
    g_src = np.where(outside, 0.0, g_src)
    if conjugate:
        g_src = np.conj(g_src)
    out = amplitude * g_src / alpha
    if phase is not None:
        out = out * np.asarray(phase(r))

    unread = grid.r > alpha * target.r[-1] * (1 + 1e-12)
    total = np.sum(np.abs(field.samples) ** 2)
    loss = float(np.sqrt(np.sum(np.abs(field.samples[unread]) ** 2) / total)) if total > 0 else 0.0
    info = ResampleInfo(method, int(np.count_nonzero(outside)), loss)
    return RadialField(target, out), info


def relative_l2_error(a: RadialField, b: RadialField) -> float:
    den = l2_norm(b)
    num = l2_norm(a - b)
    return num / den if den > 0 else num
