"""Smooth cutoffs, spatial dyadic shells, Littlewood-Paley projections and the high-low split."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .radial_spectral import RadialField, RadialGrid, FOUR_PI, multiply_fourier
from .transforms import conj_fourier_final_data

logger = logging.getLogger(__name__)


def cutoff_profile(r) -> np.ndarray:
    """phi: 1 on [0, 1], 0 beyond 2, degree-7 smoothstep in between (C^3 joins)."""
    x = np.clip(np.asarray(r, dtype=float) - 1.0, 0.0, 1.0)
    step = x ** 4 * (35.0 - 84.0 * x + 70.0 * x ** 2 - 20.0 * x ** 3)
    return 1.0 - step


CUTOFF_KINDS = ("chi", "chi_le", "chi_ge", "chi_tilde", "chi_tilde2")


def spatial_cutoff_values(r, j: int, kind: str = "chi") -> np.ndarray:
    """Values of chi_j, chi_{<=j}, chi_{>=j} = 1 - chi_{<=j}, or the fattened shells."""
    r = np.asarray(r, dtype=float)
    phi = cutoff_profile
    if kind == "chi":
        return phi(2.0 ** -j * r) - phi(2.0 ** (-j + 1) * r)
    if kind == "chi_le":
        return phi(2.0 ** -j * r)
    if kind == "chi_ge":
        return 1.0 - phi(2.0 ** -j * r)
    if kind == "chi_tilde":
        return phi(2.0 ** (-j - 1) * r) - phi(2.0 ** (-j + 2) * r)
    if kind == "chi_tilde2":
        return phi(2.0 ** (-j - 2) * r) - phi(2.0 ** (-j + 3) * r)
    raise ValueError(f"unknown cutoff kind {kind!r}; expected one of {CUTOFF_KINDS}")


def shell_resolved(grid: RadialGrid, j: int) -> bool:
    return 2.0 ** j >= 4 * grid.dr and 2.0 ** (j + 1) <= grid.R


def spatial_cutoff(field: RadialField, j: int, kind: str = "chi") -> RadialField:
    if not shell_resolved(field.grid, j):
        logger.warning("shell 2^%d not resolved on grid R=%g, M=%d", j, field.grid.R, field.grid.M)
    return RadialField(field.grid, field.samples * spatial_cutoff_values(field.grid.r, j, kind))


# ---------------------------------------------------------------- frequency side

def dyadic_frequency(grid: RadialGrid, j: int) -> float:
    """N = 2^j * pi / R, aligned with the discrete spectrum."""
    return 2.0 ** j * grid.k_min


def dyadic_band(grid: RadialGrid) -> list[float]:
    """Every dyadic N whose multiplier touches the grid spectrum.

    With N from pi/(2R) up to the first N >= k_max the multipliers
    telescope to exactly one on every k_n.
    """
    j_hi = int(math.ceil(math.log2(grid.M - 1)))
    return [dyadic_frequency(grid, j) for j in range(-1, j_hi + 1)]


def resolvable(grid: RadialGrid, N: float) -> bool:
    return 4 * grid.k_min <= N <= grid.k_max / 4


def lp_multiplier(k: np.ndarray, N: float) -> np.ndarray:
    return cutoff_profile(k / N) - cutoff_profile(2.0 * k / N)


def project_dyadic(field: RadialField, N: float, warn: bool = True) -> RadialField:
    """P_N f with symbol phi(|xi|/N) - phi(2|xi|/N), supported in N/2 < |xi| < 2N."""
    if warn and not resolvable(field.grid, N):
        logger.warning("frequency N=%g outside resolvable band [%g, %g]",
                       N, 4 * field.grid.k_min, field.grid.k_max / 4)
    return multiply_fourier(field, lp_multiplier(field.grid.k, N))


def lp_pieces(field: RadialField, band=None) -> dict[float, RadialField]:
    band = dyadic_band(field.grid) if band is None else band
    return {N: project_dyadic(field, N, warn=False) for N in band}


def square_function(field: RadialField) -> np.ndarray:
    """Nodal values of (sum_N |P_N f|^2)^{1/2}."""
    pieces = lp_pieces(field)
    acc = np.zeros(field.grid.n)
    for piece in pieces.values():
        acc += np.abs(piece.values) ** 2
    return np.sqrt(acc)


# ---------------------------------------------------------------- high-low split

def weighted_tail(u0: RadialField, N0: float) -> float:
    """|| |x|^{1/2} chi_{>=N0} u0 ||_{L^2}."""
    g = u0.grid
    w = 1.0 - cutoff_profile(g.r / N0)
    return float(np.sqrt(FOUR_PI * g.dr * np.sum(g.r * np.abs(w * u0.samples) ** 2)))


@dataclass
class DecompositionReport:
    delta0: float
    N0: float
    tail_norm: float
    v0: RadialField = field(repr=False)
    w0: RadialField = field(repr=False)
    V_plus: RadialField = field(repr=False)
    W_plus: RadialField = field(repr=False)
    v_norms: dict = field(default_factory=dict)
    w_norms: dict = field(default_factory=dict)
    tail_at_half: float | None = None

    def to_dict(self) -> dict:
        return {"delta0": self.delta0, "N0": self.N0, "tail_norm": self.tail_norm,
                "tail_at_half_N0": self.tail_at_half,
                "v_norms": self.v_norms, "w_norms": self.w_norms}

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


class SplitFailure(ValueError):
    def __init__(self, residual: float, N_max: float):
        super().__init__(f"no dyadic N0 <= {N_max:g} gives weighted tail <= delta0 "
                         f"(residual tail {residual:.3e})")
        self.residual = residual


def split_high_low(u0: RadialField, delta0: float) -> DecompositionReport:
    """Smallest dyadic N0 > 1 with || |x|^{1/2} chi_{>=N0} u0 || <= delta0, and the split data."""
    from .norms import sobolev_norm, weighted_norm

    if not delta0 > 0:
        raise ValueError("delta0 must be positive")
    g = u0.grid
    N0, tail = 2.0, weighted_tail(u0, 2.0)
    while tail > delta0:
        if 2 * N0 > g.R / 4:
            raise SplitFailure(tail, N0)
        N0 *= 2
        tail = weighted_tail(u0, N0)
    chi_ge = 1.0 - cutoff_profile(g.r / N0)
    v0 = RadialField(g, chi_ge * u0.samples)
    w0 = u0 - v0
    V_plus = conj_fourier_final_data(v0)
    W_plus = conj_fourier_final_data(w0)
    v_norms = {
        "weighted_half_v0": weighted_norm(v0, 0.5),
        "h12_Vplus": sobolev_norm(V_plus, 0.5),
        "l2_Vplus": sobolev_norm(V_plus, 0.0),
    }
    w_norms = {
        "weighted_half_w0": weighted_norm(w0, 0.5),
        "weighted_one_w0": weighted_norm(w0, 1.0),
        "h12_Wplus": sobolev_norm(W_plus, 0.5),
        "h1_Wplus": sobolev_norm(W_plus, 1.0),
        "h1_Wplus_over_sqrtN0": sobolev_norm(W_plus, 1.0) / math.sqrt(N0),
    }
    half = weighted_tail(u0, N0 / 2) if N0 > 2 else None
    return DecompositionReport(delta0, N0, tail, v0, w0, V_plus, W_plus, v_norms, w_norms, half)
