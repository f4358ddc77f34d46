"""Deterministic radial test data.

Every corpus member is a function of r built from a seeded generator, so the
same seed gives the same profile on any grid and bit-identical samples on the
same grid.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .lp_decomp import spatial_cutoff_values
from .radial_spectral import RadialField, RadialGrid, sample_function

CORPUS_KINDS = ("gaussian_mix", "shell_bump", "random_bandlimited")

# declared parameter ranges
GAUSSIAN_TERMS = (1, 3)
GAUSSIAN_WIDTH = (0.5, 2.0)     # a_i in exp(-a_i r^2)
SHELL_INDEX = (0, 2)            # j in chi_j
BAND = (0.5, 2.5)               # frequencies of the random sine modes
BAND_MODES = 6
BAND_ENVELOPE = 3.0             # Gaussian envelope width keeping the data localized


def _rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit value")
    return np.random.default_rng(seed)


def gaussian_mix(seed: int) -> Callable:
    rng = _rng(seed)
    n = int(rng.integers(GAUSSIAN_TERMS[0], GAUSSIAN_TERMS[1] + 1))
    c = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    a = rng.uniform(*GAUSSIAN_WIDTH, n)
    return lambda r: np.sum(c[:, None] * np.exp(-a[:, None] * np.asarray(r) ** 2), axis=0)


def shell_bump(seed: int, j: int | None = None) -> Callable:
    rng = _rng(seed)
    jj = int(rng.integers(SHELL_INDEX[0], SHELL_INDEX[1] + 1)) if j is None else int(j)
    amp = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
    return lambda r: amp * spatial_cutoff_values(r, jj, "chi")


def random_bandlimited(seed: int) -> Callable:
    """sum_i a_i sin(kappa_i r) / r under a Gaussian envelope, kappa_i in BAND."""
    rng = _rng(seed)
    kappa = rng.uniform(*BAND, BAND_MODES)
    a = rng.normal(size=BAND_MODES) + 1j * rng.normal(size=BAND_MODES)
    a /= np.sqrt(BAND_MODES)

    def f(r):
        r = np.asarray(r, dtype=float)
        waves = np.sum(a[:, None] * np.sin(kappa[:, None] * r), axis=0)
        return waves / r * np.exp(-0.5 * (r / BAND_ENVELOPE) ** 2)
    return f


_KINDS = {"gaussian_mix": gaussian_mix, "shell_bump": shell_bump,
          "random_bandlimited": random_bandlimited}


def profile(seed: int, kind: str, **params) -> Callable:
    try:
        maker = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown corpus kind {kind!r}; expected one of {CORPUS_KINDS}") from None
    return maker(seed, **params)


def corpus(seed: int, kind: str, grid: RadialGrid | None = None, **params) -> RadialField:
    grid = RadialGrid() if grid is None else grid
    return sample_function(grid, profile(seed, kind, **params))


def gaussian(grid: RadialGrid, amplitude: float = 1.0, width: float = 1.0) -> RadialField:
    """The standard test datum amplitude * exp(-r^2 / (2 width^2))."""
    return sample_function(grid, lambda r: amplitude * np.exp(-0.5 * (r / width) ** 2))


def make_data(spec: dict | None, grid: RadialGrid) -> RadialField:
    """Build initial data from a manifest entry.

    ``{"kind": "gaussian", "amplitude": a, "width": w}``, ``{"kind": "zero"}`` or
    ``{"kind": <corpus kind>, "seed": s, ...}``; None means the standard Gaussian.
    """
    spec = dict(spec or {"kind": "gaussian"})
    kind = spec.pop("kind", "gaussian")
    if kind == "gaussian":
        return gaussian(grid, **spec)
    if kind == "zero":
        return RadialField(grid, np.zeros(grid.n, dtype=complex))
    seed = spec.pop("seed", 0)
    return corpus(seed, kind, grid, **spec)
