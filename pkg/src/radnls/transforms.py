"""Linear propagator, modulation, vector field |J(t)|^s and the pseudo-conformal map.

Conventions (radial data on R^3):

* S(t) = exp(i t Laplacian / 2) acts on sine coefficients as exp(-i k^2 t / 2).
* M(t) = exp(i |x|^2 / (2t)).
* Fourier transform with (2 pi)^{-3/2} normalisation on both sides.  For radial
  functions F and F^{-1} coincide, so the identity T S(t) f = S(t) F^{-1} conj(f)
  carries no sign ambiguity; ``FOURIER_CONVENTION`` records the pair used.
* Complex powers (i t)^{-3/2} and (2 pi i t)^{-3/2} use the principal branch,
  i^{-3/2} = exp(-3 pi i / 4).
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .radial_spectral import (
    RadialField, RadialGrid, ResampleInfo, dst_forward, dst_inverse,
    apply_multiplier, multiply_fourier, resample,
)

FOURIER_CONVENTION = (
    "F f(xi) = (2pi)^{-3/2} int e^{-i x.xi} f dx; "
    "F^{-1} g(x) = (2pi)^{-3/2} int e^{+i x.xi} g dxi; equal on radial functions"
)
BRANCH = "principal: (i t)^{-3/2} = |t|^{-3/2} exp(-3 pi i sign(t) / 4)"


def _require_nonzero(t: float, what: str):
    if t == 0:
        raise ValueError(f"{what} is undefined at t = 0")
    if not np.isfinite(t):
        raise ValueError(f"{what}: non-finite time {t}")


def propagator_symbol(grid: RadialGrid, t: float) -> np.ndarray:
    return np.exp(-0.5j * grid.k ** 2 * t)


def free_propagate(field: RadialField, t: float) -> RadialField:
    """S(t) f, exact on the sine spectrum."""
    if t == 0:
        return field
    return multiply_fourier(field, propagator_symbol(field.grid, t))


@lru_cache(maxsize=4)
def _sin_matrix(grid: RadialGrid, scale: float) -> np.ndarray:
    r = grid.r
    return np.sin(np.outer(r, r) * scale)


def kernel_propagate(field: RadialField, t: float) -> RadialField:
    """S(t) f by direct quadrature of the free Schrodinger kernel.

    After the angular integral the radial kernel is
        r S(t)f(r) = (2 pi i t)^{-3/2} 4 pi t e^{i r^2/2t}
                      int_0^R e^{i rho^2/2t} rho f(rho) sin(r rho / t) d rho,
    evaluated by the trapezoid rule on the grid.  O(M^2) work and memory.
    """
    _require_nonzero(t, "kernel propagation")
    grid = field.grid
    r = grid.r
    pref = (2j * np.pi * t) ** -1.5 * 4 * np.pi * t * grid.dr
    inner = np.exp(0.5j * r ** 2 / t) * field.samples
    out = pref * np.exp(0.5j * r ** 2 / t) * (_sin_matrix(grid, 1.0 / t) @ inner)
    return RadialField(grid, out)


def modulation(grid: RadialGrid, t: float) -> np.ndarray:
    _require_nonzero(t, "modulation M(t)")
    return np.exp(0.5j * grid.r ** 2 / t)


def modulate(field: RadialField, t: float, sign: int = +1) -> RadialField:
    """Multiply by M(sign * t) = exp(sign * i r^2 / 2t)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return RadialField(field.grid, field.samples * modulation(field.grid, sign * t))


def vector_field_J(field: RadialField, t: float, s: float) -> RadialField:
    """|J(t)|^s f = M(t) |t nabla|^s M(-t) f."""
    _require_nonzero(t, "vector field J(t)")
    if s < 0:
        raise ValueError("vector-field order must be nonnegative")
    if s == 0:
        return field
    h = modulate(field, t, -1)
    h = multiply_fourier(h, np.abs(t * field.grid.k) ** s)
    return modulate(h, t, +1)


def vector_field_J_conjugated(field: RadialField, t: float, s: float) -> RadialField:
    """|J(t)|^s f via the other presentation S(t) |x|^s S(-t) f."""
    h = free_propagate(field, -t)
    h = RadialField(h.grid, h.samples * h.grid.r ** s)
    return free_propagate(h, t)


def pseudo_conformal(field: RadialField, t: float, method: str = "cubic",
                     target: RadialGrid | None = None) -> tuple[RadialField, ResampleInfo]:
    """Evaluate (T f)(t, .) from the snapshot f(1/t, .).

    (T f)(t, x) = (i t)^{-3/2} e^{i|x|^2/2t} conj(f)(1/t, x/t).  The input
    ``field`` must be the snapshot at time 1/t; the result lives at time t,
    on ``target`` (default: the input grid).  For |t| < 1 the map reads the
    input out to R/|t|; pass an input on a grid that large to avoid the
    truncation reported in the returned ResampleInfo.
    """
    _require_nonzero(t, "pseudo-conformal transform")
    amp = (1j * t) ** -1.5
    return resample(field, 1.0 / abs(t), phase=lambda r: np.exp(0.5j * r ** 2 / t),
                    amplitude=amp, conjugate=True, method=method, target=target)


@lru_cache(maxsize=4)
def _hankel_matrix(grid: RadialGrid) -> np.ndarray:
    return np.sqrt(2.0 / np.pi) * grid.dr * np.sin(np.outer(grid.r, grid.r))


def inverse_fourier(field: RadialField) -> RadialField:
    """F^{-1} of a radial function, on the same radial grid.

    r F^{-1}h(r) = sqrt(2/pi) int_0^inf rho h(rho) sin(r rho) d rho; the input
    is read as a function of the frequency radius rho sampled at the nodes.
    """
    return RadialField(field.grid, _hankel_matrix(field.grid) @ field.samples)


def conj_fourier_final_data(field: RadialField) -> RadialField:
    """The final-data map f -> F^{-1} conj(f)."""
    return inverse_fourier(field.conj())
