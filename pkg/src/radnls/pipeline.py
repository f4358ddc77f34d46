"""High-low splitting pipeline: split the data, evolve the pseudo-conformal equation
backward from T0 to t0 and track the modified energy of the smooth part."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.fft import dst
from scipy.integrate import trapezoid

from .lp_decomp import DecompositionReport, split_high_low, project_dyadic, dyadic_band
from .norms import (
    EnergyTrace, SpaceTimeTrace, gradient_sq, mass, modified_energy, potential_integral,
    sobolev_norm,
)
from .radial_spectral import FOUR_PI, RadialField, lebesgue_norm
from .solver import SolverConfig, evolve, energy_increment_check, IncrementReport
from .transforms import conj_fourier_final_data, free_propagate

logger = logging.getLogger(__name__)


@dataclass
class PipelineReport:
    decomposition: DecompositionReport
    energy: EnergyTrace
    U_trace: SpaceTimeTrace = field(repr=False)
    t0: float = 0.0
    T0: float = 0.0
    bootstrap_held: bool = True
    truncation_ok: bool = True
    A: float = 0.0
    calE_T0: float = 0.0
    sup_calE: float = 0.0
    margin: float = 0.0
    duhamel_tail_proxy: float = 0.0
    high_frequency_leak: float = 0.0
    segments: list = field(default_factory=list)
    max_boundary_ratio: float = 0.0
    increment: IncrementReport | None = None
    config: dict = field(default_factory=dict)

    def V_at(self, t: float) -> RadialField:
        return free_propagate(self.decomposition.V_plus, t)

    def to_dict(self) -> dict:
        d = {
            "decomposition": self.decomposition.to_dict(),
            "t0": self.t0, "T0": self.T0,
            "flags": {"bootstrap_held": self.bootstrap_held, "truncation_ok": self.truncation_ok},
            "A": self.A, "calE_T0": self.calE_T0, "sup_calE": self.sup_calE,
            "bound_2A_N0": 2 * self.A * self.decomposition.N0,
            "margin": self.margin,
            "duhamel_tail_proxy": self.duhamel_tail_proxy,
            "high_frequency_leak": self.high_frequency_leak,
            "max_boundary_ratio": self.max_boundary_ratio,
            "segments": self.segments,
            "energy_summary": self.energy.summary(),
            "config": self.config,
        }
        if self.increment is not None:
            d["energy_increment"] = self.increment.to_dict()
        return d

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def high_frequency_leak(V_plus: RadialField, N0: float) -> float:
    """Fraction of ||V_+||^2 carried by P_N V_+ with N <= N0 / 8."""
    total = mass(V_plus)
    if total == 0:
        return 0.0
    low = sum(mass(project_dyadic(V_plus, N, warn=False))
              for N in dyadic_band(V_plus.grid) if N <= N0 / 8)
    return low / total


def duhamel_tail(U_plus: RadialField, T0: float, T_far: float | None = None, n: int = 257) -> float:
    """|| int_{T0}^inf S(-s) s^{-1/2} |U|U(s) ds ||_{L^2} with U(s) = S(s) U_+.

    One Picard correction: quadrature on [T0, T_far] plus a power-law tail
    n(T_far) * T_far, where n(s) ~ s^{-2} is the integrand norm for a
    dispersing free wave.
    """
    T_far = 2 * T0 if T_far is None else T_far
    grid = U_plus.grid
    s = np.linspace(T0, T_far, n)
    k2 = grid.k ** 2
    c_plus = dst(U_plus.samples, type=1, norm="ortho")
    acc = []
    norms = []
    for si in s:
        u = dst(c_plus * np.exp(-0.5j * k2 * si), type=1, norm="ortho")
        F = np.abs(u) * u / grid.r / math.sqrt(si)
        G = dst(F, type=1, norm="ortho") * np.exp(0.5j * k2 * si)
        acc.append(G)
        norms.append(math.sqrt(FOUR_PI * grid.dr * np.sum(np.abs(F) ** 2)))
    integral = trapezoid(np.array(acc), s, axis=0)
    body = math.sqrt(FOUR_PI * grid.dr * np.sum(np.abs(integral) ** 2))
    return body + norms[-1] * T_far


def _segments(t0: float, T0: float) -> list[tuple[float, float]]:
    """[T0/2, T0], [T0/4, T0/2], ... down to t0."""
    out = []
    hi = T0
    while hi > t0 * (1 + 1e-12):
        lo = max(hi / 2, t0)
        out.append((lo, hi))
        hi = lo
    return out


def _pipeline_run(U_T0: RadialField, V_plus: RadialField, t0: float, T0: float,
                  config: SolverConfig):
    run = evolve(config, U_T0, (T0, t0), equation="pc", record_energy=False)
    return run.trace


def run_high_low_pipeline(u0: RadialField, delta0: float, t0: float, T0: float,
                          config: SolverConfig, increment_check: bool = False,
                          increment_window: tuple[float, float] | None = None) -> PipelineReport:
    """Split u0, set U(T0) = S(T0) F^{-1} conj(u0), integrate backward to t0.

    V = S(t) V_+ is evaluated spectrally at every kept time, W = U - V, and the
    modified energy calE(t) of W is recorded.  With ``increment_check`` a
    second run at dt/2 feeds the energy-increment comparison over
    ``increment_window`` (default: the whole span).
    """
    if not 0 < t0 < T0:
        raise ValueError("need 0 < t0 < T0")
    dec = split_high_low(u0, delta0)
    U_plus = dec.V_plus + dec.W_plus
    U_T0 = free_propagate(U_plus, T0)
    trace = _pipeline_run(U_T0, dec.V_plus, t0, T0, config)

    etrace = EnergyTrace()
    boundary = 0.0
    calEs = []
    for t, U in zip(trace.times, trace.fields()):
        V = free_propagate(dec.V_plus, t)
        W = U - V
        cal = modified_energy(W, t)
        calEs.append(cal)
        boundary = max(boundary, U.boundary_ratio())
        etrace.append(t=t, mass=mass(U), energy=0.25 * gradient_sq(U) + potential_integral(U) / 3,
                      calE=cal, h1_W=math.sqrt(gradient_sq(W)), l3_W=lebesgue_norm(W, 3),
                      h12_W=sobolev_norm(W, 0.5))
    etrace.seal()
    calEs = np.array(calEs)
    cal_T0 = float(calEs[0])
    sup_cal = float(np.max(calEs))
    A = cal_T0 / dec.N0
    bound = 2 * A * dec.N0
    held = bool(sup_cal <= bound)
    truncation_ok = boundary <= config.boundary_tol

    segs = []
    times = trace.times
    for lo, hi in _segments(t0, T0):
        sel = (times >= lo - 1e-12) & (times <= hi + 1e-12)
        if not np.any(sel):
            continue
        c = calEs[sel]
        m = etrace.column("mass")[sel]
        segs.append({"interval": [lo, hi], "calE_min": float(c.min()), "calE_max": float(c.max()),
                     "mass_drift": float(np.max(np.abs(m - m[0])) / m[0]) if m[0] else 0.0})

    report = PipelineReport(
        decomposition=dec, energy=etrace, U_trace=trace, t0=t0, T0=T0,
        bootstrap_held=held, truncation_ok=truncation_ok, A=A, calE_T0=cal_T0,
        sup_calE=sup_cal, margin=bound - sup_cal,
        duhamel_tail_proxy=duhamel_tail(U_plus, T0),
        high_frequency_leak=high_frequency_leak(dec.V_plus, dec.N0),
        segments=segs, max_boundary_ratio=boundary, config=config.to_dict(),
    )
    if increment_check:
        report.increment = increment_check_for(report, config, increment_window)
    return report


def increment_check_for(report: PipelineReport, config: SolverConfig,
                        window: tuple[float, float] | None = None) -> IncrementReport:
    """Energy-increment comparison on a pipeline run, with a dt/2 reference run."""
    dec = report.decomposition
    U_plus = dec.V_plus + dec.W_plus
    U_T0 = free_propagate(U_plus, report.T0)
    fine = replace(config, dt=config.dt / 2, stride=config.stride * 2)
    ref = _pipeline_run(U_T0, dec.V_plus, report.t0, report.T0, fine)
    trace = report.U_trace
    if window is not None:
        trace = trace.restrict(*window)
        ref = ref.restrict(*window)
    return energy_increment_check(trace, lambda t: free_propagate(dec.V_plus, t), reference=ref)
