"""Strang split-step integration of the quadratic NLS and its pseudo-conformal twin.

Autonomous equation:      i u_t + 1/2 Lap u = |u|^p u
Nonautonomous equation:   i U_t + 1/2 Lap U = t^{3p/2 - 2} |U|^p U   (t > 0)

Both nonlinear substeps are solved exactly: |U| is invariant under the
nonlinear flow, so U <- exp(-i |U|^p int c(s) ds) U with the exact time
integral of the coefficient c.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.fft import dst

from .radial_spectral import RadialField, RadialGrid, FOUR_PI
from .norms import (
    EnergyTrace, HistoryAccumulator, SpaceTimeTrace, energy, gradient_sq, mass,
    modified_energy, potential_integral, pseudo_conformal_P, sobolev_norm,
)
from .radial_spectral import lebesgue_norm

logger = logging.getLogger(__name__)

EQUATIONS = ("nls", "pc")


class StepFailure(RuntimeError):
    def __init__(self, t: float, reason: str):
        super().__init__(f"step failed at t={t:.6g}: {reason}")
        self.t = t


@dataclass
class SolverConfig:
    R: float = 32.0
    M: int = 2048
    dt: float = 1e-3
    splitting: str = "strang"
    direction: str = "forward"
    stride: int = 1
    boundary_tol: float = 1e-6
    seed: int = 0
    p: float = 1.0
    schedule: str = "uniform"  # or "geometric": dt proportional to t
    geometric_ratio: float = 0.01
    nonlinear: bool = True  # test hook: False gives the free flow

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("time step must be positive")
        if self.stride < 1:
            raise ValueError("store stride must be >= 1")
        if self.splitting != "strang":
            raise ValueError(f"unsupported splitting {self.splitting!r}")
        if self.direction not in ("forward", "backward"):
            raise ValueError(f"direction must be forward or backward, got {self.direction!r}")
        if self.schedule not in ("uniform", "geometric"):
            raise ValueError(f"unknown schedule {self.schedule!r}")

    @property
    def grid(self) -> RadialGrid:
        return RadialGrid(self.R, self.M)

    def to_dict(self) -> dict:
        return asdict(self)


def _linear(samples: np.ndarray, phase: np.ndarray) -> np.ndarray:
    return dst(dst(samples, type=1, norm="ortho") * phase, type=1, norm="ortho")


def _coefficient_integral(t: float, dt: float, p: float) -> float:
    """int_t^{t+dt} s^a ds with a = 3p/2 - 2."""
    a = 1.5 * p - 2.0
    t1 = t + dt
    if a == -1.0:
        return math.log(t1 / t)
    if a == -0.5:
        # 2 (sqrt(t1) - sqrt(t)) in a cancellation-free form
        return 2.0 * dt / (math.sqrt(t1) + math.sqrt(t))
    return (t1 ** (a + 1) - t ** (a + 1)) / (a + 1)


class Stepper:
    """Holds the half-step phases for one grid and step size."""

    def __init__(self, grid: RadialGrid, dt: float, p: float = 1.0, nonlinear: bool = True):
        self.grid = grid
        self.dt = dt
        self.p = p
        self.nonlinear = nonlinear
        self.half = np.exp(-0.25j * grid.k ** 2 * dt)

    def _nonlinear_phase(self, g: np.ndarray, weight: float) -> np.ndarray:
        if not self.nonlinear:
            return g
        amp = np.abs(g) / self.grid.r
        if self.p != 1.0:
            amp = amp ** self.p
        return g * np.exp(-1j * weight * amp)

    def autonomous(self, g: np.ndarray) -> np.ndarray:
        g = _linear(g, self.half)
        g = self._nonlinear_phase(g, self.dt)
        return _linear(g, self.half)

    def nonautonomous(self, g: np.ndarray, t: float) -> np.ndarray:
        if not (t > 0 and t + self.dt > 0):
            raise StepFailure(t, "nonautonomous step would cross t = 0")
        g = _linear(g, self.half)
        g = self._nonlinear_phase(g, _coefficient_integral(t, self.dt, self.p))
        return _linear(g, self.half)


def step_autonomous(field: RadialField, dt: float, p: float = 1.0,
                    nonlinear: bool = True) -> RadialField:
    """One Strang step of i u_t + 1/2 Lap u = |u|^p u (dt may be negative)."""
    out = Stepper(field.grid, dt, p, nonlinear).autonomous(field.samples)
    if not np.all(np.isfinite(out)):
        raise StepFailure(0.0, "non-finite field")
    return RadialField(field.grid, out)


def step_nonautonomous(field: RadialField, t: float, dt: float, p: float = 1.0,
                       nonlinear: bool = True) -> RadialField:
    """One Strang step of i U_t + 1/2 Lap U = t^{3p/2-2} |U|^p U from t to t + dt."""
    out = Stepper(field.grid, dt, p, nonlinear).nonautonomous(field.samples, t)
    if not np.all(np.isfinite(out)):
        raise StepFailure(t, "non-finite field")
    return RadialField(field.grid, out)


def time_nodes(t_start: float, t_end: float, config: SolverConfig) -> np.ndarray:
    """Step boundaries from t_start to t_end (either direction)."""
    span = t_end - t_start
    if span == 0:
        raise ValueError("time span has zero length")
    if config.schedule == "uniform":
        n = max(1, int(round(abs(span) / config.dt)))
        return np.linspace(t_start, t_end, n + 1)
    # geometric: dt ~ ratio * t, capped at config.dt
    if min(t_start, t_end) <= 0:
        raise ValueError("geometric schedule needs a window inside (0, inf)")
    nodes = [t_start]
    sgn = np.sign(span)
    t = t_start
    while sgn * (t_end - t) > 1e-14:
        h = min(config.dt, config.geometric_ratio * t)
        t = t + sgn * h
        if sgn * (t - t_end) > 0:
            t = t_end
        nodes.append(t)
    return np.array(nodes)


@dataclass
class EvolutionResult:
    trace: SpaceTimeTrace
    energy: EnergyTrace
    config: SolverConfig
    equation: str
    boundary_ok: bool = True
    steps: int = 0

    @property
    def final(self) -> RadialField:
        return self.trace.field(-1)


def _records(f: RadialField, t: float, equation: str, p: float, history: HistoryAccumulator | None):
    pot = potential_integral(f, p)
    rec = {"t": t, "mass": mass(f), "energy": 0.25 * gradient_sq(f) + pot / (p + 2)}
    if equation == "nls" and history is not None:
        hist = history.add(t, pot)
        rec["P"] = pseudo_conformal_P(f, t, hist, p)
    return rec


def evolve(config: SolverConfig, initial: RadialField, t_span: tuple[float, float],
           equation: str = "nls", record_energy: bool = True) -> EvolutionResult:
    """Integrate from t_span[0] to t_span[1]; backward when t_span[1] < t_span[0].

    Snapshots are kept every ``config.stride`` steps (first and last always).
    For the autonomous equation the energy trace carries P with its history
    integral accumulated from t_span[0] by the trapezoid rule on step nodes.
    """
    if equation not in EQUATIONS:
        raise ValueError(f"unknown equation {equation!r}")
    t0, t1 = map(float, t_span)
    if t0 == t1:
        raise ValueError("time span has zero length")
    if equation == "pc" and min(t0, t1) <= 0:
        raise ValueError("the nonautonomous equation needs a span inside (0, inf)")
    nodes = time_nodes(t0, t1, config)
    grid = initial.grid
    if (grid.R, grid.M) != (config.R, config.M):
        logger.info("initial field grid (R=%g, M=%d) overrides config grid", grid.R, grid.M)

    history = HistoryAccumulator(t_start=t0) if (equation == "nls" and record_energy) else None
    etrace = EnergyTrace(history=history)
    g = initial.samples.copy()
    kept_t, kept = [t0], [g.copy()]
    if record_energy:
        etrace.append(**_records(initial, t0, equation, config.p, history))

    steppers: dict[float, Stepper] = {}
    boundary_ok = True
    for i in range(len(nodes) - 1):
        t, h = nodes[i], nodes[i + 1] - nodes[i]
        key = round(h, 15)
        st = steppers.get(key)
        if st is None:
            st = steppers.setdefault(key, Stepper(grid, h, config.p, config.nonlinear))
        g = st.autonomous(g) if equation == "nls" else st.nonautonomous(g, t)
        if not np.all(np.isfinite(g)):
            raise StepFailure(nodes[i + 1], "non-finite field")
        last = i == len(nodes) - 2
        if record_energy:
            etrace.append(**_records(RadialField(grid, g), nodes[i + 1], equation, config.p, history))
        if (i + 1) % config.stride == 0 or last:
            kept_t.append(nodes[i + 1])
            kept.append(g.copy())
    final = RadialField(grid, g)
    boundary_ok = final.boundary_ratio() <= config.boundary_tol
    if not boundary_ok:
        logger.warning("boundary ratio %.2e exceeds tolerance %.1e at t=%g",
                       final.boundary_ratio(), config.boundary_tol, t1)
    trace = SpaceTimeTrace(grid, np.array(kept_t), np.array(kept), config.stride)
    return EvolutionResult(trace, etrace.seal(), config, equation, boundary_ok, len(nodes) - 1)


# ---------------------------------------------------------------- energy increment

def _fd_derivative(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Second-order centred differences on interior nodes (nonuniform allowed)."""
    y = np.asarray(y)
    shape = (-1,) + (1,) * (y.ndim - 1)
    h0 = (t[1:-1] - t[:-2]).reshape(shape)
    h1 = (t[2:] - t[1:-1]).reshape(shape)
    return (-h1 / (h0 * (h0 + h1)) * y[:-2]
            + (h1 - h0) / (h0 * h1) * y[1:-1]
            + h0 / (h1 * (h0 + h1)) * y[2:])


def increment_terms(U: RadialField, V: RadialField, t: float) -> dict:
    """Pointwise-in-time pieces of d/dt of the modified energy.

    W = U - V with V a free wave, so W_t = i (1/2 Lap W - t^{-1/2} |U| U).
    Returns the error integrand -Re int (|U|U - |W|W) conj(W_t) dx, the
    gradient energy ||nabla W||^2 and calE(t).
    """
    from .radial_spectral import laplacian
    grid = U.grid
    W = U - V
    r = grid.r
    uu = np.abs(U.samples) * U.samples / r  # r * |U| U
    ww = np.abs(W.samples) * W.samples / r
    lapW = laplacian(W).samples
    Wt = 1j * (0.5 * lapW - uu / math.sqrt(t))
    err = -float(np.real(FOUR_PI * grid.dr * np.sum((uu - ww) * np.conj(Wt))))
    grad = gradient_sq(W)
    return {"error_integrand": err, "grad_sq": grad, "calE": modified_energy(W, t)}


@dataclass
class IncrementReport:
    times: np.ndarray
    calE: np.ndarray
    fd_derivative: np.ndarray
    candidates: dict  # exponent -> integrand on interior times
    residuals: dict   # exponent -> max |fd - candidate|
    floor: float
    splitting_floor: float
    fd_floor: float
    matched: list
    winner: float | None
    error_term: np.ndarray  # running e(t) = int_t^{T0} error integrand
    tolerance_factor: float = 5.0

    def to_dict(self) -> dict:
        return {
            "residual_plus_half": self.residuals[0.5],
            "residual_minus_half": self.residuals[-0.5],
            "floor": self.floor, "splitting_floor": self.splitting_floor,
            "fd_floor": self.fd_floor, "matched_exponents": self.matched,
            "winning_exponent": self.winner, "tolerance_factor": self.tolerance_factor,
            "e_total": float(self.error_term[0]) if len(self.error_term) else 0.0,
        }


def _increment_series(U_trace: SpaceTimeTrace, V_of_t):
    rows = [increment_terms(U, V_of_t(t), t) for t, U in zip(U_trace.times, U_trace.fields())]
    t = U_trace.times
    order = np.argsort(t)
    t = t[order]
    cal = np.array([rows[i]["calE"] for i in order])
    err = np.array([rows[i]["error_integrand"] for i in order])
    grad = np.array([rows[i]["grad_sq"] for i in order])
    return t, cal, err, grad


def energy_increment_check(U_trace: SpaceTimeTrace, V_of_t, reference: SpaceTimeTrace | None = None,
                           tolerance_factor: float = 5.0) -> IncrementReport:
    """Compare finite differences of calE(t) with both candidate derivatives.

    Candidates: error integrand + (1/8) t^{e} ||nabla W||^2 with e = +1/2 and
    e = -1/2.  ``V_of_t`` returns the free high part at time t.  The floor is
    the Richardson splitting estimate from ``reference`` (same times, half the
    step) plus the finite-difference truncation estimate (stencil 2h vs h).
    """
    if len(U_trace) < 5:
        raise ValueError("need at least five snapshots")
    t, cal, err, grad = _increment_series(U_trace, V_of_t)
    fd = _fd_derivative(t, cal)
    ti = t[1:-1]
    cands = {e: err[1:-1] + 0.125 * ti ** e * grad[1:-1] for e in (0.5, -0.5)}
    residuals = {e: float(np.max(np.abs(fd - c))) for e, c in cands.items()}

    # FD truncation: compare the h stencil with the 2h stencil on common nodes
    fd2 = _fd_derivative(t[::2], cal[::2])
    common = ti[1::2][: len(fd2)]
    fd_h = fd[1::2][: len(fd2)]
    fd_floor = float(np.max(np.abs(fd2 - fd_h)) / 3.0) if len(fd2) else 0.0

    splitting_floor = 0.0
    if reference is not None:
        tr, calr, errr, gradr = _increment_series(reference, V_of_t)
        if len(tr) != len(t) or not np.allclose(tr, t, rtol=0, atol=1e-9):
            raise ValueError("reference trace must share the snapshot times")
        fdr = _fd_derivative(tr, calr)
        for e in (0.5, -0.5):
            cr = errr[1:-1] + 0.125 * ti ** e * gradr[1:-1]
            diff = (fd - cands[e]) - (fdr - cr)
            splitting_floor = max(splitting_floor, float(np.max(np.abs(diff))) * 4.0 / 3.0)
    floor = splitting_floor + fd_floor
    matched = [e for e in (0.5, -0.5) if residuals[e] <= tolerance_factor * floor]
    winner = matched[0] if len(matched) == 1 else None

    # running error e(t) = int_t^{T_end} error integrand, trapezoid from the top
    seg = 0.5 * (err[1:] + err[:-1]) * np.diff(t)
    e_run = np.concatenate((np.cumsum(seg[::-1])[::-1], [0.0]))
    return IncrementReport(t, cal, fd, cands, residuals, floor, splitting_floor, fd_floor,
                           matched, winner, e_run, tolerance_factor)


# ---------------------------------------------------------------- Picard iteration

@dataclass
class PicardReport:
    times: np.ndarray
    differences: list  # sup_t || |J(t)|^s (u^{k+1} - u^k) ||_{L^2}
    ratios: list
    contracted: bool
    converged: bool
    iterations: int
    resolution_R: float  # sup_t || |J(t)|^s u ||_{L^2} of the final iterate
    solution: SpaceTimeTrace = field(repr=False)

    def to_dict(self) -> dict:
        return {"differences": self.differences, "ratios": self.ratios,
                "contracted": self.contracted, "converged": self.converged,
                "iterations": self.iterations, "resolution_R": self.resolution_R}


class PicardDivergence(RuntimeError):
    def __init__(self, report: PicardReport):
        super().__init__(f"Picard iteration is not contracting; ratios {report.ratios[-3:]}, "
                         f"measured R = {report.resolution_R:.3e}")
        self.report = report


def picard_lwp(u_t0: RadialField, t0: float, s: float, T: float, n_time: int = 401,
               max_iter: int = 30, tol: float = 1e-13, p: float = 1.0) -> PicardReport:
    """Duhamel fixed-point iteration on I = [t0 - T, t0 + T].

    u^{k+1}(t) = S(t - t0) u(t0) - i int_{t0}^t S(t - tau) |u^k|^p u^k (tau) d tau,
    the integral written as S(t) int_{t0}^t S(-tau) F(tau) d tau and evaluated
    by the trapezoid rule on ``n_time`` uniform nodes (n_time odd so that t0 is
    a node).  Iteration starts from the free evolution.
    """
    from .transforms import vector_field_J

    if t0 == 0:
        raise ValueError("Picard iteration needs t0 != 0")
    if not 0 < T < abs(t0):
        raise ValueError("need 0 < T < |t0| so that the window avoids t = 0")
    if not 0 <= s <= 1:
        raise ValueError("vector-field order s must lie in [0, 1]")
    if n_time % 2 == 0:
        n_time += 1
    grid = u_t0.grid
    times = np.linspace(t0 - T, t0 + T, n_time)
    mid = n_time // 2
    k2 = grid.k ** 2
    fwd = np.exp(-0.5j * np.outer(times, k2))  # symbol of S(t)
    c0 = dst(u_t0.samples, type=1, norm="ortho") * np.exp(0.5j * t0 * k2)  # S(-t0) u(t0)
    free_c = fwd * c0
    r = grid.r

    def to_space(coeffs):
        return dst(coeffs, type=1, norm="ortho", axis=1)

    def phi(u_space):
        amp = np.abs(u_space) / r
        F = (amp ** p if p != 1.0 else amp) * u_space
        G = dst(F, type=1, norm="ortho", axis=1) * np.conj(fwd)  # S(-tau) F(tau)
        h = times[1] - times[0]
        cum = np.zeros_like(G)
        inc = 0.5 * h * (G[1:] + G[:-1])
        cum[mid + 1:] = np.cumsum(inc[mid:], axis=0)
        cum[:mid] = -np.cumsum(inc[:mid][::-1], axis=0)[::-1]
        return to_space(free_c - 1j * fwd * cum)

    def jnorm(u_space):
        return max(np.sqrt(FOUR_PI * grid.dr * np.sum(np.abs(
            vector_field_J(RadialField(grid, row), t, s).samples) ** 2)) if s > 0 else
            np.sqrt(FOUR_PI * grid.dr * np.sum(np.abs(row) ** 2))
            for t, row in zip(times, u_space))

    u = to_space(free_c)
    diffs, ratios = [], []
    converged = contracted = False
    bad = 0
    for it in range(max_iter):
        nxt = phi(u)
        d = float(jnorm(nxt - u))
        u = nxt
        diffs.append(d)
        if d == 0.0:
            converged = contracted = True
            break
        if len(diffs) > 1:
            ratio = d / diffs[-2]
            ratios.append(ratio)
            bad = bad + 1 if ratio >= 1 else 0
            if bad >= 3:
                break
        if d <= tol * max(1.0, jnorm(u)):
            converged = True
            break
    if ratios:
        contracted = all(x < 1 for x in ratios)
    report = PicardReport(times, diffs, ratios, contracted, converged, len(diffs),
                          float(jnorm(u)), SpaceTimeTrace(grid, times, u))
    if bad >= 3:
        raise PicardDivergence(report)
    return report
