"""Conserved and almost-conserved functionals, space-time norms and inequality audits."""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .radial_spectral import (
    FOUR_PI, RadialField, RadialGrid, dst_forward, frac_laplacian, lebesgue_norm,
    nodal_lebesgue_norm, radial_derivative,
)
from .lp_decomp import dyadic_band, project_dyadic, cutoff_profile, spatial_cutoff_values
from .transforms import free_propagate

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- pointwise-in-time

def mass(field: RadialField) -> float:
    return float(FOUR_PI * field.grid.dr * np.sum(np.abs(field.samples) ** 2))


def gradient_sq(field: RadialField) -> float:
    """||nabla f||_{L^2}^2 = 4 pi dr sum k_n^2 |c_n|^2."""
    c = dst_forward(field).coeffs
    return float(FOUR_PI * field.grid.dr * np.sum(field.grid.k ** 2 * np.abs(c) ** 2))


def potential_integral(field: RadialField, p: float = 1.0) -> float:
    """int |f|^{p+2} dx."""
    return lebesgue_norm(field, p + 2) ** (p + 2)


def energy(field: RadialField, p: float = 1.0) -> float:
    """E = 1/4 ||nabla u||^2 + 1/(p+2) int |u|^{p+2}."""
    if not p > 0:
        raise ValueError("nonlinearity exponent p must be positive")
    return 0.25 * gradient_sq(field) + potential_integral(field, p) / (p + 2)


def modified_energy(W: RadialField, t: float) -> float:
    """1/4 t^{1/2} ||nabla W||^2 + 1/3 ||W||_{L^3}^3, for t > 0."""
    if not t > 0:
        raise ValueError(f"modified energy requires t > 0, got t={t}")
    return 0.25 * math.sqrt(t) * gradient_sq(W) + potential_integral(W, 1.0) / 3.0


SOBOLEV_BAND = (-1.0, 2.0)


def _check_band(s: float) -> float:
    lo, hi = SOBOLEV_BAND
    if not lo <= s <= hi:
        logger.warning("order s=%g outside resolvable band [%g, %g]; clamped", s, lo, hi)
        return min(max(s, lo), hi)
    return s


def sobolev_norm(field: RadialField, s: float) -> float:
    """||  |nabla|^s f ||_{L^2}."""
    s = _check_band(s)
    c = dst_forward(field).coeffs
    return float(np.sqrt(FOUR_PI * field.grid.dr * np.sum(field.grid.k ** (2 * s) * np.abs(c) ** 2)))


def weighted_norm(field: RadialField, s: float) -> float:
    """|| |x|^s f ||_{L^2}."""
    s = _check_band(s)
    g = field.grid
    return float(np.sqrt(FOUR_PI * g.dr * np.sum(g.r ** (2 * s) * np.abs(field.samples) ** 2)))


def scale_field(field: RadialField, lam: float, p: float = 1.0) -> RadialField:
    """Sample f_lam(x) = lam^{2/p} f(lam x), band-limited interpolation."""
    from .radial_spectral import resample
    out, _ = resample(field, lam, amplitude=lam ** (2.0 / p), method="bandlimited")
    return out


def criticality(d: int, p: float) -> dict:
    """Scaling-critical exponent s_c = d/2 - 2/p and the Strauss exponent gamma(d)."""
    if d < 1 or not p > 0:
        raise ValueError("need d >= 1 and p > 0")
    s_c = d / 2 - 2 / p
    gamma = (2 - d + math.sqrt(d * d + 12 * d + 4)) / (2 * d)
    return {"s_c": s_c, "gamma": gamma}


# ---------------------------------------------------------------- traces

@dataclass
class SpaceTimeTrace:
    """Snapshots u(t_i) of one radial field over a time window."""

    grid: RadialGrid
    times: np.ndarray
    samples: np.ndarray  # shape (len(times), grid.n)
    stride: int = 1

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != (len(self.times), self.grid.n):
            raise ValueError("trace samples do not match times x grid")

    @classmethod
    def from_fields(cls, times, fields: Sequence[RadialField], stride: int = 1):
        grid = fields[0].grid
        return cls(grid, np.asarray(times), np.array([f.samples for f in fields]), stride)

    @classmethod
    def free(cls, f: RadialField, times) -> "SpaceTimeTrace":
        times = np.asarray(times, dtype=float)
        return cls.from_fields(times, [free_propagate(f, t) for t in times])

    def __len__(self):
        return len(self.times)

    def field(self, i: int) -> RadialField:
        return RadialField(self.grid, self.samples[i])

    def fields(self):
        for i in range(len(self.times)):
            yield self.field(i)

    @property
    def window(self) -> tuple[float, float]:
        return float(self.times.min()), float(self.times.max())

    def restrict(self, a: float, b: float) -> "SpaceTimeTrace":
        lo, hi = self.window
        if a < lo - 1e-12 or b > hi + 1e-12:
            raise ValueError(f"window [{a}, {b}] outside sampled range [{lo}, {hi}]")
        keep = (self.times >= a - 1e-12) & (self.times <= b + 1e-12)
        return SpaceTimeTrace(self.grid, self.times[keep], self.samples[keep], self.stride)

    def map(self, fn) -> "SpaceTimeTrace":
        return SpaceTimeTrace.from_fields(self.times, [fn(f) for f in self.fields()], self.stride)


def _ordered(times: np.ndarray, values: np.ndarray):
    order = np.argsort(times)
    return times[order], values[order]


def _time_norm(times: np.ndarray, values: np.ndarray, q: float) -> float:
    if len(times) == 0:
        raise ValueError("empty time window")
    if len(times) == 1:
        return float(abs(values[0])) if np.isinf(q) else 0.0
    t, v = _ordered(times, np.abs(values))
    if np.isinf(q):
        return float(np.max(v))
    return float(trapezoid(v ** q, t) ** (1.0 / q))


def strichartz_norm(trace: SpaceTimeTrace, q: float, r: float) -> float:
    """|| u ||_{L_t^q L_x^r} over the trace window (trapezoid in t)."""
    if q < 1 or r < 1:
        raise ValueError("exponents must be >= 1")
    if len(trace) == 0:
        raise ValueError("empty time window")
    spatial = np.array([lebesgue_norm(f, r) for f in trace.fields()])
    return _time_norm(trace.times, spatial, q)


def time_shells(times: np.ndarray, origin: float) -> tuple[np.ndarray, np.ndarray]:
    """Dyadic shell weights chi_j(|t - origin|) for every sample, rows indexed by j."""
    d = np.abs(times - origin)
    pos = d[d > 0]
    if pos.size == 0:
        return np.zeros(0, dtype=int), np.zeros((0, len(times)))
    j_lo = int(np.floor(np.log2(pos.min()))) - 1
    j_hi = int(np.ceil(np.log2(pos.max()))) + 1
    js = np.arange(j_lo, j_hi + 1)
    weights = np.array([spatial_cutoff_values(d, j, "chi") for j in js])
    # the shell sum telescopes to phi(2^-j_hi d) - phi(2^{1-j_lo} d); d = 0 is
    # covered by the lowest shell so that the weights still sum to one
    weights[0] = weights[0] + np.where(d > 0, cutoff_profile(2.0 ** (1 - j_lo) * d), 1.0)
    return js, weights


def lorentz_time_norm(trace: SpaceTimeTrace, q: float, p: float, r: float,
                      origin: float | None = None) -> float:
    """L_t^{q,p} L_x^r via || || F chi_j ||_{L_t^q} ||_{l_j^p}, dyadic in |t - origin|.

    The decomposition origin defaults to the window's left endpoint.
    """
    if q < 1 or r < 1 or p < 1:
        raise ValueError("exponents must be >= 1")
    if len(trace) == 0:
        raise ValueError("empty time window")
    origin = trace.window[0] if origin is None else origin
    spatial = np.array([lebesgue_norm(f, r) for f in trace.fields()])
    _, weights = time_shells(trace.times, origin)
    pieces = np.array([_time_norm(trace.times, spatial * w, q) for w in weights])
    if np.isinf(p):
        return float(pieces.max(initial=0.0))
    return float(np.sum(pieces ** p) ** (1.0 / p))


def local_smoothing_functional(trace: SpaceTimeTrace, sigma: float = 0.0,
                               shells: Sequence[int] | None = None) -> tuple[float, int]:
    """sup_j 2^{-j/2} || chi_j |nabla|^sigma u ||_{L^2_{t,x}}; returns (value, argmax j)."""
    g = trace.grid
    data = [frac_laplacian(f, sigma).samples for f in trace.fields()]
    data = np.array(data)
    if shells is None:
        shells = range(int(np.floor(np.log2(4 * g.dr))), int(np.floor(np.log2(g.R / 2))) + 1)
    best, arg = 0.0, None
    for j in shells:
        chi = spatial_cutoff_values(g.r, j, "chi")
        per_t = FOUR_PI * g.dr * np.sum(np.abs(chi * data) ** 2, axis=1)
        if len(trace) > 1:
            t, v = _ordered(trace.times, per_t)
            val = math.sqrt(trapezoid(v, t))
        else:
            val = math.sqrt(per_t[0])
        val *= 2.0 ** (-j / 2)
        if arg is None or val > best:
            best, arg = val, j
    return best, arg


def xs_proxy(trace: SpaceTimeTrace, s: float) -> float:
    """Proxy (sum_N N^{2s} sup_t ||P_N W(t)||^2)^{1/2} for the X^s norm.

    Not the U^2 atomic norm: the sup in time replaces it.
    """
    if not 0 <= s <= 2:
        raise ValueError("xs proxy order must lie in [0, 2]")
    total = 0.0
    fields = list(trace.fields())
    for N in dyadic_band(trace.grid):
        sup = max(mass(project_dyadic(f, N, warn=False)) for f in fields)
        total += N ** (2 * s) * sup
    return math.sqrt(total)


# ---------------------------------------------------------------- energy trace

ENERGY_COLUMNS = ("t", "mass", "energy", "P", "calE", "h1_W", "l3_W", "h12_W")


@dataclass
class HistoryAccumulator:
    """Running trapezoid of int_{t_start}^t s * L(s) ds with L(s) = int |u|^{p+2}."""

    t_start: float = 0.0
    times: list = field(default_factory=list)
    values: list = field(default_factory=list)
    integral: float = 0.0

    def add(self, t: float, potential: float) -> float:
        if self.times:
            t_prev, v_prev = self.times[-1], self.values[-1]
            self.integral += 0.5 * (t - t_prev) * (t_prev * v_prev + t * potential)
        elif t != self.t_start:
            raise ValueError(f"history accumulator starts at {self.t_start}, first sample at {t}")
        self.times.append(t)
        self.values.append(potential)
        return self.integral

    def recompute(self) -> np.ndarray:
        t = np.asarray(self.times)
        return cumulative_trapezoid(t * np.asarray(self.values), t, initial=0.0)


def pseudo_conformal_P(field: RadialField, t: float, history: float, p: float = 1.0,
                       printed_coefficients: bool = False) -> float:
    """Pseudo-conformal energy of u(t) for i u_t + 1/2 Lap u = |u|^p u on R^3.

    P = ||(x + i t nabla) u||^2 + 4 t^2/(p+2) int |u|^{p+2}
        + 2 (3p - 4)/(p+2) int_0^t s int |u|^{p+2} dx ds,
    the conserved combination for the 1/2-Laplacian normalisation.  With
    ``printed_coefficients`` the weights 8 t^2/(p+2) and (3p-4)/(p+2) of the
    unit-Laplacian normalisation are used instead (not conserved here; kept
    for comparison).  ``history`` is int_0^t s int |u|^{p+2} dx ds.

    The vector-field term equals || |x| S(-t) u ||^2 because
    J(t) = S(t) x S(-t) and S is unitary; this form stays resolved for every
    t, including t -> 0 where M(-t) oscillates beyond the grid.
    """
    d = 3
    back = free_propagate(field, -t) if t != 0 else field
    vf = weighted_norm(back, 1.0) ** 2
    pot = potential_integral(field, p)
    if printed_coefficients:
        return vf + 8 * t * t / (p + 2) * pot + (d * p - 4) / (p + 2) * history
    return vf + 4 * t * t / (p + 2) * pot + 2 * (d * p - 4) / (p + 2) * history


@dataclass
class EnergyTrace:
    """Per-time records of the conserved / modified energies along a run."""

    records: list = field(default_factory=list)
    history: HistoryAccumulator | None = None
    sealed: bool = False

    def append(self, **rec):
        if self.sealed:
            raise RuntimeError("trace is sealed")
        row = {c: float("nan") for c in ENERGY_COLUMNS}
        row.update({k: float(v) for k, v in rec.items()})
        if self.records:
            prev = self.records[-1]["t"]
            if row["t"] == prev:
                raise ValueError("trace times must be strictly monotone")
            if len(self.records) > 1:
                direction = np.sign(prev - self.records[-2]["t"])
                if np.sign(row["t"] - prev) != direction:
                    raise ValueError("trace times must be strictly monotone")
        self.records.append(row)

    def seal(self) -> "EnergyTrace":
        self.sealed = True
        return self

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.records])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    def drift(self, name: str) -> float:
        """max_t |X(t) - X(t_0)| / |X(t_0)| (absolute when X(t_0) = 0)."""
        col = self.column(name)
        ref = col[0]
        dev = np.max(np.abs(col - ref))
        return float(dev / abs(ref)) if ref != 0 else float(dev)

    def history_consistency(self) -> float:
        if self.history is None or not self.history.times:
            return 0.0
        return float(abs(self.history.recompute()[-1] - self.history.integral))

    def summary(self) -> dict:
        out = {}
        for c in ENERGY_COLUMNS[1:]:
            col = self.column(c)
            if np.all(np.isnan(col)):
                continue
            out[c] = {"min": float(np.nanmin(col)), "max": float(np.nanmax(col)),
                      "drift": self.drift(c)}
        return out

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(ENERGY_COLUMNS)
            for rec in self.records:
                w.writerow([repr(rec[c]) for c in ENERGY_COLUMNS])

    def write_summary(self, path):
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)


# ---------------------------------------------------------------- inequality audits

@dataclass(frozen=True)
class AuditReport:
    name: str
    lhs: float
    rhs: float
    params: dict

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs


def _conj_exp(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _gradient_lp(f: RadialField, p: float) -> float:
    return nodal_lebesgue_norm(f.grid, radial_derivative(f), p)


def _weighted_lp(f: RadialField, values: np.ndarray, weight_power: float, p: float) -> float:
    return nodal_lebesgue_norm(f.grid, f.grid.r ** weight_power * values, p)


def hardy_audit(u: RadialField, p: float = 2.0) -> AuditReport:
    if not 1 < p < 3:
        raise ValueError(f"Hardy audit needs 1 < p < d = 3, got p={p}")
    lhs = _weighted_lp(u, u.values, -1.0, p)
    return AuditReport("hardy", lhs, _gradient_lp(u, p), {"p": p})


def gagliardo_nirenberg_audit(u: RadialField, s1: float, s2: float, theta: float,
                              p1: float, p2: float, p3: float) -> AuditReport:
    if not 0 < theta <= 1:
        raise ValueError("GN audit needs 0 < theta <= 1")
    if not 0 < s1 <= s2:
        raise ValueError("GN audit needs 0 < s1 <= s2")
    if not math.isclose(s1, theta * s2, rel_tol=1e-12):
        raise ValueError("GN audit: s1 = theta * s2 violated")
    if not math.isclose(1 / p1, theta / p2 + (1 - theta) / p3, rel_tol=1e-12, abs_tol=1e-15):
        raise ValueError("GN audit: 1/p1 = theta/p2 + (1-theta)/p3 violated")
    if min(p1, p2, p3) <= 1:
        raise ValueError("GN audit needs p1, p2, p3 > 1")
    lhs = lebesgue_norm(frac_laplacian(u, s1), p1)
    top = lebesgue_norm(frac_laplacian(u, s2), p2)
    rhs = top ** theta * (lebesgue_norm(u, p3) ** (1 - theta) if theta < 1 else 1.0)
    return AuditReport("gagliardo_nirenberg", lhs, rhs,
                       {"s1": s1, "s2": s2, "theta": theta, "p1": p1, "p2": p2, "p3": p3})


def radial_sobolev_audit(u: RadialField, alpha: float, beta: float, p: float, q: float,
                         s: float) -> AuditReport:
    d = 3
    pc, qc = _conj_exp(p), _conj_exp(q)
    dpc = 0.0 if math.isinf(pc) else d / pc
    dqc = 0.0 if math.isinf(qc) else d / qc
    if not 0 < s < d:
        raise ValueError("radial Sobolev audit needs 0 < s < d")
    if not alpha > -dpc:
        raise ValueError("radial Sobolev audit: alpha > -d/p' violated")
    if not beta > -dqc:
        raise ValueError("radial Sobolev audit: beta > -d/q' violated")
    if not 1 <= 1 / p + 1 / q <= 1 + s:
        raise ValueError("radial Sobolev audit: 1 <= 1/p + 1/q <= 1 + s violated")
    if not math.isclose(alpha + beta - d + s, -dpc - dqc, abs_tol=1e-12):
        raise ValueError("radial Sobolev audit: scaling alpha + beta - d + s = -d/p' - d/q' violated")
    equalities = [p == 1, math.isinf(p), q == 1, math.isinf(q),
                  math.isclose(1 / p + 1 / q, 1 + s)]
    if sum(equalities) > 1:
        raise ValueError("radial Sobolev audit: more than one endpoint equality holds")
    lhs = _weighted_lp(u, u.values, beta, qc)
    rhs = _weighted_lp(u, frac_laplacian(u, s).values, -alpha, p)
    return AuditReport("radial_sobolev", lhs, rhs,
                       {"alpha": alpha, "beta": beta, "p": p, "q": q, "s": s})


def schur_audit(a: dict, b: dict, exponent: float) -> AuditReport:
    """sum_{N1 <= N} (N1/N)^a a_N b_N1 against ||a||_{l^2} ||b||_{l^2}; keys are dyadic N."""
    if not exponent > 0:
        raise ValueError("Schur audit needs a > 0")
    lhs = 0.0
    for N, aN in a.items():
        for N1, bN1 in b.items():
            if N1 <= N:
                lhs += (N1 / N) ** exponent * abs(aN) * abs(bN1)
    rhs = math.sqrt(sum(abs(x) ** 2 for x in a.values())) * math.sqrt(
        sum(abs(x) ** 2 for x in b.values()))
    return AuditReport("schur", lhs, rhs, {"a": exponent})


def inequality_audit(name: str, *args, **kwargs) -> AuditReport:
    fn = {"hardy": hardy_audit, "gagliardo_nirenberg": gagliardo_nirenberg_audit,
          "radial_sobolev": radial_sobolev_audit, "schur": schur_audit}.get(name)
    if fn is None:
        raise ValueError(f"unknown audit {name!r}")
    return fn(*args, **kwargs)
