"""Scenario registry, run manifests and command dispatch.

Manifest grammar (YAML; every key optional)::

    command: conserve            # conserve | transform-id | highlow | lwp | norms | oracle
    grid: 2048x32                # "MxR" string or {M: 2048, R: 32}
    dt: 1.0e-3                   # time step for every check that takes one
    seed: 0                      # corpus seed (data and seeded sweeps)
    data: {kind: gaussian}       # gaussian | zero | gaussian_mix | shell_bump | random_bandlimited
    checks: [conservation, order]          # subset of the command's checks
    params:                      # per-check keyword overrides, e.g. tolerances
      transforms: {tol: 1.0e-3}
      pipeline: {delta0: 1.0e-2, t0: 0.25, T0: 8.0}
    output: {dir: out, snapshots: false}

Command-line flags override the manifest, which overrides check defaults.
"""
from __future__ import annotations

import inspect
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import experiments as ex
from .corpus import make_data
from .io import field_to_csv, write_field
from .radial_spectral import RadialGrid

logger = logging.getLogger(__name__)

OPERATIONS = {
    "conservation": ex.criterion_conservation,
    "order": ex.criterion_order,
    "transforms": ex.criterion_transforms,
    "equivalence": ex.criterion_equivalence,
    "exponent_transform": ex.exponent_transform_check,
    "littlewood_paley": ex.criterion_littlewood_paley,
    "strichartz": ex.criterion_strichartz,
    "criticality": ex.criterion_criticality,
    "pipeline": ex.criterion_pipeline,
    "increment": ex.criterion_increment,
    "picard": ex.criterion_picard,
    "oracle": ex.oracle_checks,
    "audits": ex.audit_sweep,
}

COMMANDS = {
    "conserve": ("conservation", "order"),
    "transform-id": ("transforms", "equivalence", "exponent_transform"),
    "highlow": ("pipeline", "increment"),
    "lwp": ("picard",),
    "norms": ("littlewood_paley", "strichartz", "criticality", "audits"),
    "oracle": ("oracle",),
}


class ManifestError(ValueError):
    pass


def parse_grid(text) -> tuple[int, float]:
    """'2048x32' -> (M, R); dicts {M:, R:} are accepted too."""
    if isinstance(text, dict):
        try:
            return int(text["M"]), float(text["R"])
        except KeyError as e:
            raise ManifestError(f"grid needs M and R, missing {e}") from None
    try:
        m, r = str(text).lower().split("x")
        return int(m), float(r)
    except ValueError:
        raise ManifestError(f"grid must look like MxR (e.g. 2048x32), got {text!r}") from None


@dataclass
class Manifest:
    command: str | None = None
    grid: tuple[int, float] | None = None
    dt: float | None = None
    seed: int | None = None
    data: dict | None = None
    checks: list | None = None
    params: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    KEYS = ("command", "grid", "dt", "seed", "data", "checks", "params", "output")

    @classmethod
    def from_dict(cls, d: dict | None) -> "Manifest":
        d = dict(d or {})
        unknown = set(d) - set(cls.KEYS)
        if unknown:
            raise ManifestError(f"unknown manifest keys: {sorted(unknown)}")
        m = cls()
        if d.get("command") is not None:
            m.command = str(d["command"])
        if d.get("grid") is not None:
            m.grid = parse_grid(d["grid"])
        if d.get("dt") is not None:
            m.dt = float(d["dt"])
            if not m.dt > 0:
                raise ManifestError("dt must be positive")
        if d.get("seed") is not None:
            m.seed = int(d["seed"])
        if d.get("data") is not None:
            if not isinstance(d["data"], dict):
                raise ManifestError("data must be a mapping")
            m.data = dict(d["data"])
        if d.get("checks") is not None:
            m.checks = list(d["checks"])
        params = d.get("params") or {}
        if not isinstance(params, dict) or not all(isinstance(v, dict) for v in params.values()):
            raise ManifestError("params must map check names to keyword mappings")
        m.params = {k: dict(v) for k, v in params.items()}
        m.output = dict(d.get("output") or {})
        return m

    @classmethod
    def load(cls, path) -> "Manifest":
        try:
            with open(path) as fh:
                d = yaml.safe_load(fh)
        except yaml.YAMLError as e:
            raise ManifestError(f"cannot parse manifest {path}: {e}") from None
        if d is not None and not isinstance(d, dict):
            raise ManifestError("manifest must be a mapping")
        return cls.from_dict(d)


@dataclass
class Scenario:
    name: str
    command: str
    manifest: Manifest = field(default_factory=Manifest)
    expected: dict = field(default_factory=dict)  # check name -> expected pass flag

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ManifestError(f"unknown command {self.command!r}")
        for c in self.checks():
            if c not in OPERATIONS:
                raise ManifestError(f"check {c!r} is not a registered operation")
            if c not in COMMANDS[self.command]:
                raise ManifestError(f"check {c!r} does not belong to command {self.command!r}")

    def checks(self) -> tuple:
        return tuple(self.manifest.checks) if self.manifest.checks else COMMANDS[self.command]


REGISTRY: dict[str, Scenario] = {}


def register(scenario: Scenario) -> Scenario:
    if scenario.name in REGISTRY:
        raise ValueError(f"scenario {scenario.name!r} already registered")
    REGISTRY[scenario.name] = scenario
    return scenario


for _cmd in COMMANDS:
    register(Scenario(_cmd, _cmd))
register(Scenario("conserve-zero", "conserve", Manifest(data={"kind": "zero"})))


def _kwargs_for(op, manifest: Manifest, name: str) -> dict:
    sig = inspect.signature(op).parameters
    kw = {}
    if manifest.grid is not None and "R" in sig and "M" in sig:
        kw["M"], kw["R"] = manifest.grid
    if manifest.dt is not None and "dt" in sig:
        kw["dt"] = manifest.dt
    if manifest.seed is not None and "seed" in sig:
        kw["seed"] = manifest.seed
    if "data" in sig and manifest.data is not None:
        data = dict(manifest.data)
        if manifest.seed is not None and data.get("kind") not in (None, "gaussian", "zero"):
            data.setdefault("seed", manifest.seed)
        kw["data"] = data
    extra = manifest.params.get(name, {})
    bad = set(extra) - set(sig)
    if bad:
        raise ManifestError(f"check {name!r} has no parameters {sorted(bad)}")
    kw.update(extra)
    return kw


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items() if not str(k).startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_check(name: str, manifest: Manifest) -> ex.CriterionResult:
    op = OPERATIONS[name]
    return op(**_kwargs_for(op, manifest, name))


def write_artifacts(command: str, results: dict, manifest: Manifest, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, res in results.items():
        dump_json(res.to_dict(), out / f"{name}.json")
        et = res.artifacts.get("_energy_trace")
        if et is not None:
            et.to_csv(out / f"{name}_energy.csv")
        rep = res.artifacts.get("_report")
        if rep is not None:
            rep.to_json(out / "pipeline_report.json")
            rep.energy.to_csv(out / "pipeline_energy.csv")
    summary = {"command": command, "passed": all(r.passed for r in results.values()),
               "checks": {n: [c.to_dict() for c in r.checks] for n, r in results.items()}}
    dump_json(summary, out / "summary.json")
    if manifest.output.get("snapshots"):
        M, R = manifest.grid or (2048, 32.0)
        u0 = make_data(manifest.data, RadialGrid(R, M))
        write_field(out / "initial.radf", u0)
        field_to_csv(out / "initial.csv", u0)


def run_command(command: str, manifest: Manifest | None = None, out: Path | None = None,
                workers: int = 1) -> dict:
    """Run every check of ``command``; returns {check name: CriterionResult}."""
    manifest = manifest or Manifest()
    scenario = Scenario(f"cli:{command}", command, manifest)
    names = scenario.checks()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            futures = {n: pool.submit(run_check, n, manifest) for n in names}
            results = {n: f.result() for n, f in futures.items()}
    else:
        results = {n: run_check(n, manifest) for n in names}
    if out is not None:
        write_artifacts(command, results, manifest, Path(out))
    return results


def run_scenario(name: str, out: Path | None = None) -> dict:
    sc = REGISTRY[name]
    return run_command(sc.command, sc.manifest, out)
