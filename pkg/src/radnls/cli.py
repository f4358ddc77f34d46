"""Command-line front end: ``radnls <command> [flags]``.

Each command prints one PASS/FAIL line per check and exits 0 only when every
check passes.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .harness import COMMANDS, Manifest, ManifestError, parse_grid, run_command

DESCRIPTIONS = {
    "conserve": "mass / energy / P drift and splitting order",
    "transform-id": "pseudo-conformal identities and equation equivalence",
    "highlow": "high-low pipeline and energy-increment comparison",
    "lwp": "Picard iteration for the local theory",
    "norms": "Littlewood-Paley, Strichartz, criticality and inequality audits",
    "oracle": "spectral propagator vs kernel quadrature",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="radnls", description="Radial quadratic NLS laboratory.")
    p.add_argument("command", choices=list(COMMANDS),
                   help="; ".join(f"{k}: {v}" for k, v in DESCRIPTIONS.items()))
    p.add_argument("--manifest", type=Path, help="YAML run manifest")
    p.add_argument("--out", type=Path, help="artifact directory (default: out/<command>)")
    p.add_argument("--seed", type=int, help="corpus seed (unsigned 64-bit)")
    p.add_argument("--grid", help="grid as MxR, e.g. 2048x32")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--jobs", type=int, default=1, help="worker threads across checks")
    p.add_argument("--quiet", action="store_true", help="print only the per-criterion summary")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        manifest = Manifest.load(args.manifest) if args.manifest else Manifest()
        if manifest.command is not None and manifest.command != args.command:
            raise ManifestError(f"manifest is for command {manifest.command!r}, not {args.command!r}")
        if args.grid:
            manifest.grid = parse_grid(args.grid)
        if args.dt is not None:
            if not args.dt > 0:
                raise ManifestError("--dt must be positive")
            manifest.dt = args.dt
        if args.seed is not None:
            if not 0 <= args.seed < 2 ** 64:
                raise ManifestError("--seed must be an unsigned 64-bit value")
            manifest.seed = args.seed
    except (ManifestError, OSError) as e:
        parser.print_usage(sys.stderr)
        print(f"radnls: error: {e}", file=sys.stderr)
        return 2

    out = args.out or Path(manifest.output.get("dir", "out")) / args.command
    try:
        results = run_command(args.command, manifest, out, workers=args.jobs)
    except ManifestError as e:
        parser.print_usage(sys.stderr)
        print(f"radnls: error: {e}", file=sys.stderr)
        return 2

    ok = True
    for res in results.values():
        if not args.quiet:
            for c in res.checks:
                print(c.line())
        print(res.line())
        ok &= res.passed
    if not ok:
        failing = [c.name for r in results.values() for c in r.checks if not c.passed]
        print(f"FAILED checks: {', '.join(failing)}", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
