"""Command-line entry point: norms, Picard runs, sweeps, verification.

Every file-producing subcommand writes a JSON manifest next to its
output (resolved configuration, seed, version, paths, wall clock);
``bbmlab replay MANIFEST`` reruns it, and deterministic solvers
reproduce the data files byte for byte.  Exit codes: 0 pass, 1 assertion
or oracle failure, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import QuadratureSpec, energy, integrate_rk4, picard_iterate
from .grids import FrequencyGrid, read_spectrum, write_spectrum
from .inflation import (
    InflationConfig,
    make_band_pair,
    parse_config,
    run_sweep,
    write_config,
)
from .oracles import run_suite
from .spaces import parse_space_spec, sobolev_norm, space_norm


def _write_manifest(subcommand: str, args_dict: dict, outputs: list[str], started: float):
    """One manifest per output file; reruns are driven by these."""
    payload = {
        "subcommand": subcommand,
        "config": {k: v for k, v in args_dict.items() if k not in ("func",)},
        "seed": args_dict.get("seed"),
        "version": __version__,
        "outputs": outputs,
        "inputs": [v for k, v in args_dict.items() if k in ("input", "config_path") and v],
        "wall_clock_s": time.perf_counter() - started,
    }
    for out in outputs:
        path = Path(str(out) + ".manifest.json")
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _grid_kwargs(args):
    kw = {}
    if args.kind:
        kw["kind"] = args.kind
    if args.cutoff:
        kw["cutoff"] = args.cutoff
    if args.spacing:
        kw["spacing"] = args.spacing
    return kw


def cmd_norm(args) -> int:
    f = read_spectrum(args.input, **_grid_kwargs(args))
    spec = parse_space_spec(args.spec)
    value = space_norm(f, spec)
    print(f"{value:.15g}")
    return 0


def cmd_picard(args) -> int:
    started = time.perf_counter()
    cutoff = args.cutoff or (args.k + 1) * (args.N + 2)
    grid = FrequencyGrid(args.kind or "torus", cutoff, args.spacing or 1.0)
    data = make_band_pair(args.N, args.R, grid)
    result = picard_iterate(data, args.k, args.T, QuadratureSpec(tol=args.quad_tol))
    outputs = []
    if args.out:
        write_spectrum(result.value, args.out)
        outputs.append(args.out)
    print(f"# iterate k={args.k} at T={args.T:g}, N={args.N}, R={args.R:g}")
    print(f"quad_error {result.quad_error:.6g}")
    for text in args.spec:
        spec = parse_space_spec(text)
        print(f"norm {text} {space_norm(result.value, spec):.15g}")
    if outputs:
        _write_manifest("picard", vars(args), outputs, started)
    return 0


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    config = parse_config(args.config_path)
    report = run_sweep(config)
    outputs = []
    if args.out:
        report.to_csv(args.out)
        outputs.append(args.out)
    print(report.summary())
    if outputs:
        _write_manifest("sweep", vars(args), outputs, started)
    return 0 if report.slopes_ok else 1


def cmd_verify(args) -> int:
    started = time.perf_counter()
    reports = run_suite(args.suite, seed=args.seed)
    rows = []
    all_pass = True
    for r in reports:
        all_pass &= r.passed
        consts = ", ".join(f"{k}={v:.6g}" for k, v in sorted(r.constants.items()))
        print(f"[{'pass' if r.passed else 'FAIL'}] {r.oracle}: {consts}")
        rows.append(r)
    outputs = []
    if args.out:
        if args.format == "json":
            Path(args.out).write_text(
                json.dumps([asdict(r) for r in rows], indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
        else:
            lines = ["id,pass,constants,seed"]
            for r in rows:
                consts = ";".join(f"{k}={v:.17g}" for k, v in sorted(r.constants.items()))
                lines.append(f"{r.oracle},{int(r.passed)},{consts},{r.seed}")
            Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
        outputs.append(args.out)
        _write_manifest("verify", vars(args), outputs, started)
    return 0 if all_pass else 1


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    f = read_spectrum(args.input, **_grid_kwargs(args))
    traj = integrate_rk4(f, args.T, args.dt, store_every=args.store_every)
    lines = ["t,E,fl1,hs"]
    for t, state in zip(traj.times, traj.states):
        lines.append(
            f"{t:.17g},{energy(state):.17g},{state.l1():.17g},{sobolev_norm(state, args.s):.17g}"
        )
    text = "\n".join(lines) + "\n"
    outputs = []
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        outputs.append(args.out)
        _write_manifest("simulate", vars(args), outputs, started)
    else:
        sys.stdout.write(text)
    return 0


def cmd_example_config(args) -> int:
    write_config(InflationConfig(), args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_replay(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    sub = manifest["subcommand"]
    config = manifest["config"]
    argv = [sub]
    flags = {
        "picard": ["N", "R", "k", "T", "spec", "out", "kind", "cutoff", "spacing", "quad_tol"],
        "sweep": ["config_path", "out"],
        "verify": ["suite", "seed", "out", "format"],
        "simulate": ["input", "T", "dt", "s", "store_every", "out", "kind", "cutoff", "spacing"],
    }.get(sub)
    if flags is None:
        print(f"cannot replay subcommand {sub!r}", file=sys.stderr)
        return 2
    positional = {"sweep": ["config_path"], "simulate": [], "picard": [], "verify": []}[sub]
    for name in flags:
        value = config.get(name)
        if value is None or name == "func":
            continue
        if name in positional:
            argv.append(str(value))
        elif isinstance(value, list):
            for v in value:
                argv.extend([f"--{name.replace('_', '-')}", str(v)])
        else:
            argv.extend([f"--{name.replace('_', '-')}", str(value)])
    return main(argv)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bbmlab",
        description="BBM mild-solution laboratory: norms, Picard series, inflation sweeps",
    )
    ap.add_argument("--version", action="version", version=f"bbmlab {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add_grid_flags(p):
        p.add_argument("--kind", choices=("torus", "line"), default=None)
        p.add_argument("--cutoff", type=int, default=None)
        p.add_argument("--spacing", type=float, default=None)

    p = sub.add_parser("norm", help="evaluate one space norm of a spectrum file")
    p.add_argument("input", help="spectrum CSV (header xi,re,im)")
    p.add_argument("--spec", required=True, help="space spec family:p:q:s[:hom], e.g. fa:2:1:-0.5")
    add_grid_flags(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("picard", help="one expansion iterate of band-pair data")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--spec", action="append", default=[], help="repeatable space spec")
    p.add_argument("--out", default=None, help="spectrum CSV output path")
    p.add_argument("--quad-tol", dest="quad_tol", type=float, default=1e-10)
    add_grid_flags(p)
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("sweep", help="norm-inflation N-sweep from a config file")
    p.add_argument("config_path", help="keyed-text sweep configuration")
    p.add_argument("--out", default=None, help="report CSV output path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the lemma-oracle suites")
    p.add_argument("--suite", choices=("identities", "inequalities", "lower-bounds", "all"),
                   default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="report output path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="time-step a spectrum and emit invariant series")
    p.add_argument("--input", required=True, help="spectrum CSV")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--s", type=float, default=-1.0, help="regularity for the hs column")
    p.add_argument("--store-every", dest="store_every", type=int, default=1)
    p.add_argument("--out", default=None, help="series CSV output path")
    add_grid_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("example-config", help="write a default sweep configuration")
    p.add_argument("--out", default="sweep.cfg")
    p.set_defaults(func=cmd_example_config)

    p = sub.add_parser("replay", help="rerun a subcommand from its manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
