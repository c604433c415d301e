"""Command line entry point: ``python -m activepu <command> ...``.

Exit codes: 0 ok, 1 config error, 2 failure rows present under ``--strict``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from ..errors import ActivePUError, ConfigError
from ..hypothesis import disagreement_coefficient, parse_class
from .config import load_config, parse_distribution
from .emit import emit, read_csv
from .runner import run_experiment, run_trial

EXIT_OK, EXIT_CONFIG, EXIT_FAILURES = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="activepu", description="Active PU learning experiments")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every trial of a config")
    run.add_argument("config")
    run.add_argument("--out", help="output path ('-' for stdout); default from [output]")
    run.add_argument("--format", choices=("csv", "json"), default=None)
    run.add_argument("--jobs", type=int, default=None, help="worker processes (1 = sequential)")
    run.add_argument("--seed-override", type=int, default=None, help="replace base_seed")
    run.add_argument("--strict", action="store_true", help="exit 2 if any trial failed")
    run.add_argument("--quiet", action="store_true", help="do not print the summary")

    rep = sub.add_parser("replay", help="re-run one trial from a CSV with a verbose trace")
    rep.add_argument("csv")
    rep.add_argument("--trial", type=int, required=True)
    rep.add_argument("--seed-override", type=int, default=None)

    th = sub.add_parser("theta", help="print analytic and grid disagreement coefficients")
    th.add_argument("hclass", metavar="class")
    th.add_argument("distribution")
    th.add_argument("--resolution", type=int, default=100)

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("config")
    return p


def _config_errors(exc: ConfigError) -> None:
    for e in exc.errors:
        print(f"error: {e}", file=sys.stderr)


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        _config_errors(exc)
        return EXIT_CONFIG
    if args.seed_override is not None:
        cfg = dataclasses.replace(cfg, base_seed=args.seed_override)
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    records, summary = run_experiment(cfg, jobs=args.jobs)
    targets = []
    if args.out:
        fmt = args.format or ("json" if args.out.endswith(".json") else "csv")
        targets.append((fmt, args.out))
    else:
        if cfg.csv_path and args.format in (None, "csv"):
            targets.append(("csv", cfg.csv_path))
        if cfg.json_path and args.format in (None, "json"):
            targets.append(("json", cfg.json_path))
        if not targets:
            targets.append((args.format or "csv", "-"))
    for fmt, path in targets:
        try:
            emit(records, summary, fmt, path, cfg)
        except OSError as exc:
            print(f"error: cannot write {path}: {exc.strerror}", file=sys.stderr)
            return EXIT_CONFIG
    if not args.quiet:
        stream = sys.stderr if any(p == "-" for _, p in targets) else sys.stdout
        print(json.dumps(summary, indent=2), file=stream)
    if args.strict and any(not r.ok for r in records):
        return EXIT_FAILURES
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        cfg, records = read_csv(args.csv)
    except ConfigError as exc:
        _config_errors(exc)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg is None:
        print("error: file has no config header", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed_override is not None:
        cfg = dataclasses.replace(cfg, base_seed=args.seed_override)
    rec, res = run_trial(cfg, args.trial)
    for ev in res.trace.events:
        data = " ".join(f"{k}={_fmt(v)}" for k, v in ev.data.items())
        print(f"{ev.kind:>6} t={ev.t} {data}")
    print(f"ledger {res.ledger.snapshot()}")
    print(f"hypothesis {res.hypothesis}")
    print(f"record {json.dumps(dataclasses.asdict(rec))}")
    stored = next((r for r in records if r.trial == args.trial), None)
    if stored is not None and args.seed_override is None:
        same = (stored.outcome, stored.label_requests, stored.final_error) == (
            rec.outcome, rec.label_requests, rec.final_error)
        print("replay matches stored row" if same else "replay DIFFERS from stored row")
    return EXIT_OK


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def cmd_theta(args) -> int:
    try:
        c = parse_class(args.hclass)
        d = parse_distribution(args.distribution)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for mode in ("analytic", "grid"):
        try:
            res = disagreement_coefficient(c, d, mode=mode, resolution=args.resolution)
            print(f"{mode:>8}: {res.describe()}")
        except ActivePUError as exc:
            print(f"{mode:>8}: {exc}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        _config_errors(exc)
        return EXIT_CONFIG
    print(f"ok: {cfg.algorithm} on {cfg.hclass} / {cfg.distribution}, {cfg.trials} trials")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return {"run": cmd_run, "replay": cmd_replay, "theta": cmd_theta,
            "validate": cmd_validate}[args.command](args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
