"""Command-line surface: lattice builds, single runs, grid sweeps, replays.

Exit codes: 0 success, 1 usage, 2 construction/algebra defect, 3 I/O.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .code_structure import AlgebraError, derive_code
from .lattice import (COLOR_NAMES, LatticeError, build_dual_lattice,
                      export_lattice, validate_counts)
from .simulation import (CSV_COLUMNS, TrialConfig, estimate_failure_rate,
                         row_to_csv, run_trial, stats_to_row, sweep)

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEFECT = 2
EXIT_IO = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise _UsageError(f"expected comma-separated floats, got {text!r}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gaugecolor",
                     description="Gauge color code simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", help="build and validate a lattice")
    lat.add_argument("--L", type=int, required=True)
    lat.add_argument("--out", help="export path for the validated lattice")

    def sim_args(p, multi: bool):
        cast_i = _int_list if multi else int
        cast_f = _float_list if multi else float
        p.add_argument("--L", type=cast_i, required=True)
        p.add_argument("--N", type=cast_i, required=True)
        p.add_argument("--p", type=cast_f, required=True)
        p.add_argument("--q", type=float, default=None,
                       help="measurement flip rate (default: q = p)")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "jsonl"), default=None)
        p.add_argument("--config", default=None,
                       help="JSON file with defaults for q/trials/seed/"
                            "threads/out/format (flags win)")

    run = sub.add_parser("run", help="single (L, N, p) failure-rate estimate")
    sim_args(run, multi=False)

    sw = sub.add_parser("sweep", help="full (L, N, p) grid, resumable")
    sim_args(sw, multi=True)
    sw.add_argument("--resume", action="store_true",
                    help="skip grid cells already present in --out")

    rp = sub.add_parser("replay", help="re-run one trial with debug dumps")
    rp.add_argument("--L", type=int, required=True)
    rp.add_argument("--N", type=int, required=True)
    rp.add_argument("--p", type=float, required=True)
    rp.add_argument("--q", type=float, default=None)
    rp.add_argument("--seed", type=int, required=True)
    rp.add_argument("--trial", type=int, required=True)
    rp.add_argument("--debug-dump", action="store_true")
    rp.add_argument("--config", default=None, help=argparse.SUPPRESS)
    return parser


_CONFIG_KEYS = ("q", "trials", "seed", "threads", "out", "format")


def _apply_config(args) -> None:
    """Fill unset simulation flags from an optional JSON defaults file."""
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                defaults = json.load(fh)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"config file {args.config}: {exc}")
        unknown = set(defaults) - set(_CONFIG_KEYS)
        if unknown:
            raise _UsageError(
                f"config file {args.config}: unknown keys {sorted(unknown)}")
        for key, value in defaults.items():
            if getattr(args, key, None) is None:
                setattr(args, key, value)
    if getattr(args, "seed", None) is None:
        args.seed = 0
    if getattr(args, "format", None) is None:
        args.format = "csv"
    if getattr(args, "trials", None) is None:
        raise _UsageError("--trials is required (flag or config file)")


def _cmd_lattice(args) -> int:
    lat = build_dual_lattice(args.L)
    report = validate_counts(lat)
    derive_code(lat)
    for name in ("Q_v", "Q_e", "Q_f", "Q_t", "Q", "v", "e", "f", "t",
                 "v_ext", "G_supports", "euler_characteristic"):
        print(f"{name} = {getattr(report, name)}")
    print(f"distance = {lat.distance}")
    if args.out:
        export_lattice(lat, args.out)
        print(f"exported to {args.out}")
    return EXIT_OK


def _emit_rows(rows: list[dict], args) -> None:
    if args.format == "csv":
        lines = [",".join(CSV_COLUMNS)] + [row_to_csv(r) for r in rows]
    else:
        lines = [json.dumps(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out and args.format == "csv":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    _apply_config(args)
    cfg = TrialConfig(L=args.L, N=args.N, p=args.p, q=args.q,
                      seed=args.seed, trials=args.trials)
    code = derive_code(build_dual_lattice(cfg.L))
    stats = estimate_failure_rate(code, cfg, workers=args.threads)
    _emit_rows([stats_to_row(cfg, stats)], args)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    _apply_config(args)
    grid = [(L, N, p) for L in args.L for N in args.N for p in args.p]
    if args.q is not None:
        grid = [(L, N, p, args.q) for (L, N, p) in grid]
    jsonl_path = args.out if args.out else None

    def progress(row, cached):
        tag = "cached" if cached else "done"
        print(f"[{tag}] L={row['L']} N={row['N']} p={row['p']} "
              f"p_fail={row['p_fail']:.5f} ({row['failures']}/{row['trials']})",
              file=sys.stderr)

    rows = sweep(grid, trials=args.trials, seed=args.seed,
                 out_path=jsonl_path if args.format == "jsonl" else
                 (jsonl_path + ".jsonl" if jsonl_path else None),
                 resume=args.resume, workers=args.threads, progress=progress)
    _emit_rows(rows, args)
    return EXIT_OK


def _format_cluster_log(log: list) -> str:
    lines = []
    for entry in log:
        lines.append(f"    round {entry['round']}:")
        for c in entry["clusters"]:
            lines.append(
                f"      defects={c['defects']} box={c['box_min']}..{c['box_max']}"
                f" charge={c['charge']:04b} touched={c['touched']:04b}"
                f" finished={c['finished']}"
            )
    return "\n".join(lines)


def _cmd_replay(args) -> int:
    cfg = TrialConfig(L=args.L, N=args.N, p=args.p, q=args.q,
                      seed=args.seed, trials=max(1, args.trial + 1))
    code = derive_code(build_dual_lattice(cfg.L))
    failed, state = run_trial(code, cfg, args.trial, record=True)
    print(f"trial {args.trial} seed {args.seed}: "
          f"{'LOGICAL FAILURE' if failed else 'success'}")
    for entry in state.history:
        print(f"cycle {entry['cycle']}:")
        for key in ("gauge_defects", "estimated_cells", "syndrome_cells",
                    "estimation_failed", "decode_failed", "correction_weight"):
            if key in entry:
                print(f"  {key} = {entry[key]}")
        if args.debug_dump:
            for log_key in ("estimation_log", "decode_log"):
                if entry.get(log_key):
                    print(f"  {log_key}:")
                    print(_format_cluster_log(entry[log_key]))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "lattice": _cmd_lattice,
            "run": _cmd_run,
            "sweep": _cmd_sweep,
            "replay": _cmd_replay,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, AlgebraError) as exc:
        print(f"defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT
    except BrokenPipeError:
        # downstream consumer (head, less) closed the pipe; not our error
        try:
            sys.stdout.close()
        except OSError:
            pass
        return EXIT_OK
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
