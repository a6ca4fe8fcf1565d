"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical or consistency
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .estimator import estimate_from_records, read_record, simulate_background, simulate_record, write_record
from .model import SpinMixture
from .sweeps import KINDS, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    result = run_sweep(args.kind, cfg)
    out = args.output or cfg.output_path
    if out:
        result.write(out)
    else:
        sys.stdout.write(result.to_csv())
    print(result.summary, file=sys.stderr if not out else sys.stdout)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    shots, bg = cfg.estimate.shots, cfg.estimate.background_rad
    if args.which == "background":
        rec = simulate_background(shots, bg, args.seed)
        header = f"background record, sigma_B = {bg} rad, {shots} shots, seed {args.seed}"
    else:
        tau = 0.5 if args.which == "zero" else (cfg.mix.tau if args.tau is None else args.tau)
        rec = simulate_record(
            cfg.params, SpinMixture(tau), cfg.interaction_time, cfg.amps.mean_photons, shots, bg, args.seed
        )
        header = f"{args.which} record, tau = {tau}, N = {cfg.amps.mean_photons:.6g}, {shots} shots, seed {args.seed}"
    write_record(args.output, rec, header=header + "\nunits: rad")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    ext, zero, bg = (read_record(p) for p in (args.extremum, args.zero_crossing, args.background))
    est = estimate_from_records(ext, zero, bg, n_boot=args.bootstrap, seed=args.seed)
    sel = "" if est.selected is None else repr(est.selected)
    se = "" if est.standard_error is None else repr(est.standard_error)
    print("tau_est_low,tau_est_high,tau_selected,bootstrap_se")
    print(f"{est.tau_low!r},{est.tau_high!r},{sel},{se}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="faraday-spin", description="Faraday rotation noise of a single electron spin")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a sweep and write CSV")
    r.add_argument("kind", choices=KINDS)
    r.add_argument("config", help="TOML configuration file")
    r.add_argument("-o", "--output", help="CSV path (overrides [output] path; default stdout)")
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("simulate-record", help="write a synthetic measurement record")
    s.add_argument("config")
    s.add_argument("--which", choices=("extremum", "zero", "background"), default="extremum")
    s.add_argument("--tau", type=float, help="spin mixture for the extremum record (default: [spin] tau)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=_cmd_simulate)

    e = sub.add_parser("estimate", help="estimate tau from three record files")
    e.add_argument("extremum")
    e.add_argument("zero_crossing")
    e.add_argument("background")
    e.add_argument("--bootstrap", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=_cmd_estimate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
