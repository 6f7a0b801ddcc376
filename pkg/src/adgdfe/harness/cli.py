"""Command-line entry point: ``adgdfe {run,compare,channel,sweep}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from ..channel import discretize, frequency_response, grid_times
from .config import coerce, dump_config, load_config
from .experiment import compare_variants, run_experiment, sweep
from .output import emit_plot, export_csv, write_csv

log = logging.getLogger("adgdfe")


def parse_seeds(text: str) -> list:
    """``"a..b"`` (inclusive) or a comma list."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(s) for s in text.split(",") if s.strip()]


def parse_overrides(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"--set expects key=value, got {pair!r}")
        k, v = pair.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _config(args):
    overrides = parse_overrides(args.set)
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "variant", None) is not None:
        overrides["variant"] = args.variant
    return load_config(args.config, **overrides)


def cmd_run(args) -> None:
    cfg = _config(args)
    out = Path(args.out)
    result = run_experiment(cfg)
    export_csv(result, out)
    dump_config(cfg, out / "config.yaml")
    if not args.no_plot:
        emit_plot(result, out / "run.svg")
    log.info("variant=%s seed=%d asymptotic_mse=%.3e convergence_iter=%d symbol_errors=%d",
             cfg.variant, cfg.seed, result.asymptotic_mse, result.convergence_iter,
             result.symbol_errors)


def cmd_compare(args) -> None:
    cfg = _config(args)
    out = Path(args.out)
    table = compare_variants(cfg, parse_seeds(args.seeds), jobs=args.jobs)
    export_csv(table, out / "compare.csv")
    dump_config(cfg, out / "config.yaml")
    if not args.no_plot:
        emit_plot(table, out / "compare.svg")
    for variant, m in table.means().items():
        log.info("%-7s convergence_iter=%.1f asymptotic_mse=%.3e symbol_errors=%.2f",
                 variant, m["convergence_iter"], m["asymptotic_mse"], m["symbol_errors"])


def cmd_channel(args) -> None:
    out = Path(args.out)
    tau = args.tau
    ch = discretize(tau, args.spacing, args.span if args.span else tau)
    t = grid_times(ch)
    write_csv(out / "impulse_response.csv", ("t", "h"), zip(t, ch.taps / ch.spacing))
    f = np.linspace(-args.fmax / tau, args.fmax / tau, args.points)
    write_csv(out / "frequency_response.csv", ("f", "H"), zip(f, frequency_response(f, tau)))


def cmd_sweep(args) -> None:
    cfg = _config(args)
    values = [coerce(args.vary, v) for v in args.values.split(",")]
    rows = sweep(cfg, args.vary, values)
    header = (args.vary, "convergence_iter", "asymptotic_mse", "symbol_errors")
    write_csv(Path(args.out) / "sweep.csv", header, ([r[h] for h in header] for r in rows))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adgdfe", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--config", help="flat YAML file of ExperimentConfig keys")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
        sp.add_argument("--variant", choices=("plain", "adg", "adg_td"))
        if seed:
            sp.add_argument("--seed", type=int)
        sp.add_argument("--out", default="out")

    sp = sub.add_parser("run", help="single experiment")
    common(sp)
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("compare", help="all variants over a range of seeds")
    common(sp, seed=False)
    sp.add_argument("--seeds", default="0..19", help="a..b (inclusive) or comma list")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("channel", help="tabulate the cosine-squared pulse and its spectrum")
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--spacing", type=float, required=True)
    sp.add_argument("--span", type=float)
    sp.add_argument("--fmax", type=float, default=5.0, help="frequency range in units of 1/tau")
    sp.add_argument("--points", type=int, default=1001)
    sp.add_argument("--out", default="out")
    sp.set_defaults(func=cmd_channel)

    sp = sub.add_parser("sweep", help="vary one config key")
    common(sp)
    sp.add_argument("--vary", required=True)
    sp.add_argument("--values", required=True, help="comma-separated values")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(message)s")
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"adgdfe: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
