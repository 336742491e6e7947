"""Command-line entry point ``spectral-mu``.

Exit codes: 0 success, 2 usage error, 3 solver non-convergence,
4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import experiments as ex
from .config import ConfigError, ExperimentConfig, load_config
from .eigen import ConvergenceError
from .grid import read_mask

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_FAILED = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _clean(obj):
    """JSON-safe copy: NaN and inf become strings, tuples become lists."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(args, summary: dict, text: str):
    if args.json:
        print(json.dumps(_clean(summary), indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(seed=args.seed, h=getattr(args, "grid_h", None))


def _out_dir(args, cfg=None) -> Path:
    return Path(args.out or (cfg.output_dir if cfg else "out"))


def cmd_ball_values(args) -> int:
    if args.measure is None and args.radius is None:
        args.measure = 1.0
    vals = ex.ball_values(args.n, args.measure, args.radius, args.alpha, args.grid_h)
    text = "\n".join(f"{k:<18} {ex.fmt(v) if not isinstance(v, str) else v}"
                     for k, v in vals.items())
    _emit(args, vals, text)
    return EXIT_OK


def cmd_eigencurve(args) -> int:
    cfg = _config(args)
    run = ex.run_eigencurve(cfg)
    out = _out_dir(args, cfg)
    files = ex.write_outputs(out, eigencurve__csv=run.csv, eigencurve__svg=run.svg)
    _emit(args, dict(rows=run.rows, files=files), run.csv)
    return EXIT_NONCONVERGED if run.failed else EXIT_OK


def cmd_verify_theorem(args) -> int:
    cfg = _config(args)
    run = ex.run_verify_theorem(cfg)
    files = ex.write_outputs(_out_dir(args, cfg), verify__csv=run.csv)
    _emit(args, dict(passed=run.passed, rows=run.rows, files=files), run.csv)
    if run.errored:
        return EXIT_NONCONVERGED
    return EXIT_OK if run.passed else EXIT_FAILED


def cmd_crosscheck(args) -> int:
    cfg = load_config(args.config) if args.config else ex.default_crosscheck_config()
    cfg = cfg.with_overrides(seed=args.seed, h=args.grid_h)
    run = ex.run_crosscheck(cfg)
    lines = [f"{e['domain_id']:<18} {e['check']:<34} {ex.fmt(e['value']):<14} "
             f"{'-' if e['ok'] is None else ('ok' if e['ok'] else 'FAIL')}" for e in run.entries]
    lines.append("PASS" if run.passed else "FAIL")
    _emit(args, dict(passed=run.passed, entries=run.entries), "\n".join(lines))
    return EXIT_OK if run.passed else EXIT_FAILED


def cmd_rearrange(args) -> int:
    mask = read_mask(args.mask)
    rep = ex.rearrange_mask(mask, _out_dir(args))
    text = "\n".join(f"{k:<14} {v}" for k, v in rep.items())
    _emit(args, rep, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spectral-mu", description="Twisted Dirichlet eigenvalue experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", help="experiment configuration file")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, help="seed for random restarts")
        sp.add_argument("--json", action="store_true", help="print a JSON summary")

    sp = sub.add_parser("ball-values", help="closed-form ball quantities")
    sp.add_argument("--n", type=int, default=2)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--measure", type=float)
    g.add_argument("--radius", type=float)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--grid-h", type=float, help="also solve the disk on this grid")
    common(sp, config=False)
    sp.set_defaults(func=cmd_ball_values)

    for name, func, helptext in (
            ("eigencurve", cmd_eigencurve, "mu against alpha for each configured shape"),
            ("verify-theorem", cmd_verify_theorem, "check the fixed-measure lower bound"),
            ("crosscheck", cmd_crosscheck, "compare independent solution paths")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--grid-h", type=float, help="override the grid spacing")
        sp.set_defaults(func=func)

    sp = sub.add_parser("rearrange", help="Schwarz rearrangement of a mask's ground state")
    sp.add_argument("--mask", required=True, help="mask file")
    common(sp, config=False)
    sp.set_defaults(func=cmd_rearrange)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"spectral-mu: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"spectral-mu: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
