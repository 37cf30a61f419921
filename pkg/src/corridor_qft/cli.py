"""``corridor-qft <experiment> --config PATH [--out PATH] [--format csv|json] [--seed N]``.

Exit status: 0 when every row passes, 1 when any tolerance fails, 2 on
configuration or runtime errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import ConfigError, load_config, validate
from .experiments import run
from .results import emit

OUTPUT_DIR_ENV = "CORRIDOR_QFT_OUTPUT_DIR"
EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2

log = logging.getLogger("corridor_qft")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corridor-qft", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=["equivalence", "propagator", "lifetime", "corridor", "all"])
    p.add_argument("--config", required=True, help="INI experiment config")
    p.add_argument("--out", help="output file (default: $%s/<experiment>.<format>)" % OUTPUT_DIR_ENV)
    p.add_argument("--format", choices=["csv", "json"], help="overrides [run] format")
    p.add_argument("--seed", type=int, help="overrides every seed in the config")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _output_path(args, cfg) -> Path:
    if args.out:
        return Path(args.out)
    if cfg.output:
        return Path(cfg.output)
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return base / f"{args.experiment}.{cfg.format}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if args.format:
            cfg.format = args.format
        if args.seed is not None:
            cfg.with_seed(args.seed)
        validate(cfg)
        rows = run(args.experiment, cfg)
        path = emit(rows, cfg.format, _output_path(args, cfg))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    failed = [r for r in rows if not r.passed]
    for r in failed:
        log.warning("FAIL %s case %d %s: gap %.3g > tol %.3g", r.experiment, r.case, r.check,
                    r.gap, r.tolerance)
    print(f"{len(rows) - len(failed)}/{len(rows)} rows passed -> {path}")
    return EXIT_FAILED if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
