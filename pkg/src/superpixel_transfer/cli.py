"""Command line entry point: ``superpixel-transfer``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .image_core import ConfigurationError, ImageFormatError
from .matching import parse_epsilon
from .pipeline import BenchmarkConfig, TransferConfig, run_benchmark, run_transfer


def _scales(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid scale list: {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("scales must be positive integers")
    return vals


def _epsilon(text: str):
    try:
        return parse_epsilon(text)
    except (ValueError, ConfigurationError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="superpixel-transfer",
        description="Superpixel-based color transfer from a source image onto a target image.",
    )
    p.add_argument("--target", required=True, help="image whose colors are replaced")
    p.add_argument("--source", required=True, help="image providing the color palette")
    p.add_argument("--out", required=True,
                   help="result PNG (or JSON-lines records with --benchmark)")
    p.add_argument("--superpixel-size", type=int, default=500, help="pixels per superpixel")
    p.add_argument("--epsilon", type=_epsilon, default=3,
                   help="max selections of one source superpixel, or 'inf'")
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--delta-c", type=float, default=0.1)
    p.add_argument("--delta-s-ratio", type=float, default=100.0, help="delta_s = ratio * delta_c")
    p.add_argument("--bins", type=int, default=8, help="histogram bins per channel")
    p.add_argument("--compactness", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--contributor-limit", type=int, default=0, help="0 = every superpixel contributes")
    p.add_argument("--emit-diagnostics", action="store_true",
                   help="also write superpixel, mean-color, matched-color and selection-count renders")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.add_argument("--benchmark", action="store_true", help="compare random / ANN / exact matching")
    p.add_argument("--scales", type=_scales, default=(500, 1000, 2000),
                   help="comma-separated target superpixel counts for --benchmark")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _fail(kind: str, message: str, code: int, **extra) -> int:
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.benchmark:
            run_benchmark(BenchmarkConfig(
                target=args.target, source=args.source, out=args.out, scales=args.scales,
                iterations=args.iterations, bins=args.bins, compactness=args.compactness, seed=args.seed,
            ))
            return 0
        report = run_transfer(TransferConfig(
            target=args.target, source=args.source, out=args.out,
            superpixel_size=args.superpixel_size, epsilon=args.epsilon, iterations=args.iterations,
            delta_c=args.delta_c, delta_s_ratio=args.delta_s_ratio, bins=args.bins,
            compactness=args.compactness, seed=args.seed, contributor_limit=args.contributor_limit,
            emit_diagnostics=args.emit_diagnostics, report=args.report,
        ))
    except ConfigurationError as exc:
        extra = {}
        if getattr(exc, "min_epsilon", None) is not None:
            extra["min_epsilon"] = exc.min_epsilon
        return _fail("configuration", str(exc), 2, **extra)
    except ImageFormatError as exc:
        return _fail("format", str(exc), 1)
    except OSError as exc:
        return _fail("io", str(exc), 1)
    times = report.stage_times_ms
    print(" ".join(f"{s}={times[s]:.1f}ms" for s in times))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
