"""Command-line entry point: ``radar-mi`` / ``python -m radar_mi``.

Exit codes: 0 success, 1 numerical failure, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from ..errors import ConfigError, NumericalError
from .models import (
    DEFAULT_NOISE,
    CorrelationSweepConfig,
    FrequencySweepConfig,
    GeometryScenario,
    NoiseBlock,
    NoiseKind,
    OutputFormat,
    SweepTable,
    load_config,
)
from .reports import decorrelation_table, schur_report
from .sweeps import sweep_correlation, sweep_snr_frequency

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2

DEFAULT_TARGET = [5.0, 2.0, 1.0, 0.5]


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _index_pair(text: str) -> tuple[int, int]:
    try:
        first, second = (int(item) for item in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected two comma-separated indices, got {text!r}") from e
    return first, second


def _run_correlation(args: argparse.Namespace) -> SweepTable:
    cfg = load_config(args.config, CorrelationSweepConfig) if args.config else CorrelationSweepConfig()
    return sweep_correlation(cfg)


def _run_frequency(args: argparse.Namespace) -> SweepTable:
    cfg = load_config(args.config, FrequencySweepConfig)
    if args.white_noise:
        cfg = cfg.model_copy(update={"noise": NoiseBlock(kind=NoiseKind.WHITE)})
    return sweep_snr_frequency(cfg, seed=args.seed)


def _run_schur(args: argparse.Namespace) -> SweepTable:
    return schur_report(
        args.sigma_h,
        args.sigma_w,
        scan_power=args.scan_power,
        scan_trials=args.scan_trials,
        seed=args.seed if args.seed is not None else 0,
    )


def _run_decorrelation(args: argparse.Namespace) -> SweepTable:
    scenario = load_config(args.config, GeometryScenario)
    frequencies = args.frequency or scenario.frequencies()
    geometry = scenario.geometry.to_geometry(frequencies[0])
    return decorrelation_table(geometry, frequencies, args.tx_pair, args.rx_pair)


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value, help="Output format (default: csv)"
    )
    parser.add_argument("--out", type=Path, default=None, help="Write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radar-mi", description="MI-optimal waveform design for statistical MIMO radar")
    parser.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level (default: WARNING)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-correlation", help="MI versus correlation degree tau for several SNRs")
    p.add_argument("--config", type=Path, default=None, help="Scenario JSON (defaults to the built-in 2x2 scenario)")
    _add_output_options(p)
    p.set_defaults(handler=_run_correlation)

    p = sub.add_parser("sweep-frequency", help="MI versus SNR for several carrier frequencies")
    p.add_argument("--config", type=Path, required=True, help="Scenario JSON with a geometry block")
    p.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    p.add_argument("--white-noise", action="store_true", help="Use identity noise covariance")
    _add_output_options(p)
    p.set_defaults(handler=_run_frequency)

    p = sub.add_parser("schur-report", help="Pairwise Schur-convexity thresholds and p-region")
    p.add_argument("--sigma-h", type=_float_list, default=DEFAULT_TARGET, help="Target eigenvalues, comma-separated")
    p.add_argument("--sigma-w", type=_float_list, default=DEFAULT_NOISE, help="Noise eigenvalues, comma-separated")
    p.add_argument("--scan-power", type=float, default=None, help="Also scan water-filled MI at this total power")
    p.add_argument("--scan-trials", type=int, default=500, help="Comparable pairs for the scan (default: 500)")
    p.add_argument("--seed", type=int, default=None, help="Scan seed (default: 0)")
    _add_output_options(p)
    p.set_defaults(handler=_run_schur)

    p = sub.add_parser("decorrelation-check", help="Evaluate the four spatial de-correlation conditions")
    p.add_argument("--config", type=Path, required=True, help="Scenario JSON with a geometry block")
    p.add_argument("--frequency", type=float, action="append", default=None, help="Carrier frequency in Hz (repeatable)")
    p.add_argument("--tx-pair", type=_index_pair, default=(0, 1), help="Transmitter indices, e.g. 0,1")
    p.add_argument("--rx-pair", type=_index_pair, default=(0, 1), help="Receiver indices, e.g. 0,1")
    _add_output_options(p)
    p.set_defaults(handler=_run_decorrelation)
    return parser


def _emit(table: SweepTable, fmt: str, out: Path | None) -> None:
    text = table.render(fmt)
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"Wrote {len(table.rows)} rows to {out}")


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        table = args.handler(args)
        _emit(table, args.format, args.out)
    except (ConfigError, ValidationError) as e:
        print(f"radar-mi: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"radar-mi: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"radar-mi: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
