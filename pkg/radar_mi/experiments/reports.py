from __future__ import annotations

import logging
from collections.abc import Sequence

from ..channel import CONDITION_NAMES, RadarGeometry, decorrelation_report
from ..majorize import SpectrumLike, as_spectrum, schur_scan, schur_threshold
from ..waveform import spectral_mi, waterfill
from .models import SweepTable

logger = logging.getLogger(__name__)


def schur_report(
    sigma_h: SpectrumLike,
    sigma_w: SpectrumLike,
    scan_power: float | None = None,
    scan_trials: int = 500,
    seed: int = 0,
    workers: int | None = None,
) -> SweepTable:
    """Pairwise threshold table for equal-power Schur-convexity, with an optional sampling scan.

    The scan runs ``schur_scan`` on the water-filled MI at ``scan_power`` over spectra with the
    same trace as ``sigma_h``; its verdict is reported as consistency, not proof.
    """
    sigma_h, sigma_w = as_spectrum(sigma_h), as_spectrum(sigma_w)
    table = schur_threshold(sigma_h, sigma_w)
    rows = [
        [pair.i, pair.j, pair.ratio if pair.defined else "undefined", "ok" if pair.defined else "undefined"]
        for pair in table.pairs
    ]
    metadata = {
        "experiment": "schur-threshold",
        "sigma_h": sigma_h.tolist(),
        "sigma_w": sigma_w.tolist(),
        "max_ratio": table.max_ratio,
        "p_region": table.region_label(),
        "undefined_pairs": len(table.undefined),
        "blocking_pairs": [[pair.i, pair.j] for pair in table.blocking],
    }
    if scan_power is not None:

        def mi_at_power(h):
            allocation = waterfill(h, sigma_w, scan_power)
            return spectral_mi(allocation.sigma_s, h, sigma_w).value

        verdict = schur_scan(mi_at_power, len(sigma_h), sigma_h.trace, scan_trials, seed, workers=workers)
        metadata["scan_power"] = scan_power
        metadata["scan_seed"] = seed
        metadata["scan_verdict"] = verdict.classification.value
        metadata["scan_summary"] = verdict.summary()
    return SweepTable(columns=["i", "j", "ratio", "status"], rows=rows, metadata=metadata)


def decorrelation_table(
    geometry: RadarGeometry,
    frequencies: Sequence[float],
    tx_pair: tuple[int, int] = (0, 1),
    rx_pair: tuple[int, int] = (0, 1),
) -> SweepTable:
    columns = ["frequency_hz", "wavelength_m"]
    for name in CONDITION_NAMES:
        columns += [f"{name}_value", f"{name}_threshold", f"{name}_satisfied"]
    columns += ["satisfied_count", "overall"]

    rows = []
    for frequency in frequencies:
        at_frequency = geometry.with_frequency(frequency)
        report = decorrelation_report(at_frequency, tx_pair, rx_pair)
        row: list = [float(frequency), at_frequency.wavelength]
        for value, threshold, ok in zip(report.values, report.thresholds, report.satisfied):
            row += [value, threshold, ok]
        row += [sum(report.satisfied), report.overall.value]
        rows.append(row)
        logger.info(f"{frequency:.6g} Hz: {report.overall.value} ({sum(report.satisfied)} of 4 conditions)")
    return SweepTable(
        columns=columns,
        rows=rows,
        metadata={"experiment": "decorrelation", "tx_pair": list(tx_pair), "rx_pair": list(rx_pair)},
    )
