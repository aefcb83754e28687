"""Sweeps, reports and the command-line interface."""

from .models import CorrelationSweepConfig, FrequencySweepConfig, GeometryScenario, SweepTable, load_config
from .reports import decorrelation_table, schur_report
from .sweeps import power_from_snr, sweep_correlation, sweep_snr_frequency

__all__ = [
    "CorrelationSweepConfig",
    "FrequencySweepConfig",
    "GeometryScenario",
    "SweepTable",
    "decorrelation_table",
    "load_config",
    "power_from_snr",
    "schur_report",
    "sweep_correlation",
    "sweep_snr_frequency",
]
