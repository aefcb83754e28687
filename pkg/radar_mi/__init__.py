"""MI-optimal waveform design and spatial-correlation analysis for statistical MIMO radar."""

from __future__ import annotations

__version__ = "0.1.0"

from .channel import (
    ChannelCorrelation,
    ChannelModel,
    DecorrelationReport,
    RadarGeometry,
    ScattererSet,
    build_channel,
    channel_matrix,
    covariance_spectrum,
    decorrelation_report,
    path_matrices,
    steering_matrix,
    synthesize_scatterers,
    target_covariance,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    NumericalError,
    RadarMIError,
    SingularMatrixError,
)
from .majorize import (
    Ordering,
    SchurClass,
    SchurVerdict,
    Spectrum,
    ThresholdTable,
    majorizes,
    more_correlated,
    ostrowski_check,
    schur_scan,
    schur_threshold,
)
from .numlin import EigDecomposition, HermitianMatrix, hermitian_eig, kron, log_det_psd, vec
from .waveform import (
    MIResult,
    PowerAllocation,
    WaveformMatrix,
    fiedler_bounds,
    mutual_information,
    optimal_waveform,
    spectral_mi,
    waterfill,
)

__all__ = [
    "__version__",
    "ChannelCorrelation",
    "ChannelModel",
    "ConfigError",
    "ConvergenceError",
    "DecorrelationReport",
    "DimensionError",
    "EigDecomposition",
    "HermitianMatrix",
    "MIResult",
    "NumericalError",
    "Ordering",
    "PowerAllocation",
    "RadarGeometry",
    "RadarMIError",
    "ScattererSet",
    "SchurClass",
    "SchurVerdict",
    "SingularMatrixError",
    "Spectrum",
    "ThresholdTable",
    "WaveformMatrix",
    "build_channel",
    "channel_matrix",
    "covariance_spectrum",
    "decorrelation_report",
    "fiedler_bounds",
    "hermitian_eig",
    "kron",
    "log_det_psd",
    "majorizes",
    "more_correlated",
    "mutual_information",
    "optimal_waveform",
    "ostrowski_check",
    "path_matrices",
    "schur_scan",
    "schur_threshold",
    "spectral_mi",
    "steering_matrix",
    "synthesize_scatterers",
    "target_covariance",
    "vec",
    "waterfill",
]
