"""Scenario documents and result tables for the sweep experiments."""

from __future__ import annotations

import csv
import io
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Literal, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import __version__
from ..channel import RadarGeometry
from ..errors import ConfigError
from ..majorize import Spectrum

logger = logging.getLogger(__name__)

DEFAULT_NOISE = [8.0, 4.0, 3.0, 2.0]
ENDPOINT_TRACE_TOL = 1e-9


class SnrReference(str, Enum):
    TOTAL = "total"
    MEAN = "mean"


class NoiseKind(str, Enum):
    COLORED = "colored"
    WHITE = "white"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def _default_tau_grid() -> list[float]:
    return np.linspace(0.0, 1.0, 21).tolist()


def _default_snr_grid() -> list[float]:
    return np.arange(-10.0, 31.0, 2.0).tolist()


class GeometryBlock(BaseModel):
    tx_positions: list[tuple[float, float]] = Field(..., min_length=1, description="Transmitter (x, y) positions in meters")
    rx_positions: list[tuple[float, float]] = Field(..., min_length=1, description="Receiver (x, y) positions in meters")
    target_center: tuple[float, float] = Field(..., description="Target center (x, y) in meters")
    target_dims: tuple[float, float] = Field(..., description="Target extent (d_x, d_y) in meters")

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "tx_positions": [[2.0, 4.8], [2.2, 4.0]],
                "rx_positions": [[0.0, 2.0], [0.0, 4.0]],
                "target_center": [2.0, 2.0],
                "target_dims": [2.0, 2.0],
            }
        },
    )

    def to_geometry(self, carrier_frequency: float) -> RadarGeometry:
        return RadarGeometry(self.tx_positions, self.rx_positions, self.target_center, self.target_dims, carrier_frequency)

    @model_validator(mode="after")
    def _check_geometry(self) -> GeometryBlock:
        # any positive frequency works for the geometric checks
        self.to_geometry(1.0)
        return self


class NoiseBlock(BaseModel):
    kind: NoiseKind = Field(NoiseKind.COLORED, description="Colored noise with sigma_w, or white (identity) noise")
    sigma_w: list[float] | None = Field(None, description="Noise eigenvalues, descending (colored only)")

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _check_noise(self) -> NoiseBlock:
        if self.kind is NoiseKind.COLORED:
            if self.sigma_w is None:
                raise ValueError("colored noise needs sigma_w")
            _positive_spectrum(self.sigma_w, "sigma_w")
        return self

    def spectrum(self, dimension: int) -> Spectrum:
        if self.kind is NoiseKind.WHITE:
            return Spectrum(np.ones(dimension))
        spectrum = Spectrum(self.sigma_w)
        if len(spectrum) != dimension:
            raise ConfigError(f"Noise has {len(spectrum)} eigenvalues but N*K = {dimension}")
        return spectrum


def _positive_spectrum(values: list[float], name: str) -> Spectrum:
    spectrum = Spectrum(values)
    if len(spectrum) == 0 or spectrum.values[-1] <= 0:
        raise ConfigError(f"{name} must be non-empty and strictly positive, got {values}")
    return spectrum


class ScenarioBase(BaseModel):
    schema_version: Literal[1] = Field(1, alias="schema", description="Scenario schema version")
    snr_reference: SnrReference = Field(
        SnrReference.TOTAL, description="SNR relative to total noise power ('total') or mean noise eigenvalue ('mean')"
    )

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class CorrelationSweepConfig(ScenarioBase):
    M: int = Field(2, ge=1, description="Transmitters")
    N: int = Field(2, ge=1, description="Receivers")
    K: int = Field(2, ge=1, description="Waveform samples per transmitter")
    sigma_w: list[float] = Field(default_factory=lambda: list(DEFAULT_NOISE), description="Noise eigenvalues, descending")
    tau_grid: list[float] = Field(default_factory=_default_tau_grid, min_length=1, description="Correlation degrees in [0, 1]")
    snr_list_db: list[float] = Field(default_factory=lambda: [0.0, 5.0, 20.0], min_length=1, description="SNR values in dB")
    correlated_endpoint: list[float] | None = Field(None, description="Spectrum at tau=1, defaults to [1, 0, ..., 0]")
    uncorrelated_endpoint: list[float] | None = Field(None, description="Spectrum at tau=0, defaults to flat 1/MN")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "schema": 1,
                "M": 2,
                "N": 2,
                "K": 2,
                "sigma_w": DEFAULT_NOISE,
                "snr_list_db": [0, 5, 20],
            }
        }
    )

    @model_validator(mode="after")
    def _check_sweep(self) -> CorrelationSweepConfig:
        mn = self.M * self.N
        if self.N * self.K < mn:
            raise ValueError(f"N*K={self.N * self.K} must be >= M*N={mn}")
        if len(self.sigma_w) != self.N * self.K:
            raise ValueError(f"sigma_w needs N*K={self.N * self.K} values, got {len(self.sigma_w)}")
        _positive_spectrum(self.sigma_w, "sigma_w")
        if any(t < 0 or t > 1 for t in self.tau_grid) or self.tau_grid != sorted(self.tau_grid):
            raise ValueError("tau_grid must be sorted ascending within [0, 1]")
        if self.correlated_endpoint is None:
            self.correlated_endpoint = [1.0] + [0.0] * (mn - 1)
        if self.uncorrelated_endpoint is None:
            self.uncorrelated_endpoint = [1.0 / mn] * mn
        correlated = Spectrum(self.correlated_endpoint)
        uncorrelated = Spectrum(self.uncorrelated_endpoint)
        if len(correlated) != mn or len(uncorrelated) != mn:
            raise ValueError(f"Endpoint spectra need M*N={mn} values")
        if abs(correlated.trace - uncorrelated.trace) > ENDPOINT_TRACE_TOL * max(1.0, correlated.trace):
            raise ValueError(f"Endpoint spectra must share a trace, got {correlated.trace} and {uncorrelated.trace}")
        return self


class FrequencySweepConfig(ScenarioBase):
    geometry: GeometryBlock = Field(..., description="Antenna and target layout")
    frequencies_hz: list[float] = Field(..., min_length=2, description="Carrier frequencies in Hz")
    Q: int = Field(1000, ge=1, description="Number of scatterers")
    seed: int = Field(0, description="Scatterer seed, shared by every frequency")
    K: int = Field(2, ge=1, description="Waveform samples per transmitter")
    snr_grid_db: list[float] = Field(default_factory=_default_snr_grid, min_length=1, description="SNR values in dB")
    noise: NoiseBlock = Field(
        default_factory=lambda: NoiseBlock(kind=NoiseKind.COLORED, sigma_w=list(DEFAULT_NOISE)),
        description="Noise covariance, identity eigenbasis",
    )

    @model_validator(mode="after")
    def _check_sweep(self) -> FrequencySweepConfig:
        m = len(self.geometry.tx_positions)
        n = len(self.geometry.rx_positions)
        if n * self.K < m * n:
            raise ValueError(f"N*K={n * self.K} must be >= M*N={m * n}")
        if any(f <= 0 for f in self.frequencies_hz):
            raise ValueError("frequencies_hz must be positive")
        self.noise.spectrum(n * self.K)
        return self


class GeometryScenario(BaseModel):
    """Geometry view of any scenario file, used by the decorrelation check."""

    geometry: GeometryBlock
    frequencies_hz: list[float] | None = None
    carrier_frequency_hz: float | None = Field(None, gt=0)

    model_config = ConfigDict(extra="ignore")

    def frequencies(self) -> list[float]:
        if self.frequencies_hz:
            return list(self.frequencies_hz)
        if self.carrier_frequency_hz is not None:
            return [self.carrier_frequency_hz]
        raise ConfigError("Scenario names no carrier frequency")


Cell = float | int | str | bool | None


def _format_cell(value: Cell) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if value is None:
        return ""
    return str(value)


class SweepTable(BaseModel):
    columns: list[str] = Field(..., description="Column names")
    rows: list[list[Cell]] = Field(default_factory=list, description="Rows in evaluation order")
    metadata: dict[str, Any] = Field(default_factory=dict, description="Config echo, seed and version")

    @model_validator(mode="after")
    def _check_rows(self) -> SweepTable:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"Row {row} does not match columns {self.columns}")
        self.metadata.setdefault("version", __version__)
        return self

    def column(self, name: str) -> list[Cell]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for key in sorted(self.metadata):
            buffer.write(f"# {key}={json.dumps(self.metadata[key], sort_keys=True)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(value) for value in row])
        return buffer.getvalue()

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def render(self, fmt: OutputFormat | str = OutputFormat.CSV) -> str:
        fmt = OutputFormat(fmt)
        return self.to_csv() if fmt is OutputFormat.CSV else self.to_json()


M = TypeVar("M", bound=BaseModel)


def load_config(path: str | Path, model: type[M]) -> M:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    logger.info(f"Loaded scenario {path}")
    return model.model_validate_json(text)
