"""Geometric channel of a widely separated MIMO radar looking at a distributed target.

Orientation: H is M x N (rows are transmitters, columns receivers) and H = (K Sigma G)^T,
so vec(H) stacks one length-M block per receiver and S̃ = I_N (x) S conforms with it.
Only propagation phases are modelled (narrowband, no amplitude decay).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import ConfigError, DimensionError
from .majorize import Spectrum
from .numlin import ComplexMatrix, HermitianMatrix, complex_matrix, hermitian_eig
from .runtime import parallel_map

logger = logging.getLogger(__name__)

MONTE_CARLO_CHUNK = 1000

Points = npt.NDArray[np.float64]


def _points(data: npt.ArrayLike, name: str) -> Points:
    points = np.array(data, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 1:
        raise ConfigError(f"{name} must be a non-empty list of (x, y) pairs, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise ConfigError(f"{name} must be finite")
    points.setflags(write=False)
    return points


def _pair(data: npt.ArrayLike, name: str) -> Points:
    pair = np.array(data, dtype=np.float64)
    if pair.shape != (2,) or not np.all(np.isfinite(pair)):
        raise ConfigError(f"{name} must be a finite (x, y) pair, got {data!r}")
    pair.setflags(write=False)
    return pair


@dataclass(frozen=True)
class RadarGeometry:
    tx_positions: Points
    rx_positions: Points
    target_center: Points
    target_dims: Points
    carrier_frequency: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "tx_positions", _points(self.tx_positions, "tx_positions"))
        object.__setattr__(self, "rx_positions", _points(self.rx_positions, "rx_positions"))
        object.__setattr__(self, "target_center", _pair(self.target_center, "target_center"))
        object.__setattr__(self, "target_dims", _pair(self.target_dims, "target_dims"))
        if np.any(self.target_dims <= 0):
            raise ConfigError(f"Target dimensions must be positive, got {self.target_dims.tolist()}")
        if not math.isfinite(self.carrier_frequency) or self.carrier_frequency <= 0:
            raise ConfigError(f"Carrier frequency must be positive, got {self.carrier_frequency}")
        for name, antennas in (("transmitter", self.tx_positions), ("receiver", self.rx_positions)):
            if np.any(self.distances_to_center(antennas) == 0):
                raise ConfigError(f"A {name} coincides with the target center")

    @property
    def M(self) -> int:
        return self.tx_positions.shape[0]

    @property
    def N(self) -> int:
        return self.rx_positions.shape[0]

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    def with_frequency(self, carrier_frequency: float) -> RadarGeometry:
        return replace(self, carrier_frequency=carrier_frequency)

    def distances_to_center(self, antennas: Points) -> npt.NDArray[np.float64]:
        return np.linalg.norm(antennas - self.target_center, axis=1)


@dataclass(frozen=True)
class ScattererSet:
    positions: Points
    reflectivities: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        positions = _points(self.positions, "positions")
        alpha = np.array(self.reflectivities, dtype=np.complex128).ravel()
        if alpha.size != positions.shape[0]:
            raise DimensionError(f"{positions.shape[0]} scatterer positions but {alpha.size} reflectivities")
        alpha.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "reflectivities", alpha)

    @property
    def Q(self) -> int:
        return self.reflectivities.size


@dataclass(frozen=True)
class ChannelModel:
    H: ComplexMatrix
    G: ComplexMatrix
    K: ComplexMatrix
    Sigma: ComplexMatrix


class ChannelCorrelation(str, Enum):
    CORRELATED = "correlated"
    UNCORRELATED = "uncorrelated"


CONDITION_NAMES = ("tx_x", "tx_y", "rx_x", "rx_y")


@dataclass(frozen=True)
class DecorrelationReport:
    """The four aperture tests; the channel decorrelates when any one of them holds."""

    values: tuple[float, float, float, float]
    thresholds: tuple[float, float, float, float]
    satisfied: tuple[bool, bool, bool, bool]

    @property
    def overall(self) -> ChannelCorrelation:
        return ChannelCorrelation.UNCORRELATED if any(self.satisfied) else ChannelCorrelation.CORRELATED


def complex_gaussian(rng: np.random.Generator, shape: int | tuple[int, ...], variance: float) -> npt.NDArray[np.complex128]:
    """Zero-mean circular complex Gaussian samples with E|z|^2 = variance."""
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def synthesize_scatterers(geometry: RadarGeometry, Q: int, rng_seed: int) -> ScattererSet:
    """Q points uniform over the target rectangle with CN(0, 1/Q) reflectivities."""
    if Q < 1:
        raise ConfigError(f"Q must be >= 1, got {Q}")
    rng = np.random.default_rng(rng_seed)
    offsets = rng.uniform(-0.5, 0.5, size=(Q, 2)) * geometry.target_dims
    alpha = complex_gaussian(rng, Q, 1.0 / Q)
    return ScattererSet(geometry.target_center + offsets, alpha)


def _phase(distances: npt.NDArray[np.float64], carrier_frequency: float) -> npt.NDArray[np.complex128]:
    return np.exp(-2j * np.pi * carrier_frequency * distances / SPEED_OF_LIGHT)


def path_matrices(geometry: RadarGeometry, scatterers: ScattererSet) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """G (Q x M) transmit phases, K (N x Q) receive phases and Sigma = diag(alpha)."""
    points = scatterers.positions
    d_tx = np.linalg.norm(points[:, None, :] - geometry.tx_positions[None, :, :], axis=-1)
    d_rx = np.linalg.norm(geometry.rx_positions[:, None, :] - points[None, :, :], axis=-1)
    G = complex_matrix(_phase(d_tx, geometry.carrier_frequency))
    K = complex_matrix(_phase(d_rx, geometry.carrier_frequency))
    Sigma = complex_matrix(np.diag(scatterers.reflectivities))
    return G, K, Sigma


def channel_matrix(G: npt.ArrayLike, K: npt.ArrayLike, Sigma: npt.ArrayLike) -> ComplexMatrix:
    G, K, Sigma = complex_matrix(G), complex_matrix(K), complex_matrix(Sigma)
    q = Sigma.shape[0]
    if Sigma.shape != (q, q) or G.shape[0] != q or K.shape[1] != q:
        raise DimensionError(f"Non-conformable path matrices: G {G.shape}, K {K.shape}, Sigma {Sigma.shape}")
    return complex_matrix((K @ Sigma @ G).T)


def build_channel(geometry: RadarGeometry, scatterers: ScattererSet) -> ChannelModel:
    G, K, Sigma = path_matrices(geometry, scatterers)
    return ChannelModel(channel_matrix(G, K, Sigma), G, K, Sigma)


def steering_matrix(G: npt.ArrayLike, K: npt.ArrayLike) -> ComplexMatrix:
    """Column q is vec of the unit-reflectivity channel of scatterer q: v_q[m + M*n] = G[q, m] K[n, q]."""
    G, K = complex_matrix(G), complex_matrix(K)
    if G.shape[0] != K.shape[1]:
        raise DimensionError(f"G has {G.shape[0]} scatterers but K has {K.shape[1]}")
    n, q = K.shape
    m = G.shape[1]
    return complex_matrix((K[:, None, :] * G.T[None, :, :]).reshape(n * m, q))


def target_covariance(
    geometry: RadarGeometry,
    scatterers: ScattererSet,
    mode: Literal["analytic", "monte_carlo"] = "analytic",
    draws: int = 10_000,
    seed: int = 0,
    workers: int | None = None,
) -> HermitianMatrix:
    """E[vec(H) vec(H)^H] over the reflectivities with the scatterer positions held fixed.

    ``analytic`` is V V^H / Q. ``monte_carlo`` averages fresh CN(0, 1/Q) draws in chunks,
    each chunk on its own spawned stream, so the estimate does not depend on ``workers``.
    """
    G, K, _ = path_matrices(geometry, scatterers)
    V = steering_matrix(G, K)
    q = scatterers.Q
    if mode == "analytic":
        return HermitianMatrix.from_array(V @ V.conj().T / q, symmetrize=True)
    if mode != "monte_carlo":
        raise ConfigError(f"Unknown covariance mode {mode!r}")
    if draws < 1:
        raise ConfigError(f"Monte Carlo needs at least one draw, got {draws}")

    chunks = [MONTE_CARLO_CHUNK] * (draws // MONTE_CARLO_CHUNK)
    if draws % MONTE_CARLO_CHUNK:
        chunks.append(draws % MONTE_CARLO_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(len(chunks))

    def accumulate(job: tuple[int, np.random.SeedSequence]) -> ComplexMatrix:
        size, stream = job
        alpha = complex_gaussian(np.random.default_rng(stream), (size, q), 1.0 / q)
        samples = alpha @ V.T
        return samples.T @ samples.conj()

    total = sum(parallel_map(accumulate, zip(chunks, streams), workers))
    logger.debug(f"Monte Carlo covariance from {draws} draws in {len(chunks)} chunks")
    return HermitianMatrix.from_array(total / draws, symmetrize=True)


def covariance_spectrum(r: HermitianMatrix, trace: float | None = None) -> Spectrum:
    """Descending eigenvalues of r, optionally rescaled to a common trace for correlation comparisons."""
    spectrum = Spectrum.of(hermitian_eig(r).eigenvalues)
    return spectrum if trace is None else spectrum.normalized(trace)


def _check_pair(pair: tuple[int, int], count: int, name: str) -> None:
    first, second = pair
    if not (0 <= first < count and 0 <= second < count):
        raise ConfigError(f"{name} indices {pair} out of range for {count} antennas")
    if first == second:
        raise ConfigError(f"{name} indices must differ, got {pair}")


def decorrelation_report(
    geometry: RadarGeometry, tx_pair: tuple[int, int] = (0, 1), rx_pair: tuple[int, int] = (0, 1)
) -> DecorrelationReport:
    """Compare the spread of normalised antenna coordinates against lambda/d_x and lambda/d_y.

    Each term divides an antenna's coordinate by that antenna's own distance to the target
    center, and the difference is taken in absolute value so the test does not depend on
    antenna labelling.
    """
    _check_pair(tx_pair, geometry.M, "tx_pair")
    _check_pair(rx_pair, geometry.N, "rx_pair")

    def spread(antennas: Points, pair: tuple[int, int]) -> tuple[float, float]:
        selected = antennas[list(pair)]
        normalised = selected / geometry.distances_to_center(selected)[:, None]
        dx, dy = np.abs(normalised[0] - normalised[1])
        return float(dx), float(dy)

    values = (*spread(geometry.tx_positions, tx_pair), *spread(geometry.rx_positions, rx_pair))
    threshold_x = geometry.wavelength / float(geometry.target_dims[0])
    threshold_y = geometry.wavelength / float(geometry.target_dims[1])
    thresholds = (threshold_x, threshold_y, threshold_x, threshold_y)
    satisfied = tuple(value > threshold for value, threshold in zip(values, thresholds))
    return DecorrelationReport(values, thresholds, satisfied)
