"""Mutual information between target response and received echo, the MI-optimal waveform
and its water-filling power allocation.

Mode ``i`` of the target covariance (eigenvalues descending) is always paired with the
``i``-th smallest noise eigenvalue. For a square problem that is noise eigenvalue
``T - i + 1`` (1-based), the oppositional order that maximises the log-determinant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Literal

import numpy as np
import numpy.typing as npt

from .errors import ConfigError, DimensionError, NumericalError, SingularMatrixError
from .majorize import Spectrum, SpectrumLike, as_spectrum
from .numlin import ComplexMatrix, HermitianMatrix, RealVector, complex_matrix, hermitian_eig, log_det_psd

logger = logging.getLogger(__name__)

Units = Literal["bits", "nats"]

MI_NEGATIVE_TOL = 1e-9


class MIMethod(str, Enum):
    LOGDET = "logdet"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class MIResult:
    value: float
    method: MIMethod
    units: Units = "bits"


@dataclass(frozen=True)
class WaveformMatrix:
    """Space-time waveform S̃ of shape (N*K, M*N)."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", complex_matrix(self.matrix))

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class PowerAllocation:
    sigma_s: RealVector
    water_level_inverse: float
    active_count: int
    p_tot: float

    @property
    def active(self) -> npt.NDArray[np.bool_]:
        return self.sigma_s > 0


def _to_units(nats, units: Units):
    if units == "nats":
        return nats
    if units == "bits":
        return nats / np.log(2.0)
    raise ConfigError(f"Unknown MI units {units!r}")


def paired_noise(size: int, sigma_w: SpectrumLike) -> RealVector:
    """Noise eigenvalue carried by each of the ``size`` target modes: the smallest ones, ascending."""
    sigma_w = as_spectrum(sigma_w)
    if len(sigma_w) < size:
        raise DimensionError(f"Need at least {size} noise eigenvalues, got {len(sigma_w)}")
    return sigma_w.values[::-1][:size].copy()


def noise_floors(sigma_h: SpectrumLike, sigma_w: SpectrumLike) -> RealVector:
    """Noise-to-gain floor of every mode; modes without target energy get +inf."""
    h = as_spectrum(sigma_h).values
    w = paired_noise(h.size, sigma_w)
    floors = np.full(h.size, np.inf)
    usable = h > 0
    floors[usable] = w[usable] / h[usable]
    return floors


def waterfill(sigma_h: SpectrumLike, sigma_w: SpectrumLike, p_tot: float) -> PowerAllocation:
    """Closed-form active-set water-filling.

    The floors are visited in ascending order (stable, so equal floors keep index order).
    With k modes active the level is (P + sum of the k lowest floors) / k, and the active set
    is the largest prefix whose own level stays above its last floor.
    """
    if not np.isfinite(p_tot) or p_tot <= 0:
        raise ConfigError(f"Total power must be positive and finite, got {p_tot}")
    floors = noise_floors(sigma_h, sigma_w)
    order = np.argsort(floors, kind="stable")
    sorted_floors = floors[order]
    usable = int(np.count_nonzero(np.isfinite(sorted_floors)))
    if usable == 0:
        raise ConfigError("Water-filling has no usable eigenmode: every target eigenvalue is zero")

    candidates = sorted_floors[:usable]
    levels = (p_tot + np.cumsum(candidates)) / np.arange(1, usable + 1)
    feasible = np.flatnonzero(candidates < levels)
    # the first floor is always below its own level since p_tot > 0
    active_count = int(feasible[-1]) + 1
    level = float(levels[active_count - 1])

    sigma_s = np.zeros(floors.size)
    sigma_s[order[:active_count]] = level - candidates[:active_count]
    sigma_s.setflags(write=False)
    logger.debug(f"Water level 1/lambda={level:.6g} with {active_count}/{floors.size} active modes at P={p_tot:.6g}")
    return PowerAllocation(sigma_s, level, active_count, float(p_tot))


def equal_power(size: int, p_tot: float) -> RealVector:
    if size < 1:
        raise ConfigError(f"size must be >= 1, got {size}")
    return np.full(size, p_tot / size)


def spectral_mi(
    sigma_s: npt.ArrayLike, sigma_h: SpectrumLike, sigma_w: SpectrumLike, units: Units = "bits"
) -> MIResult:
    """Sum over modes of log(1 + s_i h_i / w_paired(i))."""
    s = np.asarray(sigma_s, dtype=np.float64)
    h = as_spectrum(sigma_h).values
    if s.shape != h.shape:
        raise DimensionError(f"Allocation length {s.size} does not match {h.size} target eigenvalues")
    if np.any(s < 0):
        raise ConfigError(f"Allocated powers must be nonnegative: {s.tolist()}")
    w = paired_noise(h.size, sigma_w)
    gain = s * h
    lit = gain > 0
    if np.any(w[lit] <= 0):
        raise NumericalError("Mutual information is infinite: a powered mode sees zero noise")
    nats = float(np.sum(np.log1p(gain[lit] / w[lit])))
    return MIResult(_to_units(nats, units), MIMethod.SPECTRAL, units)


def mutual_information(
    waveform: WaveformMatrix, r_h: HermitianMatrix, r_w: HermitianMatrix, units: Units = "bits"
) -> MIResult:
    """log det(S R_h S^H + R_w) - log det(R_w).

    The sum already runs over every receiver through the N*K rows of S̃, so no extra
    factor of N is applied.
    """
    s = waveform.matrix
    rows, cols = s.shape
    if r_h.dimension != cols:
        raise DimensionError(f"R_h is {r_h.dimension}x{r_h.dimension} but the waveform has {cols} columns")
    if r_w.dimension != rows:
        raise DimensionError(f"R_w is {r_w.dimension}x{r_w.dimension} but the waveform has {rows} rows")
    try:
        noise_logdet = log_det_psd(r_w)
    except SingularMatrixError as e:
        raise SingularMatrixError(f"Noise covariance must be positive definite: {e}") from e

    received = HermitianMatrix.from_array(s @ r_h.entries @ s.conj().T + r_w.entries, symmetrize=True)
    nats = log_det_psd(received) - noise_logdet
    if nats < -MI_NEGATIVE_TOL:
        raise NumericalError(f"Computed mutual information is negative ({nats:.3e} nats)")
    return MIResult(_to_units(max(nats, 0.0), units), MIMethod.LOGDET, units)


def optimal_waveform(
    r_h: HermitianMatrix, r_w: HermitianMatrix, p_tot: float
) -> tuple[WaveformMatrix, PowerAllocation]:
    """S̃ = V_w Z V_h^H with sqrt(sigma_s,i) at Z[NK-1-i, i].

    Row NK-1-i of Z lines up with the i-th smallest noise eigenvalue, so the largest target
    mode meets the quietest noise direction. The result is the unconstrained optimum; it is
    generally not of the block form I_N (x) S.
    """
    mn = r_h.dimension
    nk = r_w.dimension
    if nk < mn:
        raise DimensionError(f"Waveform needs N*K >= M*N, got N*K={nk} and M*N={mn}")
    target = hermitian_eig(r_h)
    noise = hermitian_eig(r_w)
    sigma_h = Spectrum.of(target.eigenvalues)
    sigma_w = Spectrum.of(noise.eigenvalues)
    if sigma_w.values[-1] <= 0:
        raise SingularMatrixError(f"Noise covariance must be positive definite, smallest eigenvalue {noise.eigenvalues[-1]:.3e}")

    allocation = waterfill(sigma_h, sigma_w, p_tot)
    z = np.zeros((nk, mn))
    z[nk - 1 - np.arange(mn), np.arange(mn)] = np.sqrt(allocation.sigma_s)
    s = noise.eigenvectors @ z @ target.eigenvectors.conj().T
    return WaveformMatrix(s), allocation


def mi_gradient(sigma_s: npt.ArrayLike, sigma_h: SpectrumLike, sigma_w: SpectrumLike, units: Units = "nats") -> RealVector:
    """Partial derivatives of the spectral MI with respect to each target eigenvalue, allocation held fixed."""
    s = np.asarray(sigma_s, dtype=np.float64)
    h = as_spectrum(sigma_h).values
    if s.shape != h.shape:
        raise DimensionError(f"Allocation length {s.size} does not match {h.size} target eigenvalues")
    w = paired_noise(h.size, sigma_w)
    denominator = h * s + w
    if np.any(denominator <= 0):
        raise NumericalError("Gradient undefined: a mode has zero signal and zero noise")
    gradient = s / denominator
    return _to_units(gradient, units)


def schur_differences(sigma_s: npt.ArrayLike, sigma_h: SpectrumLike, sigma_w: SpectrumLike) -> npt.NDArray[np.float64]:
    """D[i, j] = dMI/dh_i - dMI/dh_j, in nats."""
    g = mi_gradient(sigma_s, sigma_h, sigma_w)
    return g[:, None] - g[None, :]


def fiedler_bounds(alpha: SpectrumLike, beta: SpectrumLike) -> tuple[float, float]:
    """Bounds on det(A + B) from the spectra of PSD A and B.

    Same-order pairing gives the lower bound, opposite-order pairing the upper one.
    """
    a = as_spectrum(alpha).values
    b = as_spectrum(beta).values
    if a.size != b.size:
        raise DimensionError(f"Spectra have different lengths: {a.size} vs {b.size}")
    return float(np.prod(a + b)), float(np.prod(a + b[::-1]))
