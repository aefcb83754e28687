"""Majorization order on spectra, sampled Schur-convexity checks and the colored-noise threshold table."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np
import numpy.typing as npt

from .errors import ConfigError, DimensionError, NumericalError
from .runtime import parallel_map

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
EIGEN_NOISE_RTOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Nonnegative eigenvalue vector sorted in descending order."""

    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DimensionError(f"Spectrum must be one-dimensional, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ConfigError("Spectrum entries must be finite")
        if np.any(np.diff(values) > 0):
            raise ConfigError(f"Spectrum must be sorted in descending order: {values.tolist()}")
        if values.size and values[-1] < 0:
            raise ConfigError(f"Spectrum entries must be nonnegative: {values.tolist()}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, values: npt.ArrayLike, rtol: float = EIGEN_NOISE_RTOL) -> Spectrum:
        """Sort descending and zero out negative entries no larger than eigensolver noise."""
        values = np.sort(np.asarray(values, dtype=np.float64).ravel())[::-1]
        scale = max(float(np.max(np.abs(values))) if values.size else 0.0, 1.0)
        if values.size and values[-1] < -rtol * scale:
            raise ConfigError(f"Spectrum has a negative entry {values[-1]:.3e} beyond eigensolver noise")
        return cls(np.clip(values, 0.0, None))

    @property
    def trace(self) -> float:
        return float(np.sum(self.values))

    def normalized(self, trace: float = 1.0) -> Spectrum:
        current = self.trace
        if current <= 0:
            raise NumericalError("Cannot normalize a spectrum with zero trace")
        return Spectrum(self.values * (trace / current))

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return np.asarray(self.values, dtype=dtype)

    def tolist(self) -> list[float]:
        return self.values.tolist()


SpectrumLike = Spectrum | Sequence[float] | npt.NDArray[np.float64]


def as_spectrum(values: SpectrumLike) -> Spectrum:
    return values if isinstance(values, Spectrum) else Spectrum.of(values)


class Ordering(str, Enum):
    FIRST = "first"
    SECOND = "second"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class SchurClass(str, Enum):
    CONVEX = "convex-consistent"
    CONCAVE = "concave-consistent"
    NEITHER = "neither"


@dataclass(frozen=True)
class SchurVerdict:
    """Outcome of a sampling scan. A verdict is consistency with the order, never a proof."""

    classification: SchurClass
    trials: int
    convex_witness: tuple[Spectrum, Spectrum] | None = None
    concave_witness: tuple[Spectrum, Spectrum] | None = None

    def __post_init__(self) -> None:
        if self.classification is SchurClass.NEITHER and (self.convex_witness is None or self.concave_witness is None):
            raise ConfigError("A 'neither' verdict needs a witness for both directions")

    def summary(self) -> str:
        return f"{self.classification.value} over {self.trials} comparable pairs (sampling check, not a proof)"


def _check_lengths(x: Spectrum, y: Spectrum) -> None:
    if len(x) != len(y):
        raise DimensionError(f"Spectra have different lengths: {len(x)} vs {len(y)}")


def _slack(tol: float, *totals: float) -> float:
    return tol * max(1.0, *(abs(float(total)) for total in totals))


def majorizes(x: SpectrumLike, y: SpectrumLike, tol: float = DEFAULT_TOL) -> bool:
    """True iff x majorizes y: prefix sums of x dominate those of y and the totals agree.

    ``tol`` is relative to the larger total (floored at 1), so spectra of any scale compare
    the same way.
    """
    x, y = as_spectrum(x), as_spectrum(y)
    _check_lengths(x, y)
    px = np.cumsum(x.values)
    py = np.cumsum(y.values)
    if px.size == 0:
        return True
    slack = _slack(tol, px[-1], py[-1])
    if abs(px[-1] - py[-1]) > slack:
        return False
    return bool(np.all(px >= py - slack))


def more_correlated(s1: SpectrumLike, s2: SpectrumLike, tol: float = DEFAULT_TOL) -> Ordering:
    """Correlation order of two covariance spectra with equal trace."""
    s1, s2 = as_spectrum(s1), as_spectrum(s2)
    _check_lengths(s1, s2)
    if abs(s1.trace - s2.trace) > _slack(tol, s1.trace):
        raise ConfigError(f"Correlation order needs equal traces, got {s1.trace!r} and {s2.trace!r}")
    if np.all(np.abs(s1.values - s2.values) <= _slack(tol, s1.trace, s2.trace)):
        return Ordering.EQUAL
    first = majorizes(s1, s2, tol)
    second = majorizes(s2, s1, tol)
    if first and second:
        return Ordering.EQUAL
    if first:
        return Ordering.FIRST
    if second:
        return Ordering.SECOND
    return Ordering.INCOMPARABLE


def t_transform(x: npt.ArrayLike, i: int, j: int, t: float) -> npt.NDArray[np.float64]:
    """Robin-Hood transfer between entries i and j, re-sorted descending. The result is majorized by x."""
    if not 0.0 <= t <= 1.0:
        raise ConfigError(f"T-transform weight must lie in [0, 1], got {t}")
    y = np.array(x, dtype=np.float64)
    xi, xj = y[i], y[j]
    y[i] = t * xi + (1.0 - t) * xj
    y[j] = (1.0 - t) * xi + t * xj
    return np.sort(y)[::-1]


def random_spectrum(rng: np.random.Generator, dimension: int, trace: float, min_share: float = 0.0) -> Spectrum:
    """Flat-Dirichlet spectrum blended with ``min_share`` of the flat one."""
    if dimension < 1:
        raise ConfigError(f"dimension must be >= 1, got {dimension}")
    if not 0.0 <= min_share <= 1.0:
        raise ConfigError(f"min_share must lie in [0, 1], got {min_share}")
    weights = rng.dirichlet(np.ones(dimension))
    weights = (1.0 - min_share) * weights + min_share / dimension
    return Spectrum.of(weights * trace)


def comparable_pair(
    rng: np.random.Generator, dimension: int, trace: float, min_share: float = 0.0
) -> tuple[Spectrum, Spectrum]:
    """A random spectrum a and a chain of 1-10 T-transforms of it, so a majorizes b by construction."""
    a = random_spectrum(rng, dimension, trace, min_share)
    b = a.values.copy()
    if dimension > 1:
        for _ in range(int(rng.integers(1, 11))):
            i, j = sorted(rng.choice(dimension, size=2, replace=False))
            b = t_transform(b, int(i), int(j), float(rng.uniform()))
    return a, Spectrum.of(b)


def schur_scan(
    f: Callable[[npt.NDArray[np.float64]], float],
    dimension: int,
    trace: float,
    trials: int,
    rng_seed: int,
    *,
    min_share: float = 0.0,
    tol: float = 1e-12,
    atol: float | None = None,
    workers: int | None = None,
) -> SchurVerdict:
    """Falsification harness: evaluate f on ``trials`` comparable pairs and classify.

    Every trial draws from its own stream spawned from ``rng_seed``, so the verdict does not
    depend on how many workers evaluate it.

    A pair is a witness only when f differs by more than the slack: ``tol`` relative to the
    larger |f| (floored at 1), or the absolute ``atol`` when one is given.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    streams = np.random.SeedSequence(rng_seed).spawn(trials)

    def evaluate(stream: np.random.SeedSequence) -> tuple[Spectrum, Spectrum, float, float]:
        a, b = comparable_pair(np.random.default_rng(stream), dimension, trace, min_share)
        if not majorizes(a, b):
            raise NumericalError(f"Generated pair is not comparable: {a.tolist()} vs {b.tolist()}")
        fa = float(f(a.values))
        fb = float(f(b.values))
        for value, point in ((fa, a), (fb, b)):
            if not math.isfinite(value):
                raise NumericalError(f"Function returned {value} at {point.tolist()}")
        return a, b, fa, fb

    convex_witness = None
    concave_witness = None
    for a, b, fa, fb in parallel_map(evaluate, streams, workers):
        slack = atol if atol is not None else _slack(tol, fa, fb)
        if convex_witness is None and fa < fb - slack:
            convex_witness = (a, b)
        if concave_witness is None and fa > fb + slack:
            concave_witness = (a, b)

    if convex_witness is None:
        classification = SchurClass.CONVEX
    elif concave_witness is None:
        classification = SchurClass.CONCAVE
    else:
        classification = SchurClass.NEITHER
    logger.debug(f"Schur scan over {trials} pairs: {classification.value}")
    return SchurVerdict(classification, trials, convex_witness, concave_witness)


@dataclass(frozen=True)
class OstrowskiReport:
    classification: SchurClass
    convex_violations: list[tuple[int, int]] = field(default_factory=list)
    concave_violations: list[tuple[int, int]] = field(default_factory=list)


def ostrowski_check(x: SpectrumLike, gradient: npt.ArrayLike, tol: float = 1e-12) -> OstrowskiReport:
    """Differential test at one point under the descending index order.

    For i < j with x_i > x_j the gradient difference must be >= 0 for Schur-convexity and
    <= 0 for Schur-concavity. Tied entries are skipped.
    """
    x = as_spectrum(x)
    g = np.asarray(gradient, dtype=np.float64)
    if g.shape != x.values.shape:
        raise DimensionError(f"Gradient shape {g.shape} does not match spectrum length {len(x)}")
    convex_violations: list[tuple[int, int]] = []
    concave_violations: list[tuple[int, int]] = []
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            if x.values[i] - x.values[j] <= tol:
                continue
            difference = g[i] - g[j]
            if difference < -tol:
                convex_violations.append((i, j))
            if difference > tol:
                concave_violations.append((i, j))
    if not convex_violations:
        classification = SchurClass.CONVEX
    elif not concave_violations:
        classification = SchurClass.CONCAVE
    else:
        classification = SchurClass.NEITHER
    return OstrowskiReport(classification, convex_violations, concave_violations)


@dataclass(frozen=True)
class ThresholdPair:
    """One (i, j) row of the threshold table, 1-based like the eigenvalue indices."""

    i: int
    j: int
    ratio: float | None
    # undefined pair whose target eigenvalues differ: its condition fails at every p > 0
    blocking: bool = False

    @property
    def defined(self) -> bool:
        return self.ratio is not None


@dataclass(frozen=True)
class ThresholdTable:
    pairs: list[ThresholdPair]
    max_ratio: float

    @property
    def undefined(self) -> list[ThresholdPair]:
        return [pair for pair in self.pairs if not pair.defined]

    @property
    def blocking(self) -> list[ThresholdPair]:
        return [pair for pair in self.pairs if pair.blocking]

    @property
    def p_max(self) -> float:
        """Largest equal-power level for which every pairwise condition holds; 0 when none does."""
        if self.blocking:
            return 0.0
        return math.inf if self.max_ratio <= 0 else 1.0 / self.max_ratio

    def region_label(self) -> str:
        if self.blocking:
            return "empty (undefined pairs violate for all p)"
        if self.max_ratio <= 0:
            return "all p"
        bound = Fraction(self.p_max).limit_denominator(1_000_000)
        if abs(float(bound) - self.p_max) <= 1e-12 * self.p_max:
            return f"(0, {bound}]"
        return f"(0, {self.p_max:.12g}]"


def schur_threshold(sigma_h: SpectrumLike, sigma_w: SpectrumLike) -> ThresholdTable:
    """Pairwise ratios (s_h,i - s_h,j) / (s_w,T-j+1 - s_w,T-i+1) for i < j and their maximum.

    Pairs whose noise eigenvalues coincide have no ratio; they are reported and left out
    of the maximum. If such a pair also has distinct target eigenvalues the gradient
    difference is negative at every power, so the region is empty.
    """
    sigma_h, sigma_w = as_spectrum(sigma_h), as_spectrum(sigma_w)
    _check_lengths(sigma_h, sigma_w)
    h = sigma_h.values
    w = sigma_w.values
    size = h.size
    scale = max(float(np.max(w)) if size else 0.0, 1.0)
    h_scale = max(float(h[0]) if size else 0.0, 1.0)
    pairs: list[ThresholdPair] = []
    for i in range(size):
        for j in range(i + 1, size):
            denominator = w[size - 1 - j] - w[size - 1 - i]
            if abs(denominator) <= 1e-15 * scale:
                pairs.append(ThresholdPair(i + 1, j + 1, None, blocking=bool(h[i] - h[j] > 1e-15 * h_scale)))
                continue
            pairs.append(ThresholdPair(i + 1, j + 1, float((h[i] - h[j]) / denominator)))
    defined = [pair.ratio for pair in pairs if pair.ratio is not None]
    max_ratio = max(defined) if defined else 0.0
    table = ThresholdTable(pairs, max_ratio)
    if table.undefined:
        logger.warning(f"{len(table.undefined)} threshold pairs undefined (repeated noise eigenvalues)")
    if table.blocking:
        logger.warning(f"{len(table.blocking)} undefined pairs have distinct target eigenvalues; no power is Schur-convex")
    return table
