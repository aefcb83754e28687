"""Tests for MI evaluation, water-filling and the optimal waveform."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from radar_mi.errors import ConfigError, DimensionError, NumericalError, SingularMatrixError
from radar_mi.majorize import Spectrum
from radar_mi.numlin import HermitianMatrix, anti_diagonal, hermitian_eig
from radar_mi.waveform import (
    MIMethod,
    WaveformMatrix,
    equal_power,
    fiedler_bounds,
    mi_gradient,
    mutual_information,
    noise_floors,
    optimal_waveform,
    paired_noise,
    schur_differences,
    spectral_mi,
    waterfill,
)
from tests.conftest import TABLE_SIGMA_H, TABLE_SIGMA_W, random_psd


def _random_triple(rng):
    size = int(rng.integers(1, 9))
    sigma_h = Spectrum.of(rng.uniform(0.01, 10.0, size))
    sigma_w = Spectrum.of(rng.uniform(0.1, 10.0, size))
    p_tot = 10.0 ** rng.uniform(-2.0, 3.0)
    return sigma_h, sigma_w, p_tot


def _bisection_level(floors, p_tot):
    finite = floors[np.isfinite(floors)]
    lowest = float(np.min(finite))
    return brentq(lambda level: np.sum(np.clip(level - finite, 0.0, None)) - p_tot, lowest, lowest + p_tot, xtol=1e-14)


def test_paired_noise_is_oppositional():
    np.testing.assert_array_equal(paired_noise(4, TABLE_SIGMA_W), [2.0, 3.0, 4.0, 8.0])
    np.testing.assert_array_equal(paired_noise(2, [9.0, 5.0, 3.0, 1.0]), [1.0, 3.0])
    with pytest.raises(DimensionError):
        paired_noise(3, [1.0, 1.0])


def test_noise_floors():
    np.testing.assert_allclose(noise_floors(TABLE_SIGMA_H, TABLE_SIGMA_W), [0.4, 1.5, 4.0, 16.0])
    assert noise_floors([1.0, 0.0], [1.0, 1.0])[1] == math.inf


def test_waterfill_single_mode():
    allocation = waterfill([1.0], [1.0], 3.0)
    np.testing.assert_allclose(allocation.sigma_s, [3.0])
    assert allocation.water_level_inverse == pytest.approx(4.0)


def test_waterfill_low_power_uses_strongest_mode():
    allocation = waterfill(TABLE_SIGMA_H, TABLE_SIGMA_W, 1.0)
    np.testing.assert_allclose(allocation.sigma_s, [1.0, 0.0, 0.0, 0.0], atol=1e-12)
    assert allocation.water_level_inverse == pytest.approx(1.4)
    assert allocation.active_count == 1


def test_waterfill_two_active_modes():
    allocation = waterfill(TABLE_SIGMA_H, TABLE_SIGMA_W, 4.0)
    np.testing.assert_allclose(allocation.sigma_s, [2.55, 1.45, 0.0, 0.0], atol=1e-12)
    assert allocation.water_level_inverse == pytest.approx(2.95)
    assert allocation.active_count == 2


def test_waterfill_skips_zero_target_modes():
    allocation = waterfill([2.0, 0.0], [1.0, 1.0], 100.0)
    np.testing.assert_allclose(allocation.sigma_s, [100.0, 0.0])


def test_waterfill_no_usable_mode():
    with pytest.raises(ConfigError, match="no usable eigenmode"):
        waterfill([0.0, 0.0], [1.0, 1.0], 1.0)


@pytest.mark.parametrize("p_tot", [0.0, -1.0, math.inf])
def test_waterfill_rejects_bad_power(p_tot):
    with pytest.raises(ConfigError):
        waterfill([1.0], [1.0], p_tot)


def test_waterfill_kkt_against_bisection():
    rng = np.random.default_rng(2718)
    for _ in range(1000):
        sigma_h, sigma_w, p_tot = _random_triple(rng)
        allocation = waterfill(sigma_h, sigma_w, p_tot)
        floors = noise_floors(sigma_h, sigma_w)
        level = allocation.water_level_inverse
        active = allocation.sigma_s > 0

        assert np.sum(allocation.sigma_s) == pytest.approx(p_tot, rel=1e-9, abs=1e-9)
        np.testing.assert_allclose(allocation.sigma_s[active] + floors[active], level, rtol=1e-9, atol=1e-9)
        assert np.all(floors[~active] >= level - 1e-9 * max(1.0, level))
        assert level == pytest.approx(_bisection_level(floors, p_tot), rel=1e-9, abs=1e-9)


def test_waterfill_monotone_in_power():
    rng = np.random.default_rng(31)
    for _ in range(200):
        sigma_h, sigma_w, p_low = _random_triple(rng)
        p_high = p_low * (1.0 + rng.uniform(0.01, 3.0))
        low = waterfill(sigma_h, sigma_w, p_low)
        high = waterfill(sigma_h, sigma_w, p_high)
        assert np.all(high.sigma_s >= low.sigma_s - 1e-12)
        assert high.active_count >= low.active_count
        low_mi = spectral_mi(low.sigma_s, sigma_h, sigma_w).value
        high_mi = spectral_mi(high.sigma_s, sigma_h, sigma_w).value
        assert high_mi >= low_mi - 1e-12


def test_spectral_mi_zero_power():
    assert spectral_mi([0.0] * 4, TABLE_SIGMA_H, TABLE_SIGMA_W).value == 0.0


def test_spectral_mi_single_mode():
    result = spectral_mi([1.0, 0.0, 0.0, 0.0], TABLE_SIGMA_H, TABLE_SIGMA_W)
    assert result.value == pytest.approx(math.log2(3.5))
    assert result.method is MIMethod.SPECTRAL


def test_spectral_mi_units():
    bits = spectral_mi([1.0, 1.0, 0.0, 0.0], TABLE_SIGMA_H, TABLE_SIGMA_W).value
    nats = spectral_mi([1.0, 1.0, 0.0, 0.0], TABLE_SIGMA_H, TABLE_SIGMA_W, units="nats").value
    assert nats == pytest.approx(bits * math.log(2.0))


def test_spectral_mi_infinite_on_noiseless_mode():
    with pytest.raises(NumericalError, match="infinite"):
        spectral_mi([1.0, 1.0], [1.0, 1.0], [1.0, 0.0])


def test_spectral_mi_matches_logdet_for_equal_power():
    r_h = HermitianMatrix.diag(TABLE_SIGMA_H)
    r_w = HermitianMatrix.diag(TABLE_SIGMA_W)
    p = 0.7
    # column i of S feeds row 3 - i, the i-th smallest noise entry
    s = np.zeros((4, 4))
    s[np.arange(4)[::-1], np.arange(4)] = math.sqrt(p)
    logdet = mutual_information(WaveformMatrix(s), r_h, r_w).value
    spectral = spectral_mi(equal_power(4, 4 * p), TABLE_SIGMA_H, TABLE_SIGMA_W).value
    assert logdet == pytest.approx(spectral, abs=1e-10)


def test_mutual_information_zero_waveform():
    result = mutual_information(WaveformMatrix(np.zeros((4, 4))), HermitianMatrix(np.eye(4)), HermitianMatrix(np.eye(4)))
    assert result.value == 0.0
    assert result.method is MIMethod.LOGDET


def test_mutual_information_scalar():
    one = HermitianMatrix(np.eye(1))
    assert mutual_information(WaveformMatrix([[1.0]]), one, one).value == pytest.approx(1.0)


def test_mutual_information_singular_noise():
    with pytest.raises(SingularMatrixError):
        mutual_information(WaveformMatrix(np.eye(2)), HermitianMatrix(np.eye(2)), HermitianMatrix.diag([1.0, 0.0]))


def test_mutual_information_dimension_mismatch():
    with pytest.raises(DimensionError):
        mutual_information(WaveformMatrix(np.ones((4, 2))), HermitianMatrix(np.eye(3)), HermitianMatrix(np.eye(4)))


def test_optimal_waveform_table_spectra():
    r_h = HermitianMatrix.diag(TABLE_SIGMA_H)
    r_w = HermitianMatrix.diag(TABLE_SIGMA_W)
    waveform, allocation = optimal_waveform(r_h, r_w, 1.0)
    assert waveform.power == pytest.approx(1.0, abs=1e-9)
    assert mutual_information(waveform, r_h, r_w).value == pytest.approx(math.log2(3.5), abs=1e-10)
    np.testing.assert_allclose(allocation.sigma_s, [1.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_optimal_waveform_white_noise(rng):
    r_h = HermitianMatrix(random_psd(rng, 4))
    r_w = HermitianMatrix(np.eye(4))
    waveform, allocation = optimal_waveform(r_h, r_w, 3.0)
    sigma_h = hermitian_eig(r_h).eigenvalues
    expected = float(np.sum(np.log2(1.0 + allocation.sigma_s * sigma_h)))
    assert mutual_information(waveform, r_h, r_w).value == pytest.approx(expected, abs=1e-9)


def test_optimal_waveform_logdet_equals_spectral():
    rng = np.random.default_rng(99)
    for _ in range(200):
        mn = int(rng.integers(1, 9))
        nk = int(rng.integers(mn, 9))
        r_h = HermitianMatrix(random_psd(rng, mn, ridge=0.05) * rng.uniform(0.5, 5.0))
        r_w = HermitianMatrix(random_psd(rng, nk, ridge=0.1) * rng.uniform(0.5, 5.0))
        p_tot = 10.0 ** rng.uniform(-1.0, 2.0)
        waveform, allocation = optimal_waveform(r_h, r_w, p_tot)

        assert waveform.shape == (nk, mn)
        assert waveform.power == pytest.approx(p_tot, rel=1e-9, abs=1e-9)
        sigma_h = Spectrum.of(hermitian_eig(r_h).eigenvalues)
        sigma_w = Spectrum.of(hermitian_eig(r_w).eigenvalues)
        spectral = spectral_mi(allocation.sigma_s, sigma_h, sigma_w).value
        assert mutual_information(waveform, r_h, r_w).value == pytest.approx(spectral, abs=1e-8)


def test_optimal_waveform_beats_perturbations(rng):
    r_h = HermitianMatrix(random_psd(rng, 4, ridge=0.1))
    r_w = HermitianMatrix(random_psd(rng, 4, ridge=0.1))
    waveform, _ = optimal_waveform(r_h, r_w, 2.0)
    best = mutual_information(waveform, r_h, r_w).value
    for _ in range(200):
        noise = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        perturbed = waveform.matrix + 0.1 * noise
        perturbed *= math.sqrt(2.0 / np.sum(np.abs(perturbed) ** 2))
        assert mutual_information(WaveformMatrix(perturbed), r_h, r_w).value <= best + 1e-9


def test_optimal_waveform_needs_enough_rows():
    with pytest.raises(DimensionError):
        optimal_waveform(HermitianMatrix(np.eye(4)), HermitianMatrix(np.eye(2)), 1.0)


def test_fiedler_identity():
    assert fiedler_bounds([1.0, 1.0], [1.0, 1.0]) == (4.0, 4.0)


def test_fiedler_hand_example():
    assert fiedler_bounds([2.0, 1.0], [3.0, 1.0]) == (10.0, 12.0)


def test_fiedler_sandwich(rng):
    for _ in range(1000):
        a = random_psd(rng, 4)
        b = random_psd(rng, 4)
        lower, upper = fiedler_bounds(np.linalg.eigvalsh(a), np.linalg.eigvalsh(b))
        det = np.linalg.det(a + b).real
        assert lower - 1e-9 <= det <= upper + 1e-9


def test_fiedler_bounds_attained(rng):
    alpha = np.array([4.0, 2.0, 1.0, 0.5])
    beta = np.array([3.0, 1.5, 1.0, 0.2])
    v = hermitian_eig(HermitianMatrix(random_psd(rng, 4))).eigenvectors
    a = (v * alpha) @ v.conj().T
    lower, upper = fiedler_bounds(alpha, beta)

    aligned = (v * beta) @ v.conj().T
    assert np.linalg.det(a + aligned).real == pytest.approx(lower, abs=1e-9)

    flipped = v @ anti_diagonal(4)
    opposed = (flipped * beta) @ flipped.conj().T
    assert np.linalg.det(a + opposed).real == pytest.approx(upper, abs=1e-9)


def test_schur_differences_threshold_region():
    for p in (0.05, 0.1, 0.2, 1.0 / 3.0):
        d = schur_differences(equal_power(4, 4 * p), TABLE_SIGMA_H, TABLE_SIGMA_W)
        assert np.all(d[np.triu_indices(4, k=1)] >= -1e-12)
    at_boundary = schur_differences(equal_power(4, 4.0 / 3.0), TABLE_SIGMA_H, TABLE_SIGMA_W)
    assert at_boundary[0, 1] == pytest.approx(0.0, abs=1e-12)
    beyond = schur_differences(equal_power(4, 2.0), TABLE_SIGMA_H, TABLE_SIGMA_W)
    assert beyond[0, 1] < 0


def test_mi_gradient_matches_finite_difference():
    sigma_s = np.array([1.2, 0.8, 0.5, 0.1])
    h = np.array(TABLE_SIGMA_H)
    gradient = mi_gradient(sigma_s, h, TABLE_SIGMA_W)
    step = 1e-6
    for i in range(4):
        up, down = h.copy(), h.copy()
        up[i] += step
        down[i] -= step
        slope = (
            spectral_mi(sigma_s, up, TABLE_SIGMA_W, units="nats").value
            - spectral_mi(sigma_s, down, TABLE_SIGMA_W, units="nats").value
        ) / (2 * step)
        assert gradient[i] == pytest.approx(slope, rel=1e-6)
