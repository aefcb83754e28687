from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from radar_mi.channel import RadarGeometry

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

TABLE_SIGMA_H = [5.0, 2.0, 1.0, 0.5]
TABLE_SIGMA_W = [8.0, 4.0, 3.0, 2.0]


def random_psd(rng: np.random.Generator, n: int, ridge: float = 0.0) -> np.ndarray:
    """B^H B (+ ridge I) for a complex Gaussian B, scaled to unit trace before the ridge."""
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = b.conj().T @ b
    a = 0.5 * (a + a.conj().T)
    return a / np.trace(a).real + ridge * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def reference_geometry():
    return RadarGeometry(
        tx_positions=[(2.0, 4.8), (2.2, 4.0)],
        rx_positions=[(0.0, 2.0), (0.0, 4.0)],
        target_center=(2.0, 2.0),
        target_dims=(2.0, 2.0),
        carrier_frequency=8e9,
    )


@pytest.fixture
def scenarios_dir():
    return SCENARIOS
