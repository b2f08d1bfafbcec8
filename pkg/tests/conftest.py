"""
Shared fixtures: a three-region registry and synthetic series generated
from planted gains, built so that every learning window is full rank.
"""

import json
from datetime import date

import numpy as np
import pytest

from pandemic_growth.dynamics.gains import GainTensor
from pandemic_growth.dynamics.simulation import simulate_series
from pandemic_growth.timeseries.registry import DayCalendar, RegionRegistry

EPOCH = date(2020, 3, 12)

# Sorted by name: CA=1, NY=2, VT=3
REGIONS = [("NY", "New York"), ("VT", "Vermont"), ("CA", "California")]

# One period of active cases; its cyclic shifts form a non-singular circulant
ACTIVE_PERIOD = np.array([100.0, 250.0, 170.0, 320.0])
DEATH_SEED = np.array([1.0, 2.0, 3.0, 4.0])
RECOVERY_SEED = np.array([10.0, 200.0, 300.0, 400.0])


def seed_window(n_regions: int, actives: np.ndarray = ACTIVE_PERIOD) -> np.ndarray:
    """(R, n, 3) oldest-first seed whose totals never decrease; region i is scaled by i"""
    seed = np.empty((n_regions, actives.shape[0], 3))
    for offset in range(n_regions):
        scale = offset + 1.0
        deaths = scale * DEATH_SEED[:actives.shape[0]]
        recoveries = scale * RECOVERY_SEED[:actives.shape[0]]
        seed[offset, :, 0] = scale * actives + deaths + recoveries
        seed[offset, :, 1] = deaths
        seed[offset, :, 2] = recoveries
    return seed


def periodic_quarantined_gains(n_regions: int = 3, n_tau: int = 4) -> GainTensor:
    """Self gains with gamma_1 = -1, gamma_n = 1 and zero in between.

    Actives then repeat with period n_tau, so totals grow linearly and every
    fit window sees all cyclic shifts of the period.
    """
    values = np.zeros((n_regions, n_regions, n_tau, 3))
    for i in range(n_regions):
        scale = i + 1.0
        values[i, i, 0] = (0.2, 0.7, 0.5)
        for h in range(1, n_tau - 1):
            values[i, i, h] = (0.1 * scale, 0.05 * scale, 0.05 * scale)
        values[i, i, n_tau - 1] = (1.2, 0.1, 0.1)
    return GainTensor(values, mode="quarantined")


def cycling_interstate_gains() -> GainTensor:
    """R=2, n_tau=2 gains whose actives follow a1[k+1] = a2[k-1], a2[k+1] = a1[k-1]"""
    values = np.zeros((2, 2, 2, 3))
    for i, j in ((0, 1), (1, 0)):
        values[i, i, 0] = (0.2, 0.7, 0.5)
        values[i, i, 1] = (0.1, 0.05, 0.05)
        values[i, j, 0] = (0.3, 0.2, 0.1)
        values[i, j, 1] = (1.3, 0.2, 0.1)
    return GainTensor(values, mode="interstate")


@pytest.fixture
def registry():
    return RegionRegistry(REGIONS)


@pytest.fixture
def calendar():
    return DayCalendar(EPOCH)


@pytest.fixture
def planted_gains():
    return periodic_quarantined_gains()


@pytest.fixture
def planted_series(registry, calendar, planted_gains):
    """R=3, n_tau=4, 40 days generated by the planted quarantined gains"""
    return simulate_series(seed_window(3), planted_gains, 1.0, 36, registry, calendar)


@pytest.fixture
def interstate_gains():
    return cycling_interstate_gains()


@pytest.fixture
def interstate_series(calendar, interstate_gains):
    """R=2, n_tau=2, 30 days driven by cross-region gains only"""
    registry = RegionRegistry([("NY", "New York"), ("VT", "Vermont")])
    seed = np.empty((2, 2, 3))
    seed[0, :, 1], seed[0, :, 2] = (1.0, 2.0), (10.0, 20.0)
    seed[1, :, 1], seed[1, :, 2] = (1.0, 2.0), (10.0, 20.0)
    seed[0, :, 0] = np.array([100.0, 250.0]) + seed[0, :, 1] + seed[0, :, 2]
    seed[1, :, 0] = np.array([170.0, 320.0]) + seed[1, :, 1] + seed[1, :, 2]
    return simulate_series(seed, interstate_gains, 0.0, 28, registry, calendar)


def write_totals_csv(path, series, drop_recoveries: bool = False):
    """Dump a series in the input CSV layout"""
    lines = ["date,region,total_cases,total_deaths" + ("" if drop_recoveries else ",total_recoveries")]
    for region in series.registry:
        for k in range(1, series.horizon + 1):
            t, d, r = series.state(region.code, k)
            row = f"{series.date_of(k).isoformat()},{region.code},{t:.17g},{d:.17g}"
            lines.append(row if drop_recoveries else f"{row},{r:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def run_config(tmp_path, planted_series):
    """Config file for the three-region planted dataset; returns (config path, out dir)"""
    data = write_totals_csv(tmp_path / "totals.csv", planted_series)
    out = tmp_path / "out"
    config = {
        "data": {
            "path": str(data),
            "epoch": EPOCH.isoformat(),
            "regions": [{"code": code, "name": name} for code, name in REGIONS],
        },
        "learning": {"n_tau": 4},
        "forecast": {"horizons": [1, 2], "scope": "all"},
        "run": {"out": str(out)},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path, out
