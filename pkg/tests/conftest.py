"""Shared fixtures: the published device parameters and a weak probe."""

from __future__ import annotations

import numpy as np
import pytest

import rabiprobe as rp


@pytest.fixture(scope="session")
def params() -> rp.SystemParams:
    return rp.default_params()


@pytest.fixture(scope="session")
def omega1(params) -> float:
    return rp.omega1_zero_detuning(params)


@pytest.fixture(scope="session")
def weak_xi(params) -> float:
    # 0.05 kappa keeps the resonator linear and every model comparable.
    return 0.05 * params.kappa


@pytest.fixture(scope="session")
def probe_axis(params) -> np.ndarray:
    return rp.default_probe_axis(params)
