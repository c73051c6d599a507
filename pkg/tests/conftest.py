from __future__ import annotations

import sys
from pathlib import Path

import pytest


PROJECT_ROOT = Path(__file__).resolve().parent.parent
SRC_PATH = PROJECT_ROOT / "src"

if str(SRC_PATH) not in sys.path:
    sys.path.insert(0, str(SRC_PATH))

from arakzeta.cache import GridCache  # noqa: E402
from arakzeta.config import RunSettings  # noqa: E402
from arakzeta.fielddata import NumberFieldData, make_quadratic, make_rationals  # noqa: E402


@pytest.fixture(scope="session")
def rationals() -> NumberFieldData:
    return make_rationals()


@pytest.fixture(scope="session")
def gaussian() -> NumberFieldData:
    return make_quadratic(-1)


@pytest.fixture(scope="session")
def sqrt5() -> NumberFieldData:
    return make_quadratic(5)


@pytest.fixture()
def grid_cache() -> GridCache:
    return GridCache()


@pytest.fixture()
def small_settings() -> RunSettings:
    return RunSettings(grid=32, theta_tol=1e-10, t_tol=1e-9, threads=1)
