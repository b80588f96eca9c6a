from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from scipy.stats import unitary_group

from feyncursor.core.cursor_kernel import build_spectrum
from feyncursor.qubit.grover import grover_params, optimal_tau

ROOT = Path(__file__).resolve().parents[1]
FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng)


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def assert_matches_fixture(frame: pd.DataFrame, name: str, atol: float = 1e-10) -> None:
    """
    Compare a frame against the committed reference tests/fixtures/<name>.csv.

    The reference values were computed from the closed-form expressions by a
    separate implementation; a missing file is a failure.
    """
    path = FIXTURE_DIR / f"{name}.csv"
    if not path.exists():
        pytest.fail(f"reference fixture {path} is missing")
    expected = pd.read_csv(path)
    pd.testing.assert_frame_equal(
        frame.reset_index(drop=True), expected,
        check_dtype=False, check_exact=False, rtol=0, atol=atol,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def grover7():
    return grover_params(7)


@pytest.fixture(scope="session")
def tau7(grover7):
    return optimal_tau(grover7)


@pytest.fixture(scope="session")
def spec129():
    return build_spectrum(129, 1.0)
