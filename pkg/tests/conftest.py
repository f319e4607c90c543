import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

import numpy as np
import pytest

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def reference_spectrum():
    """Full high-accuracy spectrum of the reference problem (computed once)."""
    from bcrecon.forward import find_eigenvalues

    from reference_data import BOUNDARY, COEFFS, REGION

    return find_eigenvalues(COEFFS, BOUNDARY, REGION)


def random_rank3_matrix(rng) -> np.ndarray:
    """3x6 matrix with entries uniform on the complex unit disc."""
    radius = np.sqrt(rng.uniform(size=(3, 6)))
    phase = np.exp(2j * np.pi * rng.uniform(size=(3, 6)))
    return radius * phase
