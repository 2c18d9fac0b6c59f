from pathlib import Path

import numpy as np
import pytest

from cscert import MeasurementMatrix

REPO_ROOT = Path(__file__).resolve().parents[1]
DEMO_CSV = REPO_ROOT / "data" / "demo_matrix_5x8.csv"

# Bundled 5x8 demo matrix with unit-norm columns; its certification values
# (spark 6, coherence 0.49, the delta profile) are frozen in the tests.
DEMO_5X8 = np.array([
    [ 0.1,  0.1,  0.3, -0.7,  0.7, -0.1,  0.1,  0.3],
    [ 0.4, -0.8, -0.4, -0.1,  0.3,  0.3,  0.3, -0.5],
    [ 0.3,  0.5, -0.5,  0.4,  0.5, -0.7,  0.1, -0.4],
    [-0.7, -0.3,  0.1,  0.3,  0.4, -0.5,  0.5, -0.7],
    [-0.5,  0.1, -0.7, -0.5, -0.1, -0.4, -0.8, -0.1],
])


@pytest.fixture(scope="session")
def demo_matrix() -> MeasurementMatrix:
    return MeasurementMatrix(DEMO_5X8, kind="loaded")
