import os

import numpy as np
import pytest

from edenscore.emd import bin_points, emd_exact
from edenscore.kde import evaluate, fit_kde
from edenscore.pointsets import PointSet, bounding_rect

DATASAURUS_ENV_VAR = "EDENSCORE_DATASAURUS"


@pytest.fixture(scope="session", autouse=True)
def _warm_numba():
    # First call into each jitted kernel pays cache load / compile cost;
    # do it once here so runtime-bounded tests measure steady-state work.
    ps = PointSet.from_xy(np.array([0.0, 1.0, 2.0, 0.5]), np.array([0.0, 1.0, 0.0, 2.0]))
    model = fit_kde(ps)
    evaluate(model, np.array([[0.5, 0.5]]))
    rect = bounding_rect(ps, margin_frac=0.0)
    h = bin_points(ps, rect, 4, 4)
    emd_exact(h, h)


@pytest.fixture(scope="session")
def datasaurus_path():
    path = os.environ.get(DATASAURUS_ENV_VAR)
    if not path or not os.path.exists(path):
        pytest.skip(
            f"Datasaurus TSV not supplied; set {DATASAURUS_ENV_VAR} to the "
            "DatasaurusDozen.tsv path to run this test"
        )
    return path
