import os

import numpy as np
import pytest

from clox.algebra import validate_params

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG_DIR = os.path.join(ROOT, "configs")

REFERENCE_ALPHAS = {
    "boson": (0.0, 0.0),
    "paraboson3": (2.0, -2.0),
    "lambda3": (1.0, 0.0, -1.0),
    "lambda4": (0.5, -0.25, 0.25, -0.5),
    "lambda6": (0.25, -0.5, 0.125, 0.25, -0.375, 0.25),
}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(REFERENCE_ALPHAS))
def ref_params(request):
    return validate_params(len(REFERENCE_ALPHAS[request.param]), REFERENCE_ALPHAS[request.param])
