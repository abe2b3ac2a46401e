import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sigwind import _kernels  # noqa: E402
from sigwind.paths import random_closed_polygon  # noqa: E402

CORPUS_SEED = 20240
CORPUS_SIZE = 200

ACCEPTANCE_LINES = {}


def make_corpus(n=CORPUS_SIZE, seed=CORPUS_SEED):
    rng = np.random.default_rng(seed)
    return [random_closed_polygon(rng) for _ in range(n)]


@pytest.fixture(scope="session")
def corpus():
    return make_corpus()


@pytest.fixture(params=_kernels.available_backends())
def backend(request):
    old = _kernels.BACKEND
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(old)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.strip().rstrip("ab")), k.strip())):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
