import numpy as np
import pytest

from permest import _fallback

try:
    from permest import _kernels
except ImportError:  # extension not built
    _kernels = None

KERNEL_BACKENDS = [pytest.param(_fallback, id="python")]
if _kernels is not None:
    KERNEL_BACKENDS.insert(0, pytest.param(_kernels, id="cython"))

ACCEPTANCE_LINES = []


@pytest.fixture(params=KERNEL_BACKENDS)
def kern(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def random_psd(rng, n, rank=None):
    r = rng.standard_normal((n, rank or n))
    return r @ r.T


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
