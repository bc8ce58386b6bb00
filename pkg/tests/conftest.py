import numpy as np
import pytest

from cohbell import kernels

BACKENDS = kernels.available_backends()
_KERNEL_NAMES = ("jacobi_eigh", "bloch_basis", "rotate_pair", "pair_stats", "bell_stats", "objective")


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    impl = BACKENDS[request.param]
    for name in _KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20161015)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
