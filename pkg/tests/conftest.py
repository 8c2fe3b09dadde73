import importlib

import pytest

from pcl import _pykernels
from pcl.arith import build_sieve

ACCEPTANCE_LINES: list[str] = []


def _backends():
    out = [pytest.param(_pykernels, id="python")]
    try:
        out.append(pytest.param(importlib.import_module("pcl._ckernels"), id="cython"))
    except ImportError:
        out.append(pytest.param(None, id="cython", marks=pytest.mark.skip(reason="extension not built")))
    return out


@pytest.fixture(params=_backends())
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def table_small():
    return build_sieve(5000)


@pytest.fixture(scope="session")
def table_1e5():
    return build_sieve(10**5)


@pytest.fixture(scope="session")
def table_1e6():
    return build_sieve(10**6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
