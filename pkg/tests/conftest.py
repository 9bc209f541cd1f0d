import numpy as np
import pytest

from pxpsim import build_pxp, diagonalize, enumerate_basis


class EigenCache:
    """Session-wide cache of diagonalized chains, keyed by length."""

    def __init__(self):
        self._store = {}

    def get(self, L):
        if L not in self._store:
            basis = enumerate_basis(L)
            ham = build_pxp(basis)
            self._store[L] = (basis, ham, diagonalize(ham))
        return self._store[L]


@pytest.fixture(scope="session")
def eigen_cache():
    return EigenCache()


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def pytest_runtest_logreport(report):
    # one verdict line per acceptance check, independent of -v formatting
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {verdict}: {name}", flush=True)
    elif report.when == "setup" and not report.passed:
        verdict = "SKIP" if report.skipped else "FAIL"
        print(f"\n[acceptance] {verdict} (setup): {name}", flush=True)
