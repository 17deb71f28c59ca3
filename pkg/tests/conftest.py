import numpy as np
import pytest
from hypothesis import settings

from wernerqst.povm import two_qubit_povm

# first calls into the compiled kernels load the numba cache
settings.register_profile("wernerqst", deadline=None)
settings.load_profile("wernerqst")


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return g + g.conj().T


def random_density(rng, n=4, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="session")
def povm2():
    return two_qubit_povm()


# Acceptance criteria report, filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {key}: {detail}")
