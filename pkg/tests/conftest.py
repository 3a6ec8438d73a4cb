import numpy as np
import pytest

from spinlab.oracle import PAPER_FUNCTIONS
from spinlab.pulses import SpinSystem
from spinlab.spectrum import AcquisitionParams, run_suite


def random_hermitian(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_unitary(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="session")
def functions():
    return PAPER_FUNCTIONS


@pytest.fixture(scope="session")
def strong_runs():
    return run_suite()


@pytest.fixture(scope="session")
def weak_runs():
    return run_suite(system=SpinSystem.weak_limit())


@pytest.fixture(scope="session")
def unrelaxed_runs():
    return run_suite(acq=AcquisitionParams(relaxation=False))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, title, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} -- {detail}")
