import numpy as np
import pytest

ACCEPTANCE = []


def random_density(rng, dim, rank=None, complex_=True):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank))
    if complex_:
        g = g + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20021017)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
