import pytest

from qspectra.generators import random_exact_pair
from qspectra.koszul import CharacterPoint
from qspectra.model import ModelParams, model_pair
from qspectra.operators import DenseMatrix, Zero
from qspectra.pair import make_q_pair
from qspectra.scalars import GaussRat

_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def verdict():
    def record(number, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _VERDICTS.append(line)
        return ok
    return record


@pytest.fixture(scope="session")
def model():
    return model_pair(ModelParams(0.5))


@pytest.fixture(scope="session")
def zero_pair():
    return make_q_pair(Zero(1), Zero(1), 0.5, validation_dim=2, tol=1e-12)


def nilpotent_pair(exact=True):
    # T e0 = e1, S = diag(1, q) with q = 3
    g = GaussRat if exact else complex
    T = DenseMatrix(((g(0), g(0)), (g(1), g(0))))
    S = DenseMatrix(((g(1), g(0)), (g(0), g(3))))
    return make_q_pair(T, S, g(3), validation_dim=2, tol=1e-12)


@pytest.fixture(scope="session")
def nilpotent():
    return nilpotent_pair()


def X(v):
    return CharacterPoint("X", v)


def Y(v):
    return CharacterPoint("Y", v)
