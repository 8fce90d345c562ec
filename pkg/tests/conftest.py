import numpy as np
import pytest

from hksym.verify import build_context

SPACES = ("su:1,1", "su:1,2", "su:2,2", "sp:2")


@pytest.fixture(scope="session", params=SPACES)
def ctx(request):
    """One fully constructed space context per supported test space."""
    return build_context(request.param)


@pytest.fixture(scope="session")
def ctx_su11():
    return build_context("su:1,1")


@pytest.fixture(scope="session")
def ctx_su22():
    return build_context("su:2,2")


@pytest.fixture(scope="session")
def ctx_su12():
    return build_context("su:1,2")


@pytest.fixture(scope="session")
def ctx_sp2():
    return build_context("sp:2")


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
