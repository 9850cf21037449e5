import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from voilab import make_belief, paper_instance  # noqa: E402

F = Fraction
REPO = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def paper():
    inst = paper_instance()
    return inst.problem, inst.channel("i"), inst.channel("j")


@pytest.fixture(scope="session")
def b1():
    return make_belief(["1/11", "2/11", "8/11"])


@pytest.fixture(scope="session")
def b2():
    return make_belief(["1/4", "1/6", "7/12"])


@pytest.fixture(scope="session")
def b3():
    return make_belief(["5/12", "5/12", "1/6"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)
