import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from twisted_segre.family import DiagonalInstance  # noqa: E402
from twisted_segre.linalg import Fraction  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def unipotent():
    return DiagonalInstance(1, 1, 1, 1, 1, 1)


@pytest.fixture(scope="session")
def diagonal():
    return DiagonalInstance(1, 0, 2, 3, 0, 1)


@pytest.fixture(scope="session")
def generic():
    # a11 != a22, b21 forced by commutation
    return DiagonalInstance(2, 3, 5, 7, Fraction(4), 11)


INSTANCES = {
    "unipotent": (1, 1, 1, 1, 1, 1),
    "diagonal": (1, 0, 2, 3, 0, 1),
    "generic": (2, 3, 5, 7, 4, 11),
    "flip": (1, 0, 1, 1, 0, 1),
    "scaled": (Fraction(1, 2), Fraction(-3), Fraction(7, 3), Fraction(5, 2), Fraction(117, 11), Fraction(-4)),
}


@pytest.fixture(params=sorted(INSTANCES))
def instance(request):
    return DiagonalInstance(*INSTANCES[request.param])
