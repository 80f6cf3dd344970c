import pytest
from hypothesis import HealthCheck, settings

from curveideals.ideals import CurveRing
from curveideals.series import FieldSpec

settings.register_profile("curveideals", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("curveideals")

Q = FieldSpec.rationals()
F101 = FieldSpec.prime(101)


def semigroup_ring(*gens, field=Q):
    return CurveRing.from_texts(field, [f"t^{g}" for g in gens])


@pytest.fixture(scope="session")
def r456():
    return semigroup_ring(4, 5, 6)


@pytest.fixture(scope="session")
def r567():
    return semigroup_ring(5, 6, 7)


@pytest.fixture(scope="session")
def r345():
    return semigroup_ring(3, 4, 5)


@pytest.fixture(scope="session")
def r4679():
    return semigroup_ring(4, 6, 7, 9)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
