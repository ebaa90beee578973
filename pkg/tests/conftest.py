from fractions import Fraction as F

import pytest
from hypothesis import settings

from cfpzest.abgroup import FinAbGroup, Hom
from cfpzest.metric import PreMetricGroup
from cfpzest.pointed import PointedCategory, center_of_Bz, enumerate_pointed_mme

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")

Z2 = FinAbGroup((2,))
Z4 = FinAbGroup((4,))
Z22 = FinAbGroup((2, 2))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def p4():
    return PointedCategory(PreMetricGroup(Z4, (F(0), F(1, 8), F(1, 2), F(1, 8)), "P4"),
                           Z2, (1,), Hom(Z2, Z4, ((2,),)), "P4")


@pytest.fixture(scope="session")
def svec_mmes():
    return enumerate_pointed_mme(Z2, (1,))


@pytest.fixture(scope="session")
def repz2_mmes():
    return enumerate_pointed_mme(Z2, (0,))


@pytest.fixture(scope="session")
def z_svec():
    return center_of_Bz(Z2, (1,))


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(label: str, passed: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
