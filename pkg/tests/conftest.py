import sys

import pytest
from hypothesis import settings

from higgins.corpus import algebras, groups, loops, small_groups
from higgins.exactlinalg import FieldSpec

settings.register_profile("repo", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def G():
    return groups()


@pytest.fixture(scope="session")
def A():
    return algebras()


@pytest.fixture(scope="session")
def L():
    return loops()


@pytest.fixture(scope="session")
def small():
    return small_groups()


@pytest.fixture(scope="session")
def F2():
    return FieldSpec.prime(2)


@pytest.fixture(scope="session")
def Q():
    return FieldSpec.rational()



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        terminalreporter.write_line(mod.RESULTS.get(n, f"CRITERION {n}: FAIL - did not complete"))
