import pytest

from spinc_bergman.expansion_pipeline import compute_F2
from spinc_bergman.identities import IdentityRuleSet

ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def rules():
    return IdentityRuleSet.load()


@pytest.fixture(scope="session")
def f2_report(rules):
    return compute_F2(rules)


@pytest.fixture(scope="session")
def jet2():
    from spinc_bergman.numeric.jets import random_jet
    return random_jet(2, 11)


@pytest.fixture
def acceptance_line(request):
    """Record the one-line verdict of an acceptance criterion."""
    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
