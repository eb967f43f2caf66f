from itertools import product

import pytest

from quadreturns.walk import validate

WALKS = {
    "symmetric": "1/4,1/4,1/4,1/4",
    "negative": "1/10,3/10,1/5,2/5",
    "positive": "3/10,1/10,2/5,1/5",
}


@pytest.fixture(params=sorted(WALKS))
def walk(request):
    return validate(WALKS[request.param])


def paths(n):
    """Every +-1 path of length n as a tuple of steps."""
    return product((1, -1), repeat=n)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
