import pytest

from holefield.kvmodel import Catalog

import acceptance_log


@pytest.fixture
def cat():
    """Plain families 1-4 at level 1."""
    c = Catalog()
    for j in range(1, 5):
        c.add_basic(f"g{j}", 1, j)
    return c


@pytest.fixture
def g(cat):
    return {j: cat[f"g{j}"].element() for j in range(1, 5)}


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.summary_lines():
        terminalreporter.write_line(line)
