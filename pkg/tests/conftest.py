import pytest

from planar_inv.generators import standard_corpus

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def smooth_corpus():
    """Base curves for Whitney numbers -4..4 plus 45 random curves."""
    return standard_corpus(45, seed=2024)


@pytest.fixture(scope="session")
def corpus(smooth_corpus):
    return [sc.sample() for sc in smooth_corpus]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
