import functools

import pytest

from ccview import fixtures
from ccview.translate import TranslationSpace

ACCEPTANCE: list = []


@functools.lru_cache(maxsize=None)
def workspace(name):
    return fixtures.load(name)


@functools.lru_cache(maxsize=None)
def space(name, view, strategy):
    """Shared translation space; translations and the law report are memoized on it."""
    ws = workspace(name)
    return TranslationSpace(ws.views[view], ws.strategies[strategy], ws.schema)


@pytest.fixture(scope="session")
def ws():
    return workspace


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
