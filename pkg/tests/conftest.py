import itertools

import pytest

from minmodel import parse_presentation
from minmodel.cli import FIXTURES, load_fixture


@pytest.fixture(scope="session")
def fx():
    return {name: load_fixture(name).presentation for name in FIXTURES}


def P(text):
    return parse_presentation(text)


def mono(p, text):
    return p.monomial(text)


def all_words(p, weight):
    """Every composable word of the given weight, by brute force."""
    n = len(p.quiver.arrows)
    return [w for w in itertools.product(range(n), repeat=weight) if p.quiver.is_composable(w)]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if RESULTS[n] else 'FAIL'}  {TITLES[n]}")
