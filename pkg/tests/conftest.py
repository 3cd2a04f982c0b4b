from fractions import Fraction
from itertools import islice

import pytest

from hecm.curvegen import CurveParams, build_curve_system, curve_stream
from hecm.modring import NonRationalResult

WORKED_N = 4816415081
WORKED_P = 83003
WORKED_Q = 58027
WORKED_PARAMS = CurveParams(Fraction(1, 2), Fraction(2), Fraction(9))


@pytest.fixture(scope="session")
def worked_curve():
    return build_curve_system(WORKED_PARAMS)


@pytest.fixture(scope="session")
def stream_curves():
    """A fixed list of 40 curves from seed 2026."""
    return list(islice(curve_stream(2026), 40))


# NonRationalResult instances created on purpose by the exception's own tests
DELIBERATE_NONRATIONAL = [0]


@pytest.fixture
def deliberate_nonrational():
    """Count NonRationalResults a test raises on purpose, so the suite-wide tally can exclude them."""
    before = NonRationalResult.raised
    yield
    DELIBERATE_NONRATIONAL[0] += NonRationalResult.raised - before


def unexpected_nonrational():
    return NonRationalResult.raised - DELIBERATE_NONRATIONAL[0]


def pytest_collection_modifyitems(config, items):
    """Run the acceptance gate last so suite-wide tallies cover every other test."""
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


@pytest.fixture
def gate(request):
    """Record one acceptance line; printed again in the terminal summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", {})

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if not lines:
        return
    terminalreporter.section("acceptance gate")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
    terminalreporter.write_line(
        f"NonRationalResult instances: {NonRationalResult.raised} total, "
        f"{DELIBERATE_NONRATIONAL[0]} deliberate, {unexpected_nonrational()} unexpected")
