import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from harmcert.numcore import ctx_new

settings.register_profile(
    "numeric",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("numeric")

_ORACLES = json.loads(Path(__file__).with_name("oracles.json").read_text())

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def oracle(name, ctx):
    """Frozen oracle value as a real in ``ctx`` (60 significant digits stored)."""
    return ctx.mp.mpf(_ORACLES[name])


def assert_digits(value, reference, digits):
    """|value - reference| <= 10^-digits * max(1, |reference|)."""
    mp = reference.context if hasattr(reference, "context") else value.context
    diff = abs(mp.mpf(value) - mp.mpf(reference))
    bound = mp.mpf(10) ** (-digits) * max(mp.one, abs(mp.mpf(reference)))
    assert diff <= bound, f"{mp.nstr(value, digits + 3)} vs {mp.nstr(reference, digits + 3)}: diff {mp.nstr(diff, 3)}"


@pytest.fixture(scope="session")
def ctx30():
    return ctx_new(30)


@pytest.fixture(scope="session")
def ctx50():
    return ctx_new(50)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
