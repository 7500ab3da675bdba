import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from pometh.model import PODTMC
from pometh.reductions import hilbert_chain
from pometh.rewrites import figure_model

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def fig():
    return figure_model()


@pytest.fixture
def hilbert():
    return hilbert_chain()


@pytest.fixture
def cycle():
    """Deterministic 2-cycle s0 -> s1 -> s0 started in s0, p at s1."""
    return PODTMC.build(
        ["s0", "s1"], {"s0": 1}, {("s0", "s1"): 1, ("s1", "s0"): 1}, {"i": {"s0": "a", "s1": "b"}}, {"p": ["s1"]}
    )


@pytest.fixture
def rng():
    return random.Random(20240611)


HALF = Fraction(1, 2)
