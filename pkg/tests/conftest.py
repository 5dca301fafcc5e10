import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from splitoct import Octonion

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
octonions = st.lists(finite, min_size=8, max_size=8).map(Octonion)
small = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


def magnitude(*xs: Octonion) -> float:
    """Product of Euclidean coefficient norms, used to scale tolerances."""
    out = 1.0
    for x in xs:
        out *= float(np.linalg.norm(x.coeff))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
