import numpy as np
import pytest
from hypothesis import strategies as st

from dirichlet_opa.series_core import PowerSeries

ALPHAS = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0]

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = {}


def random_series(rng, degree, box=1.0):
    c = rng.uniform(-box, box, degree + 1) + 1j * rng.uniform(-box, box, degree + 1)
    return PowerSeries(c)


@st.composite
def series(draw, max_degree=6, nonzero=False):
    deg = draw(st.integers(0, max_degree))
    comp = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
    re = draw(st.lists(comp, min_size=deg + 1, max_size=deg + 1))
    im = draw(st.lists(comp, min_size=deg + 1, max_size=deg + 1))
    c = np.array(re) + 1j * np.array(im)
    if nonzero and not np.any(np.abs(c) > 1e-3):
        c[0] = 1.0
    return PowerSeries(c)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
