import sys
import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_pd(rng, p, n=None):
    """Sample covariance of ``n`` standard normal rows (default ``3p``)."""
    n = 3 * p if n is None else n
    X = rng.standard_normal((n, p))
    S = X.T @ X / n
    return (S + S.T) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
