"""Shared fixtures: seeded RNG, hypothesis profile and a session-cached two-stage construction."""

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "nullseries",
    max_examples=int(os.environ.get("NULLSERIES_HYPOTHESIS_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("nullseries")


@pytest.fixture
def rng():
    return np.random.default_rng(20260501)


def random_coeffs(rng, degree, real=False):
    from nullseries.fourier_core import CoeffSeq

    arr = rng.standard_normal(2 * degree + 1) + 1j * rng.standard_normal(2 * degree + 1)
    if real:
        arr = 0.5 * (arr + np.conj(arr[::-1]))
    return CoeffSeq(arr, real_valued=real)


@pytest.fixture(scope="session")
def two_stage_state():
    """``iterate_construction(2)`` with its bound table (about half a minute)."""
    from nullseries.construction import iterate_construction

    return iterate_construction(2)


@pytest.fixture(scope="session")
def stage2(two_stage_state):
    return two_stage_state.stages[1]


@pytest.fixture(scope="session")
def construct_dir(tmp_path_factory):
    """A ``construct --stages 2`` output directory written through the CLI."""
    from nullseries.cli import main

    out = tmp_path_factory.mktemp("construct") / "run_a"
    code = main(["construct", "--stages", "2", "--out", str(out)])
    assert code == 0
    return out


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
