import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from meanderlift.biparabolic import DoublePartition
from meanderlift.pipeline import Policy, construct

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

WORKED_MARKS = [["+", 2, 7], ["+", 4, 5], ["-", 3, 6], ["-", 7, 8]]
SMALL_CHAIN_POLICY = {"fixed_chain": [3, 1, 4, 2]}


def worked_dp():
    return DoublePartition(8, [[1, 8]], [[1, 2], [3, 6], [7, 8]])


def levi_dp():
    # pi+ = {alpha_1, alpha_3}, pi- = {alpha_2}
    return DoublePartition(4, [2, 2], [1, 2, 1])


def index_one_dp(n, p):
    return DoublePartition(n, [n], [p, n - p])


@pytest.fixture(scope="session")
def worked():
    return construct(worked_dp(), Policy(marks=WORKED_MARKS))


@pytest.fixture(scope="session")
def levi():
    return construct(levi_dp(), Policy.from_dict(SMALL_CHAIN_POLICY))


@st.composite
def double_partitions(draw, n_min=2, n_max=8):
    """Admissible double partitions: each simple root lies in pi+ only, pi- only, or both."""
    n = draw(st.integers(n_min, n_max))
    where = draw(st.lists(st.sampled_from("+-b"), min_size=n - 1, max_size=n - 1))
    if all(w == "b" for w in where):
        where[draw(st.integers(0, n - 2))] = draw(st.sampled_from("+-"))
    cp = [w == "-" for w in where]
    cm = [w == "+" for w in where]
    return DoublePartition(n, _sizes(cp), _sizes(cm))


def _sizes(cuts):
    out, size = [], 1
    for c in cuts:
        if c:
            out.append(size)
            size = 1
        else:
            size += 1
    out.append(size)
    return out



# acceptance summary ----------------------------------------------------------

ACCEPTANCE = []


class _Recorder:
    def __init__(self, label):
        self.label = label
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        note = self.detail if ok else (str(exc).splitlines()[0] if str(exc) else exc_type.__name__)
        ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {self.label}" + (f"  ({note})" if note else ""))
        return False


@pytest.fixture
def criterion():
    return _Recorder


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
