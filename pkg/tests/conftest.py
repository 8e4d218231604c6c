import itertools
import math

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from edgecontract.core import Instance

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pairs(n):
    return list(itertools.combinations(range(n), 2))


@st.composite
def instances(draw, min_n=2, max_n=8, epsilon=0.04, cost_scale=1.0):
    """Random graph with raw costs on the scale where g is neither trivially 0 nor 1."""
    n = draw(st.integers(min_n, max_n))
    mask = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    edges = tuple(e for e, keep in zip(pairs(n), mask) if keep)
    unit = cost_scale / math.comb(n, 2)
    cost = st.one_of(st.just(0.0), st.floats(0.0, unit, allow_subnormal=False))
    raw = tuple(draw(st.lists(cost, min_size=n, max_size=n)))
    return Instance(n, edges, raw, epsilon)


@st.composite
def instance_and_set(draw, **kw):
    inst = draw(instances(**kw))
    members = draw(st.sets(st.integers(0, inst.n - 1)))
    return inst, members


def complete(n, raw=0.1, epsilon=0.04):
    return Instance(n, tuple(pairs(n)), (raw,) * n, epsilon)


@pytest.fixture
def k3():
    return complete(3, 0.1)


@pytest.fixture
def p3():
    return Instance(3, ((0, 1), (1, 2)), (0.05, 0.05, 0.05), 0.04)


@pytest.fixture
def star5():
    return Instance(5, tuple((0, v) for v in range(1, 5)), (0.01,) * 5, 0.04)


@pytest.fixture
def k5_pendants():
    edges = pairs(5) + [(0, 5), (1, 6), (2, 7)]
    return Instance(8, tuple(edges), (0.002,) * 5 + (0.05,) * 3, 0.04)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def _record(criterion, passed, detail=""):
        ACCEPTANCE[criterion] = (bool(passed), detail)
        print(f"acceptance criterion {criterion}: {'PASS' if passed else 'FAIL'} {detail}")
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")
