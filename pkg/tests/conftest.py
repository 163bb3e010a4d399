from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from racglie.complexes import FlagComplex, catalog

settings.register_profile(
    "racglie",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("racglie")

CATALOG = ["k2", "k3", "pentagon", "path4", "cycle4"]


@st.composite
def flag_complexes(draw, min_m: int = 2, max_m: int = 5):
    m = draw(st.integers(min_m, max_m))
    pairs = list(itertools.combinations(range(1, m + 1), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return FlagComplex.from_edges(m, [p for p, c in zip(pairs, chosen) if c])


@st.composite
def complex_and_word(draw, max_m: int = 5, max_len: int = 10):
    K = draw(flag_complexes(max_m=max_m))
    w = draw(st.lists(st.integers(1, K.m), max_size=max_len))
    return K, tuple(w)


@pytest.fixture(params=CATALOG)
def catalog_complex(request):
    return request.param, catalog(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one summary line per acceptance criterion

_CRITERIA: dict[int, dict] = {}
_SESSION: dict[str, float] = {}


def pytest_sessionstart(session):
    import time

    _SESSION["start"] = time.perf_counter()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "seconds": 0.0, "tests": 0})
    entry["ok"] &= not rep.failed
    if rep.when == "call":
        entry["seconds"] += rep.duration
        entry["tests"] += 1


def pytest_terminal_summary(terminalreporter):
    import time

    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        verdict = "PASS" if e["ok"] else "FAIL"
        tr.write_line(f"criterion {n}: {verdict}  {e['title']}  ({e['tests']} tests, {e['seconds']:.1f} s)")
    total = time.perf_counter() - _SESSION.get("start", time.perf_counter())
    tr.write_line(f"full session: {total:.1f} s (budget 600 s) {'PASS' if total < 600 else 'FAIL'}")
