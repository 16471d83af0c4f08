"""Shared fixtures, hypothesis strategies and the acceptance-line registry."""

from __future__ import annotations

import functools

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from latticeforge.core import GeneratingVector, LatticeConfig, ProductWeights, ReductionSchedule, search_space

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# criterion number -> (title, passed)
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def criterion(number: int, title: str):
    """Record the outcome of an acceptance test for the summary block."""

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                ACCEPTANCE[number] = (title, False)
                print(f"acceptance {number:2d} FAIL  {title}")
                raise
            ACCEPTANCE[number] = (title, True)
            print(f"acceptance {number:2d} PASS  {title}")

        return inner

    return wrap


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[number]
        terminalreporter.write_line(f"{number:2d} {'PASS' if ok else 'FAIL'}  {title}")


DESK_PAIRS = [(2, m) for m in range(1, 6)] + [(3, m) for m in range(1, 6)]


def prime_powers(n_max: int) -> list[tuple[int, int]]:
    out = []
    for b in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61):
        m = 1
        while b**m <= n_max:
            out.append((b, m))
            m += 1
    return out


def random_weights(rng: np.random.Generator, s: int) -> ProductWeights:
    g = np.sort(rng.uniform(0.05, 1.0, size=s))[::-1]
    return ProductWeights(tuple(float(x) for x in g))


def random_schedule(rng: np.random.Generator, s: int, w_max: int) -> ReductionSchedule:
    return ReductionSchedule(tuple(int(w) for w in np.sort(rng.integers(0, w_max + 1, size=s))))


def random_vector(rng: np.random.Generator, cfg: LatticeConfig, schedule: ReductionSchedule, s: int) -> GeneratingVector:
    comps = []
    for j in range(s):
        w = schedule.w(j)
        members = search_space(cfg, w).members
        comps.append((w, int(rng.choice(members))))
    return GeneratingVector(cfg, tuple(comps))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def configs(draw, n_max: int = 128):
    b, m = draw(st.sampled_from(prime_powers(n_max)))
    return LatticeConfig(b, m)


@st.composite
def instances(draw, n_max: int = 64, s_max: int = 4):
    cfg = draw(configs(n_max))
    s = draw(st.integers(1, s_max))
    g = sorted((draw(st.floats(0.05, 1.0)) for _ in range(s)), reverse=True)
    w = sorted(draw(st.integers(0, cfg.m + 1)) for _ in range(s))
    return cfg, ProductWeights(tuple(g)), ReductionSchedule(tuple(w)), s
