import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latticeforge.core import LatticeConfig, search_space_size
from latticeforge.cost import OpCounter
from latticeforge.kernel import (
    EULER_GAMMA,
    epsilon_bound,
    h_range,
    harmonic,
    phi_direct,
    phi_fft,
    phi_table,
    s_n,
    s_n_asymptotic,
    s_n_table,
    t_closed_form,
    t_direct,
)

from conftest import configs


def s_n_exact(n: int) -> Fraction:
    return sum((Fraction(1, abs(h)) for h in h_range(n) if h != 0), Fraction(0))


def test_h_range_convention():
    assert list(h_range(4)) == [-1, 0, 1, 2]
    assert list(h_range(5)) == [-2, -1, 0, 1, 2]
    assert list(h_range(1)) == [0]


@pytest.mark.parametrize("n, expected", [(1, 0.0), (2, 1.0), (4, 2.5), (8, 47 / 12)])
def test_s_n_examples(n, expected):
    assert s_n(n) == pytest.approx(expected, abs=1e-15)


@given(st.integers(1, 400))
def test_s_n_matches_rational_sum(n):
    assert s_n(n) == pytest.approx(float(s_n_exact(n)), rel=1e-14, abs=1e-15)


def test_s_n_table_matches_pointwise():
    table = s_n_table(300)
    assert table[0] == 0.0
    assert all(table[n] == pytest.approx(s_n(n), rel=1e-14, abs=1e-15) for n in range(1, 301))


def test_harmonic_asymptotic_branch_continuous():
    # the series used for large k must agree with summation near the switch
    k = 2**20
    assert harmonic(k + 1) - harmonic(k) == pytest.approx(1 / (k + 1), rel=1e-6)
    assert harmonic(10**9) == pytest.approx(math.log(10**9) + EULER_GAMMA + 0.5e-9, rel=1e-15)


@given(st.integers(2, 10**6))
def test_s_n_log_bound(n):
    assert s_n(n) <= 4 * math.log(n)


def test_epsilon_brackets_shape():
    even, odd = epsilon_bound(10), epsilon_bound(11)
    assert even.lower == pytest.approx(-4 / 100) and even.upper == 0 and even.upper_closed
    assert odd.lower == pytest.approx(-3 / 121) and odd.upper == pytest.approx(1 / 121)
    assert even.contains(0.0) and not odd.contains(1 / 121)


@pytest.mark.parametrize("n", [2, 3, 10, 101, 1000, 12345])
def test_asymptotic_within_bracket(n):
    approx, bracket = s_n_asymptotic(n)
    assert bracket.contains(s_n(n) - approx)


def test_phi_known_table():
    np.testing.assert_allclose(phi_table(4).phi, [3.5, 0.5, -0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(phi_table(4, method="direct").phi, [3.5, 0.5, -0.5, 0.5], atol=1e-12)
    assert phi_table(1).phi.tolist() == [1.0]


@given(configs(n_max=256))
def test_phi_identities(cfg):
    t = phi_table(cfg)
    assert t.phi[0] == pytest.approx(1 + s_n(cfg.N), abs=1e-9)
    assert math.fsum(t.phi) == pytest.approx(cfg.N, abs=1e-9)
    np.testing.assert_array_equal(t.phi[1:], t.phi[1:][::-1])


@pytest.mark.parametrize("N", [2, 3, 9, 64, 125, 243, 512, 1024])
def test_fft_matches_direct(N):
    assert np.max(np.abs(phi_fft(N) - phi_direct(N))) < 1e-9


def test_phi_pointwise_definition():
    N = 9
    table = phi_table(N).phi
    for k in range(N):
        total = 1 + sum(math.cos(2 * math.pi * h * k / N) / abs(h) for h in h_range(N) if h)
        assert table[k] == pytest.approx(total, abs=1e-12)


@given(configs(n_max=128), st.data())
def test_bridge_identity(cfg, data):
    # beta + gamma * (sum of exponentials / |h|) = 1 + gamma * phi
    gamma = data.draw(st.floats(0.01, 1.0))
    k = data.draw(st.integers(0, cfg.N - 1))
    c = data.draw(st.integers(0, cfg.N - 1))
    x = (k * c) % cfg.N / cfg.N
    sums = sum(math.cos(2 * math.pi * h * x) / abs(h) for h in h_range(cfg.N) if h)
    lhs = 1 + gamma + gamma * sums
    assert lhs == pytest.approx(1 + gamma * phi_table(cfg).phi[(k * c) % cfg.N], abs=1e-9)


def test_phi_counter_charges_fft_and_direct():
    c1, c2 = OpCounter(), OpCounter()
    phi_table(64, counter=c1)
    phi_table(64, method="direct", counter=c2)
    assert c1.phase("phi") == 64 * 6
    assert c2.phase("phi") == 64 * 64


def test_kernel_csv(tmp_path):
    path = tmp_path / "phi.csv"
    phi_table(4).to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,phi_k"
    assert [float(v.split(",")[1]) for v in lines[1:]] == pytest.approx([3.5, 0.5, -0.5, 0.5], abs=1e-12)
    assert float(lines[1].split(",")[1]) == phi_table(4).phi[0]


@pytest.mark.parametrize(
    "b, m, w, k, expected",
    [(2, 3, 0, 1, -1.0), (2, 3, 0, 2, -3.0), (2, 3, 1, 4, 2 * 47 / 12), (2, 3, 3, 5, 47 / 12), (3, 2, 2, 5, None)],
)
def test_t_examples(b, m, w, k, expected):
    cfg = LatticeConfig(b, m)
    expected = s_n(cfg.N) if expected is None else expected
    assert t_closed_form(cfg, w, k) == pytest.approx(expected, abs=1e-12)
    assert t_direct(cfg, w, k) == pytest.approx(expected, abs=1e-9)


@given(configs(n_max=64), st.data())
def test_t_closed_form_matches_direct(cfg, data):
    w = data.draw(st.integers(0, cfg.m + 2))
    k = data.draw(st.integers(1, cfg.N - 1)) if cfg.N > 1 else None
    if k is None:
        return
    assert abs(t_closed_form(cfg, w, k) - t_direct(cfg, w, k)) < 1e-9


def test_t_negativity_and_ratio():
    for b, m in [(2, 5), (2, 6), (3, 5), (5, 5)]:
        cfg = LatticeConfig(b, m)
        for w in range(m):
            size = search_space_size(cfg, w)
            for k in range(1, cfg.N):
                if k % b ** (m - w) == 0:
                    continue
                t = t_closed_form(cfg, w, k)
                assert t < 0
                assert -2 < t / size < 0


def test_t_rejects_out_of_range_k():
    with pytest.raises(ValueError):
        t_closed_form(LatticeConfig(2, 3), 0, 0)
