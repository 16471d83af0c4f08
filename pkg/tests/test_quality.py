import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latticeforge.core import GeneratingVector, LatticeConfig, ProductWeights, search_space
from latticeforge.errors import ScaleLimitError
from latticeforge.kernel import phi_table, s_n
from latticeforge.quality import (
    eta_initial,
    eta_update,
    exp_sum_direct,
    r_from_eta,
    r_subset,
    r_weighted,
    r_weighted_product,
)

from conftest import instances, random_vector


def vec(cfg, ws, zs):
    return GeneratingVector.from_lists(cfg, ws, zs)


def test_figure_of_merit_n4_example():
    cfg = LatticeConfig(2, 2)
    z = vec(cfg, [0, 0], [1, 1])
    W = ProductWeights((1.0, 1.0))
    assert r_weighted_product(cfg, W, z) == pytest.approx(2.25, abs=1e-12)
    assert r_weighted(cfg, W, z) == pytest.approx(2.25, abs=1e-12)
    assert r_subset(cfg, z, (0, 1)) == pytest.approx(2.25, abs=1e-12)


@given(st.sampled_from([(2, 3), (3, 2), (5, 2), (2, 6)]), st.floats(0.01, 1.0))
def test_single_dimension_vanishes(pair, gamma):
    cfg = LatticeConfig(*pair)
    z = vec(cfg, [0], [1])
    W = ProductWeights((gamma,))
    assert abs(r_weighted_product(cfg, W, z)) < 1e-12
    assert abs(r_weighted(cfg, W, z)) < 1e-12


def test_empty_subset_is_zero():
    cfg = LatticeConfig(2, 3)
    assert r_subset(cfg, vec(cfg, [0], [1]), ()) == 0.0


def test_degenerate_coordinates_closed_form():
    cfg = LatticeConfig(2, 3)
    W = ProductWeights((0.7, 0.4))
    z = vec(cfg, [3, 5], [1, 1])
    S = s_n(cfg.N)
    expected = (1 + 0.7 * (1 + S)) * (1 + 0.4 * (1 + S)) - 1.7 * 1.4
    assert r_weighted_product(cfg, W, z) == pytest.approx(expected, rel=1e-12)
    assert r_weighted(cfg, W, z) == pytest.approx(expected, rel=1e-12)


def test_exp_sum_direct_is_phi_minus_one():
    N = 27
    np.testing.assert_allclose(exp_sum_direct(N, 1), phi_table(N).phi - 1, atol=1e-10)


@given(instances(n_max=64, s_max=4), st.integers(0, 2**32 - 1))
def test_three_forms_agree(inst, seed):
    cfg, W, S, s = inst
    z = random_vector(np.random.default_rng(seed), cfg, S, s)
    a = r_weighted(cfg, W, z)
    b = r_weighted_product(cfg, W, z)
    eta = eta_initial(cfg.N)
    kernel = phi_table(cfg)
    for j, c in enumerate(z.effective):
        eta = eta_update(eta, W.gamma(j), int(c), kernel)
    c_ = r_from_eta(eta, W.betas(s))
    scale = max(1.0, abs(a))
    assert abs(a - b) <= 1e-9 * scale and abs(b - c_) <= 1e-9 * scale


def test_figure_of_merit_small_weight_limit():
    cfg = LatticeConfig(2, 4)
    z = vec(cfg, [0, 0, 1], [1, 3, 5])
    values = [r_weighted_product(cfg, ProductWeights((g, g, g)), z) for g in (1e-1, 1e-3, 1e-6)]
    assert values[0] > values[1] > values[2] >= 0
    # c_3 = 10 is not a unit mod 16, so the singleton term is linear in gamma
    assert values[2] < 2e-5 * values[0]


@given(st.permutations(range(4)))
def test_permutation_symmetry(perm):
    # with equal weights R depends only on the multiset of effective components
    cfg = LatticeConfig(3, 3)
    z = vec(cfg, [0, 1, 1, 2], [1, 4, 7, 2])
    W = ProductWeights((0.6,) * 4)
    zp = z.restrict(perm)
    assert r_weighted_product(cfg, W, zp) == pytest.approx(r_weighted_product(cfg, W, z), rel=1e-12)
    assert r_weighted(cfg, W, zp) == pytest.approx(r_weighted(cfg, W, z), rel=1e-9)


def test_eta_update_example_and_identity():
    kernel = phi_table(4)
    eta = eta_update(eta_initial(4), 1.0, 1, kernel)
    np.testing.assert_allclose(eta.values, [4.5, 1.5, 0.5, 1.5])
    assert eta.d == 1
    same = eta_update(eta, 0.0, 3, kernel)
    np.testing.assert_array_equal(same.values, eta.values)


def test_subset_form_dimension_limit():
    cfg = LatticeConfig(2, 2)
    z = vec(cfg, [0] * 13, [1] * 13)
    with pytest.raises(ScaleLimitError):
        r_weighted(cfg, ProductWeights((), "poly", 2.0), z)


def test_kernel_size_mismatch():
    cfg = LatticeConfig(2, 3)
    with pytest.raises(ValueError):
        r_weighted_product(cfg, ProductWeights((1.0,)), vec(cfg, [0], [1]), kernel=phi_table(4))


def test_all_candidates_average_matches_direct_mean():
    # mean over one coordinate of (1/N) sum_k phi(k c / N) over units c is 1 + T/|Z| average
    cfg = LatticeConfig(2, 4)
    kernel = phi_table(cfg)
    vals = [
        r_weighted_product(cfg, ProductWeights((1.0, 0.5)), vec(cfg, [0, 0], [1, int(z)]), kernel=kernel)
        for z in search_space(cfg, 0).members
    ]
    assert math.isfinite(sum(vals)) and min(vals) >= 0
