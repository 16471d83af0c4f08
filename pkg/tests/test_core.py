from math import gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latticeforge.core import (
    GeneratingVector,
    LatticeConfig,
    ProductWeights,
    ReductionSchedule,
    is_prime,
    lattice_points,
    search_space,
    search_space_size,
    validate_instance,
)
from latticeforge.errors import ValidationError

from conftest import configs


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_config_rejects_composite_base_and_bad_m():
    with pytest.raises(ValidationError):
        LatticeConfig(4, 2)
    with pytest.raises(ValidationError):
        LatticeConfig(2, 0)


def test_config_point_limit():
    with pytest.raises(ValidationError):
        LatticeConfig(2, 70)


def test_power_caps_at_m():
    cfg = LatticeConfig(3, 2)
    assert cfg.power(1) == 3 and cfg.power(2) == 9 and cfg.power(7) == 9


def test_search_space_examples():
    cfg = LatticeConfig(2, 3)
    assert list(search_space(cfg, 0).members) == [1, 3, 5, 7]
    assert list(search_space(cfg, 1).members) == [1, 3]
    assert list(search_space(cfg, 3).members) == [1]
    assert list(search_space(cfg, 9).members) == [1]
    assert list(search_space(LatticeConfig(3, 2), 1).members) == [1, 2]


@given(configs(), st.integers(0, 9))
def test_search_space_size_formula(cfg, w):
    members = search_space(cfg, w).members
    assert len(members) == search_space_size(cfg, w)
    if w < cfg.m:
        assert all(gcd(int(z), cfg.b) == 1 and 1 <= z < cfg.b ** (cfg.m - w) for z in members)


def test_weights_validation_collects_everything():
    with pytest.raises(ValidationError) as exc:
        ProductWeights((0.5, 1.5, 0.0))
    assert len(exc.value.violations) >= 2


def test_weight_tails():
    w = ProductWeights((), "poly", 2.0)
    assert w.gamma(0) == 1.0 and w.gamma(2) == pytest.approx(1 / 9)
    g = ProductWeights((0.5,), "geo", 0.5)
    assert g.gamma(0) == 0.5 and g.gamma(2) == pytest.approx(0.125)
    assert ProductWeights((1.0, 0.5)).length == 2
    with pytest.raises(ValidationError):
        ProductWeights((1.0,)).gamma(1)


def test_gamma_u_is_product():
    w = ProductWeights((1.0, 0.5, 0.25))
    assert w.gamma_u((0, 2)) == 0.25
    assert w.gamma_u(()) == 1.0
    assert list(w.betas(2)) == [2.0, 1.5]


def test_schedule_tails_and_threshold():
    s = ReductionSchedule((0, 1), "linear", 2)
    assert s.ws(4) == [0, 1, 3, 5]
    assert s.threshold(4) == 3
    assert s.threshold(4, s=2) == 2
    assert ReductionSchedule((0,), "const").threshold(3) == float("inf")
    assert ReductionSchedule((0, 2, 5)).threshold(3) == 2
    with pytest.raises(ValidationError):
        ReductionSchedule((2, 1))


def test_generating_vector_effective_components():
    cfg = LatticeConfig(2, 3)
    z = GeneratingVector.from_lists(cfg, [0, 1, 3], [1, 3, 1])
    assert list(z.effective) == [1, 6, 0]
    with pytest.raises(ValidationError):
        GeneratingVector.from_lists(cfg, [0], [2])
    with pytest.raises(ValidationError):
        GeneratingVector.from_lists(cfg, [1], [5])


def test_lattice_points_small():
    cfg = LatticeConfig(2, 2)
    P = lattice_points(cfg, GeneratingVector.from_lists(cfg, [0], [1]))
    assert P.numerators[:, 0].tolist() == [0, 1, 2, 3]
    assert P.denominator == 4
    np.testing.assert_allclose(P.points[:, 0], [0, 0.25, 0.5, 0.75])


def test_degenerate_coordinate_is_zero_column():
    cfg = LatticeConfig(3, 2)
    P = lattice_points(cfg, GeneratingVector.from_lists(cfg, [0, 2], [1, 1]))
    assert not P.numerators[:, 1].any()


@given(configs(n_max=64), st.data())
def test_lattice_points_match_definition(cfg, data):
    w = data.draw(st.integers(0, cfg.m))
    z = int(data.draw(st.sampled_from(list(search_space(cfg, w).members))))
    P = lattice_points(cfg, GeneratingVector.from_lists(cfg, [w], [z]))
    c = cfg.power(w) * z
    assert P.numerators[:, 0].tolist() == [(k * c) % cfg.N for k in range(cfg.N)]


def test_validate_instance_collects_all_violations():
    with pytest.raises(ValidationError) as exc:
        validate_instance(4, 2, "list:1,2", "list:1,0", 3)
    text = str(exc.value)
    assert "prime" in text and "out of (0, 1]" in text and "non-decreasing" in text


def test_validate_instance_accepts_strings():
    inst = validate_instance(2, 4, "poly:2", "list:0,1+linear:1", 5)
    assert inst.config.N == 16 and inst.schedule.ws(5) == [0, 1, 2, 3, 4]
