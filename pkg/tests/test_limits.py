"""Tests for CLT regions, the theorem catalogue, admissibility and limit variances."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from src.errors import AdmissibilityError, NoLimitTargetError, NotLevyError
from src.functions import TestFunction, abs_moment
from src.limits import (
    THEOREMS,
    FunctionalItem,
    check_admissible,
    clt_region_check,
    compensated_jump_sum,
    compensator_rate,
    component_class,
    item_limit,
    item_variance,
    pair_covariance,
    require_clt_region,
    sample_z_law,
    sample_z_law_many,
    t6_lower_bound,
    t6_rate_exponent,
    t6p_bound,
    t8_admissibility,
    theorem_info,
    theorem_target,
    z_law_variance,
)
from src.model.spec import TruncationSpec
from src.simulate import simulate_path

POWER_HALF = TestFunction.power(0.5)
RATIONAL = TestFunction.bounded_c2("rational_square")
TRUNC = TruncationSpec(varpi=0.45, alpha=3.0)


# regions


def test_t6_lower_bound_endpoints():
    assert t6_lower_bound(2.0 / 3.0) == pytest.approx(0.0, abs=1e-12)
    assert t6_lower_bound(1.0) == pytest.approx(1.0)


def test_t5_region():
    assert clt_region_check("T5", 0.5).clt_holds
    check = clt_region_check("T5", 1.5)
    assert not check.clt_holds
    assert check.exponent == pytest.approx(0.25)
    assert clt_region_check("T5", 1.5, continuous=True).clt_holds


def test_t6_region():
    assert clt_region_check("T6", 0.5, r=0.5).clt_holds
    assert clt_region_check("T6", 0.9, r=0.7).clt_holds
    refused = clt_region_check("T6", 0.9, r=0.2)
    assert not refused.clt_holds
    assert refused.exponent == pytest.approx(t6_rate_exponent(0.9, 0.2))
    assert "0.473" in refused.detail
    assert not clt_region_check("T6", 1.2, r=0.5).clt_holds
    assert not clt_region_check("T6", 0.5, r=1.0).clt_holds
    assert clt_region_check("T6", 0.0, r=1.5, continuous=True).clt_holds
    with pytest.raises(ValueError):
        clt_region_check("T6", 0.5, r=1.5)


def test_t6p_region():
    assert t6p_bound(0.3) == pytest.approx(1.0 / 3.0)
    refused = clt_region_check("T6p", 0.5, varpi=0.3)
    assert not refused.clt_holds
    assert refused.exponent == pytest.approx(0.45)
    assert clt_region_check("T6p", 0.5, varpi=0.45).clt_holds
    with pytest.raises(ValueError):
        clt_region_check("T6p", 0.5, varpi=0.5)


def test_require_clt_region_carries_exponent():
    check = clt_region_check("T6p", 0.5, varpi=0.3)
    with pytest.raises(AdmissibilityError) as info:
        require_clt_region(check)
    assert info.value.exponent == pytest.approx(0.45)
    assert "(4ϖ−1)/(2ϖ)" in info.value.condition


def test_region_rejects_bad_inputs():
    with pytest.raises(ValueError):
        clt_region_check("T5", 2.5)
    with pytest.raises(ValueError):
        clt_region_check("T3ii", 0.5)


# catalogue


def test_catalogue():
    assert {"T1a", "T3iii", "T6p", "T7ii", "T8pair"} <= set(THEOREMS)
    assert theorem_info("T1").kind == "lln"
    assert theorem_info("T4").levy_only
    with pytest.raises(ValueError, match="Unknown theorem"):
        theorem_info("T9")


def test_functional_item():
    item = FunctionalItem("T6", POWER_HALF)
    assert item.is_clt
    assert item.function is POWER_HALF
    assert item.truncation is None
    assert item.label == "T6 power:r=0.5"
    assert FunctionalItem("T2", TestFunction.power(1.5), eta=2.0).label.endswith("eta=2")
    with pytest.raises(ValueError):
        FunctionalItem("T6p", POWER_HALF)
    with pytest.raises(ValueError):
        FunctionalItem("T3ii", TRUNC)
    with pytest.raises(ValueError):
        FunctionalItem("T8pair", POWER_HALF)


def test_component_class():
    assert component_class("T5") == "J1"
    assert component_class("T7ii") == "J5"
    with pytest.raises(ValueError):
        component_class("T3ii")


# admissibility


def test_lln_admissibility(bm_model, jump_model, stable_model, ou_model):
    flags = check_admissible(FunctionalItem("T1b", TestFunction.power(2.0)), bm_model)
    assert flags["case"] == "b"
    with pytest.raises(NoLimitTargetError):
        check_admissible(FunctionalItem("T1a", TestFunction.power(2.0)), bm_model)
    assert check_admissible(FunctionalItem("T3ii", TestFunction.power(1.5)), jump_model)["r"] == 1.5
    assert check_admissible(FunctionalItem("T3ii", TestFunction.power(3.0)), bm_model)["r"] == 3.0
    with pytest.raises(AdmissibilityError):
        check_admissible(FunctionalItem("T3ii", TestFunction.power(2.5)), jump_model)
    with pytest.raises(AdmissibilityError):
        check_admissible(FunctionalItem("T3i", TestFunction.power(3.0)), jump_model)
    with pytest.raises(NotLevyError):
        check_admissible(FunctionalItem("T2", TestFunction.power(1.5), eta=1.0), ou_model)
    with pytest.raises(AdmissibilityError):
        check_admissible(FunctionalItem("T2", TestFunction.power(1.5)), jump_model)
    check_admissible(FunctionalItem("T3iii", TRUNC), stable_model)


def test_clt_admissibility(bm_model, jump_model, stable_model):
    flags = check_admissible(FunctionalItem("T6", POWER_HALF), bm_model, clt=True)
    assert flags["region"]["clt_holds"]
    check_admissible(FunctionalItem("T6", POWER_HALF), stable_model, clt=True)
    check_admissible(FunctionalItem("T7i", TestFunction.power(4.0)), jump_model, clt=True)
    with pytest.raises(AdmissibilityError):
        check_admissible(FunctionalItem("T7i", TestFunction.power(2.0)), jump_model, clt=True)
    with pytest.raises(AdmissibilityError):
        check_admissible(FunctionalItem("T6", TestFunction.power(1.5)), jump_model, clt=True)
    with pytest.raises(AdmissibilityError):
        check_admissible(FunctionalItem("T5", TestFunction.power(1.0)), jump_model, clt=True)
    with pytest.raises(AdmissibilityError, match="no central limit"):
        check_admissible(FunctionalItem("T3ii", POWER_HALF), bm_model, clt=True)
    with pytest.raises(AdmissibilityError) as info:
        check_admissible(FunctionalItem("T6p", TruncationSpec(0.3, 3.0)), stable_model, clt=True)
    assert info.value.exponent == pytest.approx(1.5 * 0.3)


def test_t8_admissibility(bm_model, stable_model):
    items = [FunctionalItem("T6", POWER_HALF), FunctionalItem("T6p", TRUNC)]
    flags = t8_admissibility(items, bm_model)
    assert flags["classes"] == ["J2", "J3"]
    t8_admissibility([FunctionalItem("T5", RATIONAL), FunctionalItem("T6", POWER_HALF)], stable_model)
    with pytest.raises(AdmissibilityError, match="joint CLT refused"):
        t8_admissibility([FunctionalItem("T6p", TruncationSpec(0.3, 3.0))], stable_model)


# limits and variances along a path


@pytest.fixture
def bm_path(bm_model, sampling, seed):
    return simulate_path(bm_model, sampling, seed)


@pytest.fixture
def jump_path(jump_model, sampling, seed):
    return simulate_path(jump_model, sampling, seed)


def test_t3ii_limit(bm_path):
    series = item_limit(FunctionalItem("T3ii", TestFunction.power(1.0)), bm_path)
    assert series.terminal == pytest.approx(abs_moment(1.0) * 0.5)
    target = theorem_target("T3ii", TestFunction.power(1.0), bm_path)
    assert target.variance_t is None
    assert target.rate_scale == 1.0


def test_t3i_limit_matches_rho(bm_path):
    # ρ_σ(|x|²) = σ²
    series = item_limit(FunctionalItem("T3i", TestFunction.power(2.0)), bm_path)
    assert series.terminal == pytest.approx(0.25, rel=1e-6)


def test_t3iii_limit_is_integrated_variance(bm_path):
    assert item_limit(FunctionalItem("T3iii", TRUNC), bm_path).terminal == pytest.approx(0.25)


def test_clt_variances_constant_vol(bm_path):
    # (m_2r − m_r²) ∫σ^{2r}
    t6 = item_variance(FunctionalItem("T6", TestFunction.power(1.0)), bm_path)
    assert t6 == pytest.approx((1.0 - 2.0 / math.pi) * 0.25, rel=1e-6)
    t6p = item_variance(FunctionalItem("T6p", TRUNC), bm_path)
    assert t6p == pytest.approx(2.0 * 0.0625, rel=1e-6)
    t5 = item_variance(FunctionalItem("T5", RATIONAL), bm_path)
    assert t5 > 0.0
    target = theorem_target("T6p", TRUNC, bm_path)
    assert target.variance_t == pytest.approx(t6p)
    assert target.rate_scale == bm_path.sampling.delta_n


def test_t7ii_variance_adds_jump_part(jump_path):
    n_jumps = len(jump_path.jumps)
    # f = x², f'(1)² · c = 4 · 0.25 per jump
    variance = item_variance(FunctionalItem("T7ii", TestFunction.power(2.0)), jump_path)
    assert variance == pytest.approx(2.0 * 0.0625 + n_jumps, rel=1e-6)
    assert z_law_variance(lambda x: 2.0 * x, jump_path) == pytest.approx(n_jumps)


def test_pair_covariance(bm_path, jump_path):
    j2, j1 = FunctionalItem("T6", POWER_HALF), FunctionalItem("T5", RATIONAL)
    assert pair_covariance(j2, j1, bm_path) == pytest.approx(pair_covariance(j1, j2, bm_path))
    # J2 × J3: (m_2.5 − m_0.5 m_2) ∫σ^{2.5}
    j3 = FunctionalItem("T6p", TRUNC)
    expected = (abs_moment(2.5) - abs_moment(0.5) * abs_moment(2.0)) * 0.5 ** 2.5
    assert pair_covariance(j2, j3, bm_path) == pytest.approx(expected, rel=1e-6)
    j4 = FunctionalItem("T7i", TestFunction.power(4.0))
    assert pair_covariance(j4, j3, jump_path) == 0.0


def test_pair_covariance_matrix_is_psd(bm_path):
    items = [FunctionalItem("T6", POWER_HALF), FunctionalItem("T6p", TRUNC), FunctionalItem("T5", RATIONAL)]
    matrix = np.array([[pair_covariance(a, b, bm_path) for b in items] for a in items])
    np.testing.assert_allclose(matrix, matrix.T, rtol=1e-9)
    assert np.linalg.eigvalsh(matrix).min() > -1e-12


def test_z_law_draws(bm_path, jump_path):
    np.testing.assert_array_equal(sample_z_law_many(lambda x: 2.0 * x, bm_path, 5, seed=1), np.zeros(5))
    assert sample_z_law(lambda x: 2.0 * x, bm_path, seed=1).value == 0.0

    draws = sample_z_law_many(lambda x: 2.0 * x, jump_path, 20000, seed=7)
    target = z_law_variance(lambda x: 2.0 * x, jump_path)
    if target > 0.0:
        assert np.var(draws) == pytest.approx(target, rel=0.05)
    one = sample_z_law(lambda x: 2.0 * x, jump_path, seed=3)
    assert one.value == sample_z_law(lambda x: 2.0 * x, jump_path, seed=3).value
    assert len(one.terms) == len(jump_path.jumps)


def test_compensated_jump_sum(jump_model, jump_path):
    f = TestFunction.power(2.0)
    assert compensator_rate(f, 10.0, jump_model) == pytest.approx(2.0)
    series = compensated_jump_sum(f, 10.0, jump_path)
    assert series.terminal == pytest.approx(len(jump_path.jumps) - 2.0)
    with pytest.raises(AdmissibilityError):
        compensated_jump_sum(f, math.inf, jump_path)


def _rational_square_variance(sigma):
    # ρ_σ(g²) − ρ_σ(g)² by direct quadrature against the N(0, σ²) density
    pdf = stats.norm(scale=sigma).pdf
    g = lambda x: x * x / (1.0 + x * x)
    first = integrate.quad(lambda x: g(x) * pdf(x), -np.inf, np.inf, epsabs=1e-13)[0]
    second = integrate.quad(lambda x: g(x) ** 2 * pdf(x), -np.inf, np.inf, epsabs=1e-13)[0]
    return second - first ** 2


def test_joint_covariance_diagonal_matches_single_variances(bm_path, jump_path):
    cases = [
        (FunctionalItem("T5", RATIONAL), bm_path, _rational_square_variance(0.5)),
        (FunctionalItem("T6", POWER_HALF), bm_path, (abs_moment(1.0) - abs_moment(0.5) ** 2) * 0.5),
        (FunctionalItem("T6p", TRUNC), bm_path, 2.0 * 0.0625),
        (FunctionalItem("T7ii", TestFunction.power(2.0)), jump_path, 2.0 * 0.0625 + len(jump_path.jumps)),
    ]
    for item, path, expected in cases:
        assert item_variance(item, path) == pytest.approx(expected, rel=1e-6), item.label
        assert pair_covariance(item, item, path) == pytest.approx(expected, rel=1e-6), item.label
