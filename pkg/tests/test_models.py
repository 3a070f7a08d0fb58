from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ladprob.errors import ImpossibleConditionError, MissingSizeError, ProfileError
from ladprob.exactmath import DomainSpec, big_binomial
from ladprob.model_m1 import (
    M1Case,
    SizeProfile,
    beta,
    delta_coeff,
    gamma_coeff,
    gamma_distribution,
    lambda_coeff,
    m1_probability,
    pattern_probability,
    projection_size_probability,
    rho_groups,
    rho_total,
    robustness_probability,
    round_size,
    scan_attribute_count,
)
from ladprob.model_m2 import (
    IntersectionQuery,
    bracket_closed_form,
    bracket_sum,
    coefficient_A,
    intersection_numerator,
    prob_intersection_at_most,
    prob_intersection_eq,
    rho_groups_m2,
)

small_specs = st.builds(DomainSpec, st.integers(1, 3), st.integers(0, 3))


@st.composite
def groups(draw, max_n=12):
    spec = draw(small_specs)
    n1 = draw(st.integers(1, max_n))
    n2 = draw(st.integers(1, max_n))
    return spec, n1, n2


@settings(max_examples=50)
@given(small_specs, st.integers(1, 12))
def test_beta_sums_to_rho_total(spec, n):
    assert sum(beta(k, n, spec) for k in range(spec.d_y + 1)) == rho_total(n, spec)


@settings(max_examples=50)
@given(groups())
def test_gamma_distribution_normalizes(args):
    spec, n1, n2 = args
    assert sum(gamma_distribution(n1, n2, spec).values()) == rho_groups(n1, n2, spec)


@settings(max_examples=40)
@given(groups(max_n=8))
def test_delta_refines_gamma_and_lambda(args):
    spec, n1, n2 = args
    d_y = spec.d_y
    for k in range(2, d_y + 1):
        assert sum(delta_coeff(k1, k - k1, n1, n2, spec) for k1 in range(1, k)) == gamma_coeff(k, n1, n2, spec)
    n = n1 + n2
    for k1 in range(1, d_y):
        k2 = d_y - k1
        split = sum(delta_coeff(k1, k2, a, n - a, spec) for a in range(1, n))
        assert split == lambda_coeff(k1, k2, n, spec)


def test_rho_total_is_not_the_sum_of_group_splits():
    # Empty groups are part of rho_total but not of any rho_groups(n1, n2).
    spec = DomainSpec(1, 1)
    n = 3
    assert rho_total(n, spec) > sum(rho_groups(a, n - a, spec) for a in range(1, n))


@settings(max_examples=40)
@given(groups(max_n=10))
def test_m2_distribution_sums_to_one(args):
    spec, n1, n2 = args
    if n1 + n2 > spec.d_x:
        return
    top = min(n1, n2, spec.d_y)
    probs = [prob_intersection_eq(IntersectionQuery(n1, n2, spec, u=u)) for u in range(top + 1)]
    assert sum(probs) == 1
    assert probs[0] * rho_groups_m2(n1, n2, spec) == rho_groups(n1, n2, spec)
    running = Fraction(0)
    for t in range(spec.d_y + 1):
        if t <= top:
            running += probs[t]
        assert prob_intersection_at_most(IntersectionQuery(n1, n2, spec, t=t)) == running


@given(st.integers(1, 64), st.data())
def test_bracket_identity(d_y, data):
    v = data.draw(st.integers(0, d_y - 1))
    t = data.draw(st.integers(v, d_y - 1))
    assert bracket_sum(d_y, v, t) == bracket_closed_form(d_y, v, t)


@pytest.mark.parametrize("y,z,n1,n2", [(1, 1, 2, 1), (1, 2, 3, 2), (2, 1, 2, 3), (2, 0, 1, 2)])
def test_coefficient_a_clamping_is_lossless(y, z, n1, n2):
    spec = DomainSpec(y, z)
    for v in range(spec.d_y + 1):
        assert coefficient_A(n1, n2, v, spec) == coefficient_A(n1, n2, v, spec, clamp=False)


def test_intersection_numerator_zero_matches_m1():
    spec = DomainSpec(2, 2)
    assert intersection_numerator(3, 4, 0, spec) == rho_groups(3, 4, spec)


def test_m1_cases_and_missing_sizes():
    spec = DomainSpec(2, 2)
    p = SizeProfile.from_groups(3, 4, spec, k=3, k1=2, k2=1)
    assert m1_probability("A", p) == 1
    assert 0 < m1_probability(M1Case.B, p) < 1
    assert m1_probability("F", p) == Fraction(delta_coeff(2, 1, 3, 4, spec), rho_groups(3, 4, spec))
    with pytest.raises(MissingSizeError):
        m1_probability("C", SizeProfile(7, spec))
    with pytest.raises(ProfileError):
        SizeProfile(7, spec, 3, 3)
    with pytest.raises(ProfileError):
        m1_probability("F", SizeProfile.from_groups(3, 4, spec, k=2, k1=2, k2=1))


def test_m1_impossible_condition():
    # Two groups cannot have disjoint projections when d_y = 1.
    with pytest.raises(ImpossibleConditionError):
        m1_probability("E", SizeProfile.from_groups(1, 1, DomainSpec(0, 2), k=1))


def test_pattern_probabilities_sum_to_one():
    spec = DomainSpec(2, 3)
    total = sum(pattern_probability(5, 6, spec, r) for r in range(1, 4))
    assert total == 1
    with pytest.raises(ProfileError):
        pattern_probability(5, 6, spec, r=5)


def test_projection_size_probability_normalizes():
    spec = DomainSpec(2, 2)
    assert sum(projection_size_probability(k, 6, spec) for k in range(5)) == 1


def test_robustness_models():
    spec = DomainSpec(1, 2)
    p = SizeProfile.from_groups(2, 3, spec)
    assert robustness_probability(p, grouped=True) == 1  # d_y = 2: both values always used
    plain = robustness_probability(p)
    assert plain == 1 - Fraction(2 * big_binomial(4, 5), big_binomial(8, 5))
    assert robustness_probability(p, ungrouped_model="m1") == Fraction(beta(2, 5, spec), rho_total(5, spec))
    with pytest.raises(ValueError):
        robustness_probability(p, ungrouped_model="other")


def test_scan_and_unimodality():
    scan = scan_attribute_count(5, 127, 37, y_range=(1, 8))
    assert scan.argmax == 4
    assert scan.unimodal
    with pytest.raises(ProfileError):
        scan_attribute_count(5, 6, 4, y_range=(0, 3))


def test_round_size():
    assert round_size(95.30) == 95
    assert round_size(28.5) == 29
    assert round_size(7.8, "floor") == 7
    assert round_size(7.2, "ceil") == 8
