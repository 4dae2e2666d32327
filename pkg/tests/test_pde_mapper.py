"""Unit tests for the reduction from fully nonlinear radial problems to the
one-dimensional singular Cauchy problem.

The closed-form rows in SPECIAL_CASES below are an independent second route
to the same coefficients: each is the general formula specialised by hand
(binomials expanded, exponents simplified) rather than evaluated through the
mapper's code path, so field-for-field agreement is a real cross-check.
"""

from __future__ import annotations

import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from koscope.core import ConfigError, Constant, Exponential, PdeSpec, Power
from koscope.pde_mapper import (
    duality_partner,
    existence_verdict,
    map_to_cauchy,
    regime,
    table_rows,
)


def binom(n, k):
    return math.comb(n, k)


# ----------------------------------------------------------------------
# closed-form special cases (independent hand-derived route)
# ----------------------------------------------------------------------

# (spec, C, q, tau, theta, g_exponent)
SPECIAL_CASES = [
    # k-Hessian family, p = 2, no weights
    (
        PdeSpec("k_hessian", n=5, k=2, p=2, alpha=0, beta=0, f=Constant(1.0)),
        (2 / binom(4, 1)) ** Fraction(1, 2),
        Fraction(3, 2),
        Fraction(5),
        Fraction(2),
        Fraction(2),
    ),
    # k-Hessian, p = 2, gradient weight only
    (
        PdeSpec("k_hessian", n=5, k=2, p=2, alpha=Fraction(1, 2), beta=Fraction(1, 4), f=Constant(1.0)),
        (2 * Fraction(3, 4) / binom(4, 1)) ** float(1 / (2 * Fraction(3, 4))),
        Fraction(3, 2),
        2 * (Fraction(1, 2) + Fraction(1, 4)) - 5 * Fraction(1, 4) + 5,
        2 * Fraction(3, 4),
        Fraction(2),
    ),
    # k-Hessian, no weights, general p
    (
        PdeSpec("k_hessian", n=7, k=3, p=Fraction(5, 2), alpha=0, beta=0, f=Constant(1.0)),
        (3 / binom(6, 2)) ** float(1 / (3 * Fraction(3, 2))),
        Fraction(7 - 3, 3 * Fraction(3, 2)),
        Fraction(7),
        3 * Fraction(3, 2),
        Fraction(3),
    ),
    # k-Hessian, fully general
    (
        PdeSpec("k_hessian", n=6, k=2, p=3, alpha=1, beta=Fraction(1, 2), f=Constant(1.0)),
        (2 * Fraction(3, 2) / (binom(5, 1) * 2)) ** float(1 / (2 * Fraction(3, 2))),
        Fraction(6 - 2, 2 * 2),
        2 * 1 + (2 - 6) * Fraction(1, 4) + 6,
        2 * Fraction(3, 2),
        Fraction(2),
    ),
    # product-of-k-sums family, p = 2, no weights
    (
        PdeSpec("pi_k_hessian", n=6, k=3, p=2, alpha=0, beta=0, f=Constant(1.0)),
        6 ** Fraction(3, 6) / 3,
        Fraction(2),
        Fraction(6),
        Fraction(2),
        Fraction(2),
    ),
    # product-of-k-sums, p = 2, with weights
    (
        PdeSpec("pi_k_hessian", n=6, k=3, p=2, alpha=1, beta=Fraction(1, 2), f=Constant(1.0)),
        (6 * Fraction(1, 2) / 3 ** Fraction(6, 3)) ** float(Fraction(3, 6) / Fraction(1, 2)),
        Fraction(2),
        Fraction(6, 3) * (1 + Fraction(1, 2)) - 6 * Fraction(1, 2) + 6,
        Fraction(6, 3) * Fraction(1, 2),
        Fraction(2),
    ),
    # product-of-k-sums, no weights, general p
    (
        PdeSpec("pi_k_hessian", n=4, k=2, p=3, alpha=0, beta=0, f=Constant(1.0)),
        (4 / 2 ** Fraction(4, 2)) ** float(Fraction(2, 4 * 2)),
        Fraction(1, 2),
        Fraction(4),
        Fraction(4, 2) * 2,
        Fraction(2),
    ),
    # product-of-k-sums, fully general
    (
        PdeSpec("pi_k_hessian", n=4, k=2, p=3, alpha=1, beta=1, f=Constant(1.0)),
        (4 * 1 / (2 ** Fraction(4, 2) * 2)) ** float(Fraction(2, 4 * 1)),
        Fraction(1, 2),
        4 * (Fraction(1, 2) + Fraction(-1, 2) * Fraction(1, 2) + 1),
        Fraction(4, 2) * 1,
        Fraction(2),
    ),
]


@pytest.mark.parametrize("spec, C, q, tau, theta, g_exp", SPECIAL_CASES)
def test_mapping_matches_hand_derived_special_cases(spec, C, q, tau, theta, g_exp):
    mapped = map_to_cauchy(spec)
    assert mapped.params.C == pytest.approx(float(C), rel=1e-12)
    assert mapped.params.q == q
    assert mapped.params.tau == tau
    assert mapped.params.theta == theta
    assert mapped.g_exponent == g_exp


def test_table_rows_expose_the_same_eight_cases():
    rows = table_rows()
    assert len(rows) == 8
    for (spec, C, q, tau, theta, g_exp), row in zip(SPECIAL_CASES, rows):
        got = row.coefficients(spec)
        assert got.C == pytest.approx(float(C), rel=1e-12)
        assert got.q == q
        assert got.tau == tau
        assert got.theta == theta
        assert got.g_exponent == g_exp
        assert row.applies(spec)


def test_table_row_applicability_filters():
    rows = table_rows()
    general_k = PdeSpec("k_hessian", n=6, k=2, p=3, alpha=1, beta=Fraction(1, 2), f=Constant(1.0))
    assert [r.applies(general_k) for r in rows] == [
        False, False, False, True, False, False, False, False,
    ]
    plain_pi = PdeSpec("pi_k_hessian", n=6, k=3, p=2, alpha=0, beta=0, f=Constant(1.0))
    # every product-family row degenerates correctly to the plain case
    assert [r.applies(plain_pi) for r in rows] == [
        False, False, False, False, True, True, True, True,
    ]
    mapped = map_to_cauchy(plain_pi)
    for row in rows[4:]:
        got = row.coefficients(plain_pi)
        assert got.C == pytest.approx(mapped.params.C, rel=1e-12)
        assert (got.q, got.tau, got.theta) == (
            mapped.params.q, mapped.params.tau, mapped.params.theta,
        )


# ----------------------------------------------------------------------
# structural identities of the mapping
# ----------------------------------------------------------------------

SPEC_STRATEGY = st.tuples(
    st.sampled_from(["k_hessian", "pi_k_hessian"]),
    st.integers(min_value=1, max_value=9),
    st.integers(min_value=1, max_value=9),
    st.fractions(min_value=Fraction(11, 10), max_value=Fraction(4), max_denominator=10),
    st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(3), max_denominator=10),
    st.fractions(min_value=Fraction(-2), max_value=Fraction(3), max_denominator=10),
).filter(lambda t: t[2] <= t[1] and t[5] < t[3] - 1).map(
    lambda t: PdeSpec(t[0], n=t[1], k=t[2], p=t[3], alpha=t[4], beta=t[5], f=Constant(1.0))
)


@given(SPEC_STRATEGY)
def test_singularity_strength_identity(spec):
    mapped = map_to_cauchy(spec)
    pms = mapped.params
    # tau - theta*q collapses to a weight-only expression
    if spec.family == "k_hessian":
        expected = spec.k * (spec.alpha + 1)
    else:
        expected = Fraction(spec.n, spec.k) * (spec.alpha + 1)
    assert pms.tau - pms.theta * pms.q == expected
    assert pms.tau - pms.theta * pms.q > 0  # standing assumption holds
    assert pms.theta > 0
    assert pms.q >= 0


@given(SPEC_STRATEGY)
def test_regime_threshold_matches_alpha_critical(spec):
    rep = regime(spec)
    if spec.family == "k_hessian":
        assert rep.alpha_critical == Fraction(1, spec.k) - 1
    else:
        assert rep.alpha_critical == Fraction(spec.k, spec.n) - 1
    mapped = map_to_cauchy(spec)
    pms = mapped.params
    at_least_exact = pms.tau >= pms.theta * pms.q + 1
    assert (rep.tag == "ko_exact") == at_least_exact
    assert (rep.tag == "kappa_window") == (not at_least_exact)
    if rep.tag == "kappa_window":
        assert rep.kappa is not None
        assert rep.kappa.epsilon > 0
    else:
        assert rep.kappa is None


@given(SPEC_STRATEGY)
def test_gradient_gate_matches_weight_relation(spec):
    rep = regime(spec)
    gate = (spec.p - 1) * spec.alpha + spec.beta == 0
    assert rep.gradient_condition_met == gate
    if gate:
        mapped = map_to_cauchy(spec)
        pms = mapped.params
        assert pms.tau == pms.theta * (pms.q + Fraction(1, spec.p - 1))


def test_regime_weighted_sobolev_range():
    # mapped form (1, theta/(theta*(q+1) - tau)) equals the direct form
    # (1, (p - beta - 1)/(p - alpha - beta - 2)) whenever both are defined
    spec = PdeSpec("pi_k_hessian", n=4, k=2, p=11, alpha=0, beta=Fraction(3, 2), f=Constant(1.0))
    rep = regime(spec)
    lo, hi = rep.delta_range
    assert lo == 1
    assert hi == Fraction(17, 15)
    beta = Fraction(3, 2)
    assert hi == (11 - beta - 1) / (11 - 0 - beta - 2)


def test_regime_delta_range_none_outside_case_three():
    spec = PdeSpec("k_hessian", n=5, k=2, p=2, alpha=0, beta=0, f=Constant(1.0))
    rep = regime(spec)
    assert rep.regularity_case in {"I", "II"}
    assert rep.delta_range is None


# ----------------------------------------------------------------------
# duality between the two families
# ----------------------------------------------------------------------


def test_duality_partner_swaps_families_when_k_divides_n():
    spec = PdeSpec("k_hessian", n=6, k=2, p=2, alpha=0, beta=0, f=Constant(1.0))
    partner = duality_partner(spec)
    assert partner is not None
    assert partner.family == "pi_k_hessian"
    assert partner.n == 6 and partner.k == 3
    assert duality_partner(partner) is not None
    assert duality_partner(partner).family == "k_hessian"
    assert duality_partner(partner).k == 2


def test_duality_partner_absent_otherwise():
    spec = PdeSpec("k_hessian", n=5, k=2, p=2, alpha=0, beta=0, f=Constant(1.0))
    assert duality_partner(spec) is None


@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=1, max_value=3),
    st.fractions(min_value=Fraction(3, 2), max_value=Fraction(3), max_denominator=4),
    st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1), max_denominator=4),
)
def test_duality_preserves_every_exponent(k, mult, p, alpha):
    n = k * mult
    spec = PdeSpec("k_hessian", n=n, k=k, p=p, alpha=alpha, beta=0, f=Constant(1.0))
    partner = duality_partner(spec)
    a = map_to_cauchy(spec)
    b = map_to_cauchy(partner)
    assert a.params.q == b.params.q
    assert a.params.tau == b.params.tau
    assert a.params.theta == b.params.theta
    assert a.g_exponent == b.g_exponent


# ----------------------------------------------------------------------
# existence verdicts
# ----------------------------------------------------------------------


def test_verdict_exponential_forcing_hinges_on_rate():
    spec = PdeSpec("k_hessian", n=5, k=2, p=2, alpha=0, beta=0, f=Exponential(0.0))
    v = existence_verdict(spec)
    assert v.exists == "yes"
    spec_hot = replace(spec, f=Exponential(1.0))
    v2 = existence_verdict(spec_hot)
    assert v2.exists == "no"


def test_verdict_power_forcing_threshold():
    # entire solutions survive exactly up to degree p - beta - 1
    base = PdeSpec("k_hessian", n=4, k=2, p=3, alpha=0, beta=Fraction(1, 2), f=Power(1.0))
    threshold = Fraction(3) - Fraction(1, 2) - 1  # 3/2
    for d, expect in [
        (Fraction(1, 2), "yes"),
        (threshold, "yes"),
        (threshold + Fraction(1, 2), "no"),
    ]:
        v = existence_verdict(replace(base, f=Power(d)))
        assert v.exists == expect, (d, v)


def test_verdict_in_kappa_window_regime():
    # alpha below critical puts the problem in the windowed regime; a power
    # nonlinearity still gets a definite answer there
    spec = PdeSpec("k_hessian", n=5, k=2, p=2, alpha=Fraction(-3, 4), beta=0, f=Power(1.0))
    rep = regime(spec)
    assert rep.tag == "kappa_window"
    assert existence_verdict(spec).exists == "yes"
    spec_hot = replace(spec, f=Power(4))
    assert existence_verdict(spec_hot).exists == "no"


def test_verdict_reports_basis_and_underlying_decision():
    spec = PdeSpec("k_hessian", n=5, k=2, p=2, alpha=0, beta=0, f=Exponential(1.0))
    v = existence_verdict(spec)
    assert v.basis == "ko_exact"
    assert v.ko.decision == "Converges"


def test_mapping_rejects_wrong_family_string_via_spec():
    with pytest.raises(ConfigError):
        PdeSpec("hessian", n=5, k=2, p=2, alpha=0, beta=0, f=Constant(1.0))
