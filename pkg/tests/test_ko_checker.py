"""Unit tests for the divergence/convergence checker of the growth integrals.

The standard test decides whether
    integral^infty (integral_0^t g)^(-1/(theta+1)) dt
diverges; the window-modified test applies the same decision to g^kappa with
exponent kappa*theta, where kappa = (1-eps)/((tau - theta*q) - eps).
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from koscope.core import (
    ClosedForm,
    ConfigError,
    Constant,
    Exponential,
    Power,
    Tabulated,
    TailExponent,
)
from koscope.ko_checker import KappaSpec, ko_kappa, ko_standard, tail_exponent


def make_power_like_table(d: float, t_max: float = 1e6, n_knots: int = 400) -> Tabulated:
    """Tabulated nonlinearity sampling t^d on a dense geometric grid."""
    ts = np.geomspace(1e-3, t_max, n_knots)
    knots = [(0.0, 0.0)] + [(float(t), float(t**d)) for t in ts]
    return Tabulated(knots=tuple(knots))


BOUNDED_TABLE = Tabulated(knots=((0.0, 1.0), (1.0, 3.0), (5.0, 4.0)))


# ----------------------------------------------------------------------
# standard test, closed families
# ----------------------------------------------------------------------


def test_standard_exponential_positive_rate_converges():
    v = ko_standard(Exponential(1.0), theta=1.0)
    assert v.decision == "Converges"
    assert v.evidence == ClosedForm(family="Exponential")


def test_standard_exponential_zero_rate_diverges():
    assert ko_standard(Exponential(0.0), theta=2.3).decision == "Diverges"


@pytest.mark.parametrize("theta", [1.0, 2.5])
def test_standard_power_borderline_diverges(theta):
    assert ko_standard(Power(theta), theta=theta).decision == "Diverges"


@pytest.mark.parametrize("theta", [1.0, 2.5])
def test_standard_power_supercritical_converges(theta):
    assert ko_standard(Power(theta + 0.5), theta=theta).decision == "Converges"


def test_standard_power_subcritical_diverges():
    assert ko_standard(Power(0.3), theta=1.0).decision == "Diverges"


def test_standard_constant_diverges():
    v = ko_standard(Constant(5.0), theta=3.0)
    assert v.decision == "Diverges"
    assert v.evidence == ClosedForm(family="Constant")


# ----------------------------------------------------------------------
# standard test, tabulated route
# ----------------------------------------------------------------------


def test_standard_bounded_table_diverges_with_tail_evidence():
    v = ko_standard(BOUNDED_TABLE, theta=1.0)
    assert v.decision == "Diverges"
    assert isinstance(v.evidence, TailExponent)
    # bounded g: accumulated integral grows linearly, integrand ~ t^{-1/2}
    assert v.evidence.estimate == pytest.approx(0.5, abs=0.05)


def test_standard_cubic_like_table_converges():
    v = ko_standard(make_power_like_table(3.0), theta=1.0)
    assert v.decision == "Converges"
    assert isinstance(v.evidence, TailExponent)
    assert v.evidence.estimate == pytest.approx(2.0, abs=0.1)


def test_standard_borderline_table_is_inconclusive():
    # g(t) = t sampled exactly: integrand decays like 1/t, the undecidable edge
    v = ko_standard(make_power_like_table(1.0), theta=1.0)
    assert v.decision == "Inconclusive"
    assert isinstance(v.evidence, TailExponent)


# ----------------------------------------------------------------------
# tail exponent estimator
# ----------------------------------------------------------------------


def test_tail_exponent_linear_growth():
    est, stderr = tail_exponent(Power(1.0), theta=1.0)
    assert est == pytest.approx(1.0, abs=0.02)
    assert stderr < 0.01


def test_tail_exponent_constant():
    est, _ = tail_exponent(Constant(1.0), theta=1.0)
    assert est == pytest.approx(0.5, abs=0.02)


def test_tail_exponent_cubic():
    est, _ = tail_exponent(Power(3.0), theta=1.0)
    assert est == pytest.approx(2.0, abs=0.02)


def test_tail_exponent_pure_powers_fit_cleanly():
    # the log-integrand is affine in log t, so the regression is near-exact
    for d, theta in [(0.5, 1.0), (2.0, 2.0), (4.0, 1.5)]:
        est, stderr = tail_exponent(Power(d), theta=theta)
        assert est == pytest.approx((d + 1) / (theta + 1), rel=1e-6)
        assert stderr < 1e-6


# ----------------------------------------------------------------------
# window-modified test
# ----------------------------------------------------------------------


def test_kappa_spec_value():
    ks = KappaSpec.for_window(tau=0.5, theta=1.0, q=0.0, epsilon=0.25)
    assert ks.epsilon == 0.25
    assert ks.kappa == pytest.approx(3.0, rel=1e-15)


def test_kappa_spec_rejects_out_of_window_epsilon():
    with pytest.raises(ConfigError):
        KappaSpec.for_window(tau=0.5, theta=1.0, q=0.0, epsilon=0.6)
    with pytest.raises(ConfigError):
        KappaSpec.for_window(tau=0.5, theta=1.0, q=0.0, epsilon=0.0)
    with pytest.raises(ConfigError):
        KappaSpec.for_window(tau=0.5, theta=1.0, q=0.0, epsilon=0.5)


def test_kappa_default_epsilon_is_midpoint():
    ks = KappaSpec.for_window(tau=0.5, theta=1.0, q=0.0, epsilon=None)
    assert ks.epsilon == pytest.approx(0.25, rel=1e-15)


def test_kappa_exponential_converges():
    v = ko_kappa(Exponential(1.0), theta=1.0, tau=0.5, q=0.0, eps=0.25)
    assert v.decision == "Converges"


def test_kappa_power_borderline_diverges_for_any_epsilon():
    for eps in (0.1, 0.25, 0.4):
        v = ko_kappa(Power(1.0), theta=1.0, tau=0.5, q=0.0, eps=eps)
        assert v.decision == "Diverges"


def test_kappa_constant_diverges_default_epsilon():
    v = ko_kappa(Constant(1.0), theta=1.0, tau=0.5, q=0.0, eps=None)
    assert v.decision == "Diverges"


def test_kappa_requires_window_regime():
    # needs theta*q < tau < theta*q + 1
    with pytest.raises(ConfigError):
        ko_kappa(Constant(1.0), theta=1.0, tau=1.5, q=0.0, eps=None)
    with pytest.raises(ConfigError):
        ko_kappa(Constant(1.0), theta=1.0, tau=1.0, q=0.0, eps=None)


def test_kappa_rejects_epsilon_outside_window():
    with pytest.raises(ConfigError):
        ko_kappa(Power(1.0), theta=1.0, tau=0.5, q=0.0, eps=0.9)


@given(
    d=st.floats(0.1, 4.0),
    theta=st.floats(0.5, 3.0),
    frac=st.sampled_from([0.1, 0.5, 0.9]),
)
def test_kappa_verdict_independent_of_epsilon_for_powers(d, theta, frac):
    # window span tau - theta*q fixed at 0.7
    q = 0.0
    tau_eff = theta * q + 0.7
    eps = frac * 0.7
    v = ko_kappa(Power(d), theta=theta, tau=tau_eff, q=q, eps=eps)
    expected = "Diverges" if d <= theta else "Converges"
    assert v.decision == expected


@pytest.mark.parametrize("scale", [0.01, 1.0, 100.0])
def test_scale_invariance_of_verdicts(scale):
    v_const = ko_standard(Constant(scale), theta=1.0)
    assert v_const.decision == "Diverges"
    scaled_knots = tuple((t, scale * g) for t, g in BOUNDED_TABLE.knots)
    v_table = ko_standard(Tabulated(knots=scaled_knots), theta=1.0)
    assert v_table.decision == "Diverges"


@pytest.mark.parametrize(
    "g, theta",
    [
        (Power(0.2), 1.0),
        (Power(1.0), 0.5),
        (Power(2.7), 1.0),
        (Power(3.0), 2.0),
        (Exponential(1.0), 1.0),
    ],
)
def test_closed_form_agrees_with_tail_threshold(g, theta):
    closed = ko_standard(g, theta=theta).decision
    est, stderr = tail_exponent(g, theta=theta)
    band = 3 * stderr + 0.02
    assert abs(est - 1.0) > band, "calibration case unexpectedly borderline"
    numeric = "Converges" if est > 1.0 else "Diverges"
    assert closed == numeric
