"""Divergence/convergence tests for the generalized barrier integral.

Existence of global solutions hinges on whether
    int^infty G(t)^{-1/(theta+1)} dt,   G(t) = int_0^t g,
diverges (global growth possible) or converges (finite-radius blow-up).
The closed nonlinearity families are decided symbolically; tabulated data is
decided by a measured tail exponent with an honest dead band around the
borderline.  A window variant applies the same test to a power transform of
the nonlinearity, which is the relevant criterion when the singularity
exponents leave the unit-width window above their lower bound.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .core import (
    ClosedForm,
    ConfigError,
    Constant,
    Exponential,
    NumericalError,
    Power,
    Tabulated,
    TailExponent,
    Verdict,
    _require,
    log_antideriv_g,
    raise_to_power,
)

# The integral is borderline when the measured tail exponent sits at 1; calls
# inside this band around 1 are refused rather than guessed.
_DEAD_BAND_FLOOR = 0.02
_DEAD_BAND_STDERR_FACTOR = 3.0


@dataclass(frozen=True)
class KappaSpec:
    """Power transform used inside the narrow singularity window.

    For a window span = tau - theta*q in (0, 1) and a slack epsilon in
    (0, span), the transform exponent is kappa = (1 - epsilon)/(span - epsilon).
    """

    epsilon: numbers.Real
    kappa: numbers.Real

    @classmethod
    def for_window(cls, *, tau, theta, q, epsilon=None):
        span = tau - theta * q
        _require(
            0 < span < 1,
            f"window transform needs theta*q < tau < theta*q + 1 "
            f"(got span tau - theta*q = {span})",
        )
        if epsilon is None:
            epsilon = span / 2
        _require(
            0 < epsilon < span,
            f"epsilon must lie strictly between 0 and the window span {span} "
            f"(got {epsilon})",
        )
        kappa = (1 - epsilon) / (span - epsilon)
        return cls(epsilon=epsilon, kappa=kappa)


def tail_exponent(g, *, theta, t_lower: float = 1.0):
    """Measured decay exponent of the integrand G(t)^{-1/(theta+1)}.

    Fits log-integrand against log t over four decades starting at t_lower and
    returns (estimate, stderr); the integral converges when the estimate
    exceeds 1 by more than the uncertainty allows.
    """
    _require(theta > 0, f"theta must be positive (got {theta})")
    _require(t_lower > 0, f"t_lower must be positive (got {t_lower})")
    ts = np.geomspace(t_lower, 1e4 * t_lower, 48)
    xs, ys = [], []
    for t in ts:
        log_big_g = log_antideriv_g(g, float(t))
        if not math.isfinite(log_big_g):
            continue
        xs.append(math.log(t))
        ys.append(-log_big_g / (float(theta) + 1.0))
    if len(xs) < 8:
        raise NumericalError(
            "tail exponent fit needs the accumulated integral to be positive "
            "over the sampled tail"
        )
    coeffs, cov = np.polyfit(np.array(xs), np.array(ys), 1, cov=True)
    estimate = -float(coeffs[0])
    stderr = float(math.sqrt(max(cov[0][0], 0.0)))
    return estimate, stderr


def _closed_form_decision(g, theta):
    """Symbolic dichotomy for the closed families; None for tabulated data."""
    if isinstance(g, Constant):
        return Verdict(decision="Diverges", evidence=ClosedForm(family="Constant"))
    if isinstance(g, Exponential):
        decision = "Diverges" if g.c == 0.0 else "Converges"
        return Verdict(decision=decision, evidence=ClosedForm(family="Exponential"))
    if isinstance(g, Power):
        decision = "Diverges" if g.d <= theta else "Converges"
        return Verdict(decision=decision, evidence=ClosedForm(family="Power"))
    return None


def ko_standard(g, theta) -> Verdict:
    """Dichotomy for int^infty G^{-1/(theta+1)}: Diverges, Converges, or
    Inconclusive (tabulated data too close to the borderline)."""
    _require(theta > 0, f"theta must be positive (got {theta})")
    closed = _closed_form_decision(g, theta)
    if closed is not None:
        return closed
    if not isinstance(g, Tabulated):
        raise ConfigError(f"unknown nonlinearity {g!r}")
    estimate, stderr = tail_exponent(g, theta=theta)
    band = _DEAD_BAND_STDERR_FACTOR * stderr + _DEAD_BAND_FLOOR
    evidence = TailExponent(estimate=estimate, stderr=stderr)
    if abs(estimate - 1.0) <= band:
        return Verdict(decision="Inconclusive", evidence=evidence)
    decision = "Converges" if estimate > 1.0 else "Diverges"
    return Verdict(decision=decision, evidence=evidence)


def ko_kappa(g, *, theta, tau, q, eps=None) -> Verdict:
    """Window variant: the standard dichotomy applied to g^kappa with
    effective exponent kappa*theta, where kappa comes from the window
    transform.  Valid only when tau - theta*q lies strictly inside (0, 1)."""
    spec = KappaSpec.for_window(tau=tau, theta=theta, q=q, epsilon=eps)
    kappa = float(spec.kappa)
    return ko_standard(raise_to_power(g, kappa), theta=kappa * float(theta))
