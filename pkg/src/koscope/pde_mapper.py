"""Reduction of radial fully nonlinear problems to the singular Cauchy ODE.

A radial problem from either operator family with forcing |x|^alpha |Du|^beta
f(u) integrates to exactly the first-order singular equation handled by the
solver: this module produces the coefficient bundle (C, q, tau, theta), the
transformed nonlinearity g = f^{g_exponent}, the regime report (which
dichotomy applies, criticality threshold, regularity case, gradient-limit
gate), closed-form coefficient rows for the standard special cases, the
families' duality pairing, and an existence verdict that chains the mapping
into the divergence tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cauchy_solver import _regularity_split
from .core import (
    CauchyParams,
    ConfigError,
    PdeSpec,
    RegularityClass,
    Verdict,
    _require,
    raise_to_power,
    register_codec,
    _simple,
)
from .ko_checker import KappaSpec, ko_kappa, ko_standard


@dataclass(frozen=True)
class RegimeReport:
    """Which existence criterion governs the problem and how regular the
    model profile is at the origin."""

    alpha_critical: object
    tag: str  # "ko_exact" | "kappa_window"
    regularity_case: str  # "I" | "II" | "III"
    delta_range: Optional[tuple]
    kappa: Optional[KappaSpec]
    gradient_condition_met: bool


@dataclass(frozen=True)
class MappedProblem:
    params: CauchyParams
    g: object
    g_exponent: object
    regime: RegimeReport
    regularity: RegularityClass


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: str  # "yes" | "no" | "conditional"
    basis: str  # which criterion decided it
    ko: Verdict


def _rationals(spec: PdeSpec):
    return Fraction(spec.p), Fraction(spec.alpha), Fraction(spec.beta)


def _mapped_coefficients(spec: PdeSpec):
    """Exact (C, q, tau, theta, g_exponent) of the reduced problem; C is a
    float (it involves irrational roots), the exponents stay rational."""
    n, k = spec.n, spec.k
    p, alpha, beta = _rationals(spec)
    if spec.family == "k_hessian":
        theta = k * (p - beta - 1)
        q = Fraction(n - k) / (k * (p - 1))
        tau = k * alpha + Fraction(k - n) * beta / (p - 1) + n
        g_exponent = Fraction(k)
        base = Fraction(k) * (p - beta - 1) / (math.comb(n - 1, k - 1) * (p - 1))
        coeff = float(base) ** float(1 / theta)
    else:
        theta = Fraction(n, k) * (p - beta - 1)
        q = Fraction(k - 1) / (p - 1)
        tau = n * (alpha / k + (Fraction(1, k) - 1) * beta / (p - 1) + 1)
        g_exponent = Fraction(n, k)
        numerator = Fraction(n) * (p - beta - 1) / (p - 1)
        coeff = (float(numerator) / float(k) ** (n / k)) ** float(1 / theta)
    return coeff, q, tau, theta, g_exponent


def regime(spec: PdeSpec) -> RegimeReport:
    """Criticality report: the exact criterion applies when the singularity
    window tau - theta*q is at least 1 (equivalently alpha at or above the
    critical value); below that the power-transform window criterion governs."""
    n, k = spec.n, spec.k
    p, alpha, beta = _rationals(spec)
    _, q, tau, theta, _ = _mapped_coefficients(spec)
    if spec.family == "k_hessian":
        alpha_critical = Fraction(1, k) - 1
    else:
        alpha_critical = Fraction(k, n) - 1
    span = tau - theta * q
    if span >= 1:
        tag = "ko_exact"
        kappa = None
    else:
        tag = "kappa_window"
        kappa = KappaSpec.for_window(tau=tau, theta=theta, q=q)
    case_tag, delta = _regularity_split(q, tau, theta)
    gradient = (p - 1) * alpha + beta == 0
    return RegimeReport(
        alpha_critical=alpha_critical,
        tag=tag,
        regularity_case=case_tag,
        delta_range=delta,
        kappa=kappa,
        gradient_condition_met=bool(gradient),
    )


def map_to_cauchy(spec: PdeSpec) -> MappedProblem:
    """Full reduction: coefficient bundle, transformed nonlinearity, regime
    report, and the regularity class of the model profile at the origin."""
    coeff, q, tau, theta, g_exponent = _mapped_coefficients(spec)
    params = CauchyParams(C=coeff, q=q, tau=tau, theta=theta)
    mapped_g = raise_to_power(spec.f, g_exponent)
    rep = regime(spec)
    vpp0 = 0.0 if rep.regularity_case == "I" else None
    regularity = RegularityClass(
        case_tag=rep.regularity_case,
        vpp_at_zero=vpp0,
        delta_range=rep.delta_range,
    )
    return MappedProblem(
        params=params,
        g=mapped_g,
        g_exponent=g_exponent,
        regime=rep,
        regularity=regularity,
    )


def duality_partner(spec: PdeSpec) -> Optional[PdeSpec]:
    """The opposite-family problem with order n/k, which reduces to the very
    same coefficient exponents and nonlinearity transform for every beta.
    Defined only when k divides n."""
    if spec.n % spec.k != 0:
        return None
    partner_k = spec.n // spec.k
    other = "pi_k_hessian" if spec.family == "k_hessian" else "k_hessian"
    return PdeSpec(
        family=other,
        n=spec.n,
        k=partner_k,
        p=spec.p,
        alpha=spec.alpha,
        beta=spec.beta,
        f=spec.f,
    )


def existence_verdict(spec: PdeSpec) -> ExistenceVerdict:
    """Existence of a global radial solution, decided by the divergence test
    appropriate to the regime.  In the window regime a diverging transform
    gives yes, a converging plain test gives no, anything else is
    conditional."""
    mapped = map_to_cauchy(spec)
    theta = float(mapped.params.theta)
    if mapped.regime.tag == "ko_exact":
        verdict = ko_standard(mapped.g, theta=theta)
        exists = {"Diverges": "yes", "Converges": "no"}.get(verdict.decision, "conditional")
        return ExistenceVerdict(exists=exists, basis="ko_exact", ko=verdict)
    window = ko_kappa(
        mapped.g,
        theta=theta,
        tau=float(mapped.params.tau),
        q=float(mapped.params.q),
    )
    if window.decision == "Diverges":
        return ExistenceVerdict(exists="yes", basis="kappa_window", ko=window)
    plain = ko_standard(mapped.g, theta=theta)
    if plain.decision == "Converges":
        return ExistenceVerdict(exists="no", basis="kappa_window", ko=plain)
    return ExistenceVerdict(exists="conditional", basis="kappa_window", ko=window)


# ----------------------------------------------------------------------
# closed-form coefficient rows for the standard special cases
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RowCoefficients:
    C: float
    q: object
    tau: object
    theta: object
    g_exponent: object


class TableRow:
    """One closed-form special case: a predicate for applicability and an
    independently derived coefficient formula."""

    def __init__(self, label, family, needs_p2, needs_plain, formula):
        self.label = label
        self.family = family
        self.needs_p2 = needs_p2
        self.needs_plain = needs_plain
        self._formula = formula

    def __repr__(self):
        return f"TableRow({self.label!r})"

    def applies(self, spec: PdeSpec) -> bool:
        if spec.family != self.family:
            return False
        p, alpha, beta = _rationals(spec)
        if self.needs_p2 and p != 2:
            return False
        if self.needs_plain and not (alpha == 0 and beta == 0):
            return False
        return True

    def coefficients(self, spec: PdeSpec) -> RowCoefficients:
        _require(self.applies(spec), f"row {self.label!r} does not apply to this problem")
        return self._formula(spec)


def _row_k_p2_plain(spec):
    n, k = spec.n, spec.k
    coeff = float(Fraction(k, math.comb(n - 1, k - 1))) ** (1.0 / k)
    return RowCoefficients(C=coeff, q=Fraction(n, k) - 1, tau=Fraction(n),
                           theta=Fraction(k), g_exponent=Fraction(k))


def _row_k_p2(spec):
    n, k = spec.n, spec.k
    _, alpha, beta = _rationals(spec)
    theta = k * (1 - beta)
    coeff = float(Fraction(k) * (1 - beta) / math.comb(n - 1, k - 1)) ** float(1 / theta)
    return RowCoefficients(
        C=coeff,
        q=Fraction(n - k, k),
        tau=k * (alpha + beta) - n * beta + n,
        theta=theta,
        g_exponent=Fraction(k),
    )


def _row_k_plain(spec):
    n, k = spec.n, spec.k
    p, _, _ = _rationals(spec)
    theta = k * (p - 1)
    coeff = float(Fraction(k, math.comb(n - 1, k - 1))) ** float(1 / theta)
    return RowCoefficients(
        C=coeff,
        q=Fraction(n - k) / (k * (p - 1)),
        tau=Fraction(n),
        theta=theta,
        g_exponent=Fraction(k),
    )


def _row_k_general(spec):
    n, k = spec.n, spec.k
    p, alpha, beta = _rationals(spec)
    theta = k * (p - beta - 1)
    base = Fraction(k) * (p - beta - 1) / (math.comb(n - 1, k - 1) * (p - 1))
    return RowCoefficients(
        C=float(base) ** float(1 / theta),
        q=Fraction(n - k) / (k * (p - 1)),
        tau=k * alpha + Fraction(k - n) * beta / (p - 1) + n,
        theta=theta,
        g_exponent=Fraction(k),
    )


def _row_pi_p2_plain(spec):
    n, k = spec.n, spec.k
    coeff = float(n) ** (k / n) / k
    return RowCoefficients(C=coeff, q=Fraction(k - 1), tau=Fraction(n),
                           theta=Fraction(n, k), g_exponent=Fraction(n, k))


def _row_pi_p2(spec):
    n, k = spec.n, spec.k
    _, alpha, beta = _rationals(spec)
    theta = Fraction(n, k) * (1 - beta)
    coeff = (float(n * (1 - beta)) / float(k) ** (n / k)) ** float(1 / theta)
    return RowCoefficients(
        C=coeff,
        q=Fraction(k - 1),
        tau=Fraction(n, k) * (alpha + beta) - n * beta + n,
        theta=theta,
        g_exponent=Fraction(n, k),
    )


def _row_pi_plain(spec):
    n, k = spec.n, spec.k
    p, _, _ = _rationals(spec)
    theta = Fraction(n, k) * (p - 1)
    coeff = (float(n) / float(k) ** (n / k)) ** float(Fraction(k) / (n * (p - 1)))
    return RowCoefficients(
        C=coeff,
        q=Fraction(k - 1) / (p - 1),
        tau=Fraction(n),
        theta=theta,
        g_exponent=Fraction(n, k),
    )


def _row_pi_general(spec):
    n, k = spec.n, spec.k
    p, alpha, beta = _rationals(spec)
    theta = Fraction(n, k) * (p - beta - 1)
    numerator = Fraction(n) * (p - beta - 1) / (p - 1)
    return RowCoefficients(
        C=(float(numerator) / float(k) ** (n / k)) ** float(1 / theta),
        q=Fraction(k - 1) / (p - 1),
        tau=n * (alpha / k + (Fraction(1, k) - 1) * beta / (p - 1) + 1),
        theta=theta,
        g_exponent=Fraction(n, k),
    )


def table_rows():
    """The eight closed-form rows, ordered K then Pi, from most special
    (p = 2, unweighted) to fully general."""
    return [
        TableRow("k_hessian p=2 plain", "k_hessian", True, True, _row_k_p2_plain),
        TableRow("k_hessian p=2 weighted", "k_hessian", True, False, _row_k_p2),
        TableRow("k_hessian general p plain", "k_hessian", False, True, _row_k_plain),
        TableRow("k_hessian general", "k_hessian", False, False, _row_k_general),
        TableRow("pi_k_hessian p=2 plain", "pi_k_hessian", True, True, _row_pi_p2_plain),
        TableRow("pi_k_hessian p=2 weighted", "pi_k_hessian", True, False, _row_pi_p2),
        TableRow("pi_k_hessian general p plain", "pi_k_hessian", False, True, _row_pi_plain),
        TableRow("pi_k_hessian general", "pi_k_hessian", False, False, _row_pi_general),
    ]


register_codec(KappaSpec, "KappaSpec", _simple(KappaSpec))
register_codec(RegimeReport, "RegimeReport",
               _simple(RegimeReport, optional_tuple_fields=("delta_range",)))
register_codec(MappedProblem, "MappedProblem", _simple(MappedProblem))
register_codec(ExistenceVerdict, "ExistenceVerdict", _simple(ExistenceVerdict))
