"""Shared domain types for the singular Cauchy-problem laboratory.

This module holds the problem-parameter bundle, the closed nonlinearity
families with their evaluation/antiderivative helpers, the solution-profile
container with its status taxonomy, and a deterministic JSON codec used by
every artifact the command-line front end writes.
"""

from __future__ import annotations

import json
import math
import numbers
from bisect import bisect_right
from dataclasses import dataclass, fields, is_dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np


class ConfigError(ValueError):
    """A parameter bundle violates one of the standing assumptions."""


class NumericalError(RuntimeError):
    """A numeric routine could not deliver a trustworthy answer."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _is_real(x) -> bool:
    return isinstance(x, numbers.Real) and math.isfinite(float(x))


# ----------------------------------------------------------------------
# problem parameters
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CauchyParams:
    """Coefficients of v'(r) = C r^{-q} (int_0^r s^{tau-1} g(v) ds)^{1/theta}.

    Rational inputs (int / Fraction) are preserved exactly so that regime
    boundaries can be decided without floating-point ambiguity.
    """

    C: numbers.Real
    q: numbers.Real
    tau: numbers.Real
    theta: numbers.Real

    def __post_init__(self):
        for name in ("C", "q", "tau", "theta"):
            _require(_is_real(getattr(self, name)), f"{name} must be a finite real number")
        _require(self.C > 0, f"C must be positive (got {self.C})")
        _require(self.q >= 0, f"q must be nonnegative (got {self.q})")
        _require(self.theta > 0, f"theta must be positive (got {self.theta})")
        _require(
            self.tau > self.theta * self.q,
            f"tau must exceed theta*q (got tau={self.tau}, theta*q={self.theta * self.q})",
        )


# ----------------------------------------------------------------------
# nonlinearity families
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    g0: float

    def __post_init__(self):
        _require(_is_real(self.g0) and self.g0 > 0, f"g0 must be positive (got {self.g0})")


@dataclass(frozen=True)
class Power:
    d: float

    def __post_init__(self):
        _require(_is_real(self.d) and self.d >= 0, f"d must be nonnegative (got {self.d})")


@dataclass(frozen=True)
class Exponential:
    c: float

    def __post_init__(self):
        _require(_is_real(self.c) and self.c >= 0, f"c must be nonnegative (got {self.c})")


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear nonlinearity through the given (t, g) knots, with
    constant extrapolation outside the covered range."""

    knots: tuple

    def __post_init__(self):
        _require(
            isinstance(self.knots, (tuple, list)) and len(self.knots) >= 2,
            "knots must contain at least two (t, g) pairs",
        )
        cleaned = []
        for pair in self.knots:
            _require(len(pair) == 2, "each knot must be a (t, g) pair")
            t, gv = float(pair[0]), float(pair[1])
            _require(math.isfinite(t) and math.isfinite(gv), "knots must be finite")
            _require(gv >= 0, f"knot values must be nonnegative (got {gv})")
            cleaned.append((t, gv))
        for (t0, g0), (t1, g1) in zip(cleaned, cleaned[1:]):
            _require(t1 > t0, "knot abscissae must be strictly increasing")
            _require(g1 >= g0, "knot values must be nondecreasing")
        object.__setattr__(self, "knots", tuple(cleaned))

    # cached arrays (not dataclass fields: excluded from eq/repr/hash)
    def _arrays(self):
        cached = self.__dict__.get("_cache")
        if cached is None:
            ts = np.array([t for t, _ in self.knots], dtype=float)
            vs = np.array([g for _, g in self.knots], dtype=float)
            cum = np.concatenate(
                ([0.0], np.cumsum(0.5 * (vs[1:] + vs[:-1]) * np.diff(ts)))
            )
            cached = (ts, vs, cum)
            object.__setattr__(self, "_cache", cached)
        return cached


Nonlinearity = Union[Constant, Power, Exponential, Tabulated]

_EXP_SATURATION = 700.0  # exp argument cap: stays inside float range


def eval_g(g: Nonlinearity, t) -> float:
    """Evaluate the nonlinearity at t. Power-family values vanish for t <= 0
    (including d = 0, which acts as a unit step)."""
    t = float(t)
    if isinstance(g, Constant):
        return g.g0
    if isinstance(g, Power):
        if t <= 0.0:
            return 0.0
        if g.d == 0.0:
            return 1.0
        try:
            return t**g.d
        except OverflowError:
            return math.inf
    if isinstance(g, Exponential):
        if g.c == 0.0:
            return 1.0
        return math.exp(min(g.c * t, _EXP_SATURATION))
    if isinstance(g, Tabulated):
        ts, vs, _ = g._arrays()
        return float(np.interp(t, ts, vs))
    raise ConfigError(f"unknown nonlinearity {g!r}")


def antideriv_g(g: Nonlinearity, t) -> float:
    """Signed antiderivative G(t) = int_0^t g(s) ds with G(0) = 0."""
    t = float(t)
    if isinstance(g, Constant):
        return g.g0 * t
    if isinstance(g, Power):
        if t <= 0.0:
            return 0.0
        try:
            return t ** (g.d + 1.0) / (g.d + 1.0)
        except OverflowError:
            return math.inf
    if isinstance(g, Exponential):
        if g.c == 0.0:
            return t
        x = g.c * t
        if x > _EXP_SATURATION:
            return math.inf
        return math.expm1(x) / g.c
    if isinstance(g, Tabulated):
        return _tabulated_integral(g, t) - _tabulated_integral(g, 0.0)
    raise ConfigError(f"unknown nonlinearity {g!r}")


def _tabulated_integral(g: Tabulated, t: float) -> float:
    """Integral of the piecewise-linear interpolant from the first knot to t
    (exact: trapezoids inside the table, constant extrapolation outside)."""
    ts, vs, cum = g._arrays()
    if t <= ts[0]:
        return vs[0] * (t - ts[0])
    if t >= ts[-1]:
        return float(cum[-1]) + vs[-1] * (t - ts[-1])
    i = bisect_right(ts, t) - 1
    gt = vs[i] + (vs[i + 1] - vs[i]) * (t - ts[i]) / (ts[i + 1] - ts[i])
    return float(cum[i]) + 0.5 * (vs[i] + gt) * (t - ts[i])


def log_antideriv_g(g: Nonlinearity, t: float) -> float:
    """log G(t) for t > 0, computed without overflow for the closed families."""
    t = float(t)
    _require(t > 0, "log of the accumulated integral needs t > 0")
    if isinstance(g, Constant):
        return math.log(g.g0) + math.log(t)
    if isinstance(g, Power):
        return (g.d + 1.0) * math.log(t) - math.log(g.d + 1.0)
    if isinstance(g, Exponential):
        if g.c == 0.0:
            return math.log(t)
        x = g.c * t
        # log((e^x - 1)/c) = x + log(1 - e^{-x}) - log c, stable for all x > 0
        return x + math.log(-math.expm1(-x)) - math.log(g.c)
    value = antideriv_g(g, t)
    return math.log(value) if value > 0 else -math.inf


def raise_to_power(g: Nonlinearity, exponent) -> Nonlinearity:
    """The pointwise power g(.)^exponent, staying inside the closed families."""
    _require(
        isinstance(exponent, numbers.Real) and exponent > 0,
        f"exponent must be positive (got {exponent})",
    )
    e = float(exponent)
    if isinstance(g, Constant):
        return Constant(g.g0**e)
    if isinstance(g, Power):
        return Power(g.d * e)
    if isinstance(g, Exponential):
        return Exponential(g.c * e)
    if isinstance(g, Tabulated):
        return Tabulated(tuple((t, gv**e) for t, gv in g.knots))
    raise ConfigError(f"unknown nonlinearity {g!r}")


# ----------------------------------------------------------------------
# PDE problem descriptor
# ----------------------------------------------------------------------

_FAMILY_ALIASES = {
    "k_hessian": "k_hessian",
    "khessian": "k_hessian",
    "k-hessian": "k_hessian",
    "k": "k_hessian",
    "pi_k_hessian": "pi_k_hessian",
    "pikhessian": "pi_k_hessian",
    "pi-k-hessian": "pi_k_hessian",
    "pi_k": "pi_k_hessian",
    "pik": "pi_k_hessian",
}


@dataclass(frozen=True)
class PdeSpec:
    """A radial fully nonlinear problem: either the sum of k-by-k principal
    minors (k_hessian) or the product of all k-term eigenvalue sums
    (pi_k_hessian), driven by |x|^alpha |Du|^beta f(u)."""

    family: str
    n: int
    k: int
    p: numbers.Real
    alpha: numbers.Real
    beta: numbers.Real
    f: Nonlinearity

    def __post_init__(self):
        canonical = _FAMILY_ALIASES.get(str(self.family).strip().lower())
        _require(canonical is not None, f"unknown family {self.family!r}")
        object.__setattr__(self, "family", canonical)
        _require(isinstance(self.n, numbers.Integral) and self.n >= 1,
                 f"n must be a positive integer (got {self.n})")
        object.__setattr__(self, "n", int(self.n))
        _require(isinstance(self.k, numbers.Integral) and 1 <= self.k <= self.n,
                 f"k must satisfy 1 <= k <= n (got k={self.k}, n={self.n})")
        object.__setattr__(self, "k", int(self.k))
        _require(_is_real(self.p) and self.p > 1, f"p must exceed 1 (got {self.p})")
        _require(_is_real(self.alpha) and self.alpha > -1,
                 f"alpha must exceed -1 (got {self.alpha})")
        _require(_is_real(self.beta) and self.beta < self.p - 1,
                 f"beta must stay below p - 1 (got beta={self.beta}, p={self.p})")
        _require(isinstance(self.f, (Constant, Power, Exponential, Tabulated)),
                 f"f must be a nonlinearity instance (got {self.f!r})")


# ----------------------------------------------------------------------
# verdicts, regularity, solve status
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    family: str


@dataclass(frozen=True)
class TailExponent:
    estimate: float
    stderr: float


@dataclass(frozen=True)
class Verdict:
    decision: str  # "Diverges" | "Converges" | "Inconclusive"
    evidence: Union[ClosedForm, TailExponent, None] = None


@dataclass(frozen=True)
class RegularityClass:
    case_tag: str  # "I" | "II" | "III"
    vpp_at_zero: Optional[float]
    delta_range: Optional[tuple]


@dataclass(frozen=True)
class Global:
    r_horizon: float
    note: str = ""


@dataclass(frozen=True)
class BlowUp:
    R_estimate: float
    R_bracket: tuple

    def __post_init__(self):
        object.__setattr__(self, "R_bracket", tuple(self.R_bracket))


@dataclass(frozen=True)
class Aborted:
    reason: str


Status = Union[Global, BlowUp, Aborted]


@dataclass(frozen=True, eq=False)
class SolutionProfile:
    """Sampled trajectory: grid (strictly positive, increasing), v, its
    derivative, the accumulated integral, the terminal status, and the
    initial value the run started from."""

    grid: np.ndarray
    v: np.ndarray
    vprime: np.ndarray
    accum: np.ndarray
    status: Status
    a: float

    def __post_init__(self):
        for name in ("grid", "v", "vprime", "accum"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.grid)
        _require(
            all(len(getattr(self, f)) == n for f in ("v", "vprime", "accum")),
            "profile arrays must share one length",
        )
        _require(n >= 1, "profile must contain at least one sample")
        _require(bool(np.all(self.grid > 0)), "profile grid must be strictly positive")
        _require(bool(np.all(np.diff(self.grid) > 0)), "profile grid must be increasing")


# ----------------------------------------------------------------------
# deterministic JSON codec
# ----------------------------------------------------------------------

_ENCODERS: dict = {}
_DECODERS: dict = {}


def register_codec(cls, kind: str, decode) -> None:
    """Register a dataclass for the JSON codec. `decode` receives the raw
    field dict (values already recursively decoded) and returns an instance."""
    _ENCODERS[cls] = kind
    _DECODERS[kind] = decode


def to_jsonable(obj):
    """Encode a domain object (or plain value) into JSON-ready structures."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return {
            "kind": "Fraction",
            "numerator": obj.numerator,
            "denominator": obj.denominator,
        }
    if isinstance(obj, np.ndarray):
        return [float(x) for x in obj.ravel()]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if is_dataclass(obj) and type(obj) in _ENCODERS:
        doc = {"kind": _ENCODERS[type(obj)]}
        for f in fields(obj):
            doc[f.name] = to_jsonable(getattr(obj, f.name))
        return doc
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    raise ConfigError(f"cannot encode {type(obj).__name__} to JSON")


def from_jsonable(doc):
    """Decode the structures produced by to_jsonable back into domain types."""
    if isinstance(doc, dict):
        kind = doc.get("kind")
        if kind == "Fraction":
            return Fraction(doc["numerator"], doc["denominator"])
        if kind is not None:
            decoder = _DECODERS.get(kind)
            if decoder is None:
                raise ConfigError(f"unknown kind {kind!r} in JSON document")
            payload = {
                key: from_jsonable(value)
                for key, value in doc.items()
                if key != "kind"
            }
            return decoder(payload)
        return {k: from_jsonable(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [from_jsonable(x) for x in doc]
    return doc


def dumps(obj) -> str:
    """Deterministic JSON text for a domain object."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def _simple(cls, tuple_fields=(), optional_tuple_fields=()):
    def decode(payload):
        for name in tuple_fields:
            payload[name] = tuple(
                tuple(x) if isinstance(x, list) else x for x in payload[name]
            )
        for name in optional_tuple_fields:
            if payload.get(name) is not None:
                payload[name] = tuple(payload[name])
        return cls(**payload)

    return decode


register_codec(CauchyParams, "CauchyParams", _simple(CauchyParams))
register_codec(Constant, "Constant", _simple(Constant))
register_codec(Power, "Power", _simple(Power))
register_codec(Exponential, "Exponential", _simple(Exponential))
register_codec(Tabulated, "Tabulated", _simple(Tabulated, tuple_fields=("knots",)))
register_codec(PdeSpec, "PdeSpec", _simple(PdeSpec))
register_codec(ClosedForm, "ClosedForm", _simple(ClosedForm))
register_codec(TailExponent, "TailExponent", _simple(TailExponent))
register_codec(Verdict, "Verdict", _simple(Verdict))
register_codec(
    RegularityClass,
    "RegularityClass",
    _simple(RegularityClass, optional_tuple_fields=("delta_range",)),
)
register_codec(Global, "Global", _simple(Global))
register_codec(BlowUp, "BlowUp", _simple(BlowUp, tuple_fields=("R_bracket",)))
register_codec(Aborted, "Aborted", _simple(Aborted))
register_codec(SolutionProfile, "SolutionProfile", _simple(SolutionProfile))
