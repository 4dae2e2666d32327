"""Symmetric-function operators on Hessian eigenvalues and their radial forms.

For a radial function v(|x|) the Hessian spectrum at radius r consists of one
eigenvalue from the second radial derivative and n-1 copies of v'(r)/r; the
p-Laplacian-type generalisation replaces these with
m = (p-1) v'^{p-2} v'' and h = v'^{p-1}/r.  This module provides the k-th
elementary symmetric polynomial, the product of all k-term eigenvalue sums,
the corresponding admissibility cones, and closed radial evaluations (with
log-domain variants that survive exponentially large profiles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import ConfigError, _is_real, _require


def _check_order(count: int, k: int) -> None:
    _require(
        isinstance(k, int) and 1 <= k <= count,
        f"k must satisfy 1 <= k <= {count} (got {k})",
    )


def sigma_k(lams, k: int):
    """k-th elementary symmetric polynomial of the eigenvalues.

    Computed by the coefficient recurrence of prod (1 + lam*x): exact on
    ints and Fractions, numerically stable for the small n used here.
    """
    lams = tuple(lams)
    _check_order(len(lams), k)
    coeffs = [1] + [0] * k
    filled = 0
    for lam in lams:
        top = min(filled + 1, k)
        for j in range(top, 0, -1):
            coeffs[j] = coeffs[j] + lam * coeffs[j - 1]
        filled += 1
    return coeffs[k]


def pi_k(lams, k: int):
    """Product over all k-element subsets of the sum of the chosen eigenvalues."""
    lams = tuple(lams)
    _check_order(len(lams), k)
    result = None
    for subset in combinations(lams, k):
        s = sum(subset)
        result = s if result is None else result * s
    return result


def log_pi_k(lams, k: int) -> float:
    """log of pi_k; raises ValueError when any k-term sum is nonpositive."""
    lams = tuple(lams)
    _check_order(len(lams), k)
    total = 0.0
    for subset in combinations(lams, k):
        s = sum(subset)
        if s <= 0:
            raise ValueError(f"k-term eigenvalue sum is nonpositive ({s})")
        total += math.log(s)
    return total


def in_gamma_k(lams, k: int) -> bool:
    """Membership in the cone where sigma_1, ..., sigma_k are all positive."""
    lams = tuple(lams)
    _check_order(len(lams), k)
    return bool(all(sigma_k(lams, j) > 0 for j in range(1, k + 1)))


def in_p_k(lams, k: int) -> bool:
    """Membership in the cone where every k-term eigenvalue sum is positive;
    equivalently the k smallest eigenvalues already sum to a positive value."""
    lams = tuple(lams)
    _check_order(len(lams), k)
    smallest = sorted(lams)[:k]
    return bool(sum(smallest) > 0)


# ----------------------------------------------------------------------
# radial evaluations
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RadialPoint:
    """State of a radial profile at one radius: r, v'(r), v''(r), and the
    gradient exponent p of the operator."""

    r: float
    vprime: float
    vpp: float
    p: float = 2.0

    def __post_init__(self):
        _require(_is_real(self.r) and self.r > 0, f"r must be positive (got {self.r})")
        _require(_is_real(self.vprime) and self.vprime >= 0,
                 f"vprime must be nonnegative (got {self.vprime})")
        _require(_is_real(self.vpp), f"vpp must be finite (got {self.vpp})")
        _require(_is_real(self.p) and self.p > 1, f"p must exceed 1 (got {self.p})")


def _radial_mh(pt: RadialPoint):
    """The distinguished eigenvalue m and the repeated eigenvalue h."""
    if pt.vprime == 0.0:
        if pt.p < 2.0:
            raise ConfigError(
                f"vprime is zero with p={pt.p} < 2: the eigenvalues are singular"
            )
        # p = 2: m reduces to vpp; p > 2: the vprime^{p-2} factor vanishes.
        m = pt.vpp if pt.p == 2.0 else 0.0
        return m, 0.0
    m = (pt.p - 1.0) * pt.vprime ** (pt.p - 2.0) * pt.vpp
    h = pt.vprime ** (pt.p - 1.0) / pt.r
    return m, h


def radial_eigs(pt: RadialPoint, n: int) -> tuple:
    """Eigenvalue tuple (m, h, ..., h) of the radial operator in dimension n."""
    _require(isinstance(n, int) and n >= 1, f"n must be a positive integer (got {n})")
    m, h = _radial_mh(pt)
    return (m,) + (h,) * (n - 1)


def radial_eigs_at_zero(vpp0: float, n: int) -> tuple:
    """At the origin a twice-differentiable radial profile is isotropic:
    all n eigenvalues equal v''(0)."""
    _require(isinstance(n, int) and n >= 1, f"n must be a positive integer (got {n})")
    return (vpp0,) * n


def sk_radial(pt: RadialPoint, n: int, k: int):
    """Closed radial form of sigma_k: C(n-1, k-1) h^{k-1} (m + (n-k)/k * h)."""
    _check_order(n, k)
    m, h = _radial_mh(pt)
    return math.comb(n - 1, k - 1) * h ** (k - 1) * (m + (n - k) / k * h)


def pik_radial(pt: RadialPoint, n: int, k: int):
    """Closed radial form of pi_k:
    (k h)^{C(n-1, k)} * (m + (k-1) h)^{C(n-1, k-1)} (integer exponents)."""
    _check_order(n, k)
    m, h = _radial_mh(pt)
    return (k * h) ** math.comb(n - 1, k) * (m + (k - 1) * h) ** math.comb(n - 1, k - 1)


def sk_at_zero(vpp0: float, n: int, k: int):
    """sigma_k at the origin: C(n, k) v''(0)^k."""
    _check_order(n, k)
    return math.comb(n, k) * vpp0**k


def pik_at_zero(vpp0: float, n: int, k: int):
    """pi_k at the origin: (k v''(0))^{C(n, k)}."""
    _check_order(n, k)
    return (k * vpp0) ** math.comb(n, k)


# ----------------------------------------------------------------------
# log-domain normalized operators
# ----------------------------------------------------------------------


def log_sk_normalized(log_m: float, log_h: float, n: int, k: int) -> float:
    """log of sigma_k^{1/k} from log m and log h (both eigenvalues positive).

    Degree-normalising by 1/k makes the value comparable to a forcing term of
    homogeneity one, and the log domain survives exponentially large profiles.
    """
    _check_order(n, k)
    if k == n:
        tail = log_m
    else:
        tail = np.logaddexp(log_m, math.log((n - k) / k) + log_h)
    return (math.log(math.comb(n - 1, k - 1)) + (k - 1) * log_h + tail) / k


def log_pik_normalized(log_m: float, log_h: float, n: int, k: int) -> float:
    """log of pi_k^{1/C(n, k)} from log m and log h (both positive)."""
    _check_order(n, k)
    if k == 1:
        tail = log_m
    else:
        tail = np.logaddexp(log_m, math.log(k - 1) + log_h)
    return (n - k) / n * (math.log(k) + log_h) + k / n * tail
