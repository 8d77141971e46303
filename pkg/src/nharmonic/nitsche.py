"""Critical dimensional constants and the Nitsche bounds.

For a pair of annuli the existence (and shape) of an energy-minimal radial
deformation is governed by two moduli thresholds:

    lower:  N_low(t)  = omega * log H_plus(exp(t / omega))        (all n)
    upper:  N_up(t)   = omega * [log H_minus(gamma_n exp(t/omega))
                                 - log H_minus(gamma_n)]          (n >= 4)

with N_up = +inf for n = 2, 3.  The constant alpha_n is the unique root in
(1, sqrt((n-1)/(n-3))) of (a^2 + n - 1)^((n-2)/2) (a^2 - 1) = a^n, and
gamma_n = Gamma_minus(1 / alpha_n).  delta_n governs the non-radial
counterexamples for the conformal energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .geometry import Annulus, Modulus, check_dimension, modulus
from .principal import gamma_minus, log_h_minus, log_h_plus

__all__ = [
    "NitscheConstants",
    "Regime",
    "PairClassification",
    "alpha_n",
    "gamma_n",
    "delta_n",
    "nitsche_constants",
    "lower_nitsche",
    "upper_nitsche",
    "classify",
]

# exactly-critical pairs count as "within"; see classify()
_BOUNDARY_RTOL = 1e-10
_CONFORMAL_RTOL = 1e-12


@dataclass(frozen=True)
class NitscheConstants:
    alpha_n: float
    gamma_n: float
    delta_n: float | None  # defined only for n >= 4


class Regime(Enum):
    CONFORMAL = "conformal"
    CONTRACTING_WITHIN = "contracting-within"
    CONTRACTING_BELOW = "contracting-below"
    EXPANDING_WITHIN = "expanding-within"
    EXPANDING_ABOVE = "expanding-above"


@dataclass(frozen=True)
class PairClassification:
    regime: Regime
    mod_source: Modulus
    mod_target: Modulus
    alpha_ratio: float


@lru_cache(maxsize=None)
def alpha_n(n: int) -> float:
    """Critical exponent ratio; infinite in dimensions 2 and 3."""
    check_dimension(n)
    if n <= 3:
        return math.inf

    def f(a: float) -> float:
        return (a * a + n - 1.0) ** ((n - 2.0) / 2.0) * (a * a - 1.0) - a**n

    hi = math.sqrt((n - 1.0) / (n - 3.0))
    # f(1) = -1 and f(hi) > 0, so the root is bracketed
    try:
        return brentq(f, 1.0, hi, xtol=1e-15, rtol=8.9e-16)
    except ValueError as exc:  # pragma: no cover
        raise NumericalError(f"alpha_n bracket failed for n={n}: {exc}") from exc


@lru_cache(maxsize=None)
def gamma_n(n: int) -> float:
    """gamma_n = Gamma_minus(1 / alpha_n); equals 1 in dimensions 2 and 3."""
    check_dimension(n)
    if n <= 3:
        return 1.0
    return gamma_minus(1.0 / alpha_n(n), n)


@lru_cache(maxsize=None)
def delta_n(n: int) -> float:
    """Ring-width threshold of the conformal-energy counterexamples, n >= 4."""
    check_dimension(n)
    if n < 4:
        raise DomainError(f"delta_n is defined for n >= 4, got n={n}")
    rp, rm = math.sqrt(n - 1.0), math.sqrt(n - 3.0)
    return math.sqrt((rp + rm) / (rp - rm)) * math.exp(
        (n - 2.0) / (n * rp) * math.atan(rm)
    )


def nitsche_constants(n: int) -> NitscheConstants:
    check_dimension(n)
    return NitscheConstants(
        alpha_n=alpha_n(n),
        gamma_n=gamma_n(n),
        delta_n=delta_n(n) if n >= 4 else None,
    )


def lower_nitsche(mod_a: Modulus, n: int) -> Modulus:
    """Lower Nitsche function applied to an absolute modulus."""
    check_dimension(n)
    out_log = log_h_plus(mod_a.log_ratio, n)
    return Modulus.from_log_ratio(out_log, n)


def upper_nitsche(mod_a: Modulus, n: int) -> Modulus:
    """Upper Nitsche function; infinite in dimensions 2 and 3.

    Evaluated through log H_minus differences so large moduli cannot
    overflow.
    """
    check_dimension(n)
    if n <= 3:
        return Modulus(value=math.inf, log_ratio=math.inf)
    if mod_a.log_ratio == 0.0:
        return Modulus.from_log_ratio(0.0, n)
    g = gamma_n(n)
    out_log = log_h_minus(math.log(g) + mod_a.log_ratio, n) - log_h_minus(
        math.log(g), n
    )
    return Modulus.from_log_ratio(out_log, n)


def classify(source: Annulus, target: Annulus, n: int) -> PairClassification:
    """Sort a pair of annuli into the five moduli regimes.

    Pairs exactly on a Nitsche bound (within a relative band of 1e-10)
    classify as Within: the critical map exists there, merely degenerating
    on the boundary sphere.
    """
    check_dimension(n)
    ms = modulus(source, n)
    mt = modulus(target, n)
    ratio = mt.value / ms.value

    if abs(mt.log_ratio - ms.log_ratio) <= _CONFORMAL_RTOL * ms.log_ratio:
        regime = Regime.CONFORMAL
    elif mt.value < ms.value:
        lb = lower_nitsche(ms, n)
        if mt.value >= lb.value * (1.0 - _BOUNDARY_RTOL):
            regime = Regime.CONTRACTING_WITHIN
        else:
            regime = Regime.CONTRACTING_BELOW
    else:
        ub = upper_nitsche(ms, n)
        if math.isinf(ub.value) or mt.value <= ub.value * (1.0 + _BOUNDARY_RTOL):
            regime = Regime.EXPANDING_WITHIN
        else:
            regime = Regime.EXPANDING_ABOVE
    return PairClassification(
        regime=regime, mod_source=ms, mod_target=mt, alpha_ratio=ratio
    )
