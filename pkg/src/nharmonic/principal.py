"""The four principal radial strain functions and their special functions.

Radial maps h(x) = H(|x|) x/|x| solve the n-harmonic equation exactly when
the strain H satisfies the first-order conservation law

    L[H] = [H^2 + t^2 Hdot^2 / (n-1)]^((n-2)/2) * (H^2 - t^2 Hdot^2) = const.

All solutions are rescalings lambda * H(k t) of four principal ones:

    identity   H(t) = t        L = 0
    inversion  H(t) = 1/t      L = 0
    plus       L = +1, H(1) = 1   (conformal contraction)
    minus      L = -1, H(1) = 0   (conformal expansion)

The plus/minus strains are generated by a pair of strictly increasing
functions Gamma_{+,-} : (-1, 1) -> (0, inf) and their inverses u(t).
Internally everything is parametrised by sigma = atanh(u), which stays
well-conditioned for t far from 1 where u saturates toward +-1 in floating
point.  Samples carry the well-conditioned complements (1 - u^2 and a log
magnitude) so that the characteristic residual can be evaluated without the
catastrophic cancellation of H^2 - t^2 Hdot^2 near the asymptotic regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .geometry import check_dimension

__all__ = [
    "PrincipalKind",
    "StrainSample",
    "CharacteristicCondition",
    "gamma_plus",
    "gamma_minus",
    "u_plus",
    "u_minus",
    "h_plus",
    "h_minus",
    "log_h_plus",
    "log_h_minus",
    "principal_strain",
    "elasticity",
    "characteristic",
    "asymptote_slope",
]


class PrincipalKind(Enum):
    IDENTITY = "identity"
    INVERSION = "inversion"
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class CharacteristicCondition:
    """Well-conditioned complements attached to strain samples.

    ``sign`` is the sign of the characteristic constant for the generating
    principal solution (+1 plus, -1 minus, 0 conformal).  ``u`` is the
    Gamma-inverse at the sample point, ``one_minus_u_sq`` its stable
    complement sech^2(sigma), and ``log_scale`` is log|lambda * H| for the
    plus branch or log|lambda * H / u| for the minus branch.
    """

    sign: int
    u: float = 0.0
    one_minus_u_sq: float = 1.0
    log_scale: float = 0.0


@dataclass(frozen=True)
class StrainSample:
    """Strain value, derivative and elasticity eta = t Hdot / H at one t."""

    t: float
    H: float
    Hdot: float
    eta: float
    cond: CharacteristicCondition | None = None


def _logcosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def _sech_sq(x: float) -> float:
    e = math.exp(-2.0 * abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def _coef(kind: PrincipalKind, n: int) -> tuple[float, float]:
    # log Gamma(tanh(sigma)) = (2/n) sigma + coef * atan(karg * tanh(sigma))
    root = math.sqrt(n - 1.0)
    if kind is PrincipalKind.PLUS:
        return (2.0 - n) / (n * root), 1.0 / root
    if kind is PrincipalKind.MINUS:
        return (n - 2.0) / (n * root), root
    raise DomainError(f"no generating function for kind {kind}")


def _log_gamma_sigma(kind: PrincipalKind, sigma: float, n: int) -> float:
    coef, karg = _coef(kind, n)
    return 2.0 * sigma / n + coef * math.atan(karg * math.tanh(sigma))


def _solve_sigma(kind: PrincipalKind, log_t: float, n: int) -> float:
    """Solve log Gamma(tanh(sigma)) = log_t for sigma."""
    if log_t == 0.0:
        return 0.0
    if n == 2:
        # both Gammas reduce to sqrt((1+s)/(1-s)), i.e. sigma = log t
        return log_t
    coef, karg = _coef(kind, n)
    bound = abs(coef) * math.pi / 2.0
    lo = 0.5 * n * (log_t - bound) - 1.0
    hi = 0.5 * n * (log_t + bound) + 1.0

    def g(s: float) -> float:
        return 2.0 * s / n + coef * math.atan(karg * math.tanh(s)) - log_t

    try:
        sigma = brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    except (ValueError, RuntimeError) as exc:  # pragma: no cover - guarded bracket
        raise NumericalError(f"inversion of Gamma failed: {exc}") from exc
    # one Newton polish; the derivative is cheap and uniformly positive
    th = math.tanh(sigma)
    gp = 2.0 / n + coef * karg * _sech_sq(sigma) / (1.0 + (karg * th) ** 2)
    sigma -= g(sigma) / gp
    return sigma


def _check_t(t: float) -> float:
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be a positive finite real, got {t}")
    return t


def gamma_plus(s: float, n: int) -> float:
    """Generating function of the plus strain, strictly increasing on (-1, 1)."""
    check_dimension(n)
    if not -1.0 < s < 1.0:
        raise DomainError(f"gamma_plus needs -1 < s < 1, got {s}")
    coef, karg = _coef(PrincipalKind.PLUS, n)
    return math.exp(
        (math.log1p(s) - math.log1p(-s)) / n + coef * math.atan(karg * s)
    )


def gamma_minus(s: float, n: int) -> float:
    """Generating function of the minus strain, strictly increasing on (-1, 1)."""
    check_dimension(n)
    if not -1.0 < s < 1.0:
        raise DomainError(f"gamma_minus needs -1 < s < 1, got {s}")
    coef, karg = _coef(PrincipalKind.MINUS, n)
    return math.exp(
        (math.log1p(s) - math.log1p(-s)) / n + coef * math.atan(karg * s)
    )


def u_plus(t: float, n: int) -> float:
    """Inverse of gamma_plus; equals the elasticity of the plus strain.

    For very large |log t| the exact value is closer to +-1 than the nearest
    representable double, in which case +-1.0 is returned.
    """
    check_dimension(n)
    _check_t(t)
    return math.tanh(_solve_sigma(PrincipalKind.PLUS, math.log(t), n))


def u_minus(t: float, n: int) -> float:
    """Inverse of gamma_minus; satisfies u(1/t) = -u(t)."""
    check_dimension(n)
    _check_t(t)
    return math.tanh(_solve_sigma(PrincipalKind.MINUS, math.log(t), n))


def _plus_sample_from_sigma(log_t: float, sigma: float, n: int) -> StrainSample:
    t = math.exp(log_t)
    u = math.tanh(sigma)
    log_h = ((2.0 - n) / (2.0 * n)) * math.log1p(u * u / (n - 1.0)) + (
        2.0 / n
    ) * _logcosh(sigma)
    H = math.exp(log_h)
    return StrainSample(
        t=t,
        H=H,
        Hdot=u * H / t,
        eta=u,
        cond=CharacteristicCondition(
            sign=1, u=u, one_minus_u_sq=_sech_sq(sigma), log_scale=log_h
        ),
    )


def _minus_sample_from_sigma(log_t: float, sigma: float, n: int) -> StrainSample:
    t = math.exp(log_t)
    u = math.tanh(sigma)
    # A = H / u stays smooth and positive through u = 0
    log_a = ((2.0 - n) / (2.0 * n)) * math.log(u * u + 1.0 / (n - 1.0)) + (
        2.0 / n
    ) * _logcosh(sigma)
    A = math.exp(log_a)
    eta = 1.0 / u if u != 0.0 else math.inf
    return StrainSample(
        t=t,
        H=u * A,
        Hdot=A / t,
        eta=eta,
        cond=CharacteristicCondition(
            sign=-1, u=u, one_minus_u_sq=_sech_sq(sigma), log_scale=log_a
        ),
    )


def h_plus(t: float, n: int) -> StrainSample:
    """Plus principal strain: L[H] = 1, H(1) = 1, symmetric H(1/t) = H(t)."""
    check_dimension(n)
    _check_t(t)
    log_t = math.log(t)
    return _plus_sample_from_sigma(log_t, _solve_sigma(PrincipalKind.PLUS, log_t, n), n)


def h_minus(t: float, n: int) -> StrainSample:
    """Minus principal strain: L[H] = -1, H(1) = 0, H(1/t) = -H(t)."""
    check_dimension(n)
    _check_t(t)
    log_t = math.log(t)
    return _minus_sample_from_sigma(
        log_t, _solve_sigma(PrincipalKind.MINUS, log_t, n), n
    )


def log_h_plus(log_t: float, n: int) -> float:
    """log H_plus(e^{log_t}); safe for arguments far beyond float range."""
    check_dimension(n)
    sigma = _solve_sigma(PrincipalKind.PLUS, log_t, n)
    u = math.tanh(sigma)
    return ((2.0 - n) / (2.0 * n)) * math.log1p(u * u / (n - 1.0)) + (
        2.0 / n
    ) * _logcosh(sigma)


def log_h_minus(log_t: float, n: int) -> float:
    """log H_minus(e^{log_t}) for log_t > 0 (where the strain is positive)."""
    check_dimension(n)
    if log_t <= 0.0:
        raise DomainError("log_h_minus needs log_t > 0 so that H > 0")
    sigma = _solve_sigma(PrincipalKind.MINUS, log_t, n)
    u = math.tanh(sigma)
    log_a = ((2.0 - n) / (2.0 * n)) * math.log(u * u + 1.0 / (n - 1.0)) + (
        2.0 / n
    ) * _logcosh(sigma)
    return math.log(u) + log_a


def principal_strain(kind: PrincipalKind, t: float, n: int) -> StrainSample:
    """Strain sample of any principal solution at t."""
    check_dimension(n)
    _check_t(t)
    if kind is PrincipalKind.IDENTITY:
        return StrainSample(t=t, H=t, Hdot=1.0, eta=1.0, cond=CharacteristicCondition(0))
    if kind is PrincipalKind.INVERSION:
        return StrainSample(
            t=t, H=1.0 / t, Hdot=-1.0 / t**2, eta=-1.0, cond=CharacteristicCondition(0)
        )
    if kind is PrincipalKind.PLUS:
        return h_plus(t, n)
    return h_minus(t, n)


def elasticity(kind: PrincipalKind, t: float, n: int) -> float:
    """Elasticity eta(t) = t Hdot / H of a principal solution.

    For the minus kind eta = 1/u blows up at t = 1; a signed infinity is
    returned there (H = 0 convention), +inf at exactly t = 1.
    """
    check_dimension(n)
    _check_t(t)
    if kind is PrincipalKind.IDENTITY:
        return 1.0
    if kind is PrincipalKind.INVERSION:
        return -1.0
    if kind is PrincipalKind.PLUS:
        return u_plus(t, n)
    u = u_minus(t, n)
    if u == 0.0:
        return math.inf
    return 1.0 / u


def characteristic(sample: StrainSample, n: int) -> float:
    """Characteristic operator L[H] evaluated on one sample.

    Samples produced by this library carry conditioning data and are
    evaluated through logarithms, which keeps the residual near machine
    precision even where H^2 - t^2 Hdot^2 cancels catastrophically.  Foreign
    samples fall back to the direct formula.
    """
    check_dimension(n)
    c = sample.cond
    if c is not None:
        if c.sign == 0:
            return 0.0
        if c.sign > 0:
            expo = (
                n * c.log_scale
                + 0.5 * (n - 2.0) * math.log1p(c.u * c.u / (n - 1.0))
                + math.log(c.one_minus_u_sq)
            )
            return math.exp(expo)
        expo = (
            n * c.log_scale
            + 0.5 * (n - 2.0) * math.log(c.u * c.u + 1.0 / (n - 1.0))
            + math.log(c.one_minus_u_sq)
        )
        return -math.exp(expo)
    H, tHd = sample.H, sample.t * sample.Hdot
    return (H * H + tHd * tHd / (n - 1.0)) ** ((n - 2.0) / 2.0) * (H * H - tHd * tHd)


def asymptote_slope(kind: PrincipalKind, n: int) -> float:
    """Slope Theta of the asymptote H(t) ~ Theta t at infinity (plus/minus)."""
    check_dimension(n)
    if kind not in (PrincipalKind.PLUS, PrincipalKind.MINUS):
        raise DomainError("asymptote slope exists only for the plus/minus kinds")
    root = math.sqrt(n - 1.0)
    prefactor = (1.0 - 1.0 / n) ** ((n - 2.0) / (2.0 * n)) * 4.0 ** (-1.0 / n)
    d = (n - 2.0) / (n * root)
    if kind is PrincipalKind.PLUS:
        return prefactor * math.exp(d * math.atan(1.0 / root))
    return prefactor * math.exp(-d * math.atan(root))
