"""Radial boundary-value problem: L[H] = c, H(a) = alpha, H(b) = beta.

Every radial n-harmonic is lambda * H_kind(k t) for one of the four
principal kinds, so the solver reduces to picking the kind from the ratio
alpha/beta (five cases) and locating k from the ratio equation

    Q(k) = H_kind(k a) / H_kind(k b) = alpha / beta,

whose monotonicity in k follows from the monotonicity of the elasticity
functions.  The minus-kind brackets hug the pole at k b = 1, so the search
runs in x = log|k b - 1| where the pole's blow-up cancels the bracket's
shrinking step and the root is found to full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .geometry import Annulus, check_dimension
from .principal import (
    CharacteristicCondition,
    PrincipalKind,
    StrainSample,
    principal_strain,
)

__all__ = ["RadialMap", "BvpProblem", "q_ratio", "solve_radial_bvp", "fit_annuli"]

# relative half-width of the band around the conformal ratios a/b and b/a
_CONFORMAL_BAND = 1e-12
_BOUNDARY_RTOL = 1e-8


@dataclass(frozen=True)
class RadialMap:
    """Radial stretching H(t) = lam * H_kind(k t) on ``domain``.

    ``hammer_zone`` (with target radius ``hammer_to``) describes an inner
    ring collapsed onto the sphere of radius hammer_to; the smooth part then
    starts at ``domain.inner`` with a vanishing strain derivative, which is
    the C^{1,1} junction of the hammering composites.
    """

    kind: PrincipalKind
    lam: float
    k: float
    domain: Annulus
    hammer_to: float | None = None
    hammer_zone: Annulus | None = None

    def __post_init__(self):
        if self.lam == 0.0:
            raise DomainError("lambda must be nonzero")
        if self.k <= 0.0:
            raise DomainError("k must be positive")
        if (self.hammer_to is None) != (self.hammer_zone is None):
            raise DomainError("hammer_to and hammer_zone must be given together")
        if self.hammer_zone is not None:
            if self.kind is not PrincipalKind.PLUS:
                raise DomainError("hammering composites require the plus kind")
            if not math.isclose(
                self.hammer_zone.outer, self.domain.inner, rel_tol=1e-12
            ):
                raise DomainError("hammer zone must abut the smooth domain")
            if self.hammer_to is not None and self.hammer_to <= 0:
                raise DomainError("hammer_to must be positive")

    def strain(self, t: float, n: int) -> StrainSample:
        """Sample of the (smooth part of the) map at radius t."""
        base = principal_strain(self.kind, self.k * t, n)
        cond = base.cond
        if cond is not None and cond.sign != 0:
            cond = CharacteristicCondition(
                sign=cond.sign,
                u=cond.u,
                one_minus_u_sq=cond.one_minus_u_sq,
                log_scale=cond.log_scale + math.log(abs(self.lam)),
            )
        return StrainSample(
            t=t,
            H=self.lam * base.H,
            Hdot=self.lam * self.k * base.Hdot,
            eta=base.eta,
            cond=cond,
        )

    def char_constant(self, n: int) -> float:
        """Characteristic constant c = |lambda|^n * sign(kind)."""
        check_dimension(n)
        if self.kind in (PrincipalKind.IDENTITY, PrincipalKind.INVERSION):
            return 0.0
        sign = 1.0 if self.kind is PrincipalKind.PLUS else -1.0
        return sign * abs(self.lam) ** n

    def monotone_abs(self, n: int) -> bool:
        """Whether |H| is strictly monotone across the smooth domain."""
        if self.kind in (PrincipalKind.IDENTITY, PrincipalKind.INVERSION):
            return True
        lo, hi = self.k * self.domain.inner, self.k * self.domain.outer
        return lo >= 1.0 or hi <= 1.0

    def image(self, n: int) -> Annulus:
        """Image annulus of the smooth part (requires a monotone |H|)."""
        if not self.monotone_abs(n):
            raise DomainError("strain is not monotone on the domain")
        va = abs(self.strain(self.domain.inner, n).H)
        vb = abs(self.strain(self.domain.outer, n).H)
        lo, hi = min(va, vb), max(va, vb)
        return Annulus(lo, hi)

    def source(self) -> Annulus:
        """Full source annulus, including any hammering zone."""
        if self.hammer_zone is not None:
            return Annulus(self.hammer_zone.inner, self.domain.outer)
        return self.domain


@dataclass(frozen=True)
class BvpProblem:
    a: float
    b: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.a < self.b and math.isfinite(self.b)):
            raise DomainError(f"need 0 < a < b, got ({self.a}, {self.b})")
        if self.alpha == 0.0 and self.beta == 0.0:
            raise DomainError("alpha and beta cannot both vanish")


def q_ratio(kind: PrincipalKind, k: float, a: float, b: float, n: int) -> float:
    """Boundary ratio H_kind(k a) / H_kind(k b)."""
    check_dimension(n)
    if k <= 0 or not 0 < a < b:
        raise DomainError("need k > 0 and 0 < a < b")
    denom = principal_strain(kind, k * b, n).H
    if denom == 0.0:
        raise DomainError(f"pole: H_{kind.value}(k b) = 0 at k = {k}")
    return principal_strain(kind, k * a, n).H / denom


def _bisect_log(f, lo: float, hi: float, what: str) -> float:
    try:
        return brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=300)
    except (ValueError, RuntimeError) as exc:
        raise NumericalError(f"root search failed for {what}: {exc}") from exc


def _solve_plus(a: float, b: float, ratio: float, n: int) -> float:
    # Q(k) = H_+(ka)/H_+(kb) decreases from b/a to a/b on k in (0, inf)
    def f(x: float) -> float:
        k = math.exp(x)
        return q_ratio(PrincipalKind.PLUS, k, a, b, n) - ratio

    x0 = -0.5 * (math.log(a) + math.log(b))
    lo = hi = x0
    flo = fhi = f(x0)
    for _ in range(200):
        if flo > 0:
            break
        lo -= 1.0
        flo = f(lo)
    else:
        raise NumericalError(f"no bracket below for plus-kind ratio {ratio}")
    for _ in range(200):
        if fhi < 0:
            break
        hi += 1.0
        fhi = f(hi)
    else:
        raise NumericalError(f"no bracket above for plus-kind ratio {ratio}")
    if not flo > 0 > fhi:
        raise NumericalError(
            f"plus-kind ratio not monotone as expected near ratio {ratio}"
        )
    return math.exp(_bisect_log(f, lo, hi, "plus-kind boundary ratio"))


def _solve_minus_above(a: float, b: float, ratio: float, n: int) -> float:
    # k b = 1 + e^x; Q increases from -inf (x -> -inf) to a/b (x -> inf)
    def f(x: float) -> float:
        k = (1.0 + math.exp(x)) / b
        return q_ratio(PrincipalKind.MINUS, k, a, b, n) - ratio

    lo, hi = math.log(1e-8), 1.0
    flo, fhi = f(lo), f(hi)
    for _ in range(200):
        if flo < 0:
            break
        lo -= 4.0
        if math.exp(lo) < 1e-15:  # pole offset below float resolution
            raise NumericalError(
                f"boundary ratio {ratio} demands k too close to the pole 1/b"
            )
        flo = f(lo)
    else:
        raise NumericalError(f"no bracket near pole for minus-kind ratio {ratio}")
    for _ in range(200):
        if fhi > 0:
            break
        hi += 1.0
        fhi = f(hi)
    else:
        raise NumericalError(f"no upper bracket for minus-kind ratio {ratio}")
    x = _bisect_log(f, lo, hi, "minus-kind boundary ratio (k > 1/b)")
    return (1.0 + math.exp(x)) / b


def _solve_minus_below(a: float, b: float, ratio: float, n: int) -> float:
    # k b = 1 - e^x, x < 0; Q decreases from +inf (x -> -inf) to b/a (k -> 0)
    def f(x: float) -> float:
        k = (1.0 - math.exp(x)) / b
        return q_ratio(PrincipalKind.MINUS, k, a, b, n) - ratio

    lo, hi = math.log(1e-8), math.log(1.0 - 1e-12)
    flo, fhi = f(lo), f(hi)
    for _ in range(200):
        if flo > 0:
            break
        lo -= 4.0
        if math.exp(lo) < 1e-15:  # pole offset below float resolution
            raise NumericalError(
                f"boundary ratio {ratio} demands k too close to the pole 1/b"
            )
        flo = f(lo)
    else:
        raise NumericalError(f"no bracket near pole for minus-kind ratio {ratio}")
    if not fhi < 0:
        raise NumericalError(f"no bracket toward k = 0 for minus-kind ratio {ratio}")
    x = _bisect_log(f, lo, hi, "minus-kind boundary ratio (k < 1/b)")
    return (1.0 - math.exp(x)) / b


def solve_radial_bvp(p: BvpProblem, n: int) -> tuple[RadialMap, float]:
    """Solve L[H] = c with H(a) = alpha, H(b) = beta.

    Returns the radial map and the characteristic constant c.  The five-way
    case split on alpha/beta against a/b and b/a picks the principal kind;
    the conformal cases are matched inside a relative band of 1e-12 so that
    they never leak into an open-interval root search.

    Conditioning: the sensitivity of k to the boundary ratio grows like
    (k a)^n once k a runs deep into the asymptotic regime (the strains are
    then indistinguishable from linear), so parameter recovery to 1e-8 is
    only meaningful while n * log(k a) stays below roughly 18.  The
    returned map satisfies the boundary contract regardless.
    """
    check_dimension(n)
    a, b, alpha, beta = p.a, p.b, p.alpha, p.beta
    domain = Annulus(a, b)

    if beta == 0.0:
        k = 1.0 / b
        lam = alpha / principal_strain(PrincipalKind.MINUS, a / b, n).H
        return _finish(PrincipalKind.MINUS, lam, k, domain, p, n)
    if alpha == 0.0:
        k = 1.0 / a
        lam = beta / principal_strain(PrincipalKind.MINUS, b / a, n).H
        return _finish(PrincipalKind.MINUS, lam, k, domain, p, n)

    ratio = alpha / beta
    if abs(ratio - a / b) <= _CONFORMAL_BAND * (a / b):
        return _finish(PrincipalKind.IDENTITY, alpha / a, 1.0, domain, p, n)
    if abs(ratio - b / a) <= _CONFORMAL_BAND * (b / a):
        return _finish(PrincipalKind.INVERSION, alpha * a, 1.0, domain, p, n)

    if ratio < a / b:
        kind = PrincipalKind.MINUS
        k = _solve_minus_above(a, b, ratio, n)
    elif ratio < b / a:
        kind = PrincipalKind.PLUS
        k = _solve_plus(a, b, ratio, n)
    else:
        kind = PrincipalKind.MINUS
        k = _solve_minus_below(a, b, ratio, n)
    lam = beta / principal_strain(kind, k * b, n).H
    return _finish(kind, lam, k, domain, p, n)


def _finish(
    kind: PrincipalKind,
    lam: float,
    k: float,
    domain: Annulus,
    p: BvpProblem,
    n: int,
) -> tuple[RadialMap, float]:
    rm = RadialMap(kind=kind, lam=lam, k=k, domain=domain)
    scale = max(abs(p.alpha), abs(p.beta))
    res = max(
        abs(rm.strain(p.a, n).H - p.alpha), abs(rm.strain(p.b, n).H - p.beta)
    )
    if res > _BOUNDARY_RTOL * scale:
        raise NumericalError(
            f"boundary residual {res:.3e} exceeds tolerance for kind {kind.value}",
            residual=res,
        )
    return rm, rm.char_constant(n)


def fit_annuli(source: Annulus, target: Annulus, n: int) -> tuple[RadialMap, float]:
    """Radial n-harmonic sending source.inner -> target.inner, outer -> outer.

    Order-preserving boundary data makes lambda positive.  For contracting
    pairs below the lower Nitsche bound the returned strain is not monotone
    (the plus strain dips inside the domain); such maps exist as radial
    n-harmonics but are not homeomorphisms of the annuli.
    """
    check_dimension(n)
    p = BvpProblem(source.inner, source.outer, target.inner, target.outer)
    return solve_radial_bvp(p, n)
