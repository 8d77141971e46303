"""Energy evaluation and minimizer construction for annulus deformations.

For a radial map h(x) = H(|x|) x/|x| the energies reduce to line integrals
in s = log t, where the integrands are smooth and the dt/t measure is
natural:

    E_h = omega * int [ (t Hdot)^2 + (n-1) H^2 ]^{n/2} ds
    F_h = omega * int [ eta^2 + n-1 ]^{n/2} ds,   eta = t Hdot / H.

The minimizer of E over a pair of annuli is dispatched on the pair's
regime: a conformal map, a rescaled plus/minus principal strain, or (below
the lower Nitsche bound) a hammering composite whose inner ring collapses
onto the target's inner sphere.  In the plane everything has closed forms
through the quadratic-profile family h(z) = (1/2)(s z + w / (s conj(z))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import lagrangian
from .bvp import RadialMap, fit_annuli
from .errors import DomainError, NumericalError, PreconditionError
from .functionals import Functional
from .geometry import Annulus, Modulus, check_dimension, modulus, sphere_area, volume
from .nitsche import PairClassification, Regime, alpha_n, classify
from .principal import PrincipalKind, StrainSample, log_h_plus

__all__ = [
    "Branch",
    "CoefficientPair",
    "ConformalSpec",
    "EnergyReport",
    "FMinimalityReport",
    "FStatus",
    "MinimizerPlan",
    "PlanStatus",
    "PlanarNitscheSpec",
    "QcBoundsCheck",
    "StrainProfile",
    "coefficient_pair",
    "contracting_bound_energy",
    "distortion_integral_check",
    "eta_of_tau",
    "expanding_bound_energy",
    "f_minimality_status",
    "minimal_energy",
    "operator_norm_lower_bound",
    "planar_minimal_energy",
    "power_stretch",
    "power_stretch_dilatations",
    "qc_bounds",
    "radial_energy",
]

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-10
# the bound-formula route stacks root finding under the integral sign
_CROSS_CHECK_RTOL = 1e-6


class Branch(Enum):
    EXPANDING = "expanding"
    CONTRACTING = "contracting"


class PlanStatus(Enum):
    PROVEN_MINIMAL = "proven-minimal"
    RADIAL_UNPROVEN = "radial-unproven"


class FStatus(Enum):
    PROVEN_MINIMAL = "proven-minimal"
    INDETERMINATE = "indeterminate"
    NOT_POWER_STRETCHING = "not-power-stretching"


@dataclass(frozen=True)
class EnergyReport:
    value: float
    functional: Functional
    formula_id: str
    quad_error: float
    moduli: tuple[Modulus, Modulus]  # (source, image)


@dataclass(frozen=True)
class ConformalSpec:
    """Conformal map scale * x (or scale * x / |x|^2 when inverted)."""

    scale: float
    inverted: bool = False


@dataclass(frozen=True)
class PlanarNitscheSpec:
    """Planar profile h(z) = (1/2)(rescale z + omega / (rescale conj(z)))."""

    omega: float
    rescale: float


@dataclass(frozen=True)
class MinimizerPlan:
    map: RadialMap | ConformalSpec
    energy: EnergyReport
    status: PlanStatus
    regime: Regime
    witness: "lagrangian.NonRadialWitness | None" = None
    planar: PlanarNitscheSpec | None = None


@dataclass(frozen=True)
class CoefficientPair:
    """Sharp coefficients of [X^2+(n-1)Y^2]^{n/2} >= a X^n + b X Y^{n-1} (expanding)
    and >= a Y^n + b X Y^{n-1} (contracting); equality exactly at X = alpha Y."""

    a: float
    b: float
    alpha: float
    branch: Branch


@dataclass(frozen=True)
class QcBoundsCheck:
    ratio_power: float  # (Mod target / Mod source)^{n-1}
    lower_ok: bool
    upper_ok: bool
    lower_margin: float  # ratio_power - 1/K_I
    upper_margin: float  # K_O - ratio_power


@dataclass(frozen=True)
class FMinimalityReport:
    status: FStatus
    alpha: float
    witness: "lagrangian.NonRadialWitness | None" = None


@dataclass(frozen=True)
class StrainProfile:
    """User-supplied radial strain: fn(t) -> (H, Hdot) on ``domain``."""

    domain: Annulus
    fn: Callable[[float], tuple[float, float]]

    def strain(self, t: float, n: int) -> StrainSample:
        H, Hdot = self.fn(t)
        eta = t * Hdot / H if H != 0.0 else math.copysign(math.inf, Hdot)
        return StrainSample(t=t, H=H, Hdot=Hdot, eta=eta)


def power_stretch(alpha: float, lam: float, domain: Annulus) -> StrainProfile:
    """Strain H(t) = lam * t^alpha of the power stretching."""
    if alpha <= 0.0 or lam <= 0.0:
        raise DomainError("power stretching needs alpha > 0 and lam > 0")

    def fn(t: float) -> tuple[float, float]:
        H = lam * t**alpha
        return H, alpha * H / t

    return StrainProfile(domain=domain, fn=fn)


def power_stretch_for(source: Annulus, target: Annulus, n: int) -> StrainProfile:
    """The power stretching taking source onto target."""
    alpha = modulus(target, n).value / modulus(source, n).value
    lam = target.inner * source.inner ** (-alpha)
    return power_stretch(alpha, lam, source)


def _check_strain(map_, n: int, functional: Functional) -> list[StrainSample]:
    dom = map_.domain
    ts = np.exp(np.linspace(math.log(dom.inner), math.log(dom.outer), 65))
    samples = [map_.strain(float(t), n) for t in ts]
    scale = max(abs(s.H) for s in samples)
    signs = {
        math.copysign(1.0, s.Hdot)
        for s in samples
        if abs(s.t * s.Hdot) > 1e-12 * scale
    }
    if len(signs) > 1:
        raise DomainError("strain derivative changes sign on the domain")
    if functional in (Functional.WEIGHTED, Functional.OPERATOR_NORM):
        if min(abs(s.H) for s in samples) == 0.0:
            raise DomainError("weighted energies require a nonvanishing strain")
    return samples


def _image_modulus(samples: list[StrainSample], n: int) -> Modulus:
    lo = abs(samples[0].H)
    hi = abs(samples[-1].H)
    lo, hi = min(lo, hi), max(lo, hi)
    if lo == 0.0:
        return Modulus(value=math.inf, log_ratio=math.inf)
    return Modulus.from_log_ratio(math.log(hi / lo), n)


def radial_energy(
    map_,
    n: int,
    functional: Functional = Functional.CONFORMAL,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> EnergyReport:
    """Adaptive quadrature of an energy functional over a radial map.

    Accepts a RadialMap or any object with ``domain`` and ``strain(t, n)``
    (power stretchings and user profiles).  Hammering zones contribute their
    closed-form energy exactly; the junction is a mandatory breakpoint since
    the integrand has a kink there.
    """
    check_dimension(n)
    samples = _check_strain(map_, n, functional)
    omega = sphere_area(n)
    half_n = n / 2.0

    if functional is Functional.CONFORMAL:

        def integrand(s: float) -> float:
            smp = map_.strain(math.exp(s), n)
            radial = smp.t * smp.Hdot
            return (radial * radial + (n - 1.0) * smp.H * smp.H) ** half_n

    elif functional is Functional.WEIGHTED:

        def integrand(s: float) -> float:
            smp = map_.strain(math.exp(s), n)
            eta = smp.t * smp.Hdot / smp.H
            return (eta * eta + n - 1.0) ** half_n

    else:

        def integrand(s: float) -> float:
            smp = map_.strain(math.exp(s), n)
            eta = abs(smp.t * smp.Hdot / smp.H)
            return max(eta, 1.0) ** n

    lo = math.log(map_.domain.inner)
    hi = math.log(map_.domain.outer)
    result = quad(
        integrand, lo, hi, epsabs=atol / omega, epsrel=rtol, limit=200, full_output=1
    )
    if len(result) > 3:
        raise NumericalError(f"energy quadrature did not converge: {result[3]}")
    val, err = result[0], result[1]
    value = omega * val
    quad_error = omega * err
    formula_id = f"quad-log-{functional.value}"

    hammer_zone = getattr(map_, "hammer_zone", None)
    source = map_.domain
    image = _image_modulus(samples, n)
    if hammer_zone is not None:
        zone_mod = modulus(hammer_zone, n).value
        prefactor = (n - 1.0) ** half_n
        if functional is Functional.CONFORMAL:
            value += prefactor * map_.hammer_to**n * zone_mod
        elif functional is Functional.WEIGHTED:
            value += prefactor * zone_mod
        else:
            value += zone_mod
        formula_id = "hammering+" + formula_id
        source = Annulus(hammer_zone.inner, map_.domain.outer)
        outer_image = max(abs(samples[0].H), abs(samples[-1].H))
        image = Modulus.from_log_ratio(
            math.log(outer_image / map_.hammer_to), n
        )
    if quad_error > max(atol, rtol * abs(value)):
        raise NumericalError(
            f"quadrature error {quad_error:.3e} above requested tolerance",
            residual=quad_error,
        )
    return EnergyReport(
        value=value,
        functional=functional,
        formula_id=formula_id,
        quad_error=quad_error,
        moduli=(modulus(source, n), image),
    )


def coefficient_pair(alpha: float, n: int, branch: Branch) -> CoefficientPair:
    """Sharp lower-bound coefficients a(alpha), b(alpha) per branch."""
    check_dimension(n)
    base = (alpha * alpha + n - 1.0) ** ((n - 2.0) / 2.0)
    if branch is Branch.EXPANDING:
        an = alpha_n(n)
        if not 1.0 <= alpha <= an * (1.0 + 1e-9):
            raise DomainError(
                f"expanding branch needs 1 <= alpha <= alpha_n = {an}, got {alpha}"
            )
        a = base * (alpha * alpha - 1.0) / alpha**n
        b = n * base / alpha
    else:
        if not 0.0 <= alpha <= 1.0:
            raise DomainError(f"contracting branch needs 0 <= alpha <= 1, got {alpha}")
        a = (n - 1.0) * base * (1.0 - alpha * alpha)
        b = n * alpha * base
    return CoefficientPair(a=a, b=b, alpha=alpha, branch=branch)


def eta_of_tau(tau: float, c_or_q: float, n: int, branch: Branch) -> float:
    """Elasticity profile along the target radius, defined implicitly.

    Contracting: the unique eta in [0, 1] with
    (1 + eta^2/(n-1))^{(n-2)/2} (1 - eta^2) = c / tau^n.  Expanding: the
    unique eta > 1 with (n-1 + eta^2)^{(n-2)/2} (eta^2 - 1) = q / tau^n.
    """
    check_dimension(n)
    if tau <= 0.0:
        raise DomainError("tau must be positive")
    rhs = c_or_q / tau**n
    if branch is Branch.CONTRACTING:
        if c_or_q <= 0.0:
            raise DomainError("contracting branch needs c > 0")
        if rhs > 1.0 + 1e-12:
            raise DomainError(f"no solution in [0, 1]: c/tau^n = {rhs} > 1")
        if rhs >= 1.0:
            return 0.0

        def f(eta: float) -> float:
            return (1.0 + eta * eta / (n - 1.0)) ** ((n - 2.0) / 2.0) * (
                1.0 - eta * eta
            ) - rhs

        return brentq(f, 0.0, 1.0, xtol=1e-15, rtol=8.9e-16)
    if c_or_q <= 0.0:
        raise DomainError("expanding branch needs q > 0")

    def g(eta: float) -> float:
        return (n - 1.0 + eta * eta) ** ((n - 2.0) / 2.0) * (eta * eta - 1.0) - rhs

    hi = 2.0
    for _ in range(200):
        if g(hi) > 0.0:
            break
        hi *= 2.0
    else:  # pragma: no cover
        raise NumericalError("eta bracket expansion failed")
    return brentq(g, 1.0, hi, xtol=1e-15, rtol=8.9e-16)


def contracting_bound_energy(
    c: float, source: Annulus, target: Annulus, n: int
) -> float:
    """Sharp lower bound route for contracting pairs:
    (n-1)^{n/2} c Mod(source) + omega * int tau^{n-1} b(eta(tau)) dtau."""
    check_dimension(n)
    omega = sphere_area(n)

    def integrand(tau: float) -> float:
        eta = eta_of_tau(tau, c, n, Branch.CONTRACTING)
        return tau ** (n - 1) * coefficient_pair(eta, n, Branch.CONTRACTING).b

    integral, _ = quad(
        integrand, target.inner, target.outer, epsabs=1e-12, epsrel=1e-10, limit=200
    )
    return (n - 1.0) ** (n / 2.0) * c * modulus(source, n).value + omega * integral


def expanding_bound_energy(
    q: float, source: Annulus, target: Annulus, n: int
) -> float:
    """Sharp lower bound route for expanding pairs:
    q Mod(source) + omega * int tau^{n-1} b(eta(tau)) dtau."""
    check_dimension(n)
    omega = sphere_area(n)

    def integrand(tau: float) -> float:
        eta = eta_of_tau(tau, q, n, Branch.EXPANDING)
        return tau ** (n - 1) * coefficient_pair(eta, n, Branch.EXPANDING).b

    integral, _ = quad(
        integrand, target.inner, target.outer, epsabs=1e-12, epsrel=1e-10, limit=200
    )
    return q * modulus(source, n).value + omega * integral


def _conformal_plan(
    source: Annulus, target: Annulus, n: int, cls: PairClassification
) -> MinimizerPlan:
    report = EnergyReport(
        value=n ** (n / 2.0) * volume(target, n),
        functional=Functional.CONFORMAL,
        formula_id="conformal-volume",
        quad_error=0.0,
        moduli=(cls.mod_source, cls.mod_target),
    )
    return MinimizerPlan(
        map=ConformalSpec(scale=target.inner / source.inner),
        energy=report,
        status=PlanStatus.PROVEN_MINIMAL,
        regime=cls.regime,
    )


def _hammering_plan(
    source: Annulus,
    target: Annulus,
    n: int,
    cls: PairClassification,
    rtol: float,
    atol: float,
) -> MinimizerPlan:
    # critical Nitsche configuration: inner radius rho with
    # H_plus(R / rho) = R* / r*, hammering A(r, rho) onto the sphere r*
    ratio_target = math.log(target.ratio)

    def f(x: float) -> float:
        return log_h_plus(x, n) - ratio_target

    x = brentq(f, 0.0, math.log(source.ratio), xtol=1e-15, rtol=8.9e-16)
    rho = source.outer / math.exp(x)
    if not source.inner < rho < source.outer:
        raise NumericalError(f"hammering radius {rho} escaped the annulus")
    rm = RadialMap(
        kind=PrincipalKind.PLUS,
        lam=target.inner,
        k=1.0 / rho,
        domain=Annulus(rho, source.outer),
        hammer_to=target.inner,
        hammer_zone=Annulus(source.inner, rho),
    )
    report = radial_energy(rm, n, Functional.CONFORMAL, rtol=rtol, atol=atol)
    # the sharp-bound route extends across the hammered zone with c = r*^n
    bound = contracting_bound_energy(target.inner**n, source, target, n)
    _require_agreement(report.value, bound, "hammering lower-bound route")
    return MinimizerPlan(
        map=rm,
        energy=report,
        status=PlanStatus.PROVEN_MINIMAL,
        regime=cls.regime,
    )


def minimal_energy(
    source: Annulus,
    target: Annulus,
    n: int,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> MinimizerPlan:
    """Construct the minimal-energy deformation plan for a pair of annuli.

    Contracting/expanding pairs within the Nitsche bounds yield radial
    strains whose quadrature energy is cross-checked against the sharp
    lower-bound route (coefficient inequality plus free-Lagrangian
    integrals); disagreement raises NumericalError.  Above the upper bound
    (n >= 4) the radial map is returned with status RADIAL_UNPROVEN and,
    when the counterexample hypotheses hold, a non-radial witness.
    """
    check_dimension(n)
    cls = classify(source, target, n)
    if n == 2:
        return _planar_plan(source, target, cls)

    if cls.regime is Regime.CONFORMAL:
        return _conformal_plan(source, target, n, cls)

    if cls.regime is Regime.CONTRACTING_BELOW:
        return _hammering_plan(source, target, n, cls, rtol, atol)

    rm, c = fit_annuli(source, target, n)
    report = radial_energy(rm, n, Functional.CONFORMAL, rtol=rtol, atol=atol)

    if cls.regime is Regime.CONTRACTING_WITHIN:
        bound = contracting_bound_energy(c, source, target, n)
        _require_agreement(report.value, bound, "contracting lower-bound route")
        return MinimizerPlan(
            map=rm,
            energy=report,
            status=PlanStatus.PROVEN_MINIMAL,
            regime=cls.regime,
        )

    if cls.regime is Regime.EXPANDING_WITHIN:
        eta_inner = abs(rm.strain(source.inner, n).eta)
        if eta_inner > alpha_n(n) * (1.0 + 1e-8):
            raise NumericalError(
                f"within-bounds pair has elasticity {eta_inner} above alpha_n"
            )
        q = -((n - 1.0) ** ((n - 2.0) / 2.0)) * c
        bound = expanding_bound_energy(q, source, target, n)
        _require_agreement(report.value, bound, "expanding lower-bound route")
        return MinimizerPlan(
            map=rm,
            energy=report,
            status=PlanStatus.PROVEN_MINIMAL,
            regime=cls.regime,
        )

    if n < 4:  # unreachable: the upper bound is infinite in dimensions 2, 3
        raise NumericalError("expanding-above regime cannot occur for n < 4")
    witness = None
    try:
        witness = lagrangian.nonradial_witness(source, target, n, Functional.CONFORMAL)
    except PreconditionError:
        pass
    return MinimizerPlan(
        map=rm,
        energy=report,
        status=PlanStatus.RADIAL_UNPROVEN,
        regime=cls.regime,
        witness=witness,
    )


def _require_agreement(value: float, bound: float, label: str) -> None:
    if abs(value - bound) > _CROSS_CHECK_RTOL * max(abs(value), abs(bound)):
        raise NumericalError(
            f"{label} disagrees with quadrature: {bound} vs {value}",
            residual=abs(value - bound),
        )


def _planar_energy_closed_form(
    target: Annulus, omega_param: float
) -> float:
    rs, Rs = target.inner, target.outer
    return 2.0 * math.pi * (
        Rs * math.sqrt(Rs * Rs - omega_param) - rs * math.sqrt(rs * rs - omega_param)
    )


def planar_minimal_energy(
    source: Annulus, target: Annulus
) -> tuple[PlanarNitscheSpec, EnergyReport]:
    """Planar (n = 2) minimal energies in closed form.

    Within the Nitsche bound the minimizer is h(z) = (1/2)(s z + w/(s conj z))
    with w <= r*^2 solving the boundary fit; below the bound the composite
    hammers A(r, sigma) onto the inner circle and w = r*^2.
    """
    ms = modulus(source, 2)
    mt = modulus(target, 2)
    rs, Rs = target.inner, target.outer
    rho = source.ratio
    rho_crit = target.ratio + math.sqrt(target.ratio**2 - 1.0)

    if abs(rho - target.ratio) <= 1e-12 * rho:
        # conformal pair: w = 0 exactly
        spec = PlanarNitscheSpec(omega=0.0, rescale=2.0 * rs / source.inner)
        report = EnergyReport(
            value=2.0 * math.pi * (Rs * Rs - rs * rs),
            functional=Functional.CONFORMAL,
            formula_id="planar-conformal",
            quad_error=0.0,
            moduli=(ms, mt),
        )
        return spec, report

    if rho <= rho_crit * (1.0 + 1e-10):
        # within the bounds (expanding pairs give w < 0, contracting 0 < w <= r*^2)
        def f(B: float) -> float:
            return (Rs + math.sqrt(Rs * Rs - rs * rs + B * B)) / (rs + B) - rho

        hi = max(rs, Rs)
        for _ in range(200):
            if f(hi) < 0.0:
                break
            hi *= 2.0
        else:  # pragma: no cover
            raise NumericalError("planar profile bracket expansion failed")
        B = brentq(f, 0.0, hi, xtol=1e-15, rtol=8.9e-16)
        w = rs * rs - B * B
        spec = PlanarNitscheSpec(omega=w, rescale=(rs + B) / source.inner)
        report = EnergyReport(
            value=_planar_energy_closed_form(target, w),
            functional=Functional.CONFORMAL,
            formula_id="planar-nitsche",
            quad_error=0.0,
            moduli=(ms, mt),
        )
        return spec, report

    # below the bound: hammering composite
    sigma = source.outer / rho_crit
    if not source.inner < sigma < source.outer:
        raise NumericalError(f"hammering radius {sigma} escaped the annulus")
    spec = PlanarNitscheSpec(omega=rs * rs, rescale=rs / sigma)
    value = 2.0 * math.pi * Rs * math.sqrt(Rs * Rs - rs * rs) + (
        2.0 * math.pi * rs * rs * math.log(sigma / source.inner)
    )
    report = EnergyReport(
        value=value,
        functional=Functional.CONFORMAL,
        formula_id="planar-hammering",
        quad_error=0.0,
        moduli=(ms, mt),
    )
    return spec, report


def _planar_plan(
    source: Annulus, target: Annulus, cls: PairClassification
) -> MinimizerPlan:
    spec, report = planar_minimal_energy(source, target)
    w, s = spec.omega, spec.rescale
    map_: RadialMap | ConformalSpec
    if cls.regime is Regime.CONFORMAL:
        map_ = ConformalSpec(scale=target.inner / source.inner)
    elif cls.regime is Regime.CONTRACTING_BELOW:
        sigma = target.inner / s
        map_ = RadialMap(
            kind=PrincipalKind.PLUS,
            lam=target.inner,
            k=1.0 / sigma,
            domain=Annulus(sigma, source.outer),
            hammer_to=target.inner,
            hammer_zone=Annulus(source.inner, sigma),
        )
    elif w > 0.0:
        map_ = RadialMap(
            kind=PrincipalKind.PLUS, lam=math.sqrt(w), k=s / math.sqrt(w), domain=source
        )
    else:
        map_ = RadialMap(
            kind=PrincipalKind.MINUS,
            lam=math.sqrt(-w),
            k=s / math.sqrt(-w),
            domain=source,
        )
    return MinimizerPlan(
        map=map_,
        energy=report,
        status=PlanStatus.PROVEN_MINIMAL,
        regime=cls.regime,
        planar=spec,
    )


def operator_norm_lower_bound(
    source: Annulus, target: Annulus, n: int
) -> EnergyReport:
    """Sharp operator-norm bound max{1, alpha^n} Mod(source)."""
    check_dimension(n)
    ms = modulus(source, n)
    mt = modulus(target, n)
    alpha = mt.value / ms.value
    return EnergyReport(
        value=max(1.0, alpha**n) * ms.value,
        functional=Functional.OPERATOR_NORM,
        formula_id="max{1,alpha^n}-mod",
        quad_error=0.0,
        moduli=(ms, mt),
    )


def f_minimality_status(source: Annulus, target: Annulus, n: int) -> FMinimalityReport:
    """Whether the power stretching provably minimizes the weighted energy."""
    check_dimension(n)
    alpha = modulus(target, n).value / modulus(source, n).value
    if n <= 3 or alpha < alpha_n(n):
        return FMinimalityReport(status=FStatus.PROVEN_MINIMAL, alpha=alpha)
    threshold = math.sqrt((n - 1.0) / (n - 3.0))
    if alpha >= threshold:
        witness = None
        try:
            witness = lagrangian.nonradial_witness(
                source, target, n, Functional.WEIGHTED
            )
        except PreconditionError:
            pass
        return FMinimalityReport(
            status=FStatus.NOT_POWER_STRETCHING, alpha=alpha, witness=witness
        )
    return FMinimalityReport(status=FStatus.INDETERMINATE, alpha=alpha)


def distortion_integral_check(map_, n: int) -> tuple[float, float]:
    """Relative residuals of the inner-distortion identities.

    For the inverse f of the radial map, both sides of

        n^{n/2} int K_I(y, f) dy            = E_h
        n^{n/2} int K_I(y, f) / |y|^n dy    = F_h

    are evaluated by independent one-dimensional quadratures: the left sides
    integrate over the image radius, recovering the inverse strain at every
    node by root finding.
    """
    check_dimension(n)
    samples = _check_strain(map_, n, Functional.WEIGHTED)
    if samples[0].Hdot <= 0.0 or samples[0].H <= 0.0:
        raise DomainError(
            "distortion identities need an orientation-preserving homeomorphism"
        )
    dom = map_.domain
    omega = sphere_area(n)
    r_img = map_.strain(dom.inner, n).H
    R_img = map_.strain(dom.outer, n).H

    def inverse_strain(tau: float) -> tuple[float, float]:
        t = brentq(
            lambda tt: map_.strain(tt, n).H - tau,
            dom.inner,
            dom.outer,
            xtol=1e-15,
            rtol=8.9e-16,
        )
        return t, 1.0 / map_.strain(t, n).Hdot

    def k_inner(tau: float) -> float:
        G, Gdot = inverse_strain(tau)
        ratio = G / tau
        num = (ratio * ratio + (n - 1.0) * Gdot * Gdot) ** (n / 2.0)
        return num / (n ** (n / 2.0) * Gdot ** (n - 1) * ratio)

    lhs49, _ = quad(
        lambda tau: tau ** (n - 1) * k_inner(tau), r_img, R_img,
        epsabs=1e-12, epsrel=1e-10, limit=200,
    )
    lhs49 *= n ** (n / 2.0) * omega
    rhs49 = radial_energy(map_, n, Functional.CONFORMAL).value

    lhs51, _ = quad(
        lambda tau: k_inner(tau) / tau, r_img, R_img,
        epsabs=1e-12, epsrel=1e-10, limit=200,
    )
    lhs51 *= n ** (n / 2.0) * omega
    rhs51 = radial_energy(map_, n, Functional.WEIGHTED).value

    return abs(lhs49 - rhs49) / abs(rhs49), abs(lhs51 - rhs51) / abs(rhs51)


def power_stretch_dilatations(alpha: float, n: int) -> tuple[float, float]:
    """Outer and inner dilatations (K_O, K_I) of the power stretching."""
    check_dimension(n)
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    return (
        max(1.0 / alpha, alpha ** (n - 1)),
        max(alpha ** (1 - n), alpha),
    )


def qc_bounds(
    source: Annulus, target: Annulus, n: int, k_outer: float, k_inner: float
) -> QcBoundsCheck:
    """Check 1/K_I <= (Mod target / Mod source)^{n-1} <= K_O with margins."""
    check_dimension(n)
    if k_outer < 1.0 or k_inner < 1.0:
        raise DomainError("dilatations must be >= 1")
    ratio = modulus(target, n).value / modulus(source, n).value
    ratio_power = ratio ** (n - 1)
    lower_margin = ratio_power - 1.0 / k_inner
    upper_margin = k_outer - ratio_power
    return QcBoundsCheck(
        ratio_power=ratio_power,
        lower_ok=lower_margin >= 0.0,
        upper_ok=upper_margin >= 0.0,
        lower_margin=lower_margin,
        upper_margin=upper_margin,
    )
