"""Free-Lagrangian identities, the spherical homothety, and non-radial witnesses.

Three integrals of nonlinear differential forms are invariant across all
(order-preserving) deformations between a fixed pair of annuli:

    (i)   integral of Phi(|h|) J(x,h) dx      = omega * int tau^{n-1} Phi
    (ii)  integral of d|h| ^ *dt / (|h| t^{n-1}) = Mod(target)
    (iii) integral of dt/t ^ h#omega          = Mod(source)

For radial maps all three reduce to one-dimensional quadratures, which is
how they are verified here.  The spherical homothety Phi^lambda (conjugate
of x -> lambda x under stereographic projection) is the conformal
non-isometry of the sphere that defeats radial symmetry in dimensions
n >= 4; it is longitude-preserving, so all of its sphere integrals reduce
to meridian integrals with weight sin^{n-2}(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .bvp import RadialMap, fit_annuli
from .errors import DomainError, PreconditionError
from .functionals import Functional
from .geometry import Annulus, check_dimension, modulus, sphere_area
from .nitsche import alpha_n, delta_n
from .principal import h_minus

__all__ = [
    "MeridianSample",
    "SphericalHomothety",
    "TwoPointVariable",
    "NonRadialWitness",
    "homothety_profile",
    "homothety_jacobian_mean",
    "sphere_energy_T",
    "verify_free_lagrangians",
    "free_lagrangian_estimates",
    "random_variable_energy",
    "nonradial_witness",
]

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-11, limit=200)
# fixed scan around 1; only existence of some nearby lambda is needed
_LAMBDA_CANDIDATES = (0.95, 1.05, 0.9, 1.1, 0.8, 1.2)


@dataclass(frozen=True)
class MeridianSample:
    """Meridian data of the spherical homothety at colatitude theta."""

    theta: float
    phi: float
    phi_dot: float
    dbar_norm: float  # normalized Hilbert-Schmidt norm of the tangent map


@dataclass(frozen=True)
class SphericalHomothety:
    """Conjugate of x -> lam * x under stereographic projection.

    A conformal self-map of the sphere, longitude preserving, and an
    isometry exactly when lam = 1.
    """

    lam: float

    def __post_init__(self):
        if self.lam <= 0.0:
            raise DomainError("lambda must be positive")

    def profile(self, theta: float) -> MeridianSample:
        return homothety_profile(self.lam, theta)

    def jacobian_mean(self, n: int) -> float:
        return homothety_jacobian_mean(self.lam, n)

    def energy_mean(self, alpha: float, n: int) -> float:
        return sphere_energy_T(alpha, self.lam, n)


@dataclass(frozen=True)
class TwoPointVariable:
    """Random variable taking ``high_value`` with probability ``mass_high``, else 0."""

    high_value: float
    mass_high: float

    def __post_init__(self):
        if self.high_value < 0:
            raise DomainError("high_value must be nonnegative")
        if not 0.0 <= self.mass_high <= 1.0:
            raise DomainError("mass_high must lie in [0, 1]")

    @property
    def mean(self) -> float:
        return self.high_value * self.mass_high

    @classmethod
    def optimal(cls, alpha: float, n: int) -> "TwoPointVariable":
        """The extremal two-point variable for alpha > alpha_n."""
        an = alpha_n(n)
        if not alpha >= an:
            raise DomainError("the optimal two-point variable needs alpha >= alpha_n")
        return cls(high_value=(alpha / an) ** (n - 1), mass_high=(an / alpha) ** (n - 1))


@dataclass(frozen=True)
class NonRadialWitness:
    """A spherical-homothety competitor beating the radial infimum."""

    functional: Functional
    lam: float
    witness_energy: float
    radial_infimum: float
    gap: float

    @property
    def conclusive(self) -> bool:
        return self.gap > 0.0


def homothety_profile(lam: float, theta: float) -> MeridianSample:
    """Meridian function of Phi^lambda: tan(phi/2) = lambda tan(theta/2)."""
    if lam <= 0.0:
        raise DomainError("lambda must be positive")
    if not 0.0 < theta < math.pi:
        raise DomainError("theta must lie strictly between 0 and pi")
    half = theta / 2.0
    phi = 2.0 * math.atan(lam * math.tan(half))
    phi_dot = 1.0 / (math.cos(half) ** 2 / lam + lam * math.sin(half) ** 2)
    return MeridianSample(
        theta=theta, phi=phi, phi_dot=phi_dot, dbar_norm=math.sin(phi) / math.sin(theta)
    )


def _sin_power_integral(n: int) -> float:
    val, _ = quad(lambda th: math.sin(th) ** (n - 2), 0.0, math.pi, **_QUAD_OPTS)
    return val


def homothety_jacobian_mean(lam: float, n: int) -> float:
    """Sphere average of det DPhi^lambda = |DPhi|^{n-1}; identically 1."""
    check_dimension(n)
    if lam <= 0.0:
        raise DomainError("lambda must be positive")

    def integrand(th: float) -> float:
        s = homothety_profile(lam, th)
        return s.dbar_norm ** (n - 1) * math.sin(th) ** (n - 2)

    num, _ = quad(integrand, 0.0, math.pi, **_QUAD_OPTS)
    return num / _sin_power_integral(n)


def sphere_energy_T(alpha: float, lam: float, n: int) -> float:
    """Sphere average of [alpha^2 + (n-1) |DPhi^lambda|^2]^{n/2}."""
    check_dimension(n)
    if alpha <= 0.0 or lam <= 0.0:
        raise DomainError("alpha and lambda must be positive")
    if lam == 1.0:
        return (alpha * alpha + n - 1.0) ** (n / 2.0)

    def integrand(th: float) -> float:
        s = homothety_profile(lam, th)
        return (alpha * alpha + (n - 1.0) * s.dbar_norm**2) ** (n / 2.0) * math.sin(
            th
        ) ** (n - 2)

    num, _ = quad(integrand, 0.0, math.pi, **_QUAD_OPTS)
    return num / _sin_power_integral(n)


def _check_radial_homeomorphism(map_, source: Annulus, target: Annulus, n: int):
    """Require a boundary-order-preserving radial homeomorphism onto target."""
    if getattr(map_, "hammer_zone", None) is not None:
        raise PreconditionError("hammering composites are not homeomorphisms")
    ts = np.exp(np.linspace(math.log(source.inner), math.log(source.outer), 65))
    samples = [map_.strain(float(t), n) for t in ts]
    hs = [s.H for s in samples]
    if min(hs) <= 0.0:
        raise PreconditionError("strain must stay positive (order preserving)")
    if any(s.Hdot < -1e-12 * abs(s.H) / s.t for s in samples):
        raise PreconditionError("strain must be nondecreasing (homeomorphism)")
    lo, hi = hs[0], hs[-1]
    for got, want in ((lo, target.inner), (hi, target.outer)):
        if abs(got - want) > 1e-8 * max(1.0, abs(want)):
            raise PreconditionError(
                f"map does not send source boundary onto target ({got} vs {want})"
            )


def verify_free_lagrangians(
    map_, source: Annulus, target: Annulus, n: int
) -> tuple[float, float, float]:
    """Absolute residuals of the three free-Lagrangian identities.

    ``map_`` is a RadialMap or strain profile exposing ``strain(t, n)``.
    """
    check_dimension(n)
    _check_radial_homeomorphism(map_, source, target, n)
    omega = sphere_area(n)
    r, R = source.inner, source.outer

    def jacobian_form(t: float) -> float:
        s = map_.strain(t, n)
        return s.Hdot * s.H ** (n - 1)

    jac, _ = quad(jacobian_form, r, R, **_QUAD_OPTS)
    res_jac = abs(omega * jac - omega * (target.outer**n - target.inner**n) / n)

    def log_strain_form(t: float) -> float:
        s = map_.strain(t, n)
        return s.Hdot / s.H

    dlog, _ = quad(log_strain_form, r, R, **_QUAD_OPTS)
    res_target = abs(omega * dlog - modulus(target, n).value)

    pull, _ = quad(lambda t: 1.0 / t, r, R, **_QUAD_OPTS)
    res_source = abs(omega * pull - modulus(source, n).value)
    return res_jac, res_target, res_source


def free_lagrangian_estimates(
    map_, source: Annulus, target: Annulus, n: int
) -> tuple[float, float, float]:
    """Margins (LHS - RHS >= 0) of the three free-Lagrangian lower bounds."""
    check_dimension(n)
    _check_radial_homeomorphism(map_, source, target, n)
    omega = sphere_area(n)
    r, R = source.inner, source.outer

    def normal_tangential_form(t: float) -> float:
        s = map_.strain(t, n)
        return abs(s.Hdot) * abs(s.H) ** (n - 1)

    lhs1, _ = quad(normal_tangential_form, r, R, **_QUAD_OPTS)
    m1 = omega * lhs1 - omega * (target.outer**n - target.inner**n) / n

    def normal_form(t: float) -> float:
        s = map_.strain(t, n)
        return abs(s.Hdot) / abs(s.H)

    lhs2, _ = quad(normal_form, r, R, **_QUAD_OPTS)
    m2 = omega * lhs2 - modulus(target, n).value

    lhs3, _ = quad(lambda t: 1.0 / t, r, R, **_QUAD_OPTS)
    m3 = omega * lhs3 - modulus(source, n).value
    return m1, m2, m3


def random_variable_energy(
    alpha: float, n: int, X: TwoPointVariable | float
) -> float:
    """Energy E[X] = mean of [alpha^2 + (n-1) X^{2/(n-1)}]^{n/2}.

    Defined for random variables of mean at least one (up to rounding).
    """
    check_dimension(n)
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")

    def F(x: float) -> float:
        return (alpha * alpha + (n - 1.0) * x ** (2.0 / (n - 1.0))) ** (n / 2.0)

    if isinstance(X, TwoPointVariable):
        if X.mean < 1.0 - 1e-9:
            raise DomainError(f"mean {X.mean} < 1")
        return X.mass_high * F(X.high_value) + (1.0 - X.mass_high) * alpha**n
    x = float(X)
    if x < 1.0 - 1e-9:
        raise DomainError(f"mean {x} < 1")
    return F(x)


def _radial_times_homothety_energy(rm: RadialMap, lam: float, n: int) -> float:
    """Conformal energy of h(x) = H(|x|) Phi^lambda(x/|x|) by nested quadrature."""
    omega = sphere_area(n)
    lo = math.log(rm.domain.inner)
    hi = math.log(rm.domain.outer)

    def integrand(s: float) -> float:
        smp = rm.strain(math.exp(s), n)
        return abs(smp.H) ** n * sphere_energy_T(abs(smp.eta), lam, n)

    val, _ = quad(integrand, lo, hi, **_QUAD_OPTS)
    return omega * val


def nonradial_witness(
    source: Annulus, target: Annulus, n: int, functional: Functional
) -> NonRadialWitness:
    """Construct a spherical-homothety competitor beating the radial class.

    Weighted branch: requires n >= 4 and Mod(target)/Mod(source) >
    sqrt((n-1)/(n-3)).  Conformal branch: requires n >= 4, R/r < delta_n and
    a target ratio above H_minus(delta_n) / H_minus(delta_n r/R).  A
    nonpositive gap is reported as inconclusive, not as a refutation.
    """
    check_dimension(n)
    if n < 4:
        raise PreconditionError("non-radial witnesses exist only for n >= 4")
    ms = modulus(source, n)
    mt = modulus(target, n)

    if functional is Functional.WEIGHTED:
        alpha = mt.value / ms.value
        threshold = math.sqrt((n - 1.0) / (n - 3.0))
        if not alpha > threshold:
            raise PreconditionError(
                f"weighted witness needs alpha > sqrt((n-1)/(n-3)) = {threshold}"
            )
        radial_inf = (alpha * alpha + n - 1.0) ** (n / 2.0) * ms.value
        best_lam, best_energy = 1.0, math.inf
        for lam in _LAMBDA_CANDIDATES:
            energy = sphere_energy_T(alpha, lam, n) * ms.value
            if energy < best_energy:
                best_lam, best_energy = lam, energy
        return NonRadialWitness(
            functional=functional,
            lam=best_lam,
            witness_energy=best_energy,
            radial_infimum=radial_inf,
            gap=radial_inf - best_energy,
        )

    if functional is not Functional.CONFORMAL:
        raise DomainError("witnesses exist for the conformal and weighted energies")

    ratio = source.ratio
    dn = delta_n(n)
    if not 1.0 < ratio < dn:
        raise PreconditionError(f"conformal witness needs 1 < R/r < delta_n = {dn}")
    floor = h_minus(dn, n).H / h_minus(dn / ratio, n).H
    if not target.ratio > floor:
        raise PreconditionError(
            f"conformal witness needs target ratio above {floor}"
        )
    rm, _ = fit_annuli(source, target, n)
    radial_inf = _radial_times_homothety_energy(rm, 1.0, n)
    best_lam, best_energy = 1.0, math.inf
    for lam in _LAMBDA_CANDIDATES:
        energy = _radial_times_homothety_energy(rm, lam, n)
        if energy < best_energy:
            best_lam, best_energy = lam, energy
    return NonRadialWitness(
        functional=functional,
        lam=best_lam,
        witness_energy=best_energy,
        radial_infimum=radial_inf,
        gap=radial_inf - best_energy,
    )
