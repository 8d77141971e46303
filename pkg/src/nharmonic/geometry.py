"""Spherical annuli, conformal modulus, volume and unit-sphere areas.

Everything here is dimension-generic: ``n`` is passed at runtime and only
validated to be an integer >= 2.  An annulus A(r, R) is the open spherical
ring r < |x| < R; its conformal modulus is

    Mod A = omega_{n-1} * log(R / r),

where omega_{n-1} is the surface area of the unit sphere in R^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Annulus",
    "Modulus",
    "check_dimension",
    "sphere_area",
    "modulus",
    "volume",
]


def check_dimension(n: int) -> int:
    """Validate the ambient dimension (integer, n >= 2)."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"dimension must be an integer, got {n!r}")
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    return n


def _unit_sphere_area(n: int) -> float:
    # Area of S^{n-1} in R^n, valid for n >= 1 (internal use allows n = 1,
    # where S^0 consists of two points and has "area" 2).
    if n % 2 == 0:
        k = n // 2
        return 2.0 * math.pi**k / math.factorial(k - 1)
    k = (n - 1) // 2
    odd = 1.0
    for j in range(3, 2 * k, 2):
        odd *= j
    return 2.0 ** (k + 1) * math.pi**k / odd


def sphere_area(n: int) -> float:
    """Surface area omega_{n-1} of the unit sphere S^{n-1} in R^n."""
    check_dimension(n)
    return _unit_sphere_area(n)


@dataclass(frozen=True)
class Annulus:
    """Spherical ring ``inner < |x| < outer`` with 0 < inner < outer < inf."""

    inner: float
    outer: float

    def __post_init__(self):
        if not (math.isfinite(self.inner) and math.isfinite(self.outer)):
            raise DomainError("annulus radii must be finite")
        if not 0.0 < self.inner < self.outer:
            raise DomainError(
                f"need 0 < inner < outer, got ({self.inner}, {self.outer})"
            )

    @property
    def ratio(self) -> float:
        return self.outer / self.inner

    @property
    def log_ratio(self) -> float:
        return math.log(self.outer) - math.log(self.inner)

    def scaled(self, factor: float) -> "Annulus":
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        return Annulus(self.inner * factor, self.outer * factor)


@dataclass(frozen=True)
class Modulus:
    """Conformal modulus stored both absolutely and as log(R/r).

    ``value = sphere_area(n) * log_ratio``; both stored to spare callers the
    repeated omega_{n-1} factor (Nitsche functions consume absolute moduli,
    the boundary-value solver consumes radius ratios).
    """

    value: float
    log_ratio: float

    def __post_init__(self):
        if self.log_ratio < 0 or self.value < 0:
            raise DomainError("modulus must be nonnegative")

    @classmethod
    def from_log_ratio(cls, log_ratio: float, n: int) -> "Modulus":
        return cls(value=sphere_area(n) * log_ratio, log_ratio=log_ratio)

    @classmethod
    def from_value(cls, value: float, n: int) -> "Modulus":
        return cls(value=value, log_ratio=value / sphere_area(n))


def modulus(a: Annulus, n: int) -> Modulus:
    """Conformal modulus of ``a`` in R^n."""
    check_dimension(n)
    return Modulus.from_log_ratio(a.log_ratio, n)


def volume(a: Annulus, n: int) -> float:
    """Euclidean volume omega_{n-1} (R^n - r^n) / n of the annulus."""
    check_dimension(n)
    return sphere_area(n) * (a.outer**n - a.inner**n) / n
