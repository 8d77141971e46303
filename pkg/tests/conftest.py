"""Shared generators for the test suite."""

from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from nharmonic import (
    Annulus,
    StrainProfile,
    lower_nitsche,
    modulus,
    upper_nitsche,
)
from nharmonic.geometry import Modulus, sphere_area


def log_grid(lo: float, hi: float, count: int) -> np.ndarray:
    return np.exp(np.linspace(math.log(lo), math.log(hi), count))


def random_annulus(rng: np.random.Generator, max_ratio: float = 3.0) -> Annulus:
    inner = float(rng.uniform(0.5, 2.0))
    ratio = float(rng.uniform(1.2, max_ratio))
    return Annulus(inner, inner * ratio)


def contracting_within_target(
    rng: np.random.Generator, source: Annulus, n: int
) -> Annulus:
    """Target between the lower Nitsche bound and the conformal ratio."""
    ms = modulus(source, n)
    lo = lower_nitsche(ms, n).log_ratio
    hi = ms.log_ratio
    frac = float(rng.uniform(0.15, 0.85))
    log_ratio = lo + frac * (hi - lo)
    inner = float(rng.uniform(0.5, 2.0))
    return Annulus(inner, inner * math.exp(log_ratio))


def expanding_within_target(
    rng: np.random.Generator, source: Annulus, n: int
) -> Annulus:
    """Target between the conformal ratio and the upper Nitsche bound."""
    ms = modulus(source, n)
    lo = ms.log_ratio
    ub = upper_nitsche(ms, n).log_ratio
    # the upper bound exceeds the source log-ratio only by a bounded gap
    hi = lo + 0.9 * (ub - lo) if math.isfinite(ub) else 2.5 * lo
    frac = float(rng.uniform(0.15, 0.85))
    log_ratio = lo + frac * (hi - lo)
    inner = float(rng.uniform(0.5, 2.0))
    return Annulus(inner, inner * math.exp(log_ratio))


def contracting_below_target(
    rng: np.random.Generator, source: Annulus, n: int
) -> Annulus:
    ms = modulus(source, n)
    lo = lower_nitsche(ms, n).log_ratio
    frac = float(rng.uniform(0.2, 0.8))
    inner = float(rng.uniform(0.5, 2.0))
    return Annulus(inner, inner * math.exp(frac * lo))


def monotone_competitor(
    rng: np.random.Generator, source: Annulus, target: Annulus, knots: int = 6
) -> StrainProfile:
    """Random increasing piecewise-cubic strain matching the boundary values."""
    ts = log_grid(source.inner, source.outer, knots)
    increments = rng.uniform(0.05, 1.0, size=knots - 1)
    cumulative = np.concatenate(([0.0], np.cumsum(increments)))
    values = target.inner + (target.outer - target.inner) * (
        cumulative / cumulative[-1]
    )
    interp = PchipInterpolator(ts, values)
    deriv = interp.derivative()

    def fn(t: float) -> tuple[float, float]:
        return float(interp(t)), float(deriv(t))

    return StrainProfile(domain=source, fn=fn)


def modulus_of(value: float, n: int) -> Modulus:
    return Modulus.from_value(value, n)


def omega(n: int) -> float:
    return sphere_area(n)
