import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import log_grid
from nharmonic import (
    DomainError,
    PrincipalKind,
    StrainSample,
    asymptote_slope,
    characteristic,
    elasticity,
    gamma_minus,
    gamma_plus,
    h_minus,
    h_plus,
    u_minus,
    u_plus,
)


# --- generating functions ---------------------------------------------------


def test_gamma_plus_values():
    for n in range(2, 9):
        assert gamma_plus(0.0, n) == 1.0
    # n = 2 closed form sqrt((1+s)/(1-s))
    assert gamma_plus(0.6, 2) == pytest.approx(2.0, rel=1e-14)
    assert gamma_minus(0.6, 2) == pytest.approx(2.0, rel=1e-14)


def test_gamma_domain_errors():
    for s in (-1.0, 1.0, 1.5, -2.0):
        with pytest.raises(DomainError):
            gamma_plus(s, 3)
        with pytest.raises(DomainError):
            gamma_minus(s, 3)


@given(
    s=st.floats(min_value=-0.999, max_value=0.999),
    n=st.integers(min_value=2, max_value=8),
)
@settings(max_examples=300, deadline=None)
def test_gamma_product_identity(s, n):
    assert gamma_plus(s, n) * gamma_plus(-s, n) == pytest.approx(1.0, abs=1e-12)
    assert gamma_minus(s, n) * gamma_minus(-s, n) == pytest.approx(1.0, abs=1e-12)


def test_gamma_strictly_increasing():
    ss = np.linspace(-0.99, 0.99, 201)
    for n in (2, 3, 5, 8):
        gp = [gamma_plus(s, n) for s in ss]
        gm = [gamma_minus(s, n) for s in ss]
        assert np.all(np.diff(gp) > 0)
        assert np.all(np.diff(gm) > 0)


# --- inverses ----------------------------------------------------------------


def test_u_fixed_points_and_examples():
    for n in range(2, 9):
        assert u_plus(1.0, n) == 0.0
        assert u_minus(1.0, n) == 0.0
    assert u_plus(2.0, 2) == pytest.approx(0.6, abs=1e-13)


def test_u_round_trip():
    # ranges chosen so that u stays clear of the +-1 saturation of doubles;
    # beyond them the inversion is exact in sigma = atanh(u) but u itself
    # cannot represent the answer
    ranges = {2: (1e-2, 1e2), 3: (1e-2, 1e2), 4: (0.1, 10.0), 6: (0.3, 3.0)}
    for n, (lo, hi) in ranges.items():
        for t in log_grid(lo, hi, 25):
            assert gamma_plus(u_plus(t, n), n) == pytest.approx(t, rel=1e-10)
            assert gamma_minus(u_minus(t, n), n) == pytest.approx(t, rel=1e-10)


def test_sigma_round_trip_wide_range():
    from nharmonic.principal import _log_gamma_sigma, _solve_sigma

    for n in (2, 3, 4, 6, 8):
        for t in log_grid(1e-6, 1e6, 31):
            log_t = math.log(t)
            for kind in (PrincipalKind.PLUS, PrincipalKind.MINUS):
                sigma = _solve_sigma(kind, log_t, n)
                assert _log_gamma_sigma(kind, sigma, n) == pytest.approx(
                    log_t, abs=1e-12, rel=1e-13
                )


def test_u_antisymmetry():
    for n in (2, 3, 5, 8):
        for t in log_grid(1e-2, 1e2, 21):
            assert u_plus(1.0 / t, n) == pytest.approx(-u_plus(t, n), abs=1e-13)
            assert u_minus(1.0 / t, n) == pytest.approx(-u_minus(t, n), abs=1e-13)


# --- principal strains --------------------------------------------------------


def test_plus_minus_at_one():
    for n in range(2, 9):
        sp = h_plus(1.0, n)
        assert sp.H == 1.0
        assert sp.Hdot == 0.0
        sm = h_minus(1.0, n)
        assert sm.H == 0.0
        # slope at the zero follows from the characteristic equation at H = 0
        assert sm.Hdot == pytest.approx((n - 1.0) ** ((n - 2.0) / (2.0 * n)), rel=1e-14)


def test_n2_closed_forms():
    for t in log_grid(0.1, 10.0, 500):
        assert h_plus(t, 2).H == pytest.approx(0.5 * (t + 1 / t), abs=1e-10)
        assert h_minus(t, 2).H == pytest.approx(0.5 * (t - 1 / t), abs=1e-10)
    assert h_plus(2.0, 2).H == pytest.approx(1.25, rel=1e-14)


def test_symmetry_rules():
    for n in (2, 3, 5, 8):
        for t in log_grid(1e-3, 1e3, 41):
            assert abs(h_plus(1 / t, n).H - h_plus(t, n).H) < 1e-10
            assert abs(h_minus(1 / t, n).H + h_minus(t, n).H) < 1e-10


def test_characteristic_residuals_on_grid():
    for n in range(2, 9):
        for t in log_grid(1e-2, 1e2, 80):
            assert abs(characteristic(h_plus(t, n), n) - 1.0) < 1e-9
            assert abs(characteristic(h_minus(t, n), n) + 1.0) < 1e-9


def test_characteristic_plain_formula():
    # H(t) = t is conformal: L = 0 by the direct (uncacheable) route
    sample = StrainSample(t=1.7, H=1.7, Hdot=1.0, eta=1.0)
    assert characteristic(sample, 4) == pytest.approx(0.0, abs=1e-12)
    sample = StrainSample(t=2.0, H=0.5, Hdot=-0.25, eta=-1.0)
    assert characteristic(sample, 3) == pytest.approx(0.0, abs=1e-12)


# --- elasticity ----------------------------------------------------------------


def test_elasticity_conformal_kinds():
    assert elasticity(PrincipalKind.IDENTITY, 3.0, 4) == 1.0
    assert elasticity(PrincipalKind.INVERSION, 3.0, 4) == -1.0


def test_elasticity_plus_equals_u():
    assert elasticity(PrincipalKind.PLUS, 2.0, 2) == pytest.approx(0.6, abs=1e-13)
    assert elasticity(PrincipalKind.PLUS, 1.0, 5) == 0.0


def test_elasticity_ranges():
    for n in (2, 3, 4, 6):
        for t in log_grid(1e-2, 1e2, 41):
            assert abs(elasticity(PrincipalKind.PLUS, t, n)) < 1.0
            if not math.isclose(t, 1.0):
                assert abs(elasticity(PrincipalKind.MINUS, t, n)) > 1.0


def test_elasticity_minus_limits():
    assert elasticity(PrincipalKind.MINUS, 1.0, 3) == math.inf
    assert elasticity(PrincipalKind.MINUS, 1e6, 3) == pytest.approx(1.0, abs=1e-8)
    # signed blow-up on each side of t = 1
    assert elasticity(PrincipalKind.MINUS, 1.0 + 1e-8, 3) > 1e6
    assert elasticity(PrincipalKind.MINUS, 1.0 - 1e-8, 3) < -1e6


# --- asymptotes -----------------------------------------------------------------


def test_asymptote_slope_n2():
    assert asymptote_slope(PrincipalKind.PLUS, 2) == pytest.approx(0.5, rel=1e-14)
    assert asymptote_slope(PrincipalKind.MINUS, 2) == pytest.approx(0.5, rel=1e-14)


def test_asymptote_slope_matches_limit():
    for n in range(2, 7):
        for kind, fn in ((PrincipalKind.PLUS, h_plus), (PrincipalKind.MINUS, h_minus)):
            theta = asymptote_slope(kind, n)
            assert fn(1e6, n).H / 1e6 == pytest.approx(theta, rel=1e-10)


def test_asymptote_slope_rejects_conformal_kinds():
    with pytest.raises(DomainError):
        asymptote_slope(PrincipalKind.IDENTITY, 3)


def test_plus_asymptotic_error_bound():
    # 0 < H_plus(t) - Theta t <= C / t^{n-1}: t^{n-1} (H - Theta t) stays bounded
    for n in (2, 3, 4, 5):
        theta = asymptote_slope(PrincipalKind.PLUS, n)
        hi = 1e4 if n <= 3 else 1e2
        vals = []
        for t in log_grid(10.0, hi, 25):
            s = h_plus(t, n)
            # evaluate the cancellation through logs (cond carries log H)
            diff = theta * t * math.expm1(
                s.cond.log_scale - math.log(theta * t)
            )
            vals.append(t ** (n - 1) * diff)
        vals = np.array(vals)
        assert np.all(vals > 0)
        assert vals.max() / vals.min() < 10.0


# --- curvature ------------------------------------------------------------------


def test_plus_strictly_convex():
    for n in (2, 3, 5, 8):
        ts = np.linspace(0.4, 3.0, 101)
        hs = np.array([h_plus(float(t), n).H for t in ts])
        second = hs[2:] - 2 * hs[1:-1] + hs[:-2]
        assert np.all(second > 0)


def test_minus_concave_small_dimensions():
    for n in (2, 3, 4, 5, 6):
        ts = np.linspace(1.05, 5.0, 101)
        hs = np.array([h_minus(float(t), n).H for t in ts])
        second = hs[2:] - 2 * hs[1:-1] + hs[:-2]
        assert np.all(second <= 1e-12)


def test_minus_inflection_polynomial_high_dimensions():
    # (n-1) u^2 + (n-2) u + 1 acquires two roots in (-1, 0) once n >= 7
    for n in (7, 8, 9, 10):
        disc = (n - 2) ** 2 - 4 * (n - 1)
        assert disc > 0
        r1 = (-(n - 2) - math.sqrt(disc)) / (2 * (n - 1))
        r2 = (-(n - 2) + math.sqrt(disc)) / (2 * (n - 1))
        assert -1 < r1 < r2 < 0
    for n in (2, 3, 4, 5, 6):
        assert (n - 2) ** 2 - 4 * (n - 1) < 0


def test_rejects_nonpositive_t():
    for bad in (0.0, -1.0):
        with pytest.raises(DomainError):
            h_plus(bad, 3)
        with pytest.raises(DomainError):
            u_minus(bad, 3)
