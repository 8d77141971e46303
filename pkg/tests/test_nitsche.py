import math

import numpy as np
import pytest
from scipy.optimize import bisect

from conftest import modulus_of, omega
from nharmonic import (
    Annulus,
    DomainError,
    PrincipalKind,
    Regime,
    alpha_n,
    classify,
    delta_n,
    fit_annuli,
    gamma_minus,
    gamma_n,
    h_plus,
    lower_nitsche,
    modulus,
    nitsche_constants,
    upper_nitsche,
)


def test_alpha_n_low_dimensions_infinite():
    assert alpha_n(2) == math.inf
    assert alpha_n(3) == math.inf


def test_alpha_4_closed_form_and_bisection_oracle():
    # the defining equation reduces to 2 a^2 = 3 when n = 4
    assert alpha_n(4) == pytest.approx(math.sqrt(1.5), abs=1e-10)

    def f(a):
        return (a * a + 3.0) * (a * a - 1.0) - a**4

    root = bisect(f, 1.0, math.sqrt(3.0), xtol=1e-13)
    assert alpha_n(4) == pytest.approx(root, abs=1e-10)


def test_alpha_5_bisection_oracle():
    def f(a):
        return (a * a + 4.0) ** 1.5 * (a * a - 1.0) - a**5

    root = bisect(f, 1.0, math.sqrt(2.0), xtol=1e-13)
    assert alpha_n(5) == pytest.approx(root, abs=1e-10)


def test_alpha_n_residual_and_sandwich():
    for n in range(4, 11):
        a = alpha_n(n)
        residual = (a * a + n - 1.0) ** ((n - 2.0) / 2.0) * (a * a - 1.0) - a**n
        assert abs(residual) < 1e-10
        assert 1.0 < a < math.sqrt((n - 1.0) / (n - 3.0))


def test_gamma_n():
    assert gamma_n(2) == 1.0
    assert gamma_n(3) == 1.0
    assert gamma_n(4) == pytest.approx(gamma_minus(math.sqrt(2.0 / 3.0), 4), rel=1e-12)
    for n in range(4, 11):
        assert gamma_n(n) > 1.0


def test_delta_n():
    oracle = math.sqrt(2.0 + math.sqrt(3.0)) * math.exp(math.pi / (8 * math.sqrt(3.0)))
    assert delta_n(4) == pytest.approx(oracle, rel=1e-14)
    for n in range(4, 11):
        assert delta_n(n) >= math.sqrt(n)
    with pytest.raises(DomainError):
        delta_n(3)


def test_nitsche_constants_bundle():
    c = nitsche_constants(3)
    assert c.alpha_n == math.inf and c.gamma_n == 1.0 and c.delta_n is None
    c4 = nitsche_constants(4)
    assert c4.delta_n == pytest.approx(delta_n(4))


def test_lower_nitsche_at_zero():
    for n in (2, 3, 4):
        assert lower_nitsche(modulus_of(0.0, n), n).value == 0.0


def test_lower_nitsche_n2_cosh_form():
    for t in np.linspace(0.1, 10 * omega(2), 50):
        expected = 2 * math.pi * math.log(math.cosh(t / (2 * math.pi)))
        assert lower_nitsche(modulus_of(float(t), 2), 2).value == pytest.approx(
            expected, abs=1e-9
        )


def test_lower_nitsche_sandwich():
    for n in (2, 3, 4, 6):
        for t in np.linspace(0.05, 10.0, 100) * omega(n):
            val = lower_nitsche(modulus_of(float(t), n), n).value
            assert 0.0 < val < t


def test_upper_nitsche_infinite_low_dimensions():
    for n in (2, 3):
        assert upper_nitsche(modulus_of(1.0, n), n).value == math.inf


def test_upper_nitsche_above_identity():
    for n in (4, 5, 6):
        for t in np.linspace(0.05, 10.0, 100) * omega(n):
            val = upper_nitsche(modulus_of(float(t), n), n).value
            assert val > t


def test_upper_nitsche_small_modulus_limit():
    vals = [
        upper_nitsche(modulus_of(eps, 4), 4).value for eps in (1e-2, 1e-4, 1e-6)
    ]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-4


def test_nitsche_functions_monotone():
    for n in (2, 4):
        ts = np.linspace(0.1, 8.0, 60) * omega(n)
        lows = [lower_nitsche(modulus_of(float(t), n), n).value for t in ts]
        assert np.all(np.diff(lows) > 0)
        if n >= 4:
            ups = [upper_nitsche(modulus_of(float(t), n), n).value for t in ts]
            assert np.all(np.diff(ups) > 0)


def test_classify_conformal():
    cls = classify(Annulus(1, 2), Annulus(3, 6), 3)
    assert cls.regime is Regime.CONFORMAL
    assert cls.alpha_ratio == pytest.approx(1.0, rel=1e-14)


def test_classify_critical_contracting_counts_as_within():
    # exactly-critical pair: target ratio = H_plus(source ratio)
    for n in (2, 3, 4):
        R = 2.0
        crit = h_plus(R, n).H
        cls = classify(Annulus(1, R), Annulus(1, crit), n)
        assert cls.regime is Regime.CONTRACTING_WITHIN
        cls2 = classify(Annulus(1, R), Annulus(1, crit * 0.99), n)
        assert cls2.regime is Regime.CONTRACTING_BELOW


def test_classify_expanding_split():
    n = 4
    src = Annulus(1, 2)
    ub = upper_nitsche(modulus(src, n), n)
    just_within = Annulus(1, math.exp(0.99 * ub.log_ratio))
    above = Annulus(1, math.exp(1.01 * ub.log_ratio))
    assert classify(src, just_within, n).regime is Regime.EXPANDING_WITHIN
    assert classify(src, above, n).regime is Regime.EXPANDING_ABOVE


def test_classify_expanding_never_above_for_n3():
    cls = classify(Annulus(1, 2), Annulus(1, 500.0), 3)
    assert cls.regime is Regime.EXPANDING_WITHIN


def test_critical_pair_fit_has_vanishing_inner_derivative():
    # on the lower bound the plus-kind fit degenerates at the inner sphere
    for n in (2, 3, 4):
        R = 2.0
        crit = h_plus(R, n).H
        rm, _ = fit_annuli(Annulus(1, R), Annulus(1, crit), n)
        assert rm.kind is PrincipalKind.PLUS
        assert abs(rm.strain(1.0, n).Hdot) < 1e-6
