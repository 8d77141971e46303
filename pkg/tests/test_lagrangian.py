import math

import numpy as np
import pytest

from conftest import (
    contracting_within_target,
    expanding_within_target,
    random_annulus,
)
from nharmonic import (
    Annulus,
    DomainError,
    Functional,
    PreconditionError,
    PrincipalKind,
    StrainProfile,
    TwoPointVariable,
    alpha_n,
    delta_n,
    fit_annuli,
    free_lagrangian_estimates,
    h_minus,
    homothety_jacobian_mean,
    homothety_profile,
    modulus,
    nonradial_witness,
    power_stretch,
    random_variable_energy,
    sphere_energy_T,
    verify_free_lagrangians,
)
from nharmonic.bvp import RadialMap
from nharmonic.principal import gamma_minus


# --- spherical homothety ----------------------------------------------------------


def test_homothety_identity():
    for th in np.linspace(0.1, math.pi - 0.1, 20):
        s = homothety_profile(1.0, float(th))
        assert s.phi == pytest.approx(th, rel=1e-14)
        assert s.dbar_norm == pytest.approx(1.0, rel=1e-13)
        assert s.phi_dot == pytest.approx(1.0, rel=1e-13)


def test_homothety_equator():
    for lam in (0.3, 2.0, 7.5):
        s = homothety_profile(lam, math.pi / 2)
        assert math.tan(s.phi / 2) == pytest.approx(lam, rel=1e-13)


def test_homothety_polar_derivatives():
    for lam in (0.25, 0.8, 3.0):
        near_north = homothety_profile(lam, 1e-9)
        near_south = homothety_profile(lam, math.pi - 1e-9)
        assert near_north.phi_dot == pytest.approx(lam, rel=1e-8)
        assert near_south.phi_dot == pytest.approx(1.0 / lam, rel=1e-8)


def test_homothety_derivative_bounds():
    for lam in (0.25, 0.8, 3.0):
        lo, hi = min(lam, 1 / lam), max(lam, 1 / lam)
        for th in np.linspace(0.05, math.pi - 0.05, 50):
            s = homothety_profile(lam, float(th))
            assert lo - 1e-12 <= s.phi_dot <= hi + 1e-12
            assert s.dbar_norm == pytest.approx(s.phi_dot, rel=1e-10)


def test_homothety_group_law():
    # meridian of the composition is the meridian of the product
    for lam, mu in ((2.0, 3.0), (0.5, 4.0), (0.3, 0.7)):
        for th in np.linspace(0.1, math.pi - 0.1, 25):
            inner = homothety_profile(mu, float(th))
            outer = homothety_profile(lam, inner.phi)
            direct = homothety_profile(lam * mu, float(th))
            assert outer.phi == pytest.approx(direct.phi, abs=1e-12)


def test_homothety_rejects_bad_input():
    with pytest.raises(DomainError):
        homothety_profile(0.0, 1.0)
    with pytest.raises(DomainError):
        homothety_profile(1.0, 0.0)
    with pytest.raises(DomainError):
        homothety_profile(1.0, math.pi)


def test_jacobian_mean_is_one():
    for lam in (0.1, 0.5, 2.0, 10.0):
        for n in range(2, 7):
            assert homothety_jacobian_mean(lam, n) == pytest.approx(1.0, abs=1e-8)


def test_spherical_homothety_wrapper():
    from nharmonic import SphericalHomothety

    phi = SphericalHomothety(2.0)
    assert phi.profile(math.pi / 2).phi == pytest.approx(2 * math.atan(2.0))
    assert phi.jacobian_mean(4) == pytest.approx(1.0, abs=1e-8)
    assert phi.energy_mean(2.0, 4) == pytest.approx(sphere_energy_T(2.0, 2.0, 4))
    with pytest.raises(DomainError):
        SphericalHomothety(-1.0)


def test_sphere_energy_identity_lambda():
    for n in (2, 4, 6):
        for alpha in (0.5, 1.0, 2.0):
            assert sphere_energy_T(alpha, 1.0, n) == pytest.approx(
                (alpha * alpha + n - 1.0) ** (n / 2.0), rel=1e-13
            )


def test_sphere_energy_strict_drop():
    # n = 4, alpha = 2 > sqrt(3): lambda = 1.1 strictly lowers the average
    val = sphere_energy_T(2.0, 1.1, 4)
    assert val < 49.0
    assert 49.0 - val > 1e-3


def test_sphere_energy_strict_drop_grid():
    for n in (4, 5):
        threshold = math.sqrt((n - 1.0) / (n - 3.0))
        for alpha in (1.1 * threshold, 1.5 * threshold, 2.5 * threshold):
            lam_cap = math.sqrt((n - 3.0) / (n - 1.0)) * alpha
            for lam in np.linspace(1.02, min(lam_cap, 2.0), 5):
                assert sphere_energy_T(alpha, float(lam), n) < (
                    alpha * alpha + n - 1.0
                ) ** (n / 2.0)


def test_sphere_energy_symmetric_in_inversion():
    for n in (3, 4):
        for alpha, lam in ((1.3, 1.4), (2.4, 0.6)):
            assert sphere_energy_T(alpha, lam, n) == pytest.approx(
                sphere_energy_T(alpha, 1.0 / lam, n), rel=1e-10
            )


# --- free Lagrangians ---------------------------------------------------------------


def test_identities_identity_map():
    src = Annulus(1.0, 2.0)
    rm = RadialMap(kind=PrincipalKind.IDENTITY, lam=1.0, k=1.0, domain=src)
    res = verify_free_lagrangians(rm, src, src, 3)
    assert all(r < 1e-9 for r in res)


def test_identities_power_stretch():
    src = Annulus(1.0, 2.5)
    for n in (2, 3, 5):
        for alpha in (0.5, 1.7):
            tgt = Annulus(src.inner**alpha, src.outer**alpha)
            prof = power_stretch(alpha, 1.0, src)
            res = verify_free_lagrangians(prof, src, tgt, n)
            assert all(r < 1e-8 for r in res)
            # second identity recovers Mod(target) = alpha Mod(source)
            assert modulus(tgt, n).value == pytest.approx(
                alpha * modulus(src, n).value, rel=1e-13
            )


def test_identities_fitted_minimizers():
    rng = np.random.default_rng(21)
    for n in (2, 3, 4):
        src = random_annulus(rng)
        for tgt in (
            contracting_within_target(rng, src, n),
            expanding_within_target(rng, src, n),
        ):
            rm, _ = fit_annuli(src, tgt, n)
            res = verify_free_lagrangians(rm, src, tgt, n)
            assert all(r < 1e-8 for r in res)


def test_estimates_zero_margin_for_radial():
    rng = np.random.default_rng(22)
    n = 3
    src = random_annulus(rng)
    tgt = contracting_within_target(rng, src, n)
    rm, _ = fit_annuli(src, tgt, n)
    margins = free_lagrangian_estimates(rm, src, tgt, n)
    for m in margins:
        assert m == pytest.approx(0.0, abs=1e-9)


def test_estimates_reject_nonmonotone_profile():
    src = Annulus(0.5, 2.0)
    prof = StrainProfile(
        domain=src, fn=lambda t: (0.5 * (t + 1 / t), 0.5 * (1 - 1 / t**2))
    )
    with pytest.raises(PreconditionError):
        free_lagrangian_estimates(prof, src, Annulus(1.0, 1.25), 2)


def test_identities_reject_wrong_boundary():
    src = Annulus(1.0, 2.0)
    prof = power_stretch(1.0, 1.0, src)
    with pytest.raises(PreconditionError):
        verify_free_lagrangians(prof, src, Annulus(1.0, 3.0), 3)


# --- random-variable energies ---------------------------------------------------------


def test_random_variable_constant():
    for n in (2, 4, 6):
        for alpha in (0.7, 1.5, 3.0):
            assert random_variable_energy(alpha, n, 1.0) == pytest.approx(
                (alpha * alpha + n - 1.0) ** (n / 2.0), rel=1e-13
            )


def test_random_variable_two_point_formula():
    n, alpha = 4, 2.0
    an = alpha_n(n)
    b = n * (an * an + n - 1.0) ** ((n - 2.0) / 2.0) / an
    X = TwoPointVariable.optimal(alpha, n)
    val = random_variable_energy(alpha, n, X)
    assert val == pytest.approx(alpha**n + b * alpha, rel=1e-13)
    # arithmetic oracle: 16 + 2 * (4 * 4.5 / sqrt(1.5)) = 45.3938...
    oracle = 16.0 + 2.0 * (4.0 * 4.5 / math.sqrt(1.5))
    assert val == pytest.approx(oracle, rel=1e-13)
    assert val < random_variable_energy(alpha, n, 1.0)


def test_random_variable_mean_precondition():
    with pytest.raises(DomainError):
        random_variable_energy(2.0, 4, 0.5)
    with pytest.raises(DomainError):
        random_variable_energy(2.0, 4, TwoPointVariable(high_value=1.0, mass_high=0.5))


def _random_discrete_energy(rng, alpha, n, atoms=4):
    # random discrete variable with mean >= 1
    masses = rng.dirichlet(np.ones(atoms))
    values = rng.uniform(0.0, 3.0, size=atoms)
    mean = float(np.dot(masses, values))
    if mean < 1.0:
        values = values / mean  # rescale to mean exactly 1
    energy = float(
        np.dot(
            masses,
            (alpha * alpha + (n - 1.0) * values ** (2.0 / (n - 1.0))) ** (n / 2.0),
        )
    )
    return energy


def test_jensen_floor_below_alpha_n():
    rng = np.random.default_rng(23)
    for n in (4, 5):
        an = alpha_n(n)
        for alpha in (0.8, 1.0, 0.98 * an):
            floor = (alpha * alpha + n - 1.0) ** (n / 2.0)
            for _ in range(2500):
                assert _random_discrete_energy(rng, alpha, n) >= floor - 1e-9


def test_two_point_floor_above_alpha_n():
    rng = np.random.default_rng(24)
    for n in (4, 5):
        an = alpha_n(n)
        for alpha in (1.05 * an, 2.0 * an):
            b = n * (an * an + n - 1.0) ** ((n - 2.0) / 2.0) / an
            floor = alpha**n + b * alpha
            for _ in range(2500):
                assert _random_discrete_energy(rng, alpha, n) >= floor - 1e-9


# --- non-radial witnesses ----------------------------------------------------------------


def test_weighted_witness_n4():
    src, tgt = Annulus(1.0, 2.0), Annulus(1.0, 4.0)  # alpha = 2 > sqrt(3)
    w = nonradial_witness(src, tgt, 4, Functional.WEIGHTED)
    assert w.conclusive
    assert w.gap > 0.0
    assert w.radial_infimum == pytest.approx(
        49.0 * modulus(src, 4).value, rel=1e-12
    )
    assert w.witness_energy < w.radial_infimum


def test_weighted_witness_low_dimension_rejected():
    with pytest.raises(PreconditionError):
        nonradial_witness(Annulus(1, 2), Annulus(1, 8), 3, Functional.WEIGHTED)


def test_weighted_witness_below_threshold_rejected():
    with pytest.raises(PreconditionError):
        nonradial_witness(Annulus(1, 2), Annulus(1, 2.2), 4, Functional.WEIGHTED)


def _conformal_counterexample_pair(n: int, R: float, eta_at_outer: float):
    # build the pair from its minus-kind fit so the elasticity stays above
    # sqrt((n-1)/(n-3)) with margin at the outer sphere
    k = gamma_minus(1.0 / eta_at_outer, n) / R
    src = Annulus(1.0, R)
    ratio = h_minus(k * R, n).H / h_minus(k * src.inner, n).H
    return src, Annulus(1.0, ratio)


def test_conformal_witness_n4():
    n = 4
    src, tgt = _conformal_counterexample_pair(n, 1.5, 1.95)
    assert src.ratio < delta_n(n)
    floor = h_minus(delta_n(n), n).H / h_minus(delta_n(n) / src.ratio, n).H
    assert tgt.ratio > floor
    w = nonradial_witness(src, tgt, n, Functional.CONFORMAL)
    assert w.conclusive
    assert w.gap > 0.0


def test_homothety_cannot_beat_minimizer_within_bounds():
    # with the elasticity below alpha_n the radial map is proven minimal, so
    # twisting by a spherical homothety can only raise the energy
    from nharmonic import minimal_energy
    from nharmonic.lagrangian import _radial_times_homothety_energy

    rng = np.random.default_rng(28)
    n = 4
    src = random_annulus(rng)
    tgt = expanding_within_target(rng, src, n)
    plan = minimal_energy(src, tgt, n)
    for lam in (0.8, 0.9, 1.1, 1.2):
        twisted = _radial_times_homothety_energy(plan.map, lam, n)
        assert twisted >= plan.energy.value - 1e-9


def test_conformal_witness_hypotheses_checked():
    n = 4
    with pytest.raises(PreconditionError):
        nonradial_witness(Annulus(1.0, 3.0), Annulus(1.0, 30.0), n, Functional.CONFORMAL)
    with pytest.raises(PreconditionError):
        nonradial_witness(Annulus(1.0, 1.5), Annulus(1.0, 1.8), n, Functional.CONFORMAL)
