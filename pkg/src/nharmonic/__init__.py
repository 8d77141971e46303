"""Energy-minimal n-harmonic deformations between concentric spherical annuli."""

from .bvp import BvpProblem, RadialMap, fit_annuli, q_ratio, solve_radial_bvp
from .energy import (
    Branch,
    CoefficientPair,
    ConformalSpec,
    EnergyReport,
    FMinimalityReport,
    FStatus,
    MinimizerPlan,
    PlanarNitscheSpec,
    PlanStatus,
    StrainProfile,
    coefficient_pair,
    distortion_integral_check,
    eta_of_tau,
    f_minimality_status,
    minimal_energy,
    operator_norm_lower_bound,
    planar_minimal_energy,
    power_stretch,
    power_stretch_dilatations,
    qc_bounds,
    radial_energy,
)
from .errors import DomainError, NumericalError, PreconditionError
from .functionals import Functional
from .geometry import Annulus, Modulus, modulus, sphere_area, volume
from .lagrangian import (
    MeridianSample,
    NonRadialWitness,
    SphericalHomothety,
    TwoPointVariable,
    free_lagrangian_estimates,
    homothety_jacobian_mean,
    homothety_profile,
    nonradial_witness,
    random_variable_energy,
    sphere_energy_T,
    verify_free_lagrangians,
)
from .nitsche import (
    NitscheConstants,
    PairClassification,
    Regime,
    alpha_n,
    classify,
    delta_n,
    gamma_n,
    lower_nitsche,
    nitsche_constants,
    upper_nitsche,
)
from .principal import (
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

__version__ = "0.1.0"
