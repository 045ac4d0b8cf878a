"""Rotation numbers and rotation intervals of degree-one circle map liftings."""

from .envelope import (
    ConstantSection,
    MonotoneEnvelope,
    NumericEnvelopeFailure,
    SectionTooSmall,
    find_maximal_sections,
    lower_map,
    reparametrize_to_zero,
    upper_map,
    widest_section,
)
from .families import (
    GOLDEN_MEAN,
    FamilyParams,
    InvalidParam,
    build_lifting,
    counterexample_map,
    disc_standard,
    f_mu,
    pwl_standard,
    standard_map,
    tau,
)
from .lifting import (
    Continuity,
    Lifting,
    Monotonicity,
    OrbitAccumulator,
    evaluate,
    evaluate_exact,
    iterate_n,
    iterate_n_exact,
    orbit_step,
)
from .rotnum import (
    DEFAULT_ERROR,
    DEFAULT_SIMO_N,
    DEFAULT_TOL,
    InvalidSection,
    PeriodicOrbitDetected,
    RotationEstimate,
    RotationInterval,
    SimoBracket,
    rho_constant_section,
    rho_constant_section_exact,
    rho_csb,
    rho_direct,
    rho_simo,
    rotation_interval,
    simo_error_bound,
)

__all__ = [
    "ConstantSection",
    "Continuity",
    "DEFAULT_ERROR",
    "DEFAULT_SIMO_N",
    "DEFAULT_TOL",
    "FamilyParams",
    "GOLDEN_MEAN",
    "InvalidParam",
    "InvalidSection",
    "Lifting",
    "Monotonicity",
    "MonotoneEnvelope",
    "NumericEnvelopeFailure",
    "OrbitAccumulator",
    "PeriodicOrbitDetected",
    "RotationEstimate",
    "RotationInterval",
    "SectionTooSmall",
    "SimoBracket",
    "build_lifting",
    "counterexample_map",
    "disc_standard",
    "evaluate",
    "evaluate_exact",
    "f_mu",
    "find_maximal_sections",
    "iterate_n",
    "iterate_n_exact",
    "lower_map",
    "orbit_step",
    "pwl_standard",
    "reparametrize_to_zero",
    "rho_constant_section",
    "rho_constant_section_exact",
    "rho_csb",
    "rho_direct",
    "rho_simo",
    "rotation_interval",
    "simo_error_bound",
    "standard_map",
    "tau",
    "upper_map",
    "widest_section",
]

__version__ = "0.1.0"
