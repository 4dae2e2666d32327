"""koscope — a numerical laboratory for singular Cauchy problems.

The package integrates the weakly singular initial value problem

    v'(r) = C * r^(-q) * (integral_0^r s^(tau-1) g(v(s)) ds)^(1/theta),
    v(0) = a,

decides whether solutions stay global or blow up at a finite radius,
classifies their regularity at the origin, and maps radial fully nonlinear
PDE problems (k-Hessian and product-of-eigenvalue-sums operators, with
power weights and gradient factors) onto that scalar problem so existence
theory and numerics can be compared side by side.
"""

from .core import (
    Aborted,
    BlowUp,
    CauchyParams,
    ClosedForm,
    ConfigError,
    Constant,
    Exponential,
    Global,
    NumericalError,
    PdeSpec,
    Power,
    RegularityClass,
    SolutionProfile,
    Tabulated,
    TailExponent,
    Verdict,
    antideriv_g,
    dumps,
    eval_g,
    from_jsonable,
    log_antideriv_g,
    raise_to_power,
    to_jsonable,
)
from .radial_operators import (
    RadialPoint,
    in_gamma_k,
    in_p_k,
    log_pi_k,
    log_pik_normalized,
    log_sk_normalized,
    pi_k,
    pik_at_zero,
    pik_radial,
    radial_eigs,
    radial_eigs_at_zero,
    sigma_k,
    sk_at_zero,
    sk_radial,
)
from .ko_checker import KappaSpec, ko_kappa, ko_standard, tail_exponent
from .cauchy_solver import (
    LimitEstimate,
    LimitReport,
    SolveControl,
    asymptotic_seed,
    classify_regularity,
    energy_oracle_radius,
    euler_construct,
    euler_step_bounds,
    limit_checks,
    residual_identity,
    solve,
)
from .pde_mapper import (
    ExistenceVerdict,
    MappedProblem,
    RegimeReport,
    TableRow,
    duality_partner,
    existence_verdict,
    map_to_cauchy,
    table_rows,
)
from .subsolution_verifier import (
    ExampleEntry,
    ExpQuadratic,
    PowerThreeHalves,
    Quadratic,
    Quartic,
    VerifyReport,
    builtin_examples,
    verify_profile,
)
from . import plots  # noqa: F401  (re-exported for the report path)

__version__ = "1.0.0"

__all__ = [
    "Aborted",
    "BlowUp",
    "CauchyParams",
    "ClosedForm",
    "ConfigError",
    "Constant",
    "Exponential",
    "ExampleEntry",
    "ExistenceVerdict",
    "ExpQuadratic",
    "Global",
    "KappaSpec",
    "LimitEstimate",
    "LimitReport",
    "MappedProblem",
    "NumericalError",
    "PdeSpec",
    "Power",
    "PowerThreeHalves",
    "Quadratic",
    "Quartic",
    "RadialPoint",
    "RegimeReport",
    "RegularityClass",
    "SolutionProfile",
    "SolveControl",
    "Tabulated",
    "TableRow",
    "TailExponent",
    "Verdict",
    "VerifyReport",
    "antideriv_g",
    "asymptotic_seed",
    "builtin_examples",
    "classify_regularity",
    "duality_partner",
    "dumps",
    "energy_oracle_radius",
    "euler_construct",
    "euler_step_bounds",
    "eval_g",
    "existence_verdict",
    "from_jsonable",
    "in_gamma_k",
    "in_p_k",
    "ko_kappa",
    "ko_standard",
    "limit_checks",
    "log_antideriv_g",
    "log_pi_k",
    "log_pik_normalized",
    "log_sk_normalized",
    "map_to_cauchy",
    "pi_k",
    "pik_at_zero",
    "pik_radial",
    "radial_eigs",
    "radial_eigs_at_zero",
    "raise_to_power",
    "residual_identity",
    "sigma_k",
    "sk_at_zero",
    "sk_radial",
    "solve",
    "table_rows",
    "tail_exponent",
    "to_jsonable",
    "verify_profile",
]
