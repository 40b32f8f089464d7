"""Error-probability evaluation for entanglement-assisted detection of
fading targets via the correlation-to-displacement conversion receiver."""

__version__ = "0.1.0"

from .photon_stats import (
    ConditionalIdlerStats,
    Fixed,
    FockPmf,
    Rayleigh,
    ScenarioParams,
    UniformPhase,
    idler_stats,
    phase_averaged_displaced_thermal_pmf,
    thermal_pmf,
)
from .discrimination import (
    DiscriminationResult,
    helstrom_diagonal,
    optimal_threshold,
    qcb_diagonal,
    threshold_error,
)
from .cd_module import (
    AsymptoticQuantities,
    asymptotics,
    finite_exponent,
    pcd_exact,
    pcd_largeM,
    pcd_poisson_threshold,
)
from .baselines import (
    ExponentEstimate,
    ci_error_exponent,
    ci_helstrom,
    ci_roc,
    ng_lower_bound,
)
from .fading import (
    KappaQuadrature,
    rayleigh_achievable,
    rayleigh_lower_bound,
    rayleigh_quadrature,
)

__all__ = [
    "AsymptoticQuantities",
    "ConditionalIdlerStats",
    "DiscriminationResult",
    "ExponentEstimate",
    "Fixed",
    "FockPmf",
    "KappaQuadrature",
    "Rayleigh",
    "ScenarioParams",
    "UniformPhase",
    "asymptotics",
    "ci_error_exponent",
    "ci_helstrom",
    "ci_roc",
    "finite_exponent",
    "helstrom_diagonal",
    "idler_stats",
    "ng_lower_bound",
    "optimal_threshold",
    "pcd_exact",
    "pcd_largeM",
    "pcd_poisson_threshold",
    "phase_averaged_displaced_thermal_pmf",
    "qcb_diagonal",
    "rayleigh_achievable",
    "rayleigh_lower_bound",
    "rayleigh_quadrature",
    "thermal_pmf",
    "threshold_error",
]
