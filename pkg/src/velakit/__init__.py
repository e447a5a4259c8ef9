"""velakit: space-agency budget econometrics and Mars mission cost sharing.

The library side covers the full small-sample cointegration workflow (panel
repair, unit-root testing, lag selection, rank testing, error-correction
estimation, specification search) plus seeded Monte Carlo validation; the
mission side turns pooled agency budgets into an apportioned station plan.
"""

__version__ = "0.1.0"

from .errors import (
    CorruptedBundleError,
    NoAdmissibleSpecError,
    NonNormalizableError,
    NotPositiveDefiniteError,
    NumericalError,
    SingularMatrixError,
    ValidationError,
    VelakitError,
)
from .linalg import (
    OlsFit,
    cholesky_factor,
    general_eigenvalues,
    ols_fit,
    symmetric_eigendecomposition,
)
from .panel import (
    CSV_COLUMNS,
    VARIABLES,
    LogLevelPanel,
    MacroPanel,
    interpolate_missing,
    load_panel,
    to_log_levels,
)
from .unit_root import AdfResult, adf_test, default_adf_lags
from .lag_selection import LagSelectionTable, VarFit, fit_var, information_criteria, select_lag
from .johansen import (
    MomentMatrices,
    RankTestResult,
    RESTRICTED_CONSTANT,
    UNRESTRICTED_CONSTANT,
    concentrate,
    rank_test,
    solve_cointegration_eigenproblem,
)
from .vecm import (
    CointegratingEquation,
    VecmModel,
    estimate_vecm,
    normalize_cointegrating_equation,
    predict_one_step,
    stability_check,
)
from .spec_search import (
    SpecificationReport,
    build_correlation_table,
    enumerate_specifications,
    fit_specifications,
    run_specification_search,
)
from .synthetic import (
    SyntheticSpec,
    generate_vecm_data,
    monte_carlo_critical_values,
    random_walk_spec,
    run_recovery_study,
    study_spec,
)
from .reference_data import (
    HabitatModule,
    LaunchVehicle,
    MarsLaunch,
    load_reference_tables,
    query_super_heavy,
)
from .mission import (
    AgencyBudget,
    MissionConfig,
    MissionPlan,
    allocate,
    budget_pool,
    largest_remainder,
    load_config,
    total_cost,
)

__all__ = [name for name in dir() if not name.startswith("_")]
