"""Three-party evolutionary game with a fixed decision delay."""

__version__ = "0.1.0"

from .dde import IntegratorConfig, Trajectory, detect_convergence, history_lookup, integrate
from .errors import DomainError, IntegrationError, NumericError, ScenarioError
from .game import (
    GameParams,
    PayoffTriple,
    StrategyProfile,
    StrategyState,
    delayed_rhs,
    expected_utilities_iaea,
    expected_utilities_japan,
    expected_utilities_others,
    payoff_lookup,
    replicator_rhs,
)
from .lab import (
    Axis,
    Scenario,
    SurfaceResult,
    SweepSpec,
    delay_comparison,
    run_condition,
    run_multi_init,
    slice_extract,
    surface_sweep,
)
from .scenario_io import (
    load_scenario,
    parse_scenario,
    shipped_scenario,
    write_surface_grid,
    write_trajectory_csv,
)
from .stability import (
    Verdict,
    classify,
    enumerate_equilibria,
    lambert_w0,
    linearized_coefficients,
    rightmost_root,
)

__all__ = [
    "__version__",
    "Axis",
    "DomainError",
    "GameParams",
    "IntegrationError",
    "IntegratorConfig",
    "NumericError",
    "PayoffTriple",
    "Scenario",
    "ScenarioError",
    "StrategyProfile",
    "StrategyState",
    "SurfaceResult",
    "SweepSpec",
    "Trajectory",
    "Verdict",
    "classify",
    "delay_comparison",
    "delayed_rhs",
    "detect_convergence",
    "enumerate_equilibria",
    "expected_utilities_iaea",
    "expected_utilities_japan",
    "expected_utilities_others",
    "history_lookup",
    "integrate",
    "lambert_w0",
    "linearized_coefficients",
    "load_scenario",
    "parse_scenario",
    "payoff_lookup",
    "replicator_rhs",
    "rightmost_root",
    "run_condition",
    "run_multi_init",
    "shipped_scenario",
    "slice_extract",
    "surface_sweep",
    "write_surface_grid",
    "write_trajectory_csv",
]
