from .config import VARIANTS, ExperimentConfig, load_config
from .experiment import CompareTable, RunResult, compare_variants, run_experiment, sweep
from .metrics import NOT_CONVERGED, asymptotic_mse, convergence_iterations, moving_average
from .output import emit_plot, export_csv, read_csv

__all__ = [
    "NOT_CONVERGED",
    "VARIANTS",
    "CompareTable",
    "ExperimentConfig",
    "RunResult",
    "asymptotic_mse",
    "compare_variants",
    "convergence_iterations",
    "emit_plot",
    "export_csv",
    "load_config",
    "moving_average",
    "read_csv",
    "run_experiment",
    "sweep",
]
