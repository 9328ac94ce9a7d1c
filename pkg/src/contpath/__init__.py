"""Continuation (homotopy) optimization with learned solution paths."""

from .bench import Benchmark, SingularGradient, UnsupportedProblem, benchmark_problem
from .budget import Budget, BudgetExhausted
from .gradest import GradEstimate, GradMode, es_grad, finite_diff_grad, gh_zeroth_grad, homotopy_grad
from .harness import RunConfig, run_bench, run_model_size_sweep, run_trial
from .homotopy import (HomotopyProblem, InvalidParam, Schedule, blend_homotopy, gaussian_homotopy,
                       gh_monte_carlo, make_schedule)
from .optimizers import (NonFiniteIterate, OptimizerResult, SlghConfig, classical_homotopy,
                         gradient_descent, slgh)
from .pathmodel import (CplTrainConfig, InvalidArchitecture, MlpPathModel, NonFiniteLoss, PathCurve,
                        cpl_train, local_search, model_backward, model_forward, model_init, path_sweep)
from .rng import RngStream
from .serialize import ParseError, deserialize_model, serialize_model
from .trace import RunTrace

__version__ = "0.1.0"

__all__ = [
    "Benchmark", "Budget", "BudgetExhausted", "CplTrainConfig", "GradEstimate", "GradMode",
    "HomotopyProblem", "InvalidArchitecture", "InvalidParam", "MlpPathModel", "NonFiniteIterate",
    "NonFiniteLoss", "OptimizerResult", "ParseError", "PathCurve", "RngStream", "RunConfig",
    "RunTrace", "Schedule", "SingularGradient", "SlghConfig", "UnsupportedProblem",
    "benchmark_problem", "blend_homotopy", "classical_homotopy", "cpl_train", "deserialize_model",
    "es_grad", "finite_diff_grad", "gaussian_homotopy", "gh_monte_carlo", "gh_zeroth_grad",
    "gradient_descent", "homotopy_grad", "local_search", "make_schedule", "model_backward",
    "model_forward", "model_init", "path_sweep", "run_bench", "run_model_size_sweep", "run_trial",
    "serialize_model", "slgh",
]
