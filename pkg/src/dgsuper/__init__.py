"""Upwind DG for u_t + u_x = 0 with superconvergent initial discretizations."""
from .basis import gauss_rule, legendre_eval, radau_points
from .correction import build_correction_table, build_interpolant, initialize
from .experiment import ExperimentConfig, run_experiment
from .field import ModalField, gauss_radau_project, l2_project
from .mesh import Mesh1D, split_mesh, uniform_mesh
from .metrics import ErrorReport, all_errors, rates
from .operator import BoundaryCondition, dg_rhs
from .problems import builtin_problems, get_problem
from .smooth import SmoothFunction
from .timestep import RK4, SSPRK33, StepPolicy, integrate

__version__ = "0.1.0"

__all__ = [
    "BoundaryCondition", "ErrorReport", "ExperimentConfig", "Mesh1D", "ModalField", "RK4",
    "SSPRK33", "SmoothFunction", "StepPolicy", "all_errors", "build_correction_table",
    "build_interpolant", "builtin_problems", "dg_rhs", "gauss_radau_project", "gauss_rule",
    "get_problem", "initialize", "integrate", "l2_project", "legendre_eval", "radau_points",
    "rates", "run_experiment", "split_mesh", "uniform_mesh",
]
