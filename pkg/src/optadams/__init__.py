"""Optimal exponentially fitted Adams-type difference formulas on [0, 1].

The package derives the derivative weights that minimize the worst-case
error of a two-node difference formula over the unit ball of functions with
square-integrable phi'' + phi' (a space whose null directions are 1 and
e^{-x}), both in closed form and through the stationarity linear system;
evaluates the resulting error-functional norms exactly; runs the induced
one-step integrators against Euler and trapezoid baselines; and ships a
benchmark/verification harness plus a CLI (``optadams``).
"""

from . import bench, cli, coefficients, dense_solver, error_norm, kernel, stepping, verify
from .bench import (
    EocReport,
    ErrorTable,
    builtin_problems,
    emit,
    eoc,
    get_problem,
    reference_trajectory,
    run_case,
)
from .coefficients import (
    DifferenceFormula,
    FormulaKind,
    SolverReport,
    closed_form,
    closed_form_report,
    perturbed_formula,
    reconstruct_c1,
    rhs_f,
    rhs_g,
    solve_optimal,
    u_convolution,
    u_sequence,
)
from .dense_solver import DenseSystem, SingularMatrixError
from .error_norm import (
    TestFunction,
    apply_functional,
    extremal_function,
    extremal_test_function,
    norm_sq_closed,
    norm_sq_quadratic,
    sobolev_norm,
)
from .kernel import DiscreteSequence, convolve, d1, d1_sequence, g2, g2_double_prime, g2_prime
from .stepping import (
    SCHEMES,
    ImplicitSolveConfig,
    IvpProblem,
    NoConvergenceError,
    NonFiniteStateError,
    Scheme,
    SolveStrategy,
    Trajectory,
    integrate,
    scheme_from_formula,
    step_euler,
    step_optimal_explicit,
    step_optimal_implicit,
    step_trapezoid,
    trajectory_csv,
)

__version__ = "0.1.0"
