"""Embedded verification suite.

Re-derives and checks the package's core identities at runtime so end users
can confirm them without the test suite: the discrete-delta property of the
d1 stencil, agreement of the solved and closed-form coefficients, the norm
identities and their small-step asymptotics, exactness of the fitted
steppers on decaying exponentials, the representer identity, and the
minimum-norm property under random constraint-preserving perturbations.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import bench, coefficients, error_norm, kernel
from .coefficients import FormulaKind
from .stepping import integrate

__all__ = ["CheckResult", "run_all"]

_KH_GRID = [
    (kind, k, h)
    for kind in FormulaKind
    for k in range(1, 11)
    for h in (0.2, 0.1, 0.05, 0.01)
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_discrete_delta() -> CheckResult:
    worst = 0.0
    for h in (0.2, 0.1, 0.01):
        for beta in range(-50, 51):
            value = math.fsum(
                kernel.d1(g, h) * kernel.g2_double_prime(h * (beta - g))
                for g in (-1, 0, 1)
            )
            worst = max(worst, abs(value - (1.0 if beta == 0 else 0.0)))
    return CheckResult(
        "discrete-delta", worst <= 1e-12, f"max deviation {worst:.2e} (tol 1e-12)"
    )


def check_coefficients() -> CheckResult:
    worst_dev = worst_interior = worst_constraint = 0.0
    for kind, k, h in _KH_GRID:
        solved = coefficients.solve_optimal(kind, k, h).formula
        closed = coefficients.closed_form(kind, k, h)
        worst_dev = max(
            worst_dev, max(abs(a - b) for a, b in zip(solved.c1, closed.c1))
        )
        interior = solved.c1[: k - 1]
        if interior:
            worst_interior = max(worst_interior, max(abs(v) for v in interior))
        for formula in (solved, closed):
            worst_constraint = max(
                worst_constraint, *map(abs, formula.constraint_residuals())
            )
    passed = worst_dev <= 1e-11 and worst_interior <= 1e-11 and worst_constraint <= 1e-12
    return CheckResult(
        "coefficient-agreement",
        passed,
        f"solver vs closed {worst_dev:.2e} (tol 1e-11), interior "
        f"{worst_interior:.2e} (tol 1e-11), constraints {worst_constraint:.2e} "
        f"(tol 1e-12)",
    )


def check_norms() -> CheckResult:
    worst = 0.0
    for kind, k, h in _KH_GRID:
        quad = error_norm.norm_sq_quadratic(coefficients.closed_form(kind, k, h))
        closed = error_norm.norm_sq_closed(kind, h)
        worst = max(worst, abs(quad - closed) / (1.0 + h))
    ratio_exp = error_norm.norm_sq_closed(FormulaKind.EXPLICIT, 1e-3) / 1e-9
    ratio_imp = error_norm.norm_sq_closed(FormulaKind.IMPLICIT, 1e-3) / 1e-9
    asympt_ok = (
        abs(ratio_exp * 3.0 - 1.0) <= 0.05 and abs(ratio_imp * 12.0 - 1.0) <= 0.05
    )
    passed = worst <= 1e-12 and asympt_ok
    return CheckResult(
        "norm-identities",
        passed,
        f"quadratic vs closed {worst:.2e} (tol 1e-12 scaled), h^3 ratios "
        f"{ratio_exp:.6f} ~ 1/3, {ratio_imp:.6f} ~ 1/12",
    )


def check_exactness() -> CheckResult:
    problem = bench.get_problem("P1")
    worst = 0.0
    for scheme in ("optimal_explicit", "optimal_implicit"):
        for n in (5, 10, 100):
            table = bench.run_case(problem, scheme, n)
            worst = max(worst, table.max_error)
    euler_final = bench.run_case(problem, "euler", 10).final_error
    euler_ok = abs(euler_final - 1.9201e-2) <= 1e-6
    passed = worst <= 1e-12 and euler_ok
    return CheckResult(
        "stepper-exactness",
        passed,
        f"fitted schemes max error {worst:.2e} (tol 1e-12); euler final error "
        f"{euler_final:.6e} (expected 1.9201e-2 +/- 1e-6)",
    )


def check_representer() -> CheckResult:
    worst = 0.0
    for kind in FormulaKind:
        formula = coefficients.closed_form(kind, 3, 0.1)
        paired = error_norm.apply_functional(
            formula, error_norm.extremal_test_function(formula)
        )
        worst = max(worst, abs(paired - error_norm.norm_sq_quadratic(formula)))
    return CheckResult(
        "representer-identity", worst <= 1e-10, f"max deviation {worst:.2e} (tol 1e-10)"
    )


def check_minimum_norm(seed: int = 20260810) -> CheckResult:
    rng = random.Random(seed)
    worst_drop = 0.0
    for kind in FormulaKind:
        formula = coefficients.closed_form(kind, 5, 0.1)
        base = error_norm.norm_sq_quadratic(formula)
        for _ in range(200):
            index = rng.randrange(len(formula.c1))
            epsilon = rng.choice((-1.0, 1.0)) * 1e-3
            perturbed = coefficients.perturbed_formula(formula, index, epsilon)
            worst_drop = max(
                worst_drop, base - error_norm.norm_sq_quadratic(perturbed)
            )
    return CheckResult(
        "minimum-norm",
        worst_drop <= 0.0,
        f"largest norm decrease {worst_drop:.2e} over 400 perturbations "
        "(must be <= 0)",
    )


def run_all(seed: int = 20260810) -> list[CheckResult]:
    return [
        check_discrete_delta(),
        check_coefficients(),
        check_norms(),
        check_exactness(),
        check_representer(),
        check_minimum_norm(seed),
    ]
