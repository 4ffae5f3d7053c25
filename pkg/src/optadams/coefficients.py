"""Optimal coefficients for one-derivative difference formulas exact on
{1, e^{-x}}.

A formula pairs node weights c[0..k] (fixed to the two-point pattern
c[k] = 1, c[k-1] = -1, rest zero) with derivative weights c1 over the grid
x_beta = h*beta; c1 runs to index k-1 for explicit formulas and to k for
implicit ones.  Two independent routes produce the minimum-error-norm c1:

* ``closed_form`` - the analytic solution.  Only the last derivative weight
  survives for explicit formulas, (e^h - 1)/(h e^h); the last two survive
  for implicit ones, both equal to (e^h - 1)/(h (e^h + 1)).
* ``solve_optimal`` - assembles the stationarity system of the constrained
  norm minimization (one row per derivative node plus the exactness
  constraint on e^{-x}, unknowns c1 and the multiplier d) and solves it
  densely.

Their agreement to ~1e-13 over a (kind, k, h) grid is the package's central
correctness check.  ``u_sequence`` exposes the auxiliary sequence U whose
convolution against the d1 stencil reproduces the coefficients index by
index, which pins down the tail amplitudes d+ and d- reported alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernel
from .dense_solver import DenseSystem, solve

__all__ = [
    "DifferenceFormula",
    "FormulaKind",
    "SolverReport",
    "closed_form",
    "closed_form_report",
    "perturbed_formula",
    "reconstruct_c1",
    "rhs_f",
    "rhs_g",
    "solve_optimal",
    "u_convolution",
    "u_sequence",
]


class FormulaKind(Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"


def _c1_top(kind: FormulaKind, k: int) -> int:
    """Largest derivative-node index: k-1 for explicit, k for implicit."""
    return k if kind is FormulaKind.IMPLICIT else k - 1


def _check_kh(k: int, h: float) -> None:
    if not (isinstance(k, int) and k >= 1):
        raise ValueError(f"step count k must be an integer >= 1, got {k!r}")
    if not (math.isfinite(h) and 0.0 < h <= 1.0):
        raise ValueError(f"grid step must satisfy 0 < h <= 1, got {h!r}")


@dataclass(frozen=True)
class DifferenceFormula:
    """Weight sets of a k-step formula on the grid x_beta = h*beta.

    The dataclass checks shapes and finiteness only; the exactness
    constraints are guaranteed by the construction functions and can be
    inspected through ``constraint_residuals`` (tests build deliberately
    non-conforming instances, e.g. the zero formula).
    """

    kind: FormulaKind
    k: int
    h: float
    c: tuple[float, ...]
    c1: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and self.k >= 1):
            raise ValueError(f"step count k must be an integer >= 1, got {self.k!r}")
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise ValueError(f"grid step must be positive, got {self.h!r}")
        c = tuple(float(v) for v in self.c)
        c1 = tuple(float(v) for v in self.c1)
        if len(c) != self.k + 1:
            raise ValueError(f"c must have k+1 = {self.k + 1} entries, got {len(c)}")
        if len(c1) != _c1_top(self.kind, self.k) + 1:
            raise ValueError(
                f"c1 must have {_c1_top(self.kind, self.k) + 1} entries for a "
                f"{self.kind.value} formula with k = {self.k}, got {len(c1)}"
            )
        if not all(math.isfinite(v) for v in c + c1):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "c1", c1)

    @property
    def c1_top(self) -> int:
        return _c1_top(self.kind, self.k)

    def constraint_residuals(self) -> tuple[float, float]:
        """Residuals of exactness on 1 (sum of c) and on e^{-x}."""
        r_const = math.fsum(self.c)
        r_exp = math.fsum(
            self.c[b] * math.exp(-self.h * b) for b in range(self.k + 1)
        ) + self.h * math.fsum(
            self.c1[b] * math.exp(-self.h * b) for b in range(len(self.c1))
        )
        return r_const, r_exp

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "k": self.k,
            "h": self.h,
            "c": list(self.c),
            "c1": list(self.c1),
        }


@dataclass(frozen=True)
class SolverReport:
    """A formula together with the multiplier and tail data of its derivation.

    ``d`` is the stationarity multiplier (the e^{-x} amplitude inside U);
    ``d_plus``/``d_minus`` are the decaying-exponential amplitudes of U on
    the two tails, ``b = (d_plus - d_minus)/2`` the growing-tail split, and
    ``residual`` the max-norm residual of the assembled linear system.
    """

    formula: DifferenceFormula
    d: float
    d_plus: float
    d_minus: float
    b: float
    residual: float

    def to_dict(self) -> dict:
        out = self.formula.to_dict()
        out.update(
            d=self.d,
            d_plus=self.d_plus,
            d_minus=self.d_minus,
            residual=self.residual,
        )
        return out


def _adams_c(k: int) -> tuple[float, ...]:
    c = [0.0] * (k + 1)
    c[k] = 1.0
    c[k - 1] = -1.0
    return tuple(c)


def closed_form(kind: FormulaKind, k: int, h: float) -> DifferenceFormula:
    """Analytic optimal coefficients.

    Explicit: c1[k-1] = (e^h - 1)/(h e^h) = -expm1(-h)/h, rest zero.
    Implicit: c1[k] = c1[k-1] = (e^h - 1)/(h (e^h + 1)) = tanh(h/2)/h, rest
    zero.  Both evaluations stay fully accurate down to h ~ 1e-300.
    """
    _check_kh(k, h)
    if kind is FormulaKind.EXPLICIT:
        c1 = [0.0] * k
        c1[k - 1] = -math.expm1(-h) / h
    else:
        c1 = [0.0] * (k + 1)
        weight = math.tanh(0.5 * h) / h
        c1[k] = weight
        c1[k - 1] = weight
    return DifferenceFormula(kind, k, h, _adams_c(k), tuple(c1))


def rhs_f(kind: FormulaKind, beta: int, k: int, h: float) -> float:
    """Right-hand side of the stationarity row at derivative node beta.

    For beta <= k-1 both kinds share
        (1 - e^h)/4 * (e^{h beta - h k} - e^{-h beta + h k - h});
    the implicit formula adds the node beta = k with value
        (e^h + e^{-h} - 2)/4 = sinh(h/2)^2.
    """
    _check_kh(k, h)
    top = _c1_top(kind, k)
    if not 0 <= beta <= top:
        raise ValueError(
            f"beta = {beta} outside derivative-node range 0..{top} "
            f"({kind.value}, k = {k})"
        )
    if beta == k:
        s = math.sinh(0.5 * h)
        return s * s
    # Factored as -(e^h - 1)/4 * e^{h(k-1-beta)} * (e^{h(2 beta - 2k + 1)} - 1)
    # so no catastrophic cancellation occurs for any (beta, k, h).
    return (
        -0.25
        * math.expm1(h)
        * math.exp(h * (k - 1 - beta))
        * math.expm1(h * (2 * beta - 2 * k + 1))
    )


def rhs_g(k: int, h: float) -> float:
    """Exactness-constraint right-hand side e^{-hk}(e^h - 1) > 0."""
    _check_kh(k, h)
    return math.exp(-h * k) * math.expm1(h)


def _tail_amplitude(formula: DifferenceFormula) -> float:
    """b = h/4 * sum_gamma c1[gamma] e^{h gamma}, the growing-tail split of U."""
    h = formula.h
    return 0.25 * h * math.fsum(
        formula.c1[g] * math.exp(h * g) for g in range(len(formula.c1))
    )


def _stationarity_lhs(formula: DifferenceFormula, d: float, beta: int) -> float:
    h = formula.h
    conv = math.fsum(
        formula.c1[g] * kernel.g2_double_prime(h * (beta - g))
        for g in range(len(formula.c1))
    )
    return h * conv + d * math.exp(-h * beta)


def solve_optimal(kind: FormulaKind, k: int, h: float) -> SolverReport:
    """Derive the optimal coefficients by solving the stationarity system.

    Unknowns are c1[0..top] and the multiplier d; rows are
        h * sum_gamma c1[gamma] g2''(h(beta - gamma)) + d e^{-h beta} = f[beta]
    for beta = 0..top plus the constraint h * sum_gamma c1[gamma] e^{-h gamma} = g.
    The tail amplitudes are recovered from the solved coefficients as
    d+ = d + b, d- = d - b.
    """
    _check_kh(k, h)
    top = _c1_top(kind, k)
    n = top + 2
    a = np.zeros((n, n))
    rhs = np.zeros(n)
    for beta in range(top + 1):
        for gamma in range(top + 1):
            a[beta, gamma] = h * kernel.g2_double_prime(h * (beta - gamma))
        a[beta, n - 1] = math.exp(-h * beta)
        rhs[beta] = rhs_f(kind, beta, k, h)
    for gamma in range(top + 1):
        a[n - 1, gamma] = h * math.exp(-h * gamma)
    rhs[n - 1] = rhs_g(k, h)

    x = solve(DenseSystem(a, rhs))
    residual = float(np.max(np.abs(a @ x - rhs)))
    c1 = tuple(float(v) for v in x[: top + 1])
    d = float(x[n - 1])
    formula = DifferenceFormula(kind, k, h, _adams_c(k), c1)
    b = _tail_amplitude(formula)
    return SolverReport(formula, d=d, d_plus=d + b, d_minus=d - b, b=b, residual=residual)


def closed_form_report(kind: FormulaKind, k: int, h: float) -> SolverReport:
    """Closed-form coefficients packaged with the derived scalars.

    d is recovered from the beta = 0 stationarity row; the residual is the
    max-norm defect of the closed form over the full system (a built-in
    self-check, ~1e-17 in practice).
    """
    formula = closed_form(kind, k, h)
    d = rhs_f(kind, 0, k, h) - _stationarity_lhs(formula, 0.0, 0)
    defects = [
        abs(_stationarity_lhs(formula, d, beta) - rhs_f(kind, beta, k, h))
        for beta in range(formula.c1_top + 1)
    ]
    constraint = h * math.fsum(
        formula.c1[g] * math.exp(-h * g) for g in range(len(formula.c1))
    )
    defects.append(abs(constraint - rhs_g(k, h)))
    b = _tail_amplitude(formula)
    return SolverReport(
        formula, d=d, d_plus=d + b, d_minus=d - b, b=b, residual=max(defects)
    )


def u_sequence(report: SolverReport, beta: int) -> float:
    """Auxiliary sequence U[beta] in its piecewise form.

    Equals the stationarity right-hand side f[beta] on the derivative-node
    window and pure exponential tails outside it:

        U[beta] = -e^{h beta} g/4 + e^{-h beta} d+   below the window,
        U[beta] = +e^{h beta} g/4 + e^{-h beta} d-   above it.

    Must agree everywhere with ``u_convolution``, the defining form.
    """
    f = report.formula
    h = f.h
    if 0 <= beta <= f.c1_top:
        return rhs_f(f.kind, beta, f.k, h)
    g = rhs_g(f.k, h)
    if beta < 0:
        return -0.25 * math.exp(h * beta) * g + math.exp(-h * beta) * report.d_plus
    return 0.25 * math.exp(h * beta) * g + math.exp(-h * beta) * report.d_minus


def u_convolution(report: SolverReport, beta: int) -> float:
    """Defining form of U: h * (c1 * g2''(h*.))[beta] + d e^{-h beta}."""
    return _stationarity_lhs(report.formula, report.d, beta)


def reconstruct_c1(report: SolverReport, beta: int) -> float:
    """h^{-1} (d1 * U)[beta]: reproduces c1 on its window and 0 elsewhere."""
    h = report.formula.h
    return (
        math.fsum(kernel.d1(g, h) * u_sequence(report, beta - g) for g in (-1, 0, 1))
        / h
    )


def perturbed_formula(
    formula: DifferenceFormula, index: int, epsilon: float
) -> DifferenceFormula:
    """Shift c1[index] by epsilon, restoring exactness on e^{-x} through the
    last coefficient (or the one before it when index is the last).

    Used by the minimum-norm checks: any such perturbation must not decrease
    the squared error norm.
    """
    c1 = list(formula.c1)
    if len(c1) < 2:
        raise ValueError("need at least two derivative weights to compensate")
    if not 0 <= index < len(c1):
        raise ValueError(f"index {index} outside 0..{len(c1) - 1}")
    comp = len(c1) - 1 if index != len(c1) - 1 else len(c1) - 2
    c1[index] += epsilon
    c1[comp] -= epsilon * math.exp(formula.h * (comp - index))
    return DifferenceFormula(formula.kind, formula.k, formula.h, formula.c, tuple(c1))
