"""One-step integrators for scalar initial-value problems on [0, 1].

Four schemes share the recurrence

    y_{n+1} = y_n + new_weight * f(x_{n+1}, y_{n+1}) + old_weight * f(x_n, y_n)

on the uniform grid x_n = n/N:

    euler             new = 0,          old = h
    optimal_explicit  new = 0,          old = 1 - e^{-h}
    optimal_implicit  new = tanh(h/2),  old = tanh(h/2)
    trapezoid         new = h/2,        old = h/2

The two optimal schemes are the one-step recurrences induced by the optimal
coefficient sets (all interior weights vanish, so no multistep startup is
ever needed); they reproduce any solution lying in span{1, e^{-x}} to
machine precision.  Implicit steps are resolved by fixed-point iteration
seeded with an explicit predictor - the weight is < 1, so the map contracts
for moderate Lipschitz constants - with an optional Newton fallback using a
finite-difference slope for stiff right-hand sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

__all__ = [
    "DEFAULT_CONFIG",
    "ImplicitSolveConfig",
    "IvpProblem",
    "NoConvergenceError",
    "NonFiniteStateError",
    "SCHEMES",
    "Scheme",
    "SolveStrategy",
    "Trajectory",
    "explicit_fitted_weight",
    "implicit_fitted_weight",
    "integrate",
    "scheme_from_formula",
    "step_euler",
    "step_optimal_explicit",
    "step_optimal_implicit",
    "step_trapezoid",
    "trajectory_csv",
]

Rhs = Callable[[float, float], float]


class NonFiniteStateError(RuntimeError):
    """A step produced a non-finite state; ``step_index`` is attached by
    ``integrate`` when the failure happens inside a grid sweep."""

    step_index: Optional[int] = None


class NoConvergenceError(RuntimeError):
    """The implicit solve exhausted its iteration budget; ``step_index`` is
    attached by ``integrate``."""

    step_index: Optional[int] = None


class SolveStrategy(Enum):
    FIXED_POINT = "fixed_point"
    NEWTON_FALLBACK = "newton_fallback"


@dataclass(frozen=True)
class ImplicitSolveConfig:
    """How to resolve the implicit per-step equation."""

    tolerance: float = 1e-13
    max_iterations: int = 50
    strategy: SolveStrategy = SolveStrategy.NEWTON_FALLBACK

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tolerance) and self.tolerance > 0.0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be >= 1, got {self.max_iterations!r}"
            )


DEFAULT_CONFIG = ImplicitSolveConfig()


@dataclass(frozen=True)
class IvpProblem:
    """Scalar problem y' = rhs(x, y) on [0, 1] with y(0) = y0.

    ``exact``, when given, must match the initial value at 0.
    """

    name: str
    rhs: Rhs
    y0: float
    exact: Optional[Callable[[float], float]] = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.y0):
            raise ValueError(f"initial value must be finite, got {self.y0!r}")
        if self.exact is not None and abs(self.exact(0.0) - self.y0) > 1e-12:
            raise ValueError(
                f"exact(0) = {self.exact(0.0)!r} disagrees with y0 = {self.y0!r}"
            )


@dataclass(eq=False)
class Trajectory:
    """Grid values y_0..y_N on x_n = n/N plus per-step iteration counts for
    implicit schemes."""

    scheme: str
    n_steps: int
    values: np.ndarray
    implicit_iterations: Optional[np.ndarray] = None


def _checked(value: float) -> float:
    if not math.isfinite(value):
        raise NonFiniteStateError(f"step produced a non-finite value: {value!r}")
    return value


def explicit_fitted_weight(h: float) -> float:
    """(e^h - 1)/e^h = 1 - e^{-h}; tends to h from below as h -> 0."""
    return -math.expm1(-h)


def implicit_fitted_weight(h: float) -> float:
    """(e^h - 1)/(e^h + 1) = tanh(h/2); differs from h/2 by O(h^3)."""
    return math.tanh(0.5 * h)


def step_euler(x: float, y: float, h: float, rhs: Rhs) -> float:
    """y + h f(x, y)."""
    return _checked(y + h * rhs(x, y))


def step_optimal_explicit(x: float, y: float, h: float, rhs: Rhs) -> float:
    """y + (1 - e^{-h}) f(x, y): the forward step fitted to e^{-x}."""
    return _checked(y + explicit_fitted_weight(h) * rhs(x, y))


def step_optimal_implicit(
    x: float,
    y: float,
    h: float,
    rhs: Rhs,
    cfg: ImplicitSolveConfig = DEFAULT_CONFIG,
) -> tuple[float, int]:
    """Solve z = y + tanh(h/2) (f(x+h, z) + f(x, y)); returns (z, iterations)."""
    w = implicit_fitted_weight(h)
    return _solve_implicit(x, y, h, rhs, w, w, cfg)


def step_trapezoid(
    x: float,
    y: float,
    h: float,
    rhs: Rhs,
    cfg: ImplicitSolveConfig = DEFAULT_CONFIG,
) -> tuple[float, int]:
    """Solve z = y + h/2 (f(x+h, z) + f(x, y)); returns (z, iterations)."""
    return _solve_implicit(x, y, h, rhs, 0.5 * h, 0.5 * h, cfg)


def _solve_implicit(
    x: float,
    y: float,
    h: float,
    rhs: Rhs,
    new_weight: float,
    old_weight: float,
    cfg: ImplicitSolveConfig,
) -> tuple[float, int]:
    f_old = rhs(x, y)
    known = y + old_weight * f_old
    x_new = x + h
    predictor = y + (old_weight + new_weight) * f_old
    iterations = 0

    z = predictor
    for _ in range(cfg.max_iterations):
        z_next = known + new_weight * rhs(x_new, z)
        iterations += 1
        if not math.isfinite(z_next):
            break  # diverging; only Newton can save this
        if abs(z_next - z) <= cfg.tolerance:
            return _checked(z_next), iterations
        z = z_next
    if cfg.strategy is SolveStrategy.FIXED_POINT:
        raise NoConvergenceError(
            f"fixed-point iteration did not reach |dz| <= {cfg.tolerance:g} "
            f"within {cfg.max_iterations} iterations"
        )

    # Newton restart from the predictor; slope by forward difference.
    z = predictor
    fd_step = max(1e-7, 1e-7 * abs(y))
    for _ in range(cfg.max_iterations):
        r = z - known - new_weight * rhs(x_new, z)
        r_shift = (z + fd_step) - known - new_weight * rhs(x_new, z + fd_step)
        slope = (r_shift - r) / fd_step
        if slope == 0.0 or not math.isfinite(slope):
            break
        delta = -r / slope
        z = z + delta
        iterations += 1
        if not math.isfinite(z):
            break
        if abs(delta) <= cfg.tolerance:
            return _checked(z), iterations
    raise NoConvergenceError(
        f"implicit solve failed after {iterations} total iterations "
        f"(tolerance {cfg.tolerance:g})"
    )


@dataclass(frozen=True)
class Scheme:
    """One-step recurrence described by its two derivative weights."""

    name: str
    implicit: bool
    new_weight: Callable[[float], float]
    old_weight: Callable[[float], float]


SCHEMES: dict[str, Scheme] = {
    "euler": Scheme("euler", False, lambda h: 0.0, lambda h: h),
    "optimal_explicit": Scheme(
        "optimal_explicit", False, lambda h: 0.0, explicit_fitted_weight
    ),
    "optimal_implicit": Scheme(
        "optimal_implicit", True, implicit_fitted_weight, implicit_fitted_weight
    ),
    "trapezoid": Scheme("trapezoid", True, lambda h: 0.5 * h, lambda h: 0.5 * h),
}


def scheme_from_formula(formula, name: Optional[str] = None) -> Scheme:
    """Build the one-step recurrence encoded by a coefficient set.

    The node weights must carry the two-point pattern (c[k] = 1,
    c[k-1] = -1, rest zero) and all interior derivative weights must vanish;
    the surviving h*c1[...] become the step weights.  The scheme is only
    valid at the formula's own step and refuses any other.
    """
    tol = 1e-9
    k = formula.k
    if abs(formula.c[k] - 1.0) > tol or abs(formula.c[k - 1] + 1.0) > tol:
        raise ValueError("node weights do not have the two-point pattern")
    if any(abs(v) > tol for v in formula.c[: k - 1]):
        raise ValueError("interior node weights must vanish")
    interior_c1 = formula.c1[: k - 1]
    if any(abs(v) > tol for v in interior_c1):
        raise ValueError("interior derivative weights must vanish")

    h0 = formula.h
    if formula.c1_top == k:  # implicit
        new_value = h0 * formula.c1[k]
        old_value = h0 * formula.c1[k - 1]
        implicit = True
    else:
        new_value = 0.0
        old_value = h0 * formula.c1[k - 1]
        implicit = False

    def pinned(value: float) -> Callable[[float], float]:
        def weight(h: float) -> float:
            if not math.isclose(h, h0, rel_tol=1e-12, abs_tol=0.0):
                raise ValueError(
                    f"formula-derived scheme is tied to h = {h0!r}, got {h!r}"
                )
            return value

        return weight

    return Scheme(
        name or f"formula_{formula.kind.value}",
        implicit,
        pinned(new_value),
        pinned(old_value),
    )


def integrate(
    problem: IvpProblem,
    scheme: Union[str, Scheme],
    n_steps: int,
    cfg: Optional[ImplicitSolveConfig] = None,
) -> Trajectory:
    """March y' = rhs across [0, 1] in N uniform steps.

    Abscissas are recomputed as n*h rather than accumulated, so there is no
    drift over long sweeps.  Step failures carry the failing index on the
    raised exception.
    """
    if isinstance(scheme, str):
        try:
            scheme = SCHEMES[scheme]
        except KeyError:
            raise ValueError(
                f"unknown scheme {scheme!r}; available: {sorted(SCHEMES)}"
            ) from None
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps!r}")
    cfg = cfg or DEFAULT_CONFIG
    h = 1.0 / n_steps
    new_w = scheme.new_weight(h)
    old_w = scheme.old_weight(h)

    values = np.empty(n_steps + 1)
    values[0] = problem.y0
    iterations = np.zeros(n_steps, dtype=np.int64) if scheme.implicit else None
    for n in range(n_steps):
        x = n * h
        y = float(values[n])
        try:
            if scheme.implicit:
                values[n + 1], iterations[n] = _solve_implicit(
                    x, y, h, problem.rhs, new_w, old_w, cfg
                )
            else:
                values[n + 1] = _checked(y + old_w * problem.rhs(x, y))
        except (NonFiniteStateError, NoConvergenceError) as exc:
            exc.step_index = n
            raise
    return Trajectory(scheme.name, n_steps, values, iterations)


def trajectory_csv(trajectory: Trajectory, problem: IvpProblem) -> str:
    """CSV rows ``n,x,y,exact,abs_error``; the last two stay empty when the
    problem has no closed-form solution."""
    lines = ["n,x,y,exact,abs_error"]
    h = 1.0 / trajectory.n_steps
    for n in range(trajectory.n_steps + 1):
        x = n * h
        y = float(trajectory.values[n])
        if problem.exact is not None:
            target = problem.exact(x)
            lines.append(f"{n},{x!r},{y!r},{target!r},{abs(y - target)!r}")
        else:
            lines.append(f"{n},{x!r},{y!r},,")
    return "\n".join(lines) + "\n"
