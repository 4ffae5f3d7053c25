"""Benchmark harness: problem registry, per-node error tables, empirical
convergence orders, and deterministic CSV/JSON emission.

Problems without a closed-form solution are graded against a trapezoid
reference on a much finer grid (N = 2^16 with the Newton-enabled strategy);
benchmark grids must divide the reference grid so nodes align exactly,
which is why the default grids are powers of two.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .stepping import (
    DEFAULT_CONFIG,
    ImplicitSolveConfig,
    IvpProblem,
    Scheme,
    SolveStrategy,
    Trajectory,
    integrate,
)

__all__ = [
    "DEFAULT_GRIDS",
    "EOC_HEADER",
    "ERROR_TABLE_HEADER",
    "EXACT_SENTINEL",
    "EocReport",
    "ErrorTable",
    "REFERENCE_STEPS",
    "builtin_problems",
    "emit",
    "eoc",
    "get_problem",
    "parse",
    "reference_trajectory",
    "run_case",
]

ERROR_TABLE_HEADER = "problem,scheme,N,n,x,y,exact,abs_error"
EOC_HEADER = "problem,scheme,N,final_error,order"

# Final-node errors below this are solver/rounding noise; order estimates
# from them are meaningless and get the sentinel instead.
ERROR_FLOOR = 1e-14
EXACT_SENTINEL = "exact"

REFERENCE_STEPS = 2**16
DEFAULT_GRIDS = (16, 32, 64, 128)


@dataclass(frozen=True)
class ErrorTable:
    """Per-node absolute errors of one (problem, scheme, N) run.

    ``exact_values`` holds the comparison targets: the closed-form solution
    when the problem has one, reference-trajectory values otherwise.
    """

    problem: str
    scheme: str
    n_steps: int
    per_node_error: tuple[float, ...]
    max_error: float
    final_error: float
    values: tuple[float, ...]
    exact_values: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "scheme": self.scheme,
            "N": self.n_steps,
            "per_node_error": list(self.per_node_error),
            "max_error": self.max_error,
            "final_error": self.final_error,
            "values": list(self.values),
            "exact_values": list(self.exact_values),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ErrorTable":
        return cls(
            problem=data["problem"],
            scheme=data["scheme"],
            n_steps=data["N"],
            per_node_error=tuple(data["per_node_error"]),
            max_error=data["max_error"],
            final_error=data["final_error"],
            values=tuple(data["values"]),
            exact_values=tuple(data["exact_values"]),
        )


@dataclass(frozen=True)
class EocReport:
    """Final-node errors over a refinement path and the implied orders.

    orders[i] = log(errors[i]/errors[i+1]) / log(grid[i+1]/grid[i]); entries
    degenerate to the string sentinel ``"exact"`` when an error sits below
    the noise floor.
    """

    problem: str
    scheme: str
    grid: tuple[int, ...]
    errors: tuple[float, ...]
    orders: tuple[Union[float, str], ...]

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "scheme": self.scheme,
            "grid": list(self.grid),
            "errors": list(self.errors),
            "orders": list(self.orders),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EocReport":
        return cls(
            problem=data["problem"],
            scheme=data["scheme"],
            grid=tuple(data["grid"]),
            errors=tuple(data["errors"]),
            orders=tuple(data["orders"]),
        )


def builtin_problems() -> list[IvpProblem]:
    """The default suite: three decaying/growing problems with closed-form
    solutions plus one mildly stiff problem graded by reference."""
    return [
        IvpProblem("P1", lambda x, y: -y, 1.0, exact=lambda x: math.exp(-x)),
        IvpProblem(
            "P2",
            lambda x, y: -y + math.sin(x),
            1.0,
            exact=lambda x: 0.5 * (math.sin(x) - math.cos(x)) + 1.5 * math.exp(-x),
        ),
        IvpProblem(
            "P3",
            lambda x, y: y - x * x + 1.0,
            0.5,
            exact=lambda x: (x + 1.0) ** 2 - 0.5 * math.exp(x),
        ),
        IvpProblem("P4", lambda x, y: -50.0 * (y - math.cos(x)), 0.0),
    ]


def get_problem(name: str) -> IvpProblem:
    for problem in builtin_problems():
        if problem.name == name:
            return problem
    available = [p.name for p in builtin_problems()]
    raise ValueError(f"unknown problem {name!r}; available: {available}")


def reference_trajectory(
    problem: IvpProblem, n_steps: int = REFERENCE_STEPS
) -> Trajectory:
    """Second-order trapezoid sweep on a grid far finer than any benchmark
    grid, with the Newton-enabled strategy for stiff right-hand sides."""
    cfg = ImplicitSolveConfig(strategy=SolveStrategy.NEWTON_FALLBACK)
    return integrate(problem, "trapezoid", n_steps, cfg)


def run_case(
    problem: IvpProblem,
    scheme: Union[str, Scheme],
    n_steps: int,
    cfg: Optional[ImplicitSolveConfig] = None,
    reference: Optional[Trajectory] = None,
) -> ErrorTable:
    """Integrate and tabulate |y_n - y(x_n)| at every node.

    Needs either a closed-form solution on the problem or a reference
    trajectory whose grid the benchmark grid divides.
    """
    trajectory = integrate(problem, scheme, n_steps, cfg or DEFAULT_CONFIG)
    h = 1.0 / n_steps
    if problem.exact is not None:
        targets = tuple(problem.exact(n * h) for n in range(n_steps + 1))
    elif reference is not None:
        if reference.n_steps % n_steps:
            raise ValueError(
                f"reference grid N = {reference.n_steps} does not refine the "
                f"benchmark grid N = {n_steps}"
            )
        stride = reference.n_steps // n_steps
        targets = tuple(float(v) for v in reference.values[::stride])
    else:
        raise ValueError(
            f"problem {problem.name!r} has no exact solution; supply a "
            "reference trajectory"
        )
    values = tuple(float(v) for v in trajectory.values)
    errors = tuple(abs(y - t) for y, t in zip(values, targets))
    return ErrorTable(
        problem=problem.name,
        scheme=trajectory.scheme,
        n_steps=n_steps,
        per_node_error=errors,
        max_error=max(errors),
        final_error=errors[-1],
        values=values,
        exact_values=targets,
    )


def eoc(
    problem: IvpProblem,
    scheme: Union[str, Scheme],
    grid: Sequence[int],
    cfg: Optional[ImplicitSolveConfig] = None,
    reference: Optional[Trajectory] = None,
) -> EocReport:
    """Empirical convergence orders from final-node errors along a grid."""
    grid = tuple(int(n) for n in grid)
    if len(grid) < 2 or any(a >= b for a, b in zip(grid, grid[1:])):
        raise ValueError(f"grid must be strictly increasing with >= 2 entries, got {grid}")
    tables = [run_case(problem, scheme, n, cfg, reference) for n in grid]
    errors = tuple(t.final_error for t in tables)
    orders: list[Union[float, str]] = []
    for i in range(len(grid) - 1):
        if errors[i] < ERROR_FLOOR or errors[i + 1] < ERROR_FLOOR:
            orders.append(EXACT_SENTINEL)
        else:
            orders.append(
                math.log(errors[i] / errors[i + 1]) / math.log(grid[i + 1] / grid[i])
            )
    return EocReport(tables[0].problem, tables[0].scheme, grid, errors, tuple(orders))


def _cell(value: Union[float, str]) -> str:
    return value if isinstance(value, str) else repr(value)


def emit(
    tables: Sequence[Union[ErrorTable, EocReport]], format: str = "csv"
) -> str:
    """Serialize tables; identical inputs produce byte-identical output.

    CSV streams must be homogeneous (one header); an empty list yields the
    error-table header alone.  JSON mirrors the dataclass fields verbatim
    and round-trips through ``parse``.
    """
    if format == "json":
        return json.dumps([t.to_dict() for t in tables], indent=2) + "\n"
    if format != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    kinds = {type(t) for t in tables}
    if len(kinds) > 1:
        raise ValueError("CSV emission requires a homogeneous table list")
    if tables and isinstance(tables[0], EocReport):
        lines = [EOC_HEADER]
        for t in tables:
            for i, (n, err) in enumerate(zip(t.grid, t.errors)):
                order = "" if i == 0 else _cell(t.orders[i - 1])
                lines.append(f"{t.problem},{t.scheme},{n},{err!r},{order}")
    else:
        lines = [ERROR_TABLE_HEADER]
        for t in tables:
            h = 1.0 / t.n_steps
            for n, (y, target, err) in enumerate(
                zip(t.values, t.exact_values, t.per_node_error)
            ):
                lines.append(
                    f"{t.problem},{t.scheme},{t.n_steps},{n},{n * h!r},"
                    f"{y!r},{target!r},{err!r}"
                )
    return "\n".join(lines) + "\n"


def parse(text: str) -> list[Union[ErrorTable, EocReport]]:
    """Inverse of ``emit(..., format="json")``."""
    out: list[Union[ErrorTable, EocReport]] = []
    for item in json.loads(text):
        if "grid" in item:
            out.append(EocReport.from_dict(item))
        else:
            out.append(ErrorTable.from_dict(item))
    return out
