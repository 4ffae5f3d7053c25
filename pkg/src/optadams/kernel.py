"""Analytic substrate shared by the coefficient and norm machinery.

The kernel weight and its derivatives are

    g2(x)   = sgn(x)/2 * (sinh(x) - x)
    g2'(x)  = sgn(x)/2 * (cosh(x) - 1)
    g2''(x) = sgn(x)/2 * sinh(x)

with sgn(0) = 0, so all three vanish exactly at the origin.  Everything is
evaluated from |x| so that evenness of g2, g2'' and oddness of g2' hold
bit-for-bit, and sinh(x) - x is summed as its odd Taylor tail near zero
(naive evaluation loses every significant digit below |x| ~ 1e-5).

``d1`` is the three-point grid operator whose discrete convolution inverts
convolution with g2''(h*.) on integer-indexed sequences:

    sum_gamma d1(gamma, h) * g2''(h*(beta - gamma)) = 1 if beta == 0 else 0.

That identity is the only property of d1 the rest of the package relies on
(it is the grid analogue of a second-order differential operator applied to
the kernel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "DiscreteSequence",
    "convolve",
    "d1",
    "d1_sequence",
    "g2",
    "g2_double_prime",
    "g2_prime",
]

# Below this, sinh(x) - x is summed as a series; above, direct evaluation
# already keeps ~13 significant digits.
_SERIES_CUTOFF = 0.5


def _sgn(x: float) -> int:
    return (x > 0.0) - (x < 0.0)


def _require_finite(x: float) -> None:
    if not math.isfinite(x):
        raise ValueError(f"abscissa must be finite, got {x!r}")


def _sinh_minus_x(x: float) -> float:
    # x >= 0.  Odd Taylor tail x^3/3! + x^5/5! + ... summed to machine precision.
    if x >= _SERIES_CUTOFF:
        return math.sinh(x) - x
    xx = x * x
    term = x * xx / 6.0
    total = term
    n = 3
    while True:
        term *= xx / ((n + 1) * (n + 2))
        n += 2
        updated = total + term
        if updated == total:
            return total
        total = updated


def g2(x: float) -> float:
    """Even kernel weight sgn(x)/2 * (sinh(x) - x); behaves like x^3/12 near 0."""
    _require_finite(x)
    return 0.5 * _sinh_minus_x(abs(x))


def g2_prime(x: float) -> float:
    """Odd derivative sgn(x)/2 * (cosh(x) - 1), computed as sgn(x) * sinh(x/2)^2."""
    _require_finite(x)
    s = math.sinh(0.5 * abs(x))
    return _sgn(x) * s * s


def g2_double_prime(x: float) -> float:
    """Even second derivative sgn(x)/2 * sinh(x) = sinh(|x|)/2."""
    _require_finite(x)
    return 0.5 * math.sinh(abs(x))


def d1(beta: int, h: float) -> float:
    """Three-point stencil inverting discrete convolution with g2''(h*.).

    d1(0) = 2(1+e^{2h})/(1-e^{2h}), d1(+-1) = -2e^h/(1-e^{2h}), zero beyond.
    h <= 0 is rejected: the 1/(1-e^{2h}) pole makes a degenerate grid
    meaningless and every caller has a positive step.
    """
    if not (math.isfinite(h) and h > 0.0):
        raise ValueError(f"grid step must be positive and finite, got {h!r}")
    if abs(beta) >= 2:
        return 0.0
    em = math.expm1(2.0 * h)  # e^{2h} - 1 > 0
    if beta == 0:
        return -2.0 * (2.0 + em) / em
    return 2.0 * math.exp(h) / em


def d1_sequence(h: float) -> DiscreteSequence:
    """The stencil packaged as a sequence supported on {-1, 0, 1}."""
    return DiscreteSequence(-1, (d1(-1, h), d1(0, h), d1(1, h)))


@dataclass(frozen=True)
class DiscreteSequence:
    """Finitely supported real sequence over the integers.

    ``values[i]`` sits at index ``offset + i``; indexing outside the stored
    window reads zero.  Supports here are tiny (a handful of points), so the
    storage is dense over an explicit window.
    """

    offset: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("sequence entries must be finite")

    def __getitem__(self, beta: int) -> float:
        i = beta - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return 0.0

    @property
    def support(self) -> range:
        return range(self.offset, self.offset + len(self.values))


def convolve(
    a: DiscreteSequence,
    b_eval: Callable[[int], float],
    support: range,
) -> DiscreteSequence:
    """Discrete convolution c[beta] = sum_gamma a[gamma] * b_eval(beta - gamma).

    ``a`` must have finite support; ``b_eval`` may be any integer-indexed
    function (its support need not be finite).  The result is materialized on
    the requested index range.
    """
    vals = tuple(
        math.fsum(a[g] * b_eval(beta - g) for g in a.support) for beta in support
    )
    return DiscreteSequence(support.start, vals)
