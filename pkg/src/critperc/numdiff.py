"""Richardson-extrapolated central differences."""

from __future__ import annotations

import math
from typing import Callable


def central_difference(f: Callable[[float], float], x: float, order: int, h: float) -> float:
    """k-th central difference quotient; symmetric, so the error is a series in h^2."""
    acc = 0.0
    for j in range(order + 1):
        acc += (-1) ** j * math.comb(order, j) * f(x + (order / 2.0 - j) * h)
    return acc / h**order


def derivative(
    f: Callable[[float], float],
    x: float,
    order: int,
    h: float,
    levels: int = 4,
) -> float:
    """Derivative of the given order by a Richardson table over h, h/2, h/4, ...

    Each column removes the next even power of h.
    """
    table = [central_difference(f, x, order, h / 2**i) for i in range(levels)]
    for col in range(1, levels):
        factor = 4.0**col
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    return table[0]
