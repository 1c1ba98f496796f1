"""Exact floating-point accumulation for order-independent aggregation.

Group aggregates must come out identical for any input permutation and any
worker partitioning, down to the byte in CSV output.  A running Shewchuk
partials accumulator represents the exact real sum of everything added, so
merging partial accumulators in any order yields the same correctly rounded
total as a single pass.
"""

from __future__ import annotations

import math


class ExactSum:
    """Maintains the exact sum of added doubles as non-overlapping partials."""

    __slots__ = ("_partials",)

    def __init__(self):
        self._partials = []

    def add(self, x: float) -> None:
        partials = self._partials
        i = 0
        for y in partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                partials[i] = lo
                i += 1
            x = hi
        partials[i:] = [x]

    def merge(self, other: "ExactSum") -> None:
        for p in other._partials:
            self.add(p)

    def value(self) -> float:
        # fsum of non-overlapping partials is the correctly rounded total
        return math.fsum(self._partials)
