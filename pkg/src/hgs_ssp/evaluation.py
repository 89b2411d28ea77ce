"""
Solution evaluation: KTNS decoding, switch count and 0-block tie-breaker.

KTNS ("keep tools needed soonest") walks the sequence, inserts only the
tools the current job needs and, when the magazine overflows, evicts the
tools whose next use is furthest away. The first job loads exactly its own
tools. Among tools tied on next use, the lowest-indexed one is evicted.

A switch is a removal, i.e. a 1 -> 0 transition along a row of the loaded
matrix. A 0-block is a maximal run of zeros with a 1 on both sides; the
tie-breaker sums the square roots of all 0-block lengths.

:func:`evaluate` is the plain reference composition. :func:`fast_evaluate`
runs the compiled kernel used inside the search and returns the same value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .instance import Instance

__all__ = [
    "TIE_EPS",
    "Evaluation",
    "LoadedPlan",
    "ktns_decode",
    "count_switches",
    "tie_break_objective",
    "zero_blocks",
    "evaluate",
    "fast_evaluate",
]

# Tie-break values closer than this count as equal.
TIE_EPS = 1e-9


@dataclass(frozen=True)
class Evaluation:
    """Objective pair, compared lexicographically (switches first)."""

    switches: int
    tie_break: float

    def better_than(self, other: "Evaluation") -> bool:
        if self.switches != other.switches:
            return self.switches < other.switches
        return self.tie_break < other.tie_break - TIE_EPS

    __lt__ = better_than

    def __gt__(self, other: "Evaluation") -> bool:
        return other.better_than(self)

    def __le__(self, other: "Evaluation") -> bool:
        return not other.better_than(self)

    def __ge__(self, other: "Evaluation") -> bool:
        return not self.better_than(other)

    def as_tuple(self) -> tuple[int, float]:
        return (self.switches, self.tie_break)


@dataclass(frozen=True, eq=False)
class LoadedPlan:
    """Tools x positions magazine contents after KTNS, plus the switch count."""

    loaded: np.ndarray
    required: np.ndarray
    sequence: tuple[int, ...]
    switches: int

    def to_text(self) -> str:
        """Render in tools-by-positions layout; kept-but-unneeded tools show as ``(1)``."""
        m, n = self.loaded.shape
        width = max(3, len(str(m)), len(str(n)))
        header = " " * (width + 1) + " ".join(
            f"{j + 1:>{width}}" for j in self.sequence
        )
        rows = [header]
        for t in range(m):
            cells = []
            for p in range(n):
                if self.required[t, p]:
                    cells.append("1")
                elif self.loaded[t, p]:
                    cells.append("(1)")
                else:
                    cells.append("0")
            rows.append(f"{t + 1:>{width}} " + " ".join(f"{c:>{width}}" for c in cells))
        return "\n".join(rows)


def ktns_decode(instance: Instance, seq: Iterable[int]) -> LoadedPlan:
    order = instance.check_sequence(seq)
    n, m, cap = instance.n_jobs, instance.n_tools, instance.capacity
    reqs = [instance.requirements[j] for j in order]

    # next_needed[p][t]: first position >= p where tool t is required (n if never)
    next_needed: list[list[int]] = [None] * n  # type: ignore[list-item]
    nxt = [n] * m
    for p in range(n - 1, -1, -1):
        for t in reqs[p]:
            nxt[t] = p
        next_needed[p] = nxt.copy()

    loaded = np.zeros((m, n), dtype=np.uint8)
    magazine = set(reqs[0])
    loaded[list(magazine), 0] = 1
    for p in range(1, n):
        needed = set(reqs[p])
        missing = needed - magazine
        excess = len(magazine) + len(missing) - cap
        if excess > 0:
            nn = next_needed[p]
            victims = sorted(magazine - needed, key=lambda t: (-nn[t], t))[:excess]
            magazine.difference_update(victims)
        magazine |= missing
        loaded[sorted(magazine), p] = 1

    assert (loaded.sum(axis=0) <= cap).all()
    required = instance.matrix[:, list(order)].astype(bool)
    return LoadedPlan(loaded, required, order, count_switches(loaded))


def _matrix(plan) -> np.ndarray:
    return np.asarray(plan.loaded if isinstance(plan, LoadedPlan) else plan)


def count_switches(plan) -> int:
    """Number of 1 -> 0 transitions summed over rows (plan or raw matrix)."""
    a = _matrix(plan).astype(bool)
    if a.ndim == 1:
        a = a[None, :]
    return int((a[:, :-1] & ~a[:, 1:]).sum())


def zero_blocks(plan) -> list[int]:
    """Lengths of all 0-blocks, row by row (plan or raw matrix)."""
    a = _matrix(plan).astype(bool)
    if a.ndim == 1:
        a = a[None, :]
    sizes: list[int] = []
    for row in a:
        ones = np.flatnonzero(row)
        gaps = np.diff(ones) - 1
        sizes.extend(int(g) for g in gaps if g > 0)
    return sizes


def tie_break_objective(plan) -> float:
    """Sum of sqrt(size) over all 0-blocks."""
    sizes = zero_blocks(plan)
    # summed per distinct size in ascending order, matching the kernel bit for bit
    total = 0.0
    for s in sorted(set(sizes)):
        total += sizes.count(s) * math.sqrt(s)
    return total


def evaluate(instance: Instance, seq: Iterable[int]) -> Evaluation:
    plan = ktns_decode(instance, seq)
    return Evaluation(plan.switches, tie_break_objective(plan))


def fast_evaluate(instance: Instance, seq) -> Evaluation:
    arr = np.asarray(seq, dtype=np.int64)
    ptr, idx = instance.tool_csr
    sw, phi = _kernels.ktns_objective(ptr, idx, instance.n_tools, arr, instance.capacity)
    return Evaluation(int(sw), float(phi))
