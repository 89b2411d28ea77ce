"""
Exact solvers for small instances, used as ground truth in tests.

:func:`exact_best_sequence` enumerates every permutation.
:func:`exact_min_loading` solves the tooling problem for a fixed sequence by
dynamic programming over magazine contents, without any KTNS logic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .evaluation import Evaluation, fast_evaluate
from .instance import Instance

__all__ = ["OracleResult", "OracleLimitError", "exact_best_sequence", "exact_min_loading"]


class OracleLimitError(RuntimeError):
    """The instance is too large for exhaustive treatment."""


@dataclass(frozen=True)
class OracleResult:
    best_switches: int
    best_sequence: tuple[int, ...]
    explored: int
    best: Evaluation


def exact_best_sequence(instance: Instance, max_n: int = 10) -> OracleResult:
    """Minimum switch count over all n! sequences.

    Among optimal sequences the one with the smallest tie-break value is
    reported, first in lexicographic order on ties.
    """
    n = instance.n_jobs
    if n > max_n:
        raise OracleLimitError(f"{n} jobs exceeds the enumeration guard of {max_n}")
    best_seq = None
    best = None
    explored = 0
    for perm in itertools.permutations(range(n)):
        ev = fast_evaluate(instance, perm)
        explored += 1
        if best is None or ev.better_than(best):
            best, best_seq = ev, perm
    return OracleResult(best.switches, best_seq, explored, best)


def _bits(tools: Sequence[int]) -> int:
    mask = 0
    for t in tools:
        mask |= 1 << t
    return mask


def exact_min_loading(instance: Instance, seq: Sequence[int], max_states: int = 200_000) -> int:
    """Fewest tool removals over all feasible loading plans for ``seq``.

    The magazine starts with exactly the first job's tools. At each later
    position the new magazine must hold the job's tools, fit the capacity,
    and otherwise consist of tools already loaded; each tool dropped costs
    one. Loading a tool before it is needed never saves a removal, so
    restricting insertions to required tools keeps the optimum.
    """
    order = instance.check_sequence(seq)
    cap = instance.capacity
    req = [_bits(instance.requirements[j]) for j in order]
    states = {req[0]: 0}
    for r in req[1:]:
        room = cap - r.bit_count()
        nxt: dict[int, int] = {}
        for mag, cost in states.items():
            optional = [t for t in range(instance.n_tools) if (mag >> t) & 1 and not (r >> t) & 1]
            for k in range(min(room, len(optional)) + 1):
                for keep in itertools.combinations(optional, k):
                    new = r | _bits(keep)
                    c = cost + (mag & ~new).bit_count()
                    if c < nxt.get(new, math.inf):
                        nxt[new] = c
        if len(nxt) > max_states:
            raise OracleLimitError(f"{len(nxt)} magazine states exceed the guard of {max_states}")
        states = nxt
    return min(states.values())
