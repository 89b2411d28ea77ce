"""
First-improvement local search over job permutations.

Three neighborhoods are used, by default in the order 2-opt, relocate, swap.
Each descent shuffles the full move list, applies the first move that
improves (switches, tie-break) lexicographically, and starts over with a
fresh shuffle. It stops after a full scan finds nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from .evaluation import TIE_EPS, Evaluation, fast_evaluate
from .instance import Instance

__all__ = [
    "NEIGHBORHOODS",
    "Move",
    "apply_move",
    "neighborhood_moves",
    "iter_moves",
    "descend_neighborhood",
    "local_search",
]

NEIGHBORHOODS = ("two_opt", "relocate", "swap")
_KIND_CODE = {"two_opt": _kernels.TWO_OPT, "relocate": _kernels.RELOCATE, "swap": _kernels.SWAP}


@dataclass(frozen=True)
class Move:
    """A permutation move on 0-based positions ``i`` and ``j``.

    ``two_opt`` reverses positions i..j, ``relocate`` takes the job at i and
    reinserts it so that it ends up at j, ``swap`` exchanges positions i and j.
    """

    kind: str
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in _KIND_CODE:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind == "relocate":
            if self.i == self.j:
                raise ValueError("relocate needs i != j")
        elif self.i >= self.j:
            raise ValueError(f"{self.kind} needs i < j")


def apply_move(seq: Sequence[int], move: Move) -> tuple[int, ...]:
    n = len(seq)
    if not (0 <= move.i < n and 0 <= move.j < n):
        raise IndexError(f"move {move} out of range for a sequence of length {n}")
    out = list(seq)
    i, j = move.i, move.j
    if move.kind == "two_opt":
        out[i : j + 1] = out[i : j + 1][::-1]
    elif move.kind == "relocate":
        out.insert(j, out.pop(i))
    else:
        out[i], out[j] = out[j], out[i]
    return tuple(out)


@lru_cache(maxsize=None)
def neighborhood_moves(kind: str, n: int) -> np.ndarray:
    """All (i, j) position pairs of a neighborhood as a read-only (k, 2) array."""
    if kind == "relocate":
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    elif kind in ("two_opt", "swap"):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        raise ValueError(f"unknown neighborhood {kind!r}")
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    arr.setflags(write=False)
    return arr


def iter_moves(kind: str, n: int):
    for i, j in neighborhood_moves(kind, n).tolist():
        yield Move(kind, i, j)


def descend_neighborhood(
    instance: Instance,
    seq: Sequence[int],
    evaluation: Evaluation | None,
    kind: str,
    rng,
) -> tuple[tuple[int, ...], Evaluation]:
    rng = np.random.default_rng(rng)
    current = np.asarray(seq, dtype=np.int64)
    if evaluation is None:
        evaluation = fast_evaluate(instance, current)
    moves = neighborhood_moves(kind, len(current))
    code = _KIND_CODE[kind]
    ptr, idx = instance.tool_csr
    while len(moves):
        order = rng.permutation(len(moves))
        k, sw, phi = _kernels.scan_moves(
            ptr, idx, instance.n_tools, current, instance.capacity, code, moves, order,
            evaluation.switches, evaluation.tie_break, TIE_EPS,
        )
        if k < 0:
            break
        i, j = moves[k]
        current = np.asarray(apply_move(current.tolist(), Move(kind, int(i), int(j))), dtype=np.int64)
        evaluation = Evaluation(int(sw), float(phi))
    return tuple(current.tolist()), evaluation


def local_search(
    instance: Instance,
    seq: Sequence[int],
    rng,
    evaluation: Evaluation | None = None,
    neighborhoods: Sequence[str] = NEIGHBORHOODS,
    loop: bool = False,
) -> tuple[tuple[int, ...], Evaluation]:
    """Run one descent per neighborhood, in the given order.

    With ``loop=True`` the whole pass repeats until it no longer improves.
    """
    rng = np.random.default_rng(rng)
    seq = tuple(int(j) for j in seq)
    if evaluation is None:
        evaluation = fast_evaluate(instance, seq)
    while True:
        start = evaluation
        for kind in neighborhoods:
            seq, evaluation = descend_neighborhood(instance, seq, evaluation, kind, rng)
        if not loop or not evaluation.better_than(start):
            return seq, evaluation
