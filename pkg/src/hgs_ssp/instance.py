"""
Problem instances for job sequencing with tool switches.

An instance has ``n_jobs`` jobs, ``n_tools`` tools and a magazine that holds
at most ``capacity`` tools at once. Each job needs a set of tools. Inside the
library jobs, tools and sequence positions are 0-based; the text format uses
the classical tools-by-jobs binary matrix::

    n m C
    <m rows of n binary cells; row t, column j is 1 iff job j needs tool t>

Cells may be separated by whitespace or written as one run of digits per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from os import PathLike
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Instance",
    "InstanceFormatError",
    "parse_instance",
    "serialize_instance",
    "read_instance",
    "write_instance",
    "generate_instance",
]


class InstanceFormatError(ValueError):
    """Raised when instance text or data violates the format or invariants."""


@dataclass(frozen=True)
class Instance:
    n_jobs: int
    n_tools: int
    capacity: int
    requirements: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        reqs = tuple(tuple(sorted(set(int(t) for t in r))) for r in self.requirements)
        object.__setattr__(self, "requirements", reqs)
        if self.n_jobs < 1 or self.n_tools < 1 or self.capacity < 1:
            raise InstanceFormatError("n_jobs, n_tools and capacity must be positive")
        if self.capacity > self.n_tools:
            raise InstanceFormatError(
                f"capacity {self.capacity} exceeds the number of tools {self.n_tools}"
            )
        if len(reqs) != self.n_jobs:
            raise InstanceFormatError(
                f"expected {self.n_jobs} requirement sets, got {len(reqs)}"
            )
        for j, tools in enumerate(reqs):
            if not tools:
                raise InstanceFormatError(f"job {j + 1} requires no tools")
            if len(tools) > self.capacity:
                raise InstanceFormatError(
                    f"job {j + 1} requires {len(tools)} tools, "
                    f"more than capacity {self.capacity}"
                )
            if tools[0] < 0 or tools[-1] >= self.n_tools:
                raise InstanceFormatError(f"job {j + 1} uses a tool outside 1..{self.n_tools}")

    @classmethod
    def from_matrix(cls, matrix, capacity: int, name: str = "") -> "Instance":
        """Build from a tools x jobs 0/1 matrix (rows are tools)."""
        a = np.asarray(matrix)
        if a.ndim != 2:
            raise InstanceFormatError("requirement matrix must be two-dimensional")
        if not np.isin(a, (0, 1)).all():
            raise InstanceFormatError("requirement matrix must be binary")
        m, n = a.shape
        reqs = tuple(tuple(np.flatnonzero(a[:, j]).tolist()) for j in range(n))
        return cls(n, m, int(capacity), reqs, name)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Tools x jobs uint8 requirement matrix."""
        a = np.zeros((self.n_tools, self.n_jobs), dtype=np.uint8)
        for j, tools in enumerate(self.requirements):
            a[list(tools), j] = 1
        return a

    @cached_property
    def tool_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(ptr, idx) int64 arrays; the tools of job j are ``idx[ptr[j]:ptr[j + 1]]``."""
        sizes = [len(r) for r in self.requirements]
        ptr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        idx = np.array([t for r in self.requirements for t in r], dtype=np.int64)
        return ptr, idx

    @property
    def n_used_tools(self) -> int:
        return int(self.matrix.any(axis=1).sum())

    def check_sequence(self, seq: Iterable[int]) -> tuple[int, ...]:
        """Return ``seq`` as a tuple, raising ValueError unless it is a job permutation."""
        order = tuple(int(j) for j in seq)
        if len(order) != self.n_jobs or sorted(order) != list(range(self.n_jobs)):
            raise ValueError(
                f"sequence is not a permutation of the {self.n_jobs} jobs: {order!r}"
            )
        return order

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.n_jobs, self.n_tools, self.capacity, self.requirements) == (
            other.n_jobs,
            other.n_tools,
            other.capacity,
            other.requirements,
        )

    def __hash__(self):
        return hash((self.n_jobs, self.n_tools, self.capacity, self.requirements))


def _int_token(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"malformed header: {what} is {tok!r}") from None


def parse_instance(text: str, name: str = "") -> Instance:
    tokens = text.split()
    if len(tokens) < 3:
        raise InstanceFormatError("malformed header: expected 'n m C'")
    n = _int_token(tokens[0], "n")
    m = _int_token(tokens[1], "m")
    c = _int_token(tokens[2], "C")
    if n < 1 or m < 1 or c < 1:
        raise InstanceFormatError(f"malformed header: non-positive size in '{n} {m} {c}'")
    body = tokens[3:]
    if len(body) == n * m:
        cells = body
    elif len(body) == m and all(len(row) == n for row in body):
        cells = [ch for row in body for ch in row]
    else:
        raise InstanceFormatError(
            f"expected a {m} x {n} matrix, got {len(body)} cell tokens"
        )
    bad = [tok for tok in cells if tok not in ("0", "1")]
    if bad:
        raise InstanceFormatError(f"non-binary matrix cell {bad[0]!r}")
    matrix = np.array([int(tok) for tok in cells], dtype=np.uint8).reshape(m, n)
    return Instance.from_matrix(matrix, c, name)


def serialize_instance(instance: Instance) -> str:
    lines = [f"{instance.n_jobs} {instance.n_tools} {instance.capacity}"]
    lines += [" ".join(str(int(v)) for v in row) for row in instance.matrix]
    return "\n".join(lines) + "\n"


def read_instance(path: str | PathLike) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem)


def write_instance(instance: Instance, path: str | PathLike) -> None:
    Path(path).write_text(serialize_instance(instance))


def generate_instance(
    n: int,
    m: int,
    c: int,
    min_tools: int = 1,
    max_tools: int | None = None,
    seed: int = 0,
) -> Instance:
    """Random instance: per job, a uniform tool count then uniform distinct tools.

    ``max_tools`` defaults to the capacity. The result depends only on the
    arguments, and the generator is NumPy's PCG64 seeded with ``seed``.
    """
    if max_tools is None:
        max_tools = c
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 1 <= min_tools <= max_tools <= c <= m:
        raise ValueError(
            "need 1 <= min_tools <= max_tools <= c <= m, got "
            f"min_tools={min_tools}, max_tools={max_tools}, c={c}, m={m}"
        )
    rng = np.random.default_rng(seed)
    reqs: list[Sequence[int]] = []
    for _ in range(n):
        k = int(rng.integers(min_tools, max_tools + 1))
        reqs.append(rng.choice(m, size=k, replace=False).tolist())
    return Instance(n, m, c, tuple(tuple(r) for r in reqs), name=f"gen_n{n}_m{m}_c{c}_s{seed}")
