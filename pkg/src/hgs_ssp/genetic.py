"""
Hybrid genetic search with population diversity management.

The search keeps a population of locally optimal permutations. Each
generation picks two parents by binary tournament on biased fitness,
produces one child by order crossover (OX), improves it by local search and
inserts it. Once the population reaches ``mu + lambda_`` members, survivor
selection discards ``lambda_`` of them, clones first.

Biased fitness combines the quality rank and the diversity rank of each
individual::

    fitness = obj_rank + (1 - mu_elite / |P|) * div_rank

where the diversity contribution is the mean broken-pairs distance to the
``mu_close`` nearest other members. Smaller fitness is better.

All randomness comes from one ``numpy.random.Generator`` (PCG64) seeded
with ``HgsParams.seed``.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .evaluation import Evaluation, evaluate, fast_evaluate
from .instance import Instance
from .local_search import NEIGHBORHOODS, local_search

__all__ = [
    "HgsParams",
    "Individual",
    "Population",
    "BiasedFitness",
    "TracePoint",
    "SolveReport",
    "ox_crossover",
    "broken_pairs_distance",
    "compute_biased_fitness",
    "binary_tournament",
    "select_survivors",
    "HybridGeneticSearch",
    "run_hgs",
]


@dataclass(frozen=True)
class HgsParams:
    mu: int = 20
    lambda_: int = 40
    mu_elite: int = 10
    mu_close: int = 3
    i_max: int = 2000
    time_limit: float | None = None
    seed: int = 1
    neighborhoods: tuple[str, ...] = NEIGHBORHOODS
    ls_loop: bool = False

    def __post_init__(self):
        if self.mu < 2:
            raise ValueError("mu must be at least 2")
        if self.lambda_ < 1:
            raise ValueError("lambda_ must be at least 1")
        if not 0 < self.mu_elite <= self.mu:
            raise ValueError("need 0 < mu_elite <= mu")
        if not 1 <= self.mu_close <= self.mu - 1:
            raise ValueError("need 1 <= mu_close <= mu - 1")
        if self.i_max < 1:
            raise ValueError("i_max must be at least 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        unknown = set(self.neighborhoods) - set(NEIGHBORHOODS)
        if unknown:
            raise ValueError(f"unknown neighborhoods: {sorted(unknown)}")

    def snapshot(self) -> str:
        """Compact ``key=value`` string for reports."""
        d = asdict(self)
        d["neighborhoods"] = "-".join(self.neighborhoods)
        return ";".join(f"{k}={v}" for k, v in d.items())


@dataclass(frozen=True)
class Individual:
    seq: tuple[int, ...]
    eval: Evaluation
    birth: int = 0


def _edge_codes(seq: Sequence[int], n: int) -> np.ndarray:
    a = np.asarray(seq, dtype=np.int64)
    lo = np.minimum(a[:-1], a[1:])
    hi = np.maximum(a[:-1], a[1:])
    return lo * n + hi


def broken_pairs_distance(s1: Sequence[int], s2: Sequence[int]) -> int:
    """Number of undirected adjacencies of ``s1`` missing from ``s2``."""
    if len(s1) != len(s2):
        raise ValueError("sequences have different lengths")
    e2 = {frozenset(p) for p in zip(s2, s2[1:])}
    return sum(frozenset(p) not in e2 for p in zip(s1, s1[1:]))


class BiasedFitness(NamedTuple):
    obj_rank: np.ndarray
    div_rank: np.ndarray
    diversity: np.ndarray
    fitness: np.ndarray


class Population:
    """Members in insertion order plus a cached pairwise distance matrix."""

    def __init__(self, n_jobs: int, params: HgsParams):
        self.n_jobs = n_jobs
        self.params = params
        self.members: list[Individual] = []
        self._codes = np.zeros((0, max(n_jobs - 1, 0)), dtype=np.int64)
        self._dist = np.zeros((0, 0), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def add(self, ind: Individual) -> None:
        n = self.n_jobs
        codes = _edge_codes(ind.seq, n)
        marks = np.zeros(n * n, dtype=bool)
        marks[codes] = True
        shared = marks[self._codes].sum(axis=1) if len(self.members) else np.zeros(0, np.int64)
        d = (n - 1) - shared
        k = len(self.members)
        dist = np.zeros((k + 1, k + 1), dtype=np.int64)
        dist[:k, :k] = self._dist
        dist[k, :k] = d
        dist[:k, k] = d
        self._dist = dist
        self._codes = np.vstack([self._codes, codes[None, :]])
        self.members.append(ind)

    def remove(self, index: int) -> Individual:
        keep = np.arange(len(self.members)) != index
        self._dist = self._dist[np.ix_(keep, keep)]
        self._codes = self._codes[keep]
        return self.members.pop(index)

    def distance_matrix(self) -> np.ndarray:
        return self._dist.copy()

    def best(self) -> Individual:
        return min(self.members, key=lambda ind: (ind.eval.switches, ind.eval.tie_break))


def compute_biased_fitness(pop: Population) -> BiasedFitness:
    size = len(pop)
    k = pop.params.mu_close
    if size < k + 1:
        raise ValueError(f"population of {size} is too small for mu_close={k}")
    d = pop._dist.astype(float)
    np.fill_diagonal(d, np.inf)
    nearest_sum = np.sort(d, axis=1)[:, :k].sum(axis=1)
    diversity = nearest_sum / k

    # stable sorts: ties keep insertion order, older first
    div_order = np.argsort(-nearest_sum, kind="stable")
    sw = np.array([ind.eval.switches for ind in pop.members])
    tb = np.array([ind.eval.tie_break for ind in pop.members])
    obj_order = np.lexsort((tb, sw))

    div_rank = np.empty(size, dtype=np.int64)
    div_rank[div_order] = np.arange(size)
    obj_rank = np.empty(size, dtype=np.int64)
    obj_rank[obj_order] = np.arange(size)
    fitness = obj_rank + (1.0 - pop.params.mu_elite / size) * div_rank
    return BiasedFitness(obj_rank, div_rank, diversity, fitness)


def binary_tournament(pop: Population, rng, fitness: np.ndarray | None = None) -> Individual:
    if len(pop) == 0:
        raise ValueError("empty population")
    if fitness is None:
        fitness = compute_biased_fitness(pop).fitness
    a = int(rng.integers(len(pop)))
    b = int(rng.integers(len(pop)))
    return pop.members[b] if fitness[b] < fitness[a] else pop.members[a]


def ox_crossover(p1: Sequence[int], p2: Sequence[int], rng=None, cuts: tuple[int, int] | None = None) -> tuple[int, ...]:
    """Order crossover; ``cuts`` (0-based, inclusive) overrides the random segment."""
    n = len(p1)
    if len(p2) != n:
        raise ValueError("parents have different lengths")
    if cuts is None:
        a, b = sorted(int(x) for x in rng.integers(n, size=2))
    else:
        a, b = cuts
        if not 0 <= a <= b < n:
            raise ValueError(f"invalid cut positions {cuts}")
    child: list[int | None] = [None] * n
    child[a : b + 1] = p1[a : b + 1]
    taken = set(p1[a : b + 1])
    pos = (b + 1) % n
    for k in range(1, n + 1):
        job = p2[(b + k) % n]
        if job in taken:
            continue
        child[pos] = job
        taken.add(job)
        pos = (pos + 1) % n
    return tuple(child)  # type: ignore[arg-type]


def select_survivors(pop: Population) -> list[Individual]:
    """Shrink ``pop`` to ``mu`` members in place; returns the removed individuals."""
    mu = pop.params.mu
    if len(pop) < mu:
        raise ValueError(f"population of {len(pop)} is below mu={mu}")
    removed = []
    while len(pop) > mu:
        fit = compute_biased_fitness(pop).fitness
        counts = Counter(ind.seq for ind in pop.members)
        candidates = [i for i, ind in enumerate(pop.members) if counts[ind.seq] > 1]
        if not candidates:
            candidates = range(len(pop))
        # highest fitness goes; among equals the youngest
        worst = max(candidates, key=lambda i: (fit[i], i))
        removed.append(pop.remove(worst))
    return removed


@dataclass(frozen=True)
class TracePoint:
    iteration: int
    switches: int
    tie_break: float
    elapsed: float


@dataclass
class SolveReport:
    best_sequence: tuple[int, ...]
    best: Evaluation
    iterations: int
    elapsed: float
    params: HgsParams
    trace: list[TracePoint] = field(default_factory=list)
    selections: int = 0
    snapshots: list[list[tuple[int, float]]] = field(default_factory=list)


class HybridGeneticSearch:
    """Stepwise driver; :func:`run_hgs` is the one-call entry point.

    ``iterations`` counts generated children; the search stops after
    ``i_max`` consecutive children without strict improvement of the best
    solution, on the time limit, or when the best reaches (0, 0).
    """

    def __init__(self, instance: Instance, params: HgsParams | None = None, record_population: bool = False):
        self.instance = instance
        self.params = params or HgsParams()
        self.rng = np.random.default_rng(self.params.seed)
        self.population = Population(instance.n_jobs, self.params)
        self.record_population = record_population
        self.best: Individual | None = None
        self.iterations = 0
        self.since_improvement = 0
        self.selections = 0
        self.trace: list[TracePoint] = []
        self.snapshots: list[list[tuple[int, float]]] = []
        self._births = 0
        self._start = time.perf_counter()

    def _educate(self, seq) -> Individual:
        p = self.params
        seq, ev = local_search(self.instance, seq, self.rng, neighborhoods=p.neighborhoods, loop=p.ls_loop)
        self._births += 1
        return Individual(seq, ev, self._births)

    def _consider(self, ind: Individual) -> bool:
        if self.best is None or ind.eval.better_than(self.best.eval):
            self.best = ind
            self.trace.append(
                TracePoint(self.iterations, ind.eval.switches, ind.eval.tie_break, self.elapsed)
            )
            return True
        return False

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._start

    def initialize(self) -> None:
        n = self.instance.n_jobs
        for _ in range(self.params.mu):
            ind = self._educate(self.rng.permutation(n).tolist())
            self.population.add(ind)
            self._consider(ind)

    def step(self) -> Individual:
        pop = self.population
        fitness = compute_biased_fitness(pop).fitness
        p1 = binary_tournament(pop, self.rng, fitness)
        p2 = binary_tournament(pop, self.rng, fitness)
        child = self._educate(ox_crossover(p1.seq, p2.seq, self.rng))
        pop.add(child)
        self.iterations += 1
        if self._consider(child):
            self.since_improvement = 0
        else:
            self.since_improvement += 1
        if len(pop) >= self.params.mu + self.params.lambda_:
            select_survivors(pop)
            self.selections += 1
            if self.record_population:
                self.snapshots.append([ind.eval.as_tuple() for ind in pop])
        return child

    def finished(self) -> bool:
        p = self.params
        if self.best is not None and self.best.eval.switches == 0 and self.best.eval.tie_break == 0.0:
            return True
        if self.since_improvement >= p.i_max:
            return True
        return p.time_limit is not None and self.elapsed >= p.time_limit

    def run(self) -> SolveReport:
        self._start = time.perf_counter()
        if self.instance.n_jobs == 1:
            ind = Individual((0,), fast_evaluate(self.instance, (0,)), 0)
            self._consider(ind)
        else:
            self.initialize()
            while not self.finished():
                self.step()
        return self.report()

    def report(self) -> SolveReport:
        assert self.best is not None
        return SolveReport(
            best_sequence=self.best.seq,
            best=self.best.eval,
            iterations=self.iterations,
            elapsed=self.elapsed,
            params=self.params,
            trace=list(self.trace),
            selections=self.selections,
            snapshots=list(self.snapshots),
        )

    def audit(self) -> None:
        """Assert population bounds and that stored evaluations are exact."""
        p = self.params
        assert p.mu <= len(self.population) < p.mu + p.lambda_
        for ind in self.population:
            assert evaluate(self.instance, ind.seq) == ind.eval


def run_hgs(instance: Instance, params: HgsParams | None = None, record_population: bool = False) -> SolveReport:
    return HybridGeneticSearch(instance, params, record_population).run()
