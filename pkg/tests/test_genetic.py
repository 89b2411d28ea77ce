import itertools

import numpy as np
import pytest

from hgs_ssp import (
    Evaluation,
    HgsParams,
    HybridGeneticSearch,
    Population,
    binary_tournament,
    broken_pairs_distance,
    compute_biased_fitness,
    evaluate,
    exact_best_sequence,
    generate_instance,
    ox_crossover,
    run_hgs,
    select_survivors,
)
from hgs_ssp.genetic import Individual

from conftest import TABLE1_OPTIMUM, random_instance


def reference_ox(p1, p2, a, b):
    """Textbook OX written independently: fill left to right from p2 rotated after b."""
    n = len(p1)
    segment = list(p1[a : b + 1])
    rest = [x for x in p2[b + 1 :] + p2[: b + 1] if x not in segment]
    tail = n - 1 - b
    # the first `tail` go after the segment, the remainder wraps to the front
    return tuple(rest[tail:] + segment + rest[:tail])


def make_pop(items, **kw):
    params = HgsParams(**kw)
    n = len(items[0][0])
    pop = Population(n, params)
    for b, (seq, sw, tb) in enumerate(items):
        pop.add(Individual(tuple(seq), Evaluation(sw, tb), b))
    return pop


# ---- crossover


def test_ox_identical_parents_give_the_parent():
    rng = np.random.default_rng(0)
    p = (3, 1, 4, 0, 2, 5)
    for _ in range(20):
        assert ox_crossover(p, p, rng) == p


def test_ox_full_segment_copies_first_parent():
    assert ox_crossover((0, 1, 2, 3), (3, 2, 1, 0), cuts=(0, 3)) == (0, 1, 2, 3)


def test_ox_worked_example():
    # segment (2, 3) kept; p2 read from position 4: 1, 0, 5, 4 (3, 2 skipped)
    # filled from position 4 cyclically: 4 <- 1, 5 <- 0, 0 <- 5, 1 <- 4
    assert ox_crossover((0, 1, 2, 3, 4, 5), (5, 4, 3, 2, 1, 0), cuts=(2, 3)) == (5, 4, 2, 3, 1, 0)


def test_ox_matches_reference_and_is_a_permutation():
    rng = np.random.default_rng(1)
    for _ in range(500):
        n = int(rng.integers(1, 12))
        p1 = tuple(rng.permutation(n).tolist())
        p2 = tuple(rng.permutation(n).tolist())
        a, b = sorted(rng.integers(n, size=2).tolist())
        child = ox_crossover(p1, p2, cuts=(a, b))
        assert child == reference_ox(p1, p2, a, b)
        assert sorted(child) == list(range(n))
        assert child[a : b + 1] == p1[a : b + 1]


def test_ox_rejects_bad_input():
    with pytest.raises(ValueError):
        ox_crossover((0, 1), (0, 1, 2), cuts=(0, 1))
    with pytest.raises(ValueError):
        ox_crossover((0, 1, 2), (2, 1, 0), cuts=(2, 1))


# ---- distance


def test_broken_pairs_examples():
    assert broken_pairs_distance((0, 1, 2, 3), (0, 1, 2, 3)) == 0
    assert broken_pairs_distance((0, 1, 2, 3), (3, 2, 1, 0)) == 0
    assert broken_pairs_distance((0, 1, 2, 3), (0, 1, 3, 2)) == 1
    with pytest.raises(ValueError):
        broken_pairs_distance((0, 1), (0, 1, 2))


def test_population_distance_cache_matches_pure_function():
    rng = np.random.default_rng(2)
    seqs = [tuple(rng.permutation(9).tolist()) for _ in range(12)]
    pop = make_pop([(s, 0, 0.0) for s in seqs], mu=5, lambda_=10, mu_elite=3, mu_close=2)
    pop.remove(4)
    pop.remove(0)
    kept = [ind.seq for ind in pop]
    expected = [[broken_pairs_distance(a, b) for b in kept] for a in kept]
    assert pop.distance_matrix().tolist() == expected


# ---- biased fitness


def test_biased_fitness_formula():
    rng = np.random.default_rng(3)
    items = [(tuple(rng.permutation(8).tolist()), int(s), 0.0) for s in rng.permutation(20)]
    pop = make_pop(items)
    bf = compute_biased_fitness(pop)
    assert np.allclose(bf.fitness, bf.obj_rank + 0.5 * bf.div_rank)
    i = int(np.flatnonzero((bf.obj_rank == 2))[0])
    assert bf.fitness[i] == 2 + 0.5 * bf.div_rank[i]
    # the arithmetic case from the formula itself
    assert 2 + (1 - 10 / 20) * 4 == 4


def test_best_on_both_criteria_has_zero_fitness():
    items = [((0, 1, 2, 3, 4), 1, 0.0), ((4, 2, 0, 3, 1), 0, 0.0), ((0, 1, 2, 4, 3), 2, 0.0), ((1, 0, 2, 3, 4), 3, 0.0)]
    pop = make_pop(items, mu=3, lambda_=2, mu_elite=2, mu_close=1)
    bf = compute_biased_fitness(pop)
    assert bf.obj_rank[1] == 0 and bf.div_rank[1] == 0 and bf.fitness[1] == 0


def test_clone_population():
    items = [((0, 1, 2, 3), sw, 0.0) for sw in (3, 1, 2, 0)]
    pop = make_pop(items, mu=3, lambda_=2, mu_elite=2, mu_close=2)
    bf = compute_biased_fitness(pop)
    assert bf.diversity.tolist() == [0, 0, 0, 0]
    assert bf.div_rank.tolist() == [0, 1, 2, 3]
    assert bf.obj_rank.tolist() == [3, 1, 2, 0]


def test_biased_fitness_needs_enough_members():
    pop = make_pop([((0, 1, 2), 0, 0.0)] * 3)
    with pytest.raises(ValueError):
        compute_biased_fitness(pop)


# ---- tournament


class ScriptedDraws:
    def __init__(self, draws):
        self.draws = list(draws)

    def integers(self, high):
        return self.draws.pop(0)


def test_tournament_basics():
    pop = make_pop([((0, 1, 2), 0, 0.0), ((2, 1, 0), 1, 0.0)], mu=2, lambda_=1, mu_elite=1, mu_close=1)
    fit = np.array([0.0, 7.0])
    assert binary_tournament(pop, ScriptedDraws([1, 0]), fit) is pop.members[0]
    assert binary_tournament(pop, ScriptedDraws([0, 1]), fit) is pop.members[0]
    assert binary_tournament(pop, ScriptedDraws([1, 1]), fit) is pop.members[1]
    rng = np.random.default_rng(0)
    solo = make_pop([((0, 1), 0, 0.0)], mu=2, lambda_=1, mu_elite=1, mu_close=1)
    assert binary_tournament(solo, rng, np.array([3.0])) is solo.members[0]
    empty = Population(3, HgsParams())
    with pytest.raises(ValueError):
        binary_tournament(empty, rng)


def test_tournament_win_rates():
    pop = make_pop([((0, 1, 2), 0, 0.0), ((1, 0, 2), 0, 0.0), ((2, 1, 0), 0, 0.0)], mu=2, lambda_=1, mu_elite=1, mu_close=1)
    fitness = np.array([2.0, 0.5, 1.0])
    rng = np.random.default_rng(11)
    trials = 100_000
    wins = {0: 0, 1: 0, 2: 0}
    for _ in range(trials):
        wins[pop.members.index(binary_tournament(pop, rng, fitness))] += 1
    # member of fitness rank r (0 = best) wins with ((3 - r)^2 - (2 - r)^2) / 9
    analytic = {1: 5 / 9, 2: 3 / 9, 0: 1 / 9}
    for k, p in analytic.items():
        assert abs(wins[k] / trials - p) < 0.02


# ---- survivor selection


def test_clone_is_removed_before_worst():
    rng = np.random.default_rng(4)
    seqs = [tuple(rng.permutation(7).tolist()) for _ in range(5)]
    items = [(s, i, 0.0) for i, s in enumerate(seqs)] + [(seqs[1], 1, 0.0)]
    pop = make_pop(items, mu=5, lambda_=1, mu_elite=2, mu_close=1)
    removed = select_survivors(pop)
    assert [ind.seq for ind in removed] == [seqs[1]]
    assert len(pop) == 5 and seqs[4] in [ind.seq for ind in pop]


def test_no_duplicates_removes_sequential_worst():
    rng = np.random.default_rng(5)
    seqs = list({tuple(rng.permutation(8).tolist()) for _ in range(30)})[:30]
    items = [(s, int(rng.integers(10)), float(rng.random())) for s in seqs]
    params = dict(mu=20, lambda_=10, mu_elite=10, mu_close=3)
    pop = make_pop(items, **params)
    shadow = make_pop(items, **params)
    expected = []
    while len(shadow) > 20:
        fit = compute_biased_fitness(shadow).fitness
        worst = max(range(len(shadow)), key=lambda i: (fit[i], i))
        expected.append(shadow.remove(worst))
    assert select_survivors(pop) == expected


def test_elites_survive_random_populations():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        size, mu = 12, 6
        base = [tuple(rng.permutation(6).tolist()) for _ in range(size)]
        # a sprinkle of clones
        for k in rng.integers(size, size=3):
            base[int(rng.integers(size))] = base[int(k)]
        # clones share their evaluation, as they would in a real run
        evals = {s: (int(rng.integers(6)), float(rng.integers(3))) for s in base}
        items = [(s, *evals[s]) for s in base]
        pop = make_pop(items, mu=mu, lambda_=size - mu, mu_elite=3, mu_close=2)
        ranked = sorted(pop.members, key=lambda ind: (ind.eval.switches, ind.eval.tie_break, ind.birth))
        elite_seqs = {ind.seq for ind in ranked[:3]}
        min_switch = ranked[0].eval.switches
        select_survivors(pop)
        kept = {ind.seq for ind in pop}
        assert len(pop) == mu
        assert elite_seqs <= kept
        assert min(ind.eval.switches for ind in pop) == min_switch


def test_select_survivors_precondition():
    pop = make_pop([((0, 1, 2), 0, 0.0)] * 3, mu=5, lambda_=1, mu_elite=2, mu_close=1)
    with pytest.raises(ValueError):
        select_survivors(pop)


# ---- driver


def test_params_validation():
    for bad in [dict(mu=1), dict(lambda_=0), dict(mu_elite=0), dict(mu_elite=30), dict(mu_close=20),
                dict(i_max=0), dict(time_limit=0), dict(neighborhoods=("or_opt",))]:
        with pytest.raises(ValueError):
            HgsParams(**bad)
    assert "mu=20" in HgsParams().snapshot()


def test_all_tools_fit_gives_zero_immediately():
    inst = generate_instance(8, 6, 6, seed=3)
    rep = run_hgs(inst, HgsParams(seed=2))
    assert rep.best == Evaluation(0, 0.0)
    assert rep.iterations == 0


def test_single_job(one_job):
    rep = run_hgs(one_job)
    assert rep.best_sequence == (0,) and rep.best.switches == 0


def test_small_instances_reach_oracle_optimum():
    rng = np.random.default_rng(7)
    for _ in range(6):
        inst = random_instance(rng, n_max=7, n_min=4)
        opt = exact_best_sequence(inst)
        rep = run_hgs(inst, HgsParams(seed=int(rng.integers(100)), i_max=300))
        assert rep.best.switches == opt.best_switches


def test_table1_reaches_optimum(table1):
    rep = run_hgs(table1, HgsParams(seed=3, i_max=300))
    assert rep.best.switches == TABLE1_OPTIMUM
    assert evaluate(table1, rep.best_sequence) == rep.best


def test_run_is_deterministic(table1):
    params = HgsParams(seed=5, i_max=200)
    a, b = run_hgs(table1, params), run_hgs(table1, params)
    assert (a.best_sequence, a.best, a.iterations) == (b.best_sequence, b.best, b.iterations)
    assert [(t.iteration, t.switches, t.tie_break) for t in a.trace] == [
        (t.iteration, t.switches, t.tie_break) for t in b.trace
    ]


def test_trace_is_monotone_and_population_bounded():
    inst = generate_instance(15, 20, 8, seed=4)
    params = HgsParams(seed=1, i_max=150, mu=8, lambda_=10, mu_elite=4, mu_close=3)
    hgs = HybridGeneticSearch(inst, params, record_population=True)
    hgs.initialize()
    while not hgs.finished():
        hgs.audit()
        hgs.step()
    rep = hgs.report()
    assert rep.selections == len(rep.snapshots) > 0
    assert all(len(s) == params.mu for s in rep.snapshots)
    evals = [Evaluation(t.switches, t.tie_break) for t in rep.trace]
    assert all(b.better_than(a) for a, b in itertools.pairwise(evals))
    assert [t.iteration for t in rep.trace] == sorted(t.iteration for t in rep.trace)
    assert rep.best == evals[-1]


def test_time_limit_stops_the_search():
    inst = generate_instance(25, 30, 10, seed=5)
    rep = run_hgs(inst, HgsParams(seed=1, i_max=10**9, time_limit=0.5))
    assert rep.elapsed < 5
