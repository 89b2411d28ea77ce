"""
Solving a small instance and checking it against brute force
============================================================
"""

import time

from hgs_ssp import HgsParams, exact_best_sequence, generate_instance, run_hgs

inst = generate_instance(n=8, m=12, c=5, seed=21)
print(inst.name)

# 8! = 40320 orders, cheap enough to enumerate
t0 = time.perf_counter()
exact = exact_best_sequence(inst)
print("optimum:", exact.best_switches, "after", exact.explored, "orders",
      f"({time.perf_counter() - t0:.2f}s)")

# default parameters: mu=20, lambda=40, 2000 non-improving children
for seed in (1, 2, 3):
    rep = run_hgs(inst, HgsParams(seed=seed))
    print(f"seed {seed}: {rep.best.switches} switches, {rep.iterations} children, {rep.elapsed:.2f}s")

# how the best evolved during the last run
for point in rep.trace:
    print(f"  child {point.iteration:5d}: {point.switches} ({point.tie_break:.3f})")

# same seed, same answer
again = run_hgs(inst, HgsParams(seed=3))
print("repeatable:", again.best_sequence == rep.best_sequence)
