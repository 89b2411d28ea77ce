"""
A miniature benchmark campaign
==============================

Generate a few instance groups, solve each instance several times and
aggregate the way the CLI ``bench`` summary does: Best is the mean of the
per-instance best, Avg the mean of the per-instance averages.
"""

from statistics import mean

import numpy as np

from hgs_ssp import HgsParams, generate_instance, run_hgs

groups = [(10, 12, 4), (10, 12, 6), (15, 20, 8)]
runs = 3

for n, m, c in groups:
    best, avg = [], []
    for k in range(4):
        inst = generate_instance(n, m, c, seed=100 + k)
        vals = [run_hgs(inst, HgsParams(seed=s, i_max=500)).best.switches for s in range(1, runs + 1)]
        best.append(min(vals))
        avg.append(mean(vals))
    print(f"n={n:3d} m={m:3d} C={c:3d}  Best={mean(best):6.2f}  Avg={mean(avg):6.2f}")

# a bigger magazine means fewer switches
for c in (5, 8, 12, 15):
    wider = generate_instance(12, 15, c, max_tools=5, seed=7)
    print("C =", c, "->", run_hgs(wider, HgsParams(seed=1, i_max=300)).best.switches, "switches")

# same jobs every time: the requirements only depend on the seed and max_tools
print("tools per job:", np.bincount([len(r) for r in wider.requirements]))
