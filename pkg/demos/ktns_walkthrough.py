"""
KTNS walkthrough on the 10-job example
======================================

Decode one sequence, look at the magazine, count switches and 0-blocks.
"""

import numpy as np

from hgs_ssp import Instance, ktns_decode, tie_break_objective
from hgs_ssp.evaluation import zero_blocks

# tools x jobs: row t, column j is 1 when job j needs tool t
need = np.array([
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 1],
    [0, 1, 0, 0, 0, 1, 1, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
])
inst = Instance.from_matrix(need, capacity=4, name="example")
print(inst.n_jobs, "jobs,", inst.n_tools, "tools, magazine of", inst.capacity)

# jobs in their natural order (0-based inside the library)
plan = ktns_decode(inst, range(10))
print(plan.to_text())   # (1) marks a tool kept although the job does not need it
print("switches:", plan.switches)

# every column fits the magazine
print("tools per position:", plan.loaded.sum(axis=0))

# 0-blocks: runs of zeros between two ones on a row
print("0-block sizes:", sorted(zero_blocks(plan)))
print("tie-break:", round(tie_break_objective(plan), 6))

# tool 8 (row index 7): loaded at position 4, out for positions 5-7, back at 8
print("row of tool 8:", plan.loaded[7])

# a different order, same tools
plan2 = ktns_decode(inst, [9, 7, 3, 2, 8, 6, 5, 4, 1, 0])
print("another order:", plan2.switches, "switches")
