"""
Jump tuples for random orbit systems
=====================================

Draw a few orbit records in dimension 6 (one irrational rotation and one
plane without S^- per orbit, mostly), search common index jump tuples, and
pair two of them with complementary offsets Delta + Delta' = C.
"""

import sys

import numpy as np

from mik.iteration import mbar
from mik.jump import find_conjugate_pair, scan_tuples, verify_tuple
from mik.random_systems import random_jump_system

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
records = random_jump_system(np.random.default_rng(seed))
for r in records:
    print(r.label, r.i1, [type(b).__name__ for b in r.decomposition.blocks],
          f"mean {float(r.mean):.6f}", "C =", r.c)

mb = mbar(records, 3)
res = scan_tuples(records, mb, eps=0.05, n_max=10**8, want=3)
print("m-bar", mb, "- first tuples:")
for t in res:
    print("  N =", t.N, "m =", t.m, "chi =", t.chi, "Delta =", t.delta)
    print("   ", verify_tuple(records, t, mb).summary())

t, tc = find_conjugate_pair(records, mb)
print("conjugate pair: N =", t.N, "and", tc.N)
print("  Delta  ", t.delta)
print("  Delta' ", tc.delta)
print("  C      ", tuple(r.c for r in records))
