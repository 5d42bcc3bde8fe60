"""
Certificates for irrational ellipsoids
=======================================

The n planar orbits of an ellipsoid with squared radii sqrt(2), sqrt(3),
sqrt(5), ... are elliptic and non-degenerate.  The certificate finds a pair
of jump tuples with complementary offsets, counts which iterates land above
and below the critical degree, and reports the lower bounds the census
satisfies.  A planted census of hyperbolic orbits is rejected.
"""

import sys
import time

from mik import D, N1, EllipsoidSpec, NormalFormDecomposition, OrbitRecord, certify, ellipsoid_system
from mik.iteration import index_table

top = int(sys.argv[1]) if len(sys.argv) > 1 else 4

for n in range(1, top + 1):
    records = ellipsoid_system(EllipsoidSpec.sqrt_primes(n))
    print(f"\n== n = {n}")
    for r in records:
        print(f"  {r.label}: i1 = {r.i1:3d}  mean = {float(r.mean):.10f}  "
              f"i(1..6) = {index_table(r, 6).tolist()}")
    t0 = time.perf_counter()
    rep = certify(records, n)
    print(f"  verdict {rep.verdict} in {time.perf_counter() - t0:.2f} s, "
          f"tuples N = {[t.N for t in rep.tuple_pair]}")
    for b in rep.bounds:
        print(f"    {b['claim']}: {b['value']}")
    print("  witnesses", rep.witnesses)

# three hyperbolic orbits in R^4 with i1 = 2
fake = [OrbitRecord(f"h{k}", 2, 2, NormalFormDecomposition.of(N1(1, 1), D(k + 2)))
        for k in range(3)]
rep = certify(fake, 2)
print("\nhyperbolic census:", rep.verdict, "at", rep.stage, "-", rep.reason)
