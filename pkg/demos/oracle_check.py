"""
The iteration formula against crossing counts
==============================================

Build a Hamiltonian generator H with exp(H) a diamond sum of normal forms,
count crossings along t -> exp(t m H) for m = 1..12, and compare with the
closed-form iterate indices.  Splitting numbers are read off the same way.
"""

from mik import Angle, N1, N2, R, NormalFormDecomposition, OrbitRecord, index_at
from mik.oracle import diamond_generator, generator_iterate_indices, oracle_splitting
from mik.splitting import block_splitting

blocks = [N1(1, 1), R(Angle.irrational("2.2")), N2.standard(Angle.rational(1, 3), 0, 1)]
H, end = diamond_generator(blocks, windings=[0, 1, 0])
oracle = generator_iterate_indices(H, 12)

d = NormalFormDecomposition.of(*end)
r = OrbitRecord("o", d.n, oracle[0], d)
print("oracle ", oracle)
print("formula", [index_at(r, m) for m in range(1, 13)])

for b in blocks:
    for omega in (1, Angle.rational(1, 3), Angle.irrational("2.2")):
        print(f"{b!r:60.60} {omega!s:>12}", oracle_splitting(b, omega), block_splitting(b, omega))
