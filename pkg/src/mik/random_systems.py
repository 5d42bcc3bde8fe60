"""Seeded generators of random normal forms, orbit records and small orbit systems.

All generators take a ``numpy.random.Generator`` and are deterministic for a
given seed.  Irrational angles are produced from random turns and flagged
irrational by construction.
"""

from fractions import Fraction

from .angles import Angle
from .errors import DomainError
from .iteration import OrbitRecord
from .normal_form import D, N1, N2, R, NormalFormDecomposition

BLOCK_KINDS = ("N1", "D", "R", "N2")


def random_angle(rng, rational=None, max_den=12):
    """A circle angle other than pi; rational (p/q)pi with q <= max_den or a flagged-irrational one."""
    if rational is None:
        rational = bool(rng.integers(2))
    if rational:
        while True:
            q = int(rng.integers(2, max_den + 1))
            p = int(rng.integers(1, 2 * q))
            if Fraction(p, q) != 1:
                return Angle.rational(p, q)
    while True:
        turns = float(rng.uniform(0.01, 0.99))
        if abs(turns - 0.5) > 0.01:
            return Angle.from_turns(repr(turns), 160)


def _small_rational(rng, lo=-3, hi=3):
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, 4)))


def random_block(rng, kind=None, rational=None):
    kind = kind or BLOCK_KINDS[int(rng.integers(len(BLOCK_KINDS)))]
    if kind == "N1":
        return N1(int(rng.choice([1, -1])), _small_rational(rng))
    if kind == "D":
        while True:
            lam = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
            if lam != 1:
                return D(lam if rng.integers(2) else -lam)
    if kind == "R":
        return R(random_angle(rng, rational))
    if kind == "N2":
        while True:
            theta = random_angle(rng, rational)
            b2, b3 = _small_rational(rng), _small_rational(rng)
            if b2 == b3:
                continue
            try:
                return N2.standard(theta, b2, b3)
            except DomainError:
                continue
    raise ValueError(f"unknown block kind {kind!r}")


def random_decomposition(rng, n, kinds=BLOCK_KINDS):
    """Random diamond sum of total dimension 2n."""
    blocks, left = [], n
    while left:
        options = [k for k in kinds if k != "N2" or left >= 2]
        block = random_block(rng, options[int(rng.integers(len(options)))])
        blocks.append(block)
        left -= block.dim // 2
    return NormalFormDecomposition.of(*blocks)


def random_record(rng, n=None, i1_range=(-6, 6), label="x"):
    n = n or int(rng.integers(1, 5))
    d = random_decomposition(rng, n)
    i1 = int(rng.integers(i1_range[0], i1_range[1] + 1))
    return OrbitRecord(label, n, i1, d)


# blocks that carry no S^- anywhere on the circle; keeping every rational angle
# among them leaves the complementary offsets free to vary
def _quiet_plane(rng):
    if rng.integers(2):
        return D(Fraction(int(rng.integers(2, 6))) * (1 if rng.integers(2) else -1))
    return N1(-1, Fraction(int(rng.integers(1, 4))))


def _trivial_n2(rng):
    theta = Angle.rational(*[(1, 3), (2, 3), (4, 3), (5, 3)][int(rng.integers(4))])
    b2, b3 = (1, 0) if theta.over_pi < 1 else (0, 1)
    return N2.standard(theta, b2, b3)


def random_jump_system(rng, q=None, mean_range=(0.3, 5.0), label="y"):
    """q <= 4 records in dimension 2n = 6 with mean index in ``mean_range``.

    Each record is N1(1, 1) plus, in most cases, one irrational rotation and
    one plane without S^- (hyperbolic D or N1(-1, b > 0)); otherwise two such
    planes or a trivial N2 at a third-root angle.
    """
    q = q or int(rng.integers(1, 5))
    lo, hi = mean_range
    records = []
    for k in range(q):
        u = rng.random()
        if u < 0.8:
            rot = random_angle(rng, rational=False)
            tail = [R(rot), _quiet_plane(rng)]
            frac = float(rot) / 3.141592653589793
        else:
            tail = [_quiet_plane(rng), _quiet_plane(rng)] if u < 0.9 else [_trivial_n2(rng)]
            frac = 1.0
        # mean = i1 + 1 - C + sum (theta/pi) S^- = i1 + frac
        i1 = int(rng.choice([i for i in range(-2, 6) if lo < i + frac < hi]))
        d = NormalFormDecomposition.of(N1(1, 1), *tail)
        records.append(OrbitRecord(f"{label}{k + 1}", d.n, i1, d))
    return records
