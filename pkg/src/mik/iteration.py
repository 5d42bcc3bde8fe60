"""Index iteration for closed orbits given by (i1, normal form of the monodromy).

With a = i1 + S^+(1) - C and b = S^+(1) + C,

    i(m) = m*a + 2 * sum_theta E(m*theta/(2 pi)) * S^-(e^{i theta}) - b,

where E is the ceiling and the sum runs over circle points other than 1.
The mean index is a + sum_theta (theta/pi) * S^-(e^{i theta}).
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Any, Dict, Optional

import numpy as np

from .angles import make_context
from .errors import DimensionError, DomainError, HypothesisError
from .normal_form import D, N1, N2, R, NormalFormDecomposition
from .splitting import circle_splitting, splitting_at

# Float evaluation of m*theta/(2 pi) is trusted this far from an integer.
_FLOAT_MARGIN = 1e-7


@dataclass(frozen=True)
class OrbitRecord:
    """One prime closed orbit: label, first-iterate index and monodromy normal form."""

    label: str
    n: int
    i1: int
    decomposition: NormalFormDecomposition
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)
    s_plus_one: int = field(init=False, compare=False)
    c: int = field(init=False, compare=False)
    circle: tuple = field(init=False, compare=False, repr=False)
    mean: Any = field(init=False, compare=False)
    mean_exact: Optional[Fraction] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.decomposition, NormalFormDecomposition):
            object.__setattr__(self, "decomposition",
                               NormalFormDecomposition.of(*self.decomposition))
        if self.decomposition.n != self.n:
            raise DimensionError(
                f"orbit {self.label!r}: decomposition has n = {self.decomposition.n}, "
                f"record says n = {self.n}")
        if isinstance(self.i1, bool) or int(self.i1) != self.i1:
            raise DomainError(f"orbit {self.label!r}: i1 must be an integer")
        object.__setattr__(self, "i1", int(self.i1))
        s1 = splitting_at(self.decomposition, 1).s_plus
        circle = tuple(circle_splitting(self.decomposition))
        c = sum(s for _, s in circle)
        object.__setattr__(self, "s_plus_one", s1)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "circle", circle)
        a = self.i1 + s1 - c
        if all(theta.is_rational for theta, _ in circle):
            exact = a + sum((theta.over_pi * s for theta, s in circle), Fraction(0))
            object.__setattr__(self, "mean_exact", exact)
            ctx = make_context()
            object.__setattr__(self, "mean", ctx.mpf(exact.numerator) / exact.denominator)
        else:
            ctx = make_context()
            mean = ctx.mpf(a)
            for theta, s in circle:
                mean += theta.value(ctx) / ctx.pi * s
            object.__setattr__(self, "mean_exact", None)
            object.__setattr__(self, "mean", mean)

    @property
    def slope(self):
        """a = i1 + S^+(1) - C, the linear coefficient of the iteration formula."""
        return self.i1 + self.s_plus_one - self.c

    @property
    def offset(self):
        """b = S^+(1) + C."""
        return self.s_plus_one + self.c


def _check_m(m):
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"iterate number must be a positive integer, got {m!r}")
    return int(m)


def index_at(r, m):
    """Maslov-type index i(gamma, m) of the m-th iterate."""
    m = _check_m(m)
    total = m * r.slope - r.offset
    for theta, s in r.circle:
        total += 2 * s * theta.ceil_turns(m)
    return total


def index_table(r, m_max):
    """``index_at(r, m)`` for m = 1..m_max as an int64 array.

    Evaluates the ceilings in floating point and recomputes exactly every
    entry that lies within a safety margin of an integer.
    """
    ms = np.arange(1, m_max + 1, dtype=np.int64)
    out = ms * r.slope - r.offset
    for theta, s in r.circle:
        if theta.is_rational:
            p, q = theta.over_pi.numerator, 2 * theta.over_pi.denominator
            ceil = -((-ms * p) // q)
        else:
            x = ms * (float(theta) / (2 * math.pi))
            ceil = np.ceil(x).astype(np.int64)
            close = np.abs(x - np.rint(x)) < _FLOAT_MARGIN
            for i in np.nonzero(close)[0]:
                ceil[i] = theta.ceil_turns(int(ms[i]))
        out = out + 2 * s * ceil
    return out


def mean_index(r):
    """Mean index as an mpmath number (exact Fraction in ``r.mean_exact`` when available)."""
    return r.mean


def _block_nullity(block, m):
    if isinstance(block, N1):
        if block.lam == -1 and m % 2:
            return 0
        return 1 if block.b != 0 else 2
    if isinstance(block, D):
        return 0
    if isinstance(block, (R, N2)):
        if block.theta.is_rational and (m * block.theta.over_pi / 2).denominator == 1:
            return 2
        return 0
    raise TypeError(f"not a normal-form block: {block!r}")


def nullity_at(r, m):
    """nu(gamma, m) = dim ker(M^m - I), read off the normal form."""
    m = _check_m(m)
    return sum(_block_nullity(b, m) for b in r.decomposition.blocks)


def viterbo_at(r, m):
    """Viterbo index i(y^m) = i(gamma, m) - n."""
    return index_at(r, m) - r.n


def is_nondegenerate(r):
    """True iff every iterate has nullity exactly one.

    That happens iff the only root-of-unity eigenvalue is 1, carried by a
    single N1(1, b) with b != 0.
    """
    shear = 0
    for b in r.decomposition.blocks:
        if isinstance(b, N1):
            if b.lam == -1 or b.b == 0:
                return False
            shear += 1
        elif isinstance(b, (R, N2)) and b.theta.is_rational:
            return False
    return shear == 1


# -- m-bar ------------------------------------------------------------------

def _difference_floor(r, m):
    """A lower bound for min over l >= 1 of i(m + l) - i(l); exact without irrational angles."""
    base = m * r.slope
    rational = [(t, s) for t, s in r.circle if t.is_rational]
    for theta, s in r.circle:
        if not theta.is_rational:
            # E((m+l)x) - E(lx) >= floor(mx) for irrational x
            base += 2 * s * (theta.ceil_turns(m) - 1)
    if not rational:
        return base
    period = 1
    for theta, _ in rational:
        period = math.lcm(period, 2 * theta.over_pi.denominator)
    best = None
    for l in range(1, period + 1):
        v = sum(2 * s * (theta.ceil_turns(m + l) - theta.ceil_turns(l))
                for theta, s in rational)
        best = v if best is None else min(best, v)
    return base + best


def safe_mbar(r, n, shift=1):
    """Closed-form m_0 = ceil((n + shift + 2C)/mean) valid for one record."""
    ctx = make_context()
    if r.mean <= 0:
        raise HypothesisError(f"orbit {r.label!r}: mean index not positive")
    return max(1, int(ctx.ceil((n + shift + 2 * r.c) / r.mean)))


def mbar(records, n, shift=1):
    """Least m-bar with i(m + l) >= i(l) + n + shift for all l >= 1, m >= m-bar and all records.

    Starts from the closed-form bound and scans downwards while a certified
    lower bound of min_l (i(m + l) - i(l)) still clears the threshold.  With
    irrational angles that lower bound may be slightly pessimistic, so the
    result is always valid but not always the least possible value.
    """
    records = list(records)
    if not records:
        return 1
    for r in records:
        if r.mean <= 0:
            raise HypothesisError(f"orbit {r.label!r}: mean index not positive")
    threshold = n + shift
    result = 1
    for r in records:
        m = safe_mbar(r, n, shift)
        while m > 1 and _difference_floor(r, m - 1) >= threshold:
            m -= 1
        result = max(result, m)
    return result


def brute_mbar(records, n, shift=1, l_max=None):
    """m-bar by direct enumeration of l up to ``l_max`` (a cross-check for :func:`mbar`).

    By default l runs over at least one full period of the rational angles,
    which makes the answer exact for records without irrational angles.
    """
    threshold = n + shift
    result = 1
    for r in records:
        m0 = safe_mbar(r, n, shift)
        period = 1
        for theta, _ in r.circle:
            if theta.is_rational:
                period = math.lcm(period, (theta.over_pi / 2).denominator)
        lm = l_max or max(10 * m0, period + 1)
        table = index_table(r, m0 + lm)
        m = m0
        while m > 1:
            diffs = table[m - 1:m - 1 + lm] - table[:lm]
            if diffs.min() < threshold:
                break
            m -= 1
        result = max(result, m)
    return result
