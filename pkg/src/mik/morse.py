"""Morse-series bookkeeping for a finite census of non-degenerate closed orbits.

Everything is graded by the Viterbo index i(y^m) = i(gamma, m) - n.  An
iterate y^m contributes one unit to M_p, p = i(y^m), exactly when
i(y^m) - i(y) is even; otherwise its critical module vanishes.  The Betti
numbers are b_p = 1 for even p >= 0 and 0 otherwise.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from .angles import make_context
from .errors import HypothesisError
from .iteration import index_table, is_nondegenerate, viterbo_at


def betti(p):
    return 1 if p >= 0 and p % 2 == 0 else 0


def betti_sum(lo, hi):
    """sum of b_p for lo <= p <= hi."""
    lo = max(lo, 0)
    if hi < lo:
        return 0
    first = lo + (lo % 2)
    return 0 if first > hi else (hi - first) // 2 + 1


def betti_closed_form(N, n):
    """The two partial sums used by the counting argument, with their closed forms.

    n even: sum_{p=0}^{2N-n-2} b_p and N - n/2.
    n odd:  sum_{p=0}^{2N-n-1} b_p and N - (n-1)/2.
    """
    if n % 2 == 0:
        return betti_sum(0, 2 * N - n - 2), Fraction(2 * N - n, 2)
    return betti_sum(0, 2 * N - n - 1), Fraction(2 * N - n + 1, 2)


def euler_hat(r):
    """Average Euler characteristic of a non-degenerate orbit: +-1 or +-1/2."""
    if not is_nondegenerate(r):
        raise HypothesisError(
            f"orbit {r.label!r} is degenerate; chi-hat is only defined here for "
            "orbits whose iterates all have nullity one")
    i1, i2 = viterbo_at(r, 1), viterbo_at(r, 2)
    sign = 1 if i1 % 2 == 0 else -1
    return Fraction(sign) if (i2 - i1) % 2 == 0 else Fraction(sign, 2)


def identity_residual(records):
    """sum chi_hat/mean - 1/2 (an mpmath number; exactly 0 on realizable systems)."""
    ctx = make_context()
    total = ctx.mpf(0)
    for r in records:
        if r.mean <= 0:
            raise HypothesisError(f"orbit {r.label!r}: mean index not positive")
        c = euler_hat(r)
        total += ctx.mpf(c.numerator) / c.denominator / r.mean
    return total - ctx.mpf(1) / 2


def alternating_count(r, start, length):
    """sum over m in [start, start + length) of (-1)^{i(y^m)} [i(y^m) - i(y) even]."""
    table = index_table(r, start + length - 1)[start - 1:] - r.n
    v1 = viterbo_at(r, 1)
    keep = (table - v1) % 2 == 0
    return int(np.sum(np.where(table[keep] % 2 == 0, 1, -1)))


def index_floor(r):
    """A lower bound for every Viterbo index of the iterates of ``r``."""
    # i(m) >= m*mean - (S^+ + C) >= mean - (S^+ + C)
    return -r.offset - r.n


def iterate_bound(r, P):
    """Every iterate with Viterbo index <= P has m at most this."""
    ctx = make_context()
    return max(1, int(ctx.floor((P + r.n + 2 * r.offset) / r.mean)))


@dataclass
class MorseLedger:
    window: Tuple[int, int]
    morse: Dict[int, int]
    betti: Dict[int, int]
    chi_hat: Dict[str, Fraction]
    floor: int
    notices: List[str] = field(default_factory=list)

    def rows(self):
        lo, hi = self.window
        for p in range(lo, hi + 1):
            yield p, self.morse.get(p, 0), self.betti.get(p, 0)


def morse_numbers(records, window):
    """Morse-type numbers M_p for p in the window (Viterbo grading)."""
    records = list(records)
    lo, hi = window
    notices = []
    chi = {}
    for r in records:
        if r.mean <= 0:
            raise HypothesisError(f"orbit {r.label!r}: mean index not positive")
        chi[r.label] = euler_hat(r)
    floor = min((index_floor(r) for r in records), default=0)
    floor = min(floor, 0)
    if lo < floor:
        notices.append(f"window start {lo} clipped to the index floor {floor}")
        lo = floor
    counts = {}
    for r in records:
        mmax = iterate_bound(r, hi)
        v = index_table(r, mmax) - r.n
        v1 = int(v[0])
        sel = v[((v - v1) % 2 == 0) & (v >= lo) & (v <= hi)]
        vals, cnt = np.unique(sel, return_counts=True)
        for p, c in zip(vals.tolist(), cnt.tolist()):
            counts[p] = counts.get(p, 0) + c
    morse = {p: counts.get(p, 0) for p in range(lo, hi + 1)}
    bet = {p: betti(p) for p in range(lo, hi + 1)}
    return MorseLedger((lo, hi), morse, bet, chi, floor, notices)


@dataclass(frozen=True)
class MorseInequality:
    P: int
    u: int
    alternating: int

    @property
    def holds(self):
        return self.u >= 0


def morse_inequality(ledger, P):
    """u_P = sum_{p <= P} (-1)^{P-p} (M_p - b_p), the coefficient of t^P in U(t).

    ``alternating`` is sum_{p <= P} (-1)^p M_p.  The ledger has to start at
    or below the index floor.
    """
    lo, hi = ledger.window
    if lo > ledger.floor:
        raise ValueError(f"ledger starts at {lo}, above the index floor {ledger.floor}")
    if P > hi:
        raise ValueError(f"P = {P} lies beyond the ledger window end {hi}")
    alt = sum((-1) ** (p % 2) * ledger.morse.get(p, 0) for p in range(lo, P + 1))
    signed = alt - betti_sum(lo, P)
    return MorseInequality(P, (-1) ** (P % 2) * signed, alt)


def alternating_sum_below(records, P):
    """sum_{p <= P} (-1)^p M_p computed directly from the iterates."""
    total = 0
    for r in records:
        v = index_table(r, iterate_bound(r, P)) - r.n
        v1 = int(v[0])
        sel = v[((v - v1) % 2 == 0) & (v <= P)]
        total += int(np.sum(np.where(sel % 2 == 0, 1, -1)))
    return total
