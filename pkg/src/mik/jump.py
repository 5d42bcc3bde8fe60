"""Common index jump tuples: search and exact verification.

A tuple (N, m_1..m_q, chi_1..chi_q) with common multiple M satisfies

    m_k = ([N/(M i_k)] + chi_k) * M,   |{N/(M i_k)} - chi_k| < eps,

where i_k is the mean index of orbit k, and is accepted only when the four
iterate identities hold exactly for 1 <= m <= m-bar:

    nu(2m_k +- m) = nu(m)
    i(2m_k + m)   = 2N + i(m)
    i(2m_k - m)   = 2N - i(m) - 2(S^+ + Q_k(m))
    i(2m_k)       = 2N - (S^+ + C - 2 Delta_k)

The scan is a vectorised float64 prefilter over blocks of N followed by the
exact check, which is the only thing that decides acceptance.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import List, Optional, Tuple

import numpy as np

from .angles import make_context
from .errors import ConsistencyError, DomainError, HypothesisError, MikError
from .iteration import index_at, nullity_at
from .normal_form import N2, R

DEFAULT_DELTA = Fraction(1, 1000)
CHUNK = 1 << 18
# Slack kept between float prefilter decisions and the exact margins.
_PREFILTER_SLACK = 1e-6


class SearchExhausted(MikError):
    """No (further) verified tuple below the search bound."""

    def __init__(self, message, near_miss=None):
        super().__init__(message)
        self.near_miss = near_miss


@dataclass(frozen=True)
class JumpTuple:
    N: int
    m: Tuple[int, ...]
    chi: Tuple[int, ...]
    M_common: int
    eps: float
    delta: Tuple[int, ...] = ()

    def as_dict(self):
        return {"N": self.N, "m": list(self.m), "chi": list(self.chi),
                "M_common": self.M_common, "eps": self.eps, "delta": list(self.delta)}


@dataclass
class Check:
    k: int
    m: Optional[int]
    identity: str
    lhs: int
    rhs: int

    @property
    def ok(self):
        return self.lhs == self.rhs


@dataclass
class Verification:
    tuple: JumpTuple
    checks: List[Check] = field(default_factory=list)
    problems: List[str] = field(default_factory=list)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    @property
    def passed(self):
        return not self.problems and not self.failures

    def summary(self):
        if self.passed:
            return f"N={self.tuple.N}: {len(self.checks)} identities hold"
        parts = list(self.problems)
        parts += [f"{c.identity} fails at k={c.k}, m={c.m}: {c.lhs} != {c.rhs}"
                  for c in self.failures[:5]]
        return f"N={self.tuple.N}: " + "; ".join(parts)


@dataclass
class ScanResult:
    tuples: List[JumpTuple]
    scanned: int
    near_miss: Optional[dict] = None

    @property
    def exhausted(self):
        return not self.tuples

    def __iter__(self):
        return iter(self.tuples)

    def __len__(self):
        return len(self.tuples)

    def __getitem__(self, i):
        return self.tuples[i]


# -- helpers ------------------------------------------------------------------

def common_multiple(records):
    """Least M with M*theta/pi integral for every rational circle angle in the system.

    The eigenvalue -1 (theta = pi) never constrains M.
    """
    M = 1
    for r in records:
        for b in r.decomposition.blocks:
            if isinstance(b, (R, N2)) and b.theta.is_rational:
                M = math.lcm(M, b.theta.over_pi.denominator)
    return M


def _check_records(records):
    records = list(records)
    if not records:
        raise DomainError("need at least one orbit record")
    for k, r in enumerate(records):
        if r.mean <= 0:
            raise HypothesisError(f"orbit {k} ({r.label!r}): mean index not positive")
    return records


def _margin(theta, mbar):
    """min over 1 <= m <= mbar of the distance from m*theta/(2 pi) to the integers."""
    ctx = make_context()
    best = ctx.mpf("0.5")
    for m in range(1, mbar + 1):
        x = theta.turns_times(m, ctx)
        best = min(best, abs(x - ctx.nint(x)))
    return best


def delta_window(record, mbar):
    """Window delta for Delta_k: fractional parts below it count as positive offsets."""
    irr = [t for t, _ in record.circle if not t.is_rational]
    if not irr:
        return Fraction(1, 2)
    return min(_margin(t, mbar) for t in irr)


def compute_offsets(record, m_k, N=None, delta=DEFAULT_DELTA, mbar=None):
    """(Delta_k, Q_k) for iterate 2m_k of ``record``.

    Delta_k sums S^- over circle points with 0 < {m_k theta/pi} < delta.  The
    count is cross-checked against a window of 1/2 (every fractional part
    must already sit within delta of an integer) and, when N is given,
    against Delta_k = (i(2m_k) - 2N + S^+ + C)/2.  ``Q_k`` is returned as a
    function of m.
    """
    ctx = make_context()
    if mbar is not None:
        delta = delta_window(record, mbar)
    delta = ctx.mpf(delta.numerator) / delta.denominator if isinstance(delta, Fraction) \
        else ctx.mpf(delta)
    count, outside = 0, False
    for theta, s in record.circle:
        if theta.is_rational:
            f = theta.frac_over_pi(m_k)
            if f != 0:
                raise ConsistencyError(
                    f"{record.label}: m_k*theta/pi is not an integer for rational theta={theta!r}")
            continue
        f = theta.frac_over_pi(m_k, ctx)
        if 0 < f < delta:
            count += s
        elif f <= 1 - delta:
            outside = True
    if outside:
        raise ConsistencyError(
            f"{record.label}: a fractional part {{m_k theta/pi}} lies outside the delta window")
    if N is not None:
        twice = index_at(record, 2 * m_k) - 2 * N + record.s_plus_one + record.c
        if twice % 2 or twice // 2 != count:
            raise ConsistencyError(
                f"{record.label}: Delta from the window ({count}) disagrees with "
                f"the 2m_k index identity ({Fraction(twice, 2)})")

    rational = [(t, s) for t, s in record.circle if t.is_rational]

    def Q(m):
        return sum(s for t, s in rational
                   if t.frac_over_pi(m_k) == 0 and (m * t.over_pi / 2).denominator == 1)

    return count, Q


def _build(records, N, M, eps):
    ctx = make_context()
    m, chi = [], []
    for r in records:
        x = ctx.mpf(N) / (M * r.mean)
        f = x - ctx.floor(x)
        c = 1 if f >= 0.5 else 0
        if abs(f - c) >= eps:
            return None
        chi.append(c)
        m.append((int(ctx.floor(x)) + c) * M)
    return tuple(m), tuple(chi)


def verify_tuple(records, t, mbar, strict=True):
    """Check every identity of a candidate tuple exactly; failures are report content.

    With ``strict=False`` an iterate 2m_k closer than m-bar + 2 to the start
    is allowed, and the window identities are checked only for the m with
    2m_k - m >= 1.
    """
    records = list(records)
    rep = Verification(t)
    if len(t.m) != len(records):
        rep.problems.append(f"tuple has {len(t.m)} iterates for {len(records)} orbits")
        return rep
    built = _build(records, t.N, t.M_common, t.eps)
    if built is None:
        rep.problems.append("eps condition fails for some orbit")
    elif built != (t.m, t.chi):
        rep.problems.append(f"m_k/chi_k do not match N (expected m={built[0]}, chi={built[1]})")
    deltas = []
    for k, (r, mk) in enumerate(zip(records, t.m)):
        if 2 * mk < mbar + 2 and strict:
            rep.problems.append(f"k={k}: 2m_k = {2 * mk} < m-bar + 2 = {mbar + 2}")
            continue
        try:
            d, Q = compute_offsets(r, mk, None, mbar=mbar)
        except ConsistencyError as exc:
            rep.problems.append(f"k={k}: {exc}")
            d, Q = None, (lambda m: 0)
        deltas.append(d)
        N = t.N
        for m in range(1, min(mbar, 2 * mk - 1) + 1):
            nu = nullity_at(r, m)
            rep.checks.append(Check(k, m, "nullity(2m_k+m)", nullity_at(r, 2 * mk + m), nu))
            rep.checks.append(Check(k, m, "nullity(2m_k-m)", nullity_at(r, 2 * mk - m), nu))
            im = index_at(r, m)
            rep.checks.append(Check(k, m, "i(2m_k+m)", index_at(r, 2 * mk + m), 2 * N + im))
            rep.checks.append(Check(k, m, "i(2m_k-m)", index_at(r, 2 * mk - m),
                                    2 * N - im - 2 * (r.s_plus_one + Q(m))))
        if d is not None:
            rep.checks.append(Check(k, None, "i(2m_k)", index_at(r, 2 * mk),
                                    2 * N - (r.s_plus_one + r.c - 2 * d)))
    if t.delta and tuple(deltas) != tuple(t.delta):
        rep.problems.append(f"stored Delta {t.delta} differs from recomputed {tuple(deltas)}")
    return rep


def default_eps(records, chi_hats=None):
    """min(0.05, 1/(1 + 2 M sum |chi_hat|)), the largest eps that keeps the N-identity exact."""
    M = common_multiple(records)
    if chi_hats is None:
        return 0.05
    total = sum(abs(Fraction(c)) for c in chi_hats)
    return min(0.05, float(Fraction(1) / (1 + 2 * M * total)))


# -- scanning -----------------------------------------------------------------

class _Prefilter:
    """Float64 model of the acceptance conditions for a block of N values."""

    def __init__(self, records, mbar, eps, M):
        self.M = M
        self.eps = eps
        self.inv = np.array([1.0 / (M * float(r.mean)) for r in records])
        self.parts = []
        for r in records:
            slope = r.slope
            angles = []
            for theta, s in r.circle:
                if theta.is_rational:
                    angles.append((True, theta.over_pi, s, 0.0))
                else:
                    margin = float(_margin(theta, mbar)) - _PREFILTER_SLACK
                    angles.append((False, float(theta) / math.pi, s, margin))
            self.parts.append((slope, angles))
        self.mmin = mbar + 2

    def run(self, lo, hi):
        Ns = np.arange(lo, hi, dtype=np.int64)
        Nf = Ns.astype(np.float64)
        ok = np.ones(len(Ns), dtype=bool)
        defect = np.zeros(len(Ns))
        ms = []
        for k in range(len(self.inv)):
            x = Nf * self.inv[k]
            fl = np.floor(x)
            f = x - fl
            chi = (f >= 0.5).astype(np.int64)
            dev = np.abs(f - chi)
            defect = np.maximum(defect, dev)
            ok &= dev < self.eps
            m = (fl.astype(np.int64) + chi) * self.M
            ok &= 2 * m >= self.mmin
            ms.append(m)
        # the N = m_k a + sum s round(m_k theta/pi) identity and the margins
        for k, (slope, angles) in enumerate(self.parts):
            idx = np.nonzero(ok)[0]
            if not len(idx):
                break
            m = ms[k][idx]
            total = m * slope
            good = np.ones(len(idx), dtype=bool)
            for rational, x, s, margin in angles:
                if rational:
                    total = total + s * ((m * x.numerator) // x.denominator)
                else:
                    y = m.astype(np.float64) * x
                    r = np.rint(y)
                    good &= np.abs(y - r) < margin
                    total = total + s * r.astype(np.int64)
            good &= total == Ns[idx]
            ok[idx[~good]] = False
        best = int(np.argmin(defect))
        return [int(v) for v in Ns[ok]], (float(defect[best]), int(Ns[best]))


def _candidates(records, mbar, eps, M, n_min, n_max, threads, near):
    """Prefilter survivors in increasing N; ``near`` collects the best near miss."""
    pre = _Prefilter(records, mbar, eps, M)
    lo = max(1, n_min)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while lo <= n_max:
            bounds = []
            for _ in range(max(1, threads)):
                if lo > n_max:
                    break
                hi = min(n_max + 1, lo + CHUNK)
                bounds.append((lo, hi))
                lo = hi
            if pool:
                results = list(pool.map(lambda b: pre.run(*b), bounds))
            else:
                results = [pre.run(*b) for b in bounds]
            for cands, miss in results:
                if not near or miss[0] < near[0]:
                    near[:] = miss
                yield from cands
    finally:
        if pool:
            pool.shutdown()


def iter_tuples(records, mbar, eps=0.05, n_max=10**7, M_common=None, n_min=1, threads=1,
                exclude=(), _state=None):
    """Verified jump tuples in increasing N, produced lazily."""
    records = _check_records(records)
    if not 0 < eps < 0.5:
        raise DomainError("eps must lie in (0, 1/2)")
    if n_max < 1:
        raise DomainError("n_max must be positive")
    M = M_common or common_multiple(records)
    state = _state if _state is not None else {}
    near = []
    exclude = set(exclude)
    for N in _candidates(records, mbar, eps, M, n_min, n_max, threads, near):
        state["near"] = tuple(near)
        if N in exclude:
            continue
        t = _accept(records, N, M, eps, mbar)
        if t is not None:
            state["last"] = N
            yield t
    state["near"] = tuple(near)


def scan_tuples(records, mbar, eps=0.05, n_max=10**7, want=3, M_common=None,
                n_min=1, threads=1, exclude=()):
    """Verified jump tuples with n_min <= N <= n_max, in increasing N.

    Returns a :class:`ScanResult`; an empty result means the search was
    exhausted and carries the best near miss (smallest worst-case defect
    |{N/(M i_k)} - chi_k|).
    """
    state = {}
    found = []
    gen = iter_tuples(records, mbar, eps, n_max, M_common, n_min, threads, exclude, state)
    for t in gen:
        found.append(t)
        if len(found) >= want:
            break
    gen.close()
    if len(found) >= want:
        scanned = found[-1].N - max(1, n_min) + 1
    else:
        scanned = n_max - max(1, n_min) + 1
    near = state.get("near")
    near_miss = {"N": near[1], "defect": near[0]} if near else None
    return ScanResult(found, scanned, near_miss)


def _accept(records, N, M, eps, mbar):
    built = _build(records, N, M, eps)
    if built is None:
        return None
    m, chi = built
    t = JumpTuple(N, m, chi, M, eps)
    rep = verify_tuple(records, t, mbar)
    if not rep.passed:
        return None
    deltas = tuple(compute_offsets(r, mk, N, mbar=mbar)[0] for r, mk in zip(records, m))
    return JumpTuple(N, m, chi, M, eps, deltas)


def conjugate_pair(records, t, mbar, eps=None, n_max=10**7, threads=1):
    """A second verified tuple t' with Delta'_k + Delta_k = C_k for every orbit."""
    records = _check_records(records)
    eps = eps or t.eps
    target = tuple(r.c - d for r, d in zip(records, t.delta))
    if any(v < 0 for v in target):
        raise ConsistencyError("stored Delta exceeds C for some orbit")
    best = None
    for cand in iter_tuples(records, mbar, eps, n_max, t.M_common, threads=threads,
                            exclude={t.N}):
        if cand.delta == target:
            return t, cand
        best = best or cand
    raise SearchExhausted(
        f"no tuple with complementary offsets {target} up to N = {n_max}",
        near_miss=best.as_dict() if best else None)


def find_conjugate_pair(records, mbar, eps=0.05, n_max=10**7, threads=1):
    """The first pair of verified tuples (t, t') with Delta_k + Delta'_k = C_k, in one pass over N.

    Unlike :func:`conjugate_pair` the first tuple is not fixed in advance:
    every tuple found is kept by its offset pattern until a complement shows up.
    """
    records = _check_records(records)
    C = tuple(r.c for r in records)
    seen = {}
    for t in iter_tuples(records, mbar, eps, n_max, threads=threads):
        target = tuple(c - d for c, d in zip(C, t.delta))
        if target in seen:
            return seen[target], t
        seen.setdefault(t.delta, t)
    raise SearchExhausted(
        f"no pair of tuples with complementary offsets up to N = {n_max}",
        near_miss={"patterns": sorted(list(p) for p in seen)})
