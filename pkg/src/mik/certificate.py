"""Audit of a proposed orbit census against the multiplicity/stability argument.

The argument is a chain of necessary conditions.  Given non-degenerate
orbits with positive mean index on an index perfect hypersurface it finds a
jump tuple and its conjugate, counts which iterates y_k^{2m_k} sit above or
below the critical degree, and compares alternating Morse sums with the
Betti numbers.  A census that breaks a link of the chain cannot come from
such a hypersurface; a census that survives every link receives the
lower bounds on (non-hyperbolic) orbits.

All orbit indices in this module are Viterbo indices unless said otherwise.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .errors import ConsistencyError, HypothesisError
from .iteration import index_table, is_nondegenerate, mbar as compute_mbar, viterbo_at
from .jump import SearchExhausted, default_eps, find_conjugate_pair
from .morse import alternating_sum_below, iterate_bound, betti_sum, euler_hat, identity_residual
from .normal_form import D, N1, N2, R

CERTIFIED = "CERTIFIED"
NON_REALIZABLE = "NON-REALIZABLE"
INCONCLUSIVE = "INCONCLUSIVE"

RESIDUAL_TOL = 1e-9
DEFAULT_NMAX = 10**8
# iterates beyond m-bar whose window bounds are also checked one by one
SPOT_CHECK = 64


# -- hypotheses -----------------------------------------------------------------

@dataclass
class HypothesisReport:
    n: int
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def _excluded(n):
    return (-1,) if n % 2 == 0 else (-2, -1, 0)


def validate_hypotheses(records, n):
    """Positive mean index, non-degeneracy and the index exclusions, orbit by orbit.

    The exclusions (Maslov-type i(y, m) != -1 for even n, not in {-2, -1, 0}
    for odd n) are decided by scanning the finitely many iterates that the
    deviation bound leaves below the excluded values.
    """
    rep = HypothesisReport(n)
    for k, r in enumerate(records, start=1):
        name = f"k={k} ({r.label})"
        if r.n != n:
            rep.failures.append(f"{name}: half-dimension {r.n} differs from n = {n}")
            continue
        if r.mean <= 0:
            rep.failures.append(f"{name}: mean index not positive")
            continue
        if not is_nondegenerate(r):
            rep.failures.append(f"{name}: degenerate (some iterate has nullity != 1)")
        bad = _excluded(n)
        # i(m) >= m*mean - (S^+ + C), so only small m can reach max(bad)
        top = max(bad) + r.offset
        mmax = max(1, int(top / r.mean) + 1)
        table = index_table(r, mmax)
        for m, v in enumerate(table.tolist(), start=1):
            if v in bad:
                rep.failures.append(f"{name}: i(y, m={m}) = {v} is excluded")
                break
    return rep


def classify_orbit(r):
    """'hyperbolic', 'elliptic' or 'nonhyperbolic-mixed' from the normal form."""
    on_circle = off_circle = 0
    forced = False
    for b in r.decomposition.blocks:
        if isinstance(b, N1) and b.lam == 1 and not forced:
            forced = True
            continue
        if isinstance(b, D):
            off_circle += 1
        elif isinstance(b, (N1, R, N2)):
            on_circle += 1
    if on_circle == 0:
        return "hyperbolic"
    if off_circle == 0:
        return "elliptic"
    return "nonhyperbolic-mixed"


# -- report -----------------------------------------------------------------------

@dataclass
class CertificateReport:
    n: int
    parity_case: str
    verdict: str = INCONCLUSIVE
    stage: str = ""
    reason: str = ""
    hypothesis: Optional[HypothesisReport] = None
    residual: Optional[float] = None
    mbar: Optional[int] = None
    eps: Optional[float] = None
    tuple_pair: list = field(default_factory=list)
    tuple_sum: list = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)
    counts_conjugate: Dict[str, int] = field(default_factory=dict)
    morse_checks: list = field(default_factory=list)
    classifications: Dict[str, str] = field(default_factory=dict)
    witnesses: Dict[str, list] = field(default_factory=dict)
    bounds: list = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def fail(self, verdict, stage, reason):
        self.verdict, self.stage, self.reason = verdict, stage, reason
        return self

    def as_dict(self):
        out = {
            "schema": "mik/1",
            "verdict": self.verdict,
            "parity_case": self.parity_case,
            "n": self.n,
            "stage": self.stage,
            "reason": self.reason,
            "hypotheses": {"passed": self.hypothesis.passed if self.hypothesis else None,
                           "failures": self.hypothesis.failures if self.hypothesis else []},
            "identity_residual": self.residual,
            "mbar": self.mbar,
            "eps": self.eps,
            "tuple_pair": [t.as_dict() for t in self.tuple_pair],
            "tuple_sum": self.tuple_sum,
            "counts": self.counts,
            "counts_conjugate": self.counts_conjugate,
            "morse_checks": self.morse_checks,
            "classifications": self.classifications,
            "witnesses": self.witnesses,
            "bounds": self.bounds,
            "notes": self.notes,
        }
        return out


# -- the counting argument ------------------------------------------------------

def _thresholds(n):
    # (upper set: v >= hi, lower set: v <= lo, excluded degree); even n: 2N-n, 2N-n-2
    if n % 2 == 0:
        return 0, -2, -1
    return 1, -3, -1


def _parity_counts(records, t, n):
    up, down, _ = _thresholds(n)
    counts = {"e+": 0, "o+": 0, "e-": 0, "o-": 0}
    members = {key: [] for key in counts}
    for r, mk in zip(records, t.m):
        v1 = viterbo_at(r, 1)
        v2 = viterbo_at(r, 2 * mk)
        if (v2 - v1) % 2:
            continue
        parity = "e" if v1 % 2 == 0 else "o"
        if v2 >= 2 * t.N - n + up:
            key = parity + "+"
        elif v2 <= 2 * t.N - n + down:
            key = parity + "-"
        else:
            continue
        counts[key] += 1
        members[key].append(r.label)
    return counts, members


def _m_counts(records, t, n, mbar):
    """M^{e,o}_+-(k): short iterates far below zero and their mirrored partners."""
    cut = -n - 2 if n % 2 == 0 else -n - 3
    problems = []
    for k, (r, mk) in enumerate(zip(records, t.m), start=1):
        v1 = viterbo_at(r, 1)
        c = {"e+": 0, "o+": 0, "e-": 0, "o-": 0}
        parity = "e" if v1 % 2 == 0 else "o"
        for m in range(1, mbar + 1):
            if viterbo_at(r, m) > cut:
                continue
            if (viterbo_at(r, 2 * mk + m) - v1) % 2 == 0:
                c[parity + "+"] += 1
            if (viterbo_at(r, 2 * mk - m) - v1) % 2 == 0:
                c[parity + "-"] += 1
        if c["e+"] != c["e-"] or c["o+"] != c["o-"]:
            problems.append(f"k={k}: M+ {c['e+']},{c['o+']} != M- {c['e-']},{c['o-']}")
    return problems


def _window_checks(records, t, n, mbar):
    """Iterates beyond m-bar stay clear of the critical degrees."""
    problems = []
    N = t.N
    for k, (r, mk) in enumerate(zip(records, t.m), start=1):
        # analytic form: i(2m_k - m) <= i(2m_k) - n - 1 and i(2m_k + m) >= i(2m_k) + n + 1
        d2 = 2 * t.delta[k - 1] - r.c
        if r.c > n - 1 or d2 > n - 1 or -d2 > n - 1:
            problems.append(f"k={k}: C = {r.c}, 2 Delta - C = {d2} exceed n - 1")
        hi = min(2 * mk - 1, mbar + SPOT_CHECK)
        for m in range(mbar + 1, hi + 1):
            if viterbo_at(r, 2 * mk - m) > 2 * N - n - 3:
                problems.append(f"k={k}: i(y^(2m_k-{m})) above 2N-n-3")
                break
        for m in range(mbar + 1, mbar + SPOT_CHECK + 1):
            if viterbo_at(r, 2 * mk + m) < 2 * N - n + 1:
                problems.append(f"k={k}: i(y^(2m_k+{m})) below 2N-n+1")
                break
    return problems


def _tuple_sum(records, t, chis):
    total = sum(2 * mk * c for mk, c in zip(t.m, chis))
    return total, total == t.N


def _find_pair(records, n, mb, eps, n_max, threads):
    return find_conjugate_pair(records, mb, eps, n_max, threads=threads)


def certify(records, n, n_max=DEFAULT_NMAX, eps=None, threads=1):
    """Run the full audit; dispatches on the parity of n."""
    records = list(records)
    odd = n % 2 == 1
    rep = CertificateReport(n, "n-odd" if odd else "n-even")
    rep.classifications = {r.label: classify_orbit(r) for r in records}

    hyp = validate_hypotheses(records, n)
    rep.hypothesis = hyp
    if not records:
        return rep.fail(NON_REALIZABLE, "hypotheses", "empty orbit census")
    if not hyp.passed:
        return rep.fail(NON_REALIZABLE, "hypotheses", "; ".join(hyp.failures))

    chis = [euler_hat(r) for r in records]
    res = identity_residual(records)
    rep.residual = float(res)
    if abs(res) > RESIDUAL_TOL:
        return rep.fail(NON_REALIZABLE, "mean-index identity",
                        f"sum chi_hat/mean - 1/2 = {float(res):.3g}")

    mb = compute_mbar(records, n)
    rep.mbar = mb
    eps_values = [eps] if eps else [default_eps(records, chis)]
    eps_values.append(eps_values[0] / 10)

    pair = None
    for attempt, e in enumerate(eps_values):
        rep.eps = e
        try:
            pair = _find_pair(records, n, mb, e, n_max, threads)
        except SearchExhausted as exc:
            rep.notes.append(f"eps={e}: {exc}")
            if attempt == len(eps_values) - 1:
                return rep.fail(INCONCLUSIVE, "jump search", str(exc))
            continue
        claims = [_tuple_sum(records, t, chis) for t in pair]
        rep.tuple_sum = [{"N": t.N, "sum": int(s), "holds": ok}
                      for t, (s, ok) in zip(pair, claims)]
        if all(ok for _, ok in claims):
            break
        rep.notes.append(f"eps={e}: sum 2 m_k chi_hat differs from N; tightening eps")
        if attempt == len(eps_values) - 1:
            return rep.fail(NON_REALIZABLE, "tuple sum",
                            "sum 2 m_k chi_hat != N even below the eps bound")
    t, tc = pair
    rep.tuple_pair = [t, tc]

    for tt in pair:
        problems = _m_counts(records, tt, n, mb) + _window_checks(records, tt, n, mb)
        if problems:
            return rep.fail(NON_REALIZABLE, "iterate windows", "; ".join(problems))

    counts, members = _parity_counts(records, t, n)
    counts_c, _ = _parity_counts(records, tc, n)
    rep.counts, rep.counts_conjugate = counts, counts_c
    if (counts["e+"], counts["e-"], counts["o+"], counts["o-"]) != \
            (counts_c["e-"], counts_c["e+"], counts_c["o-"], counts_c["o+"]):
        return rep.fail(NON_REALIZABLE, "conjugate swap",
                        f"parity sets {counts} and {counts_c} are not swapped")

    up, _, _ = _thresholds(n)
    for tt, cc in ((t, counts), (tc, counts_c)):
        P = 2 * tt.N - n - 1 + up
        alt = alternating_sum_below(records, P)
        predicted = tt.N + cc["o+"] - cc["e+"]
        bound = betti_sum(0, P)
        rep.morse_checks.append({"N": tt.N, "P": P, "alternating": alt,
                                 "predicted": predicted, "betti": bound})
        if alt != predicted:
            return rep.fail(NON_REALIZABLE, "alternating sum",
                            f"sum_(p<={P}) (-1)^p M_p = {alt}, the counts predict {predicted}")
        if alt > bound:
            return rep.fail(NON_REALIZABLE, "morse inequality",
                            f"sum_(p<={P}) (-1)^p M_p = {alt} exceeds sum b_p = {bound}")

    half = n // 2 if not odd else (n - 1) // 2
    need = [("e+ - o+", counts["e+"] - counts["o+"]),
            ("e- - o-", counts["e-"] - counts["o-"])]
    for name, value in need:
        rep.bounds.append({"claim": f"{name} >= {half}", "value": value, "holds": value >= half})
        if value < half:
            return rep.fail(NON_REALIZABLE, "parity bound", f"{name} = {value} < {half}")

    found = members["e+"] + members["e-"]
    by_label = {r.label: r for r in records}
    for label in found:
        if by_label[label].c == 0 or rep.classifications[label] == "hyperbolic":
            return rep.fail(NON_REALIZABLE, "non-hyperbolic witnesses",
                            f"{label} is counted with an even iterate index but is hyperbolic")
    rep.witnesses["non_hyperbolic"] = found

    if odd:
        crit = 2 * t.N - n - 1
        extra = []
        for r, mk in zip(records, t.m):
            v2 = viterbo_at(r, 2 * mk)
            if v2 == crit and (v2 - viterbo_at(r, 1)) % 2 == 0 and r.label not in found:
                extra.append(r.label)
        morse_crit = _morse_at(records, crit)
        rep.morse_checks.append({"N": t.N, "P": crit, "M_p": morse_crit, "betti": 1})
        if morse_crit < 1:
            return rep.fail(NON_REALIZABLE, "critical degree",
                            f"M_(2N-n-1) = {morse_crit} < b_(2N-n-1) = 1")
        if not extra:
            return rep.fail(NON_REALIZABLE, "critical degree",
                            "no orbit other than the counted ones reaches degree 2N-n-1")
        rep.witnesses["critical_degree"] = extra
        parity_orbits = len(found) + len(extra)
        rep.bounds.append({"claim": f"orbits with odd Maslov-type indices >= {n}",
                           "value": parity_orbits, "holds": parity_orbits >= n})
        rep.bounds.append({"claim": f"non-hyperbolic orbits >= {n - 1}",
                           "value": len(found), "holds": len(found) >= n - 1})
    else:
        rep.bounds.append({"claim": f"non-hyperbolic orbits with even Maslov-type indices >= {n}",
                           "value": len(found), "holds": len(found) >= n})
    for label in found + rep.witnesses.get("critical_degree", []):
        maslov = viterbo_at(by_label[label], 1) + n
        if maslov % 2 != n % 2:
            raise ConsistencyError(f"{label}: Maslov-type parity differs from the count's claim")
    if not all(b["holds"] for b in rep.bounds):
        return rep.fail(NON_REALIZABLE, "final bounds", "a lower bound is not met")
    rep.verdict = CERTIFIED
    rep.stage = "complete"
    return rep


def _morse_at(records, p):
    total = 0
    for r in records:
        v = index_table(r, iterate_bound(r, p)) - r.n
        v1 = int(v[0])
        total += int(((v == p) & ((v - v1) % 2 == 0)).sum())
    return total


def certify_even(records, n, **kw):
    if n % 2:
        raise HypothesisError("certify_even needs even n")
    return certify(records, n, **kw)


def certify_odd(records, n, **kw):
    if n % 2 == 0:
        raise HypothesisError("certify_odd needs odd n")
    return certify(records, n, **kw)
