from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import worked_record
from mik.angles import Angle, make_context
from mik.errors import DimensionError, DomainError, HypothesisError
from mik.iteration import (OrbitRecord, brute_mbar, index_at, index_table, is_nondegenerate,
                           mbar, mean_index, nullity_at, safe_mbar, viterbo_at)
from mik.normal_form import D, N1, N2, R, NormalFormDecomposition
from mik.oracle import path_index_oracle
from mik.random_systems import random_record


def rec(i1, *blocks, label="x"):
    d = NormalFormDecomposition.of(*blocks)
    return OrbitRecord(label, d.n, i1, d)


def test_worked_example_formula():
    r = worked_record()
    assert [index_at(r, m) for m in range(1, 8)] == [2 * m - 1 for m in range(1, 8)]
    assert mean_index(r) == 2 and r.mean_exact == 2
    assert (r.s_plus_one, r.c) == (1, 0)


def test_index_at_m_one_is_i1():
    r = rec(5, N1(1, 1), R(Angle.irrational("2.3")), N2.standard(Angle.rational(1, 3), 0, 1))
    assert index_at(r, 1) == 5


def test_rotation_record_against_oracle():
    # path t -> N1(1, t) <> R(t theta) with theta = 2.2: i1 from the oracle, iterates too
    theta = Angle.irrational("2.2")
    A = np.diag([0.0, 2.2, -1.0, 2.2])
    i1 = path_index_oracle(A)
    r = rec(i1, N1(1, 1), R(theta))
    assert i1 == 0
    for m in (2, 3, 5, 8):
        assert path_index_oracle(A, t_end=m) == index_at(r, m)


def test_rational_rotation_sequence():
    r = rec(1, R(Angle.rational(2, 3)))
    assert [index_at(r, m) for m in range(1, 10)] == [1, 1, 1, 3, 3, 3, 5, 5, 5]
    assert r.mean_exact == Fraction(2, 3)


def test_mean_with_rotation():
    theta = Angle.irrational("1.5")
    r = rec(2, N1(1, 1), R(theta))
    # i1 + 1 - C + theta/pi
    ctx = make_context()
    assert abs(r.mean - (2 + 1 - 1 + ctx.mpf("1.5") / ctx.pi)) < ctx.mpf("1e-70")


def test_mean_is_the_growth_rate():
    r = rec(2, N1(1, 1), R(Angle.irrational("1.5")), R(Angle.irrational("4.1")))
    m = 10**6
    assert abs(index_table(r, m)[-1] / m - float(r.mean)) < 1e-5


def test_index_domain():
    r = worked_record()
    for bad in (0, -2, 1.5, True):
        with pytest.raises(DomainError):
            index_at(r, bad)


def test_record_dimension_mismatch():
    with pytest.raises(DimensionError):
        OrbitRecord("x", 3, 1, NormalFormDecomposition.of(N1(1, 1), D(2)))


def test_nullity_examples():
    assert nullity_at(rec(1, N1(1, 1), R(Angle.irrational("2.0"))), 7) == 1
    r = rec(1, N1(1, 1), R(Angle.rational(2, 3)))
    assert [nullity_at(r, m) for m in (1, 2, 3, 6)] == [1, 1, 3, 3]
    assert nullity_at(worked_record(), 1) == 1
    assert nullity_at(rec(0, N1(-1, 1)), 2) == 1 and nullity_at(rec(0, N1(-1, 1)), 1) == 0


def test_viterbo_shift():
    r = rec(3, N1(1, 1), D(2))
    assert viterbo_at(r, 1) == 1
    w = worked_record()
    assert [viterbo_at(w, m) for m in range(1, 5)] == [2 * m - 3 for m in range(1, 5)]


def test_nondegeneracy():
    assert is_nondegenerate(worked_record())
    assert is_nondegenerate(rec(0, N1(1, 2), R(Angle.irrational("1.0"))))
    assert not is_nondegenerate(rec(0, N1(1, 1), R(Angle.rational(1, 2))))
    assert not is_nondegenerate(rec(0, N1(1, 0)))
    assert not is_nondegenerate(rec(0, N1(1, 1), N1(1, 1)))
    assert not is_nondegenerate(rec(0, N1(1, 1), N1(-1, 1)))


@given(st.integers(0, 10**6))
def test_nondegenerate_means_unit_nullity(seed):
    r = random_record(np.random.default_rng(seed))
    ones = all(nullity_at(r, m) == 1 for m in range(1, 121))
    assert is_nondegenerate(r) == ones


@given(st.integers(0, 10**6))
def test_index_table_matches_pointwise(seed):
    r = random_record(np.random.default_rng(seed))
    table = index_table(r, 60)
    assert table.tolist() == [index_at(r, m) for m in range(1, 61)]


@given(st.integers(0, 10**6))
def test_parity_rigidity(seed):
    rng = np.random.default_rng(seed)
    blocks = [N1(1, 1)] + [R(Angle.from_turns(repr(float(rng.uniform(0.05, 0.95))), 160))
                           if rng.integers(2) else D(3) for _ in range(int(rng.integers(1, 4)))]
    r = rec(int(rng.integers(-3, 6)), *blocks)
    table = index_table(r, 50)
    ms = np.arange(1, 51)
    # without rational angles and N1(-1, .) blocks: i(m) - i(1) = (m - 1) a mod 2
    assert (((table - table[0]) - (ms - 1) * r.slope) % 2 == 0).all()


def test_parity_rigidity_on_ellipsoids():
    from conftest import corpus
    for n in (2, 3):
        for r in corpus(n):
            table = index_table(r, 200)
            assert r.slope % 2 == 0
            assert ((table - table[0]) % 2 == 0).all()


def test_mbar_examples():
    w = worked_record()
    assert mbar([w], 2) == 2
    assert safe_mbar(w, 2) == 2
    assert brute_mbar([w], 2) == 2


def test_mbar_needs_positive_mean():
    with pytest.raises(HypothesisError):
        mbar([rec(-3, N1(1, 1), D(2))], 2)


@given(st.integers(0, 10**6))
def test_mbar_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    r = random_record(rng, i1_range=(1, 6))
    if r.mean <= 0:
        return
    n = r.n
    m = mbar([r], n)
    assert m <= safe_mbar(r, n)
    # mbar is valid: i(m + l) - i(l) >= n + 1 for every tested l and m >= mbar
    table = index_table(r, m + 400)
    for mm in range(m, m + 5):
        assert (table[mm:mm + 300] - table[:300]).min() >= n + 1
    # and for rational-only records it is the least such value
    if all(t.is_rational for t, _ in r.circle):
        assert m == brute_mbar([r], n)


def test_mbar_monotone_in_n():
    r = rec(2, N1(1, 1), R(Angle.irrational("2.0")), D(2))
    values = [mbar([r], n) for n in range(1, 8)]
    assert values == sorted(values)


def test_n2_record_iterates():
    b = N2.standard(Angle.rational(1, 3), 0, 1)
    r = rec(2, N1(1, 1), b)
    # S^- = 1 at both e^{+-i pi/3}: C = 2
    assert r.c == 2
    assert index_at(r, 1) == 2


def test_brute_mbar_covers_a_full_period():
    # i(22) - i(21) = 1 < n + 1, so m = 1 fails only at l = 21
    r = rec(2, R(Angle.rational(21, 11)))
    assert index_at(r, 22) - index_at(r, 21) == 1
    assert brute_mbar([r], 1) == mbar([r], 1) == 2
