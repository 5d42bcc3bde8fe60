from fractions import Fraction

import numpy as np
import pytest

from conftest import corpus
from mik.angles import make_context
from mik.ellipsoid import EllipsoidSpec, Irrational, ellipsoid_system, sqrt_text
from mik.errors import DomainError
from mik.iteration import index_table, mbar
from mik.morse import euler_hat, identity_residual
from mik.normal_form import N1, R


def test_one_dimensional():
    (r,) = corpus(1)
    assert r.i1 == 1 and r.mean == 2
    assert index_table(r, 4).tolist() == [1, 3, 5, 7]


def test_first_indices():
    assert [[r.i1 for r in corpus(n)] for n in (1, 2, 3, 4)] == \
        [[1], [2, 4], [3, 5, 7], [4, 6, 8, 10]]


def test_means_two_dimensional():
    ctx = make_context()
    y1, y2 = corpus(2)
    a = ctx.sqrt(3) / ctx.sqrt(2)
    assert abs(y1.mean - 2 * (1 + 1 / a)) < 1e-50
    assert abs(y2.mean - 2 * (1 + a)) < 1e-50
    assert float(y1.mean) == pytest.approx(3.6329931618)
    assert float(y2.mean) == pytest.approx(4.4494897427)


def test_rotation_angles():
    ctx = make_context()
    y1, _ = corpus(2)
    blocks = y1.decomposition.blocks
    assert isinstance(blocks[0], N1) and isinstance(blocks[1], R)
    ratio = ctx.sqrt(2) / ctx.sqrt(3)
    assert abs(blocks[1].theta.value(ctx) - 2 * ctx.pi * ratio) < 1e-50


def test_index_sequences():
    y1, y2 = corpus(2)
    assert index_table(y1, 8).tolist() == [2, 6, 10, 14, 18, 20, 24, 28]
    assert index_table(y2, 8).tolist() == [4, 8, 12, 16, 22, 26, 30, 34]
    assert [mbar(corpus(n), n) for n in (1, 2, 3, 4)] == [1, 2, 2, 2]


def test_identity_closes():
    for n in (1, 2, 3, 4):
        assert all(euler_hat(r) == 1 for r in corpus(n))
        assert abs(identity_residual(corpus(n))) < 1e-50


def test_resonant_radii_rejected():
    with pytest.raises(DomainError):
        ellipsoid_system(EllipsoidSpec(2, [Fraction(1), Fraction(3, 2)]))
    with pytest.raises(DomainError):
        ellipsoid_system(EllipsoidSpec(2, [Irrational(sqrt_text(2)),
                                           Irrational(sqrt_text(2, scale=Fraction(3, 2)))]))


def test_spec_validation():
    with pytest.raises(DomainError):
        EllipsoidSpec(2, [1])
    with pytest.raises(DomainError):
        EllipsoidSpec(1, [-1])


def test_random_specs_are_deterministic():
    a = EllipsoidSpec.random(3, np.random.default_rng(5))
    b = EllipsoidSpec.random(3, np.random.default_rng(5))
    assert a == b
    assert abs(identity_residual(ellipsoid_system(a))) < 1e-40
