import numpy as np
import pytest

from mik.angles import Angle
from mik.errors import OracleInconclusive
from mik.iteration import OrbitRecord, index_at
from mik.normal_form import D, N1, N2, R, NormalFormDecomposition
from mik.oracle import (block_generator, diamond_generator, generator_iterate_indices,
                        iterate_indices, path_index_oracle)
from mik.random_systems import random_block


def record_from_generator(blocks, windings=None, m_max=12):
    H, end = diamond_generator(blocks, windings)
    ids = generator_iterate_indices(H, m_max)
    d = NormalFormDecomposition.of(*end)
    return OrbitRecord("o", d.n, ids[0], d), ids


@pytest.mark.parametrize("A,expected", [
    (np.diag([0.0, -1.0]), -1),
    (np.zeros((2, 2)), -1),
    (np.diag([0.0, 1.0]), 0),
    (np.eye(2), 1),
    (7 * np.eye(2), 3),
])
def test_known_paths(A, expected):
    assert path_index_oracle(A) == expected


def test_full_turn_adds_two():
    # t -> R(2 pi t + t phi): one extra turn raises the index by two
    H0, _ = diamond_generator([R(Angle.irrational("1.0"))])
    H1, _ = diamond_generator([R(Angle.irrational("1.0"))], windings=[1])
    assert generator_iterate_indices(H1, 1)[0] - generator_iterate_indices(H0, 1)[0] == 2


def test_iterates_of_a_rotation_path():
    A = np.diag([1.1, 1.1])
    ids = iterate_indices(A, 6)
    r = OrbitRecord("x", 1, ids[0], NormalFormDecomposition.of(R(Angle.irrational("1.1"))))
    assert ids == [index_at(r, m) for m in range(1, 7)]


def test_doubled_blocks():
    _, copies = block_generator(N1(-1, 1))
    assert copies == 2
    _, copies = block_generator(D(-3))
    assert copies == 2
    _, copies = block_generator(D(3))
    assert copies == 1


@pytest.mark.parametrize("blocks,windings", [
    ([N1(1, 1), D(2)], None),
    ([N1(1, 1), R(Angle.rational(2, 3))], [1, 0]),
    ([N1(-1, 1), R(Angle.irrational("2.5"))], [0, -1]),
    ([N2.standard(Angle.rational(1, 3), 0, 1)], None),
    ([N1(1, -1), D(-2)], None),
])
def test_formula_matches_oracle(blocks, windings):
    r, ids = record_from_generator(blocks, windings)
    assert ids == [index_at(r, m) for m in range(1, len(ids) + 1)]


def test_random_generators_match_formula():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 25:
        blocks = [random_block(rng) for _ in range(int(rng.integers(1, 3)))]
        windings = [int(rng.integers(-1, 2)) for _ in blocks]
        try:
            r, ids = record_from_generator(blocks, windings)
        except OracleInconclusive:
            continue
        assert ids == [index_at(r, m) for m in range(1, len(ids) + 1)], (blocks, windings)
        checked += 1
