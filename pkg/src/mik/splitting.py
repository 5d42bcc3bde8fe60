"""Splitting numbers S^+-_M(omega) of normal-form decompositions.

Per-block values come from a fixed table.  Every entry of that table is
reproduced by :func:`mik.oracle.oracle_splitting`, and the test suite checks
this on random instances.

=====================  ==============  ===============
block                  omega           (S^+, S^-)
=====================  ==============  ===============
N1(1, b), b >= 0       1               (1, 1)
N1(1, b), b < 0        1               (0, 0)
N1(-1, b), b > 0       -1              (0, 0)
N1(-1, b), b <= 0      -1              (1, 1)
R(theta)               e^{i theta}     (0, 1)
R(theta)               e^{-i theta}    (1, 0)
N2 trivial             e^{+-i theta}   (0, 0)
N2 non-trivial         e^{+-i theta}   (1, 1)
D(lam)                 anywhere        (0, 0)
=====================  ==============  ===============

Anything not listed is off-spectrum and gives (0, 0).
"""

from .angles import Angle, circle_key
from .errors import DomainError
from .normal_form import D, N1, N2, R, NormalFormDecomposition
from .oracle import SplittingPair, oracle_splitting

__all__ = ["SplittingPair", "block_splitting", "splitting_at", "collision_count",
           "oracle_splitting", "circle_splitting"]

ZERO = SplittingPair(0, 0)


def _check_point(omega):
    if isinstance(omega, bool) or not (isinstance(omega, Angle) or omega in (1, -1)):
        raise DomainError(
            f"omega must be 1, -1 or an Angle on the unit circle, got {omega!r}")
    return circle_key(omega)


def block_splitting(block, omega):
    """Table value of (S^+, S^-) for one basic block."""
    key = _check_point(omega)
    if isinstance(block, N1):
        if key != circle_key(block.lam):
            return ZERO
        if block.lam == 1:
            return SplittingPair(1, 1) if block.b >= 0 else ZERO
        return ZERO if block.b > 0 else SplittingPair(1, 1)
    if isinstance(block, D):
        return ZERO
    if isinstance(block, R):
        if key == block.theta.key:
            return SplittingPair(0, 1)
        if key == block.theta.conjugate().key:
            return SplittingPair(1, 0)
        return ZERO
    if isinstance(block, N2):
        if key in (block.theta.key, block.theta.conjugate().key):
            return ZERO if block.trivial else SplittingPair(1, 1)
        return ZERO
    raise TypeError(f"not a normal-form block: {block!r}")


def _blocks(d):
    if isinstance(d, NormalFormDecomposition):
        return d.blocks
    return (d,)


def splitting_at(d, omega):
    """(S^+, S^-) of a decomposition at omega, summed over blocks."""
    _check_point(omega)
    total = ZERO
    for block in _blocks(d):
        total = total + block_splitting(block, omega)
    return total


def circle_splitting(d):
    """S^- at every e^{i theta}, theta in (0, 2 pi), with nonzero value.

    Returns a list of ``(theta, s_minus)``; theta = pi is reported as
    ``Angle.rational(1)``.
    """
    points = {}
    for block in _blocks(d):
        if isinstance(block, N1) and block.lam == -1:
            points.setdefault(circle_key(-1), Angle.rational(1))
        elif isinstance(block, (R, N2)):
            for a in (block.theta, block.theta.conjugate()):
                points.setdefault(a.key, a)
    out = []
    for key in sorted(points, key=lambda k: (k[0], str(k[1]))):
        theta = points[key]
        omega = -1 if key == circle_key(-1) else theta
        s = splitting_at(d, omega).s_minus
        if s:
            out.append((theta, s))
    return out


def collision_count(d):
    """C(M): total S^- over the unit circle minus the point 1."""
    return sum(s for _, s in circle_splitting(d))
