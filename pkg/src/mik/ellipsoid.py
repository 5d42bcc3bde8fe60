"""Known-answer orbit systems: the n planar orbits of an irrational ellipsoid.

On the ellipsoid sum_j (x_j^2 + y_j^2)/r_j^2 = 1 the k-th coordinate circle is
a closed characteristic of period 2 pi r_k^2.  Its linearised flow rotates the
j-th plane by the angle 2 pi r_k^2/r_j^2 and acts on its own plane by a
positive shear after one full turn, so the monodromy is

    N1(1, 1) <> (<>_{j != k} R(2 pi {r_k^2/r_j^2})).

The first-iterate index is assembled plane by plane from the crossing-count
oracle: the k-th plane contributes one full turn (2) plus the shear path,
plane j contributes the rotation path t -> R(2 pi t r_k^2/r_j^2).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .angles import Angle, make_context
from .errors import DomainError
from .iteration import OrbitRecord
from .normal_form import N1, R, NormalFormDecomposition
from .oracle import path_index_oracle

DEFAULT_BITS = 200
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)
# A ratio this close to p/q with q <= _RESONANCE_DEN is treated as resonant.
_RESONANCE_TOL = "1e-40"
_RESONANCE_DEN = 10**4


@dataclass(frozen=True)
class Irrational:
    """A real number flagged irrational by the caller, as a decimal string."""

    text: str

    def value(self, ctx):
        return ctx.mpf(self.text)


Radius = Union[Fraction, Irrational]


def _radius(x):
    if isinstance(x, Irrational):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Irrational(x)
    raise TypeError(f"squared radius must be a Fraction or an Irrational, got {x!r}")


def sqrt_text(p, bits=DEFAULT_BITS, scale=1):
    """Decimal string of scale * sqrt(p) at ``bits`` bits."""
    ctx = make_context(bits + 16)
    scale = Fraction(scale)
    factor = ctx.mpf(scale.numerator) / scale.denominator
    return ctx.nstr(factor * ctx.sqrt(p), int(bits * 0.30103), strip_zeros=False)


@dataclass(frozen=True)
class EllipsoidSpec:
    n: int
    squared_radii: Sequence[Radius]

    def __post_init__(self):
        radii = tuple(_radius(x) for x in self.squared_radii)
        object.__setattr__(self, "squared_radii", radii)
        if self.n < 1 or len(radii) != self.n:
            raise DomainError(f"need n = {self.n} >= 1 squared radii, got {len(radii)}")
        ctx = make_context(DEFAULT_BITS + 64)
        for x in radii:
            if _value(x, ctx) <= 0:
                raise DomainError("squared radii must be positive")

    @classmethod
    def sqrt_primes(cls, n, bits=DEFAULT_BITS):
        """Squared radii sqrt(2), sqrt(3), sqrt(5), ... (the default corpus)."""
        if n > len(_PRIMES):
            raise DomainError(f"at most {len(_PRIMES)} default radii")
        return cls(n, [Irrational(sqrt_text(p, bits)) for p in _PRIMES[:n]])

    @classmethod
    def random(cls, n, rng, bits=DEFAULT_BITS):
        """sqrt of n distinct primes, each scaled by a random rational in [1/2, 2]."""
        primes = rng.choice(_PRIMES, size=n, replace=False)
        radii = []
        for p in primes:
            scale = Fraction(int(rng.integers(8, 33)), 16)
            radii.append(Irrational(sqrt_text(int(p), bits, scale)))
        return cls(n, radii)


def _value(x, ctx):
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    return x.value(ctx)


def _check_resonance(spec, ctx):
    for k, a in enumerate(spec.squared_radii):
        for j, b in enumerate(spec.squared_radii):
            if j <= k:
                continue
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                raise DomainError(f"squared radii {k} and {j} have a rational ratio (resonant)")
            ratio = _value(a, ctx) / _value(b, ctx)
            approx = Fraction(str(ctx.nstr(ratio, 60))).limit_denominator(_RESONANCE_DEN)
            if abs(ratio - ctx.mpf(approx.numerator) / approx.denominator) < ctx.mpf(_RESONANCE_TOL):
                raise DomainError(
                    f"squared radii {k} and {j} have ratio {approx} (resonant)")


def _plane_index(ratio, ctx):
    # index of t -> R(2 pi t ratio), from the oracle on the rotation generator
    w = float(2 * ctx.pi * ratio)
    if abs(w - round(w / (2 * np.pi)) * 2 * np.pi) < 1e-9:
        raise DomainError("rotation angle is a multiple of 2 pi")
    A = ctx.matrix([[2 * ctx.pi * ratio, 0], [0, 2 * ctx.pi * ratio]])
    return path_index_oracle(A)


def _own_plane_index():
    # one full turn contributes 2; the remaining positive shear t -> N1(1, t)
    return 2 + path_index_oracle(np.array([[0.0, 0.0], [0.0, -1.0]]))


def ellipsoid_system(spec):
    """The n prime planar orbits as OrbitRecords (Maslov-type grading)."""
    ctx = make_context(DEFAULT_BITS + 64)
    _check_resonance(spec, ctx)
    values = [_value(x, ctx) for x in spec.squared_radii]
    own = _own_plane_index()
    records = []
    for k in range(spec.n):
        blocks = [N1(1, 1)]
        i1 = own
        for j in range(spec.n):
            if j == k:
                continue
            ratio = values[k] / values[j]
            frac = ratio - ctx.floor(ratio)
            blocks.append(R(Angle.from_turns(frac, DEFAULT_BITS)))
            i1 += _plane_index(ratio, ctx)
        period = 2 * ctx.pi * values[k]
        records.append(OrbitRecord(
            label=f"y{k + 1}", n=spec.n, i1=i1,
            decomposition=NormalFormDecomposition.of(*blocks),
            metadata={"period": ctx.nstr(period, 30)}))
    return records
