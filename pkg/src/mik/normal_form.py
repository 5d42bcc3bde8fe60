"""Basic symplectic normal forms, the diamond sum, and unit-circle eigen-data.

The four block families are

* ``N1(lam, b)``  = [[lam, b], [0, lam]] with lam = +-1,
* ``D(lam)``      = diag(lam, 1/lam) with |lam| not in {0, 1},
* ``R(theta)``    = rotation by theta, theta in (0, pi) u (pi, 2*pi),
* ``N2(theta, B)`` = [[R(theta), B], [0, R(theta)]] with b2 != b3.

Matrices are written in the (x, y) quadrant convention of
J = [[0, -I], [I, 0]], and the diamond sum interleaves quadrants so the
result is again of that form.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import numpy as np

from .angles import Angle, circle_key, make_context, _as_fraction
from .errors import DimensionError, DomainError

TOL_SYMP = 1e-10


def _is_pi(theta):
    return theta.is_rational and theta.over_pi == 1


def _sin_sign(theta):
    if theta.is_rational:
        return 1 if theta.over_pi < 1 else -1
    ctx = make_context()
    return 1 if theta.value(ctx) < ctx.pi else -1


@dataclass(frozen=True)
class N1:
    lam: int
    b: Fraction

    def __post_init__(self):
        if self.lam not in (1, -1):
            raise DomainError(f"N1 eigenvalue must be +1 or -1, got {self.lam}")
        object.__setattr__(self, "b", _as_fraction(self.b))

    dim = 2


@dataclass(frozen=True)
class D:
    lam: Fraction

    def __post_init__(self):
        lam = _as_fraction(self.lam)
        if lam == 0 or abs(lam) == 1:
            raise DomainError(f"D(lam) needs |lam| not in {{0, 1}}, got {lam}")
        object.__setattr__(self, "lam", lam)

    dim = 2


@dataclass(frozen=True)
class R:
    theta: Angle

    def __post_init__(self):
        if _is_pi(self.theta):
            raise DomainError("R(theta) is undefined at theta = pi; use N1(-1, 0)")

    dim = 2


@dataclass(frozen=True)
class N2:
    """Non-semisimple block at e^{+-i theta}.

    ``B`` is stored verbatim; it has to make the 4x4 matrix symplectic,
    which for this layout means (b3 - b2) cos(theta) = (b1 + b4) sin(theta).
    """

    theta: Angle
    B: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        if _is_pi(self.theta):
            raise DomainError("N2 is undefined at theta = pi")
        B = tuple(_as_fraction(b) for b in self.B)
        if len(B) != 4:
            raise DomainError("N2 needs four entries b1..b4")
        if B[1] == B[2]:
            raise DomainError("N2 requires b2 != b3")
        object.__setattr__(self, "B", B)
        ok, res = validate_symplectic(block_matrix(self), TOL_SYMP)
        if not ok:
            raise DomainError(
                f"N2 matrix is not symplectic (residual {float(res):.3g}); "
                "need (b3 - b2) cos(theta) = (b1 + b4) sin(theta)")

    dim = 4

    @property
    def trivial(self):
        return (self.B[1] - self.B[2]) * _sin_sign(self.theta) > 0

    @classmethod
    def standard(cls, theta, b2, b3, digits=60):
        """N2 block with b1 = b4 chosen so the matrix is symplectic."""
        b2, b3 = _as_fraction(b2), _as_fraction(b3)
        if theta.is_rational and theta.over_pi in (Fraction(1, 2), Fraction(3, 2)):
            if b3 != b2:
                raise DomainError("at theta = pi/2, 3pi/2 the constraint forces b2 == b3")
        ctx = make_context(int(digits * 3.33) + 64)
        t = theta.value(ctx)
        half = (b3 - b2) * ctx.cos(t) / ctx.sin(t) / 2
        h = Fraction(ctx.nstr(half, digits, strip_zeros=False))
        return cls(theta, (h, b2, b3, h))


Block = Union[N1, D, R, N2]


def _fr(ctx, x):
    return ctx.mpf(x.numerator) / x.denominator


def block_matrix(block, ctx=None):
    """The literal matrix of a basic normal form (mpmath matrix)."""
    ctx = ctx or make_context()
    if isinstance(block, N1):
        return ctx.matrix([[block.lam, _fr(ctx, block.b)], [0, block.lam]])
    if isinstance(block, D):
        lam = _fr(ctx, block.lam)
        return ctx.matrix([[lam, 0], [0, 1 / lam]])
    if isinstance(block, R):
        t = block.theta.value(ctx)
        c, s = ctx.cos(t), ctx.sin(t)
        if block.theta.is_rational:
            c, s = _clean(ctx, c), _clean(ctx, s)
        return ctx.matrix([[c, -s], [s, c]])
    if isinstance(block, N2):
        rot = block_matrix(R(block.theta), ctx)
        b1, b2, b3, b4 = (_fr(ctx, b) for b in block.B)
        m = ctx.zeros(4, 4)
        for i in range(2):
            for j in range(2):
                m[i, j] = rot[i, j]
                m[i + 2, j + 2] = rot[i, j]
        m[0, 2], m[0, 3], m[1, 2], m[1, 3] = b1, b2, b3, b4
        return m
    raise TypeError(f"not a normal-form block: {block!r}")


def _clean(ctx, x):
    # exact zeros and units for cos/sin at rational multiples of pi
    for v in (0, 1, -1):
        if abs(x - v) < ctx.mpf(2) ** (-ctx.prec + 8):
            return ctx.mpf(v)
    return x


def _to_mp(m, ctx):
    if isinstance(m, np.ndarray):
        return ctx.matrix(m.tolist())
    return m


def diamond_sum(a, b, ctx=None):
    """Symplectic direct sum with interleaved quadrants."""
    ctx = ctx or make_context()
    a, b = _to_mp(a, ctx), _to_mp(b, ctx)
    if a.rows % 2 or b.rows % 2 or a.rows != a.cols or b.rows != b.cols:
        raise DimensionError("diamond sum needs square even-dimensional inputs")
    i, j = a.rows // 2, b.rows // 2
    n = i + j
    out = ctx.zeros(2 * n, 2 * n)
    for (ra, ca) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        for p in range(i):
            for q in range(i):
                out[ra * n + p, ca * n + q] = a[ra * i + p, ca * i + q]
        for p in range(j):
            for q in range(j):
                out[ra * n + i + p, ca * n + i + q] = b[ra * j + p, ca * j + q]
    return out


def standard_j(n, ctx=None):
    ctx = ctx or make_context()
    J = ctx.zeros(2 * n, 2 * n)
    for k in range(n):
        J[k, n + k] = -1
        J[n + k, k] = 1
    return J


def validate_symplectic(m, tol=TOL_SYMP):
    """Return ``(ok, residual)`` with residual = max |(M^T J M - J)_ij|."""
    if isinstance(m, np.ndarray):
        rows, cols = m.shape
    else:
        rows, cols = m.rows, m.cols
    if rows != cols or rows % 2:
        raise DimensionError("symplectic check needs a square even-dimensional matrix")
    n = rows // 2
    if isinstance(m, np.ndarray):
        J = np.block([[np.zeros((n, n)), -np.eye(n)], [np.eye(n), np.zeros((n, n))]])
        res = float(np.max(np.abs(m.T @ J @ m - J)))
    else:
        ctx = m.ctx
        J = standard_j(n, ctx)
        diff = m.T * J * m - J
        res = max(abs(diff[i, j]) for i in range(rows) for j in range(cols))
    return res <= tol, res


@dataclass(frozen=True)
class NormalFormDecomposition:
    blocks: Tuple[Block, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        total = sum(b.dim for b in self.blocks)
        if self.n < 1 or total != 2 * self.n:
            raise DimensionError(
                f"blocks span dimension {total}, expected 2n = {2 * self.n}")

    @classmethod
    def of(cls, *blocks):
        return cls(tuple(blocks), sum(b.dim for b in blocks) // 2)

    def __add__(self, other):
        return NormalFormDecomposition(self.blocks + other.blocks, self.n + other.n)

    def matrix(self, ctx=None):
        ctx = ctx or make_context()
        out = None
        for b in self.blocks:
            m = block_matrix(b, ctx)
            out = m if out is None else diamond_sum(out, m, ctx)
        return out

    def circle_angles(self):
        """Angles theta in (0, 2pi), theta != pi, of all circle eigenvalues."""
        seen = {}
        for b in self.blocks:
            if isinstance(b, (R, N2)):
                for a in (b.theta, b.theta.conjugate()):
                    seen.setdefault(a.key, a)
        return list(seen.values())


def block_circle_data(block):
    """List of (point, geometric multiplicity, algebraic multiplicity)."""
    if isinstance(block, N1):
        nu = 2 if block.b == 0 else 1
        return [(block.lam, nu, 2)]
    if isinstance(block, D):
        return []
    if isinstance(block, R):
        return [(block.theta, 1, 1), (block.theta.conjugate(), 1, 1)]
    if isinstance(block, N2):
        return [(block.theta, 1, 2), (block.theta.conjugate(), 1, 2)]
    raise TypeError(f"not a normal-form block: {block!r}")


def spectrum_on_circle(d):
    """Map each unit-circle eigenvalue (1, -1 or Angle) to nu_omega = dim ker(M - omega)."""
    if not isinstance(d, NormalFormDecomposition):
        d = NormalFormDecomposition.of(d)
    out = {}
    points = {}
    for block in d.blocks:
        for point, nu, _ in block_circle_data(block):
            k = circle_key(point)
            points.setdefault(k, point)
            out[k] = out.get(k, 0) + nu
    return {points[k]: v for k, v in out.items()}


def algebraic_multiplicities(d):
    """Algebraic multiplicities on the circle plus the off-circle total."""
    on = {}
    off = 0
    for block in d.blocks:
        data = block_circle_data(block)
        if not data:
            off += block.dim
        for point, _, alg in data:
            k = circle_key(point)
            on[k] = on.get(k, 0) + alg
    return on, off
