"""Independent index computations for linear symplectic paths.

For a path gamma(t) = exp(t H), H = J A with A symmetric, the unit-circle
eigenvalues of gamma(t) are e^{t*lam} for the purely imaginary eigenvalues
lam = i*beta of H.  An omega-crossing (omega = e^{i phi}) happens at every
t = (phi + 2*pi*k)/beta in (0, 1), and the crossing form there is A restricted
to the eigenvector, so each crossing contributes sign(v^* A v).

Paths with an omega-degenerate endpoint are handled by pushing the generator
in the negative direction, H - eps*J.  That perturbation realises the lower
(left-continuous) index of Long, which is the convention used throughout.
A tiny seeded random perturbation keeps all eigenvalues simple.

This module uses no formula from the iteration theory; it is the reference
the table- and formula-based code is checked against.
"""

from dataclasses import dataclass

import numpy as np

from .angles import make_context, point_value
from .errors import OracleInconclusive, PrecisionError
from .normal_form import D, N1, N2, R, block_matrix, standard_j

ORACLE_PREC = 320
EPS_NEGATIVE = "1e-14"
EPS_GENERIC = "1e-40"
DELTA0 = "1e-4"


def _ctx():
    return make_context(ORACLE_PREC)


def _random_symmetric(ctx, size, seed):
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((size, size))
    P = (P + P.T) / 2
    return ctx.matrix(P.tolist())


def _generic(ctx, H, seed):
    size = H.rows
    J = standard_j(size // 2, ctx)
    return H + ctx.mpf(EPS_GENERIC) * J * _random_symmetric(ctx, size, seed)


def _crossing_data(H, ctx, seed):
    """(beta, crossing form) for every purely imaginary eigenvalue i*beta of H."""
    H = _generic(ctx, H, seed)
    J = standard_j(H.rows // 2, ctx)
    A = -J * H
    tiny = ctx.mpf(2) ** (-(ctx.prec * 5) // 8)
    E, ER = ctx.eig(H)
    data = []
    for idx, lam in enumerate(E):
        if abs(ctx.re(lam)) > tiny * (1 + abs(lam)) or abs(ctx.im(lam)) <= tiny:
            continue
        v = _eigenvector(ctx, H, lam, ER[:, idx])
        data.append((ctx.im(lam), ctx.re((v.H * A * v)[0, 0])))
    return data


def _count(data, phi, scale, ctx):
    # signed number of omega-crossings of exp(t H) for t in (0, scale)
    two_pi = 2 * ctx.pi
    phi = ctx.mpf(phi) % two_pi
    if phi == 0:
        phi = ctx.mpf(2) ** (-ctx.prec // 2)
    tiny = ctx.mpf(2) ** (-(ctx.prec * 5) // 8)
    boundary = ctx.mpf("1e-30")
    total = 0
    for beta, form in data:
        beta = beta * scale
        # integers k with 0 < (phi + 2 pi k)/beta < 1
        if beta > 0:
            lo, hi = -phi / two_pi, (beta - phi) / two_pi
        else:
            lo, hi = (beta - phi) / two_pi, -phi / two_pi
        end = hi if beta > 0 else lo
        if abs(end - ctx.nint(end)) < boundary:
            raise PrecisionError("crossing at the path end; endpoint is degenerate")
        count = int(ctx.ceil(hi)) - int(ctx.floor(lo)) - 1
        if count <= 0:
            continue
        if abs(form) <= tiny:
            raise OracleInconclusive("degenerate crossing form")
        total += (1 if form > 0 else -1) * count
    return total


def omega_index(H, phi, ctx, seed=0):
    """Index of t -> exp(t H), t in [0, 1], at omega = e^{i phi}.

    The endpoint must be omega-nondegenerate after the generic perturbation;
    phi = 0 is read as the limit phi -> 0+, which is the index at omega = 1
    for paths whose endpoint does not have eigenvalue 1.
    """
    return _count(_crossing_data(H, ctx, seed), phi, 1, ctx)


def _eigenvector(ctx, H, lam, v):
    # inverse iteration; the QR eigenvectors are unreliable for near-defective H
    shifted = H - (lam + ctx.mpf(2) ** (-ctx.prec // 2)) * ctx.eye(H.rows)
    for _ in range(3):
        v = ctx.lu_solve(shifted, v)
        v = v / ctx.norm(v)
    return v


def lower_omega_index(H, phi, ctx, seed=0):
    """Index at a possibly degenerate omega, via the negative perturbation."""
    J = standard_j(H.rows // 2, ctx)
    return omega_index(H - ctx.mpf(EPS_NEGATIVE) * J, phi, ctx, seed)


def path_index_oracle(A, t_end=1, seed=0):
    """Maslov-type index i_1 of t -> exp(t J A), t in [0, t_end].

    ``A`` is a real symmetric 2n x 2n matrix (numpy or mpmath).
    """
    ctx = _ctx()
    A = ctx.matrix(A.tolist()) if isinstance(A, np.ndarray) else ctx.matrix(A)
    J = standard_j(A.rows // 2, ctx)
    H = J * A * ctx.mpf(t_end)
    return lower_omega_index(H, 0, ctx, seed)


def iterate_indices(A, m_max, seed=0):
    """Indices i_1 of the iterated paths t -> exp(t J A), t in [0, m], m = 1..m_max.

    The m-th iterate of t -> exp(t J A) on [0, 1] is the same exponential on
    [0, m], so one eigen-decomposition serves every m.
    """
    ctx = _ctx()
    A = ctx.matrix(A.tolist()) if isinstance(A, np.ndarray) else ctx.matrix(A)
    return generator_iterate_indices(standard_j(A.rows // 2, ctx) * A, m_max, ctx, seed)


def generator_iterate_indices(H, m_max, ctx=None, seed=0):
    """Same as :func:`iterate_indices` for a Hamiltonian generator H = J A."""
    ctx = ctx or H.ctx
    J = standard_j(H.rows // 2, ctx)
    data = _crossing_data(H - ctx.mpf(EPS_NEGATIVE) * J, ctx, seed)
    try:
        return [_count(data, 0, m, ctx) for m in range(1, m_max + 1)]
    except PrecisionError as exc:
        raise OracleInconclusive(str(exc)) from exc


def generator_from_symmetric(A):
    ctx = _ctx()
    A = ctx.matrix(A.tolist()) if isinstance(A, np.ndarray) else ctx.matrix(A)
    return standard_j(A.rows // 2, ctx) * A


# -- block generators -------------------------------------------------------

def _diamond_generators(ctx, X):
    """X (2x2) diamond X in the interleaved 4x4 layout."""
    a, b, c, d = X[0, 0], X[0, 1], X[1, 0], X[1, 1]
    return ctx.matrix([[a, 0, b, 0], [0, a, 0, b], [c, 0, d, 0], [0, c, 0, d]])


def _copy_rotation(ctx):
    # generator mixing the two copies; exp(pi L) = -I and it commutes with X diamond X
    return ctx.matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])


def block_generator(block, ctx=None):
    """Hamiltonian H with exp(H) equal to the block, or to the block diamond itself.

    Returns ``(H, copies)``.  Blocks with a single Jordan block at a negative
    real eigenvalue have no real logarithm; for those the doubled matrix is
    used and ``copies`` is 2.
    """
    ctx = ctx or _ctx()
    if isinstance(block, N1):
        b = ctx.mpf(block.b.numerator) / block.b.denominator
        if block.lam == 1:
            return ctx.matrix([[0, b], [0, 0]]), 1
        X = ctx.matrix([[0, -b], [0, 0]])
        return ctx.pi * _copy_rotation(ctx) + _diamond_generators(ctx, X), 2
    if isinstance(block, D):
        lam = ctx.mpf(block.lam.numerator) / block.lam.denominator
        s = ctx.log(abs(lam))
        X = ctx.matrix([[s, 0], [0, -s]])
        if lam > 0:
            return X, 1
        return ctx.pi * _copy_rotation(ctx) + _diamond_generators(ctx, X), 2
    if isinstance(block, R):
        t = block.theta.value(ctx)
        return ctx.matrix([[0, -t], [t, 0]]), 1
    if isinstance(block, N2):
        return _n2_generator(block, ctx), 1
    raise TypeError(f"not a normal-form block: {block!r}")


def _n2_generator(block, ctx):
    """Real logarithm of an N2 block from its Jordan-Chevalley splitting M = S U.

    S is found by Newton's iteration on p(x) = x^2 - 2 cos(theta) x + 1; then
    K = (S - cos(theta))/sin(theta) squares to -1, log S = theta K, and
    log U = U - 1 because (U - 1)^2 = 0.  The rotation angle is taken in
    (0, 2 pi), as for R blocks.
    """
    M = block_matrix(block, ctx)
    t = block.theta.value(ctx)
    c, s = ctx.cos(t), ctx.sin(t)
    one = ctx.eye(4)
    S = M
    for _ in range(2 * ctx.prec.bit_length() + 8):
        step = (S * S - 2 * c * S + one) * ctx.inverse(2 * S - 2 * c * one)
        S = S - step
        if ctx.mnorm(step, 1) < ctx.mpf(2) ** (-ctx.prec + 16):
            break
    else:
        raise OracleInconclusive("semisimple part of the N2 block did not converge")
    U = ctx.inverse(S) * M
    return t * (S - c * one) / s + (U - one)


def diamond_generator(blocks, windings=None, ctx=None):
    """Generator H with exp(H) equal to the diamond sum of ``blocks``.

    ``windings`` adds 2*pi*k to the angle of each R block, which changes the
    path (and its index) but not the endpoint.  Blocks without a real
    logarithm appear twice in the returned decomposition.  Returns
    ``(H, blocks_of_endpoint)``.
    """
    from .normal_form import diamond_sum
    ctx = ctx or _ctx()
    windings = windings or [0] * len(blocks)
    H = None
    endpoint = []
    for block, k in zip(blocks, windings):
        g, copies = block_generator(block, ctx)
        if isinstance(block, R) and k:
            g = g + 2 * ctx.pi * k * ctx.matrix([[0, -1], [1, 0]])
        endpoint.extend([block] * copies)
        H = g if H is None else diamond_sum(H, g, ctx)
    return H, endpoint


def _target(block, copies, ctx):
    M = block_matrix(block, ctx)
    if copies == 1:
        return M
    from .normal_form import diamond_sum
    return diamond_sum(M, M, ctx)


@dataclass(frozen=True)
class SplittingPair:
    s_plus: int
    s_minus: int

    def __add__(self, other):
        return SplittingPair(self.s_plus + other.s_plus, self.s_minus + other.s_minus)


def oracle_splitting(block, omega, delta=DELTA0, check_delta="1e-6", seed=0):
    """Splitting numbers of a basic block at omega from explicit paths.

    S^+ = i_{omega e^{+i delta}} - i_omega and S^- = i_{omega e^{-i delta}} - i_omega,
    evaluated on t -> exp(t H) with exp(H) the block.  The answer must be the
    same for ``delta`` and ``check_delta``; otherwise OracleInconclusive.
    """
    ctx = _ctx()
    H, copies = block_generator(block, ctx)
    err = ctx.mnorm(ctx.expm(H) - _target(block, copies, ctx), 1)
    if err > ctx.mpf("1e-40"):
        raise OracleInconclusive(f"generator does not reproduce the block (error {err})")
    phi = point_value(omega, ctx)
    results = []
    for d in (delta, check_delta):
        d = ctx.mpf(d)
        try:
            base = lower_omega_index(H, phi, ctx, seed)
            up = omega_index(H, phi + d, ctx, seed)
            down = omega_index(H, phi - d, ctx, seed)
        except PrecisionError as exc:
            raise OracleInconclusive(str(exc)) from exc
        sp, sm = up - base, down - base
        if sp % copies or sm % copies:
            raise OracleInconclusive("doubled path gave an odd splitting number")
        results.append(SplittingPair(sp // copies, sm // copies))
    if results[0] != results[1]:
        raise OracleInconclusive(f"splitting numbers depend on the offset: {results}")
    return results[0]
