"""
One hyperbolic orbit, step by step
===================================

The orbit has first index i1 = 1 and monodromy N1(1, 1) <> D(2).  Its
iterates climb by two, every even N gives a jump tuple (N, N/2), and the
census still fails the mean-index identity: a single hyperbolic orbit
cannot be all the closed characteristics of a convex hypersurface in R^4.
"""

from mik import D, N1, NormalFormDecomposition, OrbitRecord, certify, index_at, mbar
from mik.jump import scan_tuples, verify_tuple
from mik.morse import euler_hat, identity_residual

d = NormalFormDecomposition.of(N1(1, 1), D(2))
y = OrbitRecord("g", 2, 1, d)

# i(m) = 2m - 1, mean index 2
print("indices  ", [index_at(y, m) for m in range(1, 11)])
print("mean     ", y.mean_exact, " S+ =", y.s_plus_one, " C =", y.c)
print("chi_hat  ", euler_hat(y))

mb = mbar([y], 2)
print("m-bar    ", mb)

# jump tuples and the identities behind them
for t in scan_tuples([y], mb, eps=0.1, n_max=20, want=4):
    print(verify_tuple([y], t, mb).summary(), " m =", t.m, " Delta =", t.delta)

# sum chi_hat/mean = -1/2, not 1/2
print("residual ", identity_residual([y]))
rep = certify([y], 2)
print("verdict  ", rep.verdict, "at", rep.stage, "-", rep.reason)
