"""
Flags, traces and when one trace is enough
==========================================

A flag of signature (k1, ..., kp) in R^n is stored as a symmetric matrix
with p + 1 prescribed eigenvalues.  Membership can be checked from the
product polynomial plus the first p power traces.  When the eigenvalues are
"generic", the plain trace alone already determines the multiplicities.
"""

import math

import numpy as np

import smm

params = smm.IsospectralParams((0, 1, 2))
A = np.diag([0, 1, 1, 1, 2.0])   # flag (1, 4) in R^5
B = np.diag([0, 0, 1, 2, 2.0])   # flag (2, 3) in R^5

sig14 = smm.FlagSignature(5, (1, 4))
sig23 = smm.FlagSignature(5, (2, 3))
print("A in Flag(1,4,5):", bool(smm.flag_membership_full(A, sig14, params)))
print("B in Flag(2,3,5):", bool(smm.flag_membership_full(B, sig23, params)))
print("B in Flag(1,4,5):", bool(smm.flag_membership_full(B, sig14, params)))
print("tr A =", np.trace(A), " tr B =", np.trace(B))

# with integer parameters two signatures share a trace, so the trace test is refused
print(smm.genericity_check(params, 5, 2))
try:
    smm.flag_membership_generic(A, sig14, params)
except smm.NotGeneric as exc:
    print("single-trace test refused:", exc)

# an irrational parameter removes the ambiguity
gparams = smm.IsospectralParams((0, 1, math.sqrt(2)))
print(smm.genericity_check(gparams, 5, 2))
X = smm.flag_construct(smm.haar_rotation(5, 3), sig23, gparams).X
print("multiplicities from traces:",
      smm.solve_multiplicities(smm.trace_powers(X, 2), 5, gparams))
print("single-trace test:", bool(smm.flag_membership_generic(X, sig23, gparams)))

# the flag itself comes back as blocks of an orthonormal basis
F = smm.flag_extract(smm.IsospectralPoint(X, sig23, gparams))
print("block sizes:", [b.shape[1] for b in F.blocks])

# sliding the eigenvalues keeps the flag as long as their order is kept
Y = smm.flag_homotopy_convert(smm.IsospectralPoint(X, sig23, gparams),
                              smm.IsospectralParams((-1, 0.5, 3)), t=0.5)
G = smm.flag_extract(Y)
print("flag unchanged:", all(np.allclose(p, q) for p, q in zip(F.projectors(), G.projectors())))
try:
    smm.flag_homotopy_convert(Y, smm.IsospectralParams((3, 0.5, -1)), t=0.5)
except smm.SignPatternViolation as exc:
    print("order reversal refused:", exc)

# parameter choices: traceless, and close to perfectly conditioned
sig = smm.FlagSignature(7, (2, 3, 5))
print("traceless:", tuple(smm.params_traceless(sig)))
best = smm.params_optimize_cond(sig, 0.05)
print("well conditioned:", tuple(best), "cond =", smm.cond_number(best))
