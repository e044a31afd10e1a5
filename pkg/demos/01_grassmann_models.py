"""
Subspaces as symmetric matrices
===============================

A k-plane in R^n is stored as a symmetric matrix with eigenvalue ``a`` on
the plane and ``b`` on its orthogonal complement.  Two choices are common:
projections (a, b) = (1, 0) and involutions (1, -1).
"""

import numpy as np

import smm

# a random 2-plane in R^5 from a seeded Haar rotation
Q = smm.haar_rotation(5, seed=0)
P = smm.gr_construct(Q, 2, smm.PROJECTION)
print("projection model, eigenvalues:", np.round(np.linalg.eigvalsh(P.X), 12))
print("P^2 = P ?", np.allclose(P.X @ P.X, P.X))

# switching to the involution model is the affine map X -> 2X - I
J = smm.gr_convert_affine(P, smm.INVOLUTION)
print("J = 2P - I exactly ?", np.array_equal(J.X, 2 * P.X - np.eye(5)))
print("J^2 = I ?", np.allclose(J.X @ J.X, np.eye(5)))

# projections contain singular matrices; the involution model is perfectly conditioned
print("cond(1, 0)  =", smm.cond_number((1, 0)))
print("cond(1, -1) =", smm.cond_number((1, -1)))

# the membership report lists each residual next to its bound
print()
print("\n".join(smm.gr_membership(J.X, 2, smm.INVOLUTION).lines()))

# recovering the plane gives an orthonormal basis spanning the same subspace
B = smm.gr_extract(J)
print("\nsame plane ?", np.allclose(B @ B.T, Q[:, :2] @ Q[:, :2].T))

# lines in the plane land on a circle of traceless 2x2 matrices
for angle in np.linspace(0, np.pi, 5):
    x, y = np.cos(angle), np.sin(angle)
    print(f"line at {angle:4.2f} rad ->", smm.rp1_embed(x, y).round(3).tolist())
