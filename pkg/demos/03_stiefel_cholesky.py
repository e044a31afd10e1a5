"""
Frames with a prescribed Gram matrix
====================================

The Cholesky model stores a k-frame as an n x k matrix Y with Y^T Y = A for
a fixed SPD matrix A.  A = I is the usual Stiefel manifold.  Moving from A
to B follows the Cartan geodesic A #_t B between the two Gram matrices.
"""

import numpy as np

import smm

A = np.array([[2.0, 0.5], [0.5, 1.0]])
B = np.array([[1.0, -0.3], [-0.3, 4.0]])

P = smm.st_construct(smm.haar_rotation(6, seed=1), A)
print("Y^T Y =\n", P.Y.T @ P.Y)
print("\n".join(smm.st_membership(P.Y, P.A).lines()))

# Y = Q [R; 0] with R the upper Cholesky factor of A
Q, R = smm.st_factors(P)
print("\nR =\n", R)
print("Q [R; 0] reproduces Y:", np.allclose(Q[:, :2] @ R, P.Y))

# walking along the geodesic changes the Gram matrix but keeps the column span
for t in (0.0, 0.25, 0.5, 1.0):
    Yt = smm.st_convert_homotopy(P, B, t).Y
    gap = np.linalg.norm(Yt.T @ Yt - smm.geometric_mean_t(A, B, t))
    same_span = np.allclose(Yt @ np.linalg.pinv(Yt), P.Y @ np.linalg.pinv(P.Y))
    print(f"t={t:4.2f}  Gram error {gap:.1e}  same span {same_span}")

# the matrix geometric mean generalizes sqrt(ab)
print("1 # 4 =", smm.geometric_mean_t([[1.0]], [[4.0]])[0, 0])
M = smm.geometric_mean_t(A, B)
print("A # B = B # A:", np.allclose(M, smm.geometric_mean_t(B, A)))
print("M A^-1 M = B:", np.allclose(M @ np.linalg.solve(A, M), B))
print("length^2 of the unit tangent I at A:", smm.cartan_metric(A, np.eye(2), np.eye(2)))
