"""
Invariant metrics and their embeddings
======================================

Tangent vectors at the base point are skew matrices with vanishing diagonal
blocks.  A weighted trace pairing on them matches the plain Euclidean inner
product of their images in the ambient matrix space.
"""

import numpy as np

import smm
from smm.metrics import random_flag_tangent, random_stiefel_tangent

rng = np.random.default_rng(4)

sig = smm.FlagSignature(6, (1, 3, 4))
a = smm.IsospectralParams((-1.0, 0.0, 0.7, 2.0))
B, C = random_flag_tangent(sig, rng), random_flag_tangent(sig, rng)
print("weighted pairing :", smm.flag_m_metric(B, C, a))
print("embedded pairing :", smm.embedded_metric(smm.tangent_push_flag(B, a), smm.tangent_push_flag(C, a)))

# for a Grassmannian the push-forward is (b - a) times the symmetric completion
g = smm.FlagSignature(4, (2,))
T = random_flag_tangent(g, rng)
print("\nGrassmann push-forward:\n", smm.tangent_push_flag(T, (1.0, -1.0)).round(3))

R = smm.cholesky_upper(np.array([[3.0, 1.0], [1.0, 2.0]]))
S, U = random_stiefel_tangent(5, 2, rng), random_stiefel_tangent(5, 2, rng)
print("\nStiefel weighted :", smm.stiefel_m_metric(S, U, R))
print("Stiefel embedded :", smm.embedded_metric(
    smm.tangent_push_stiefel(S, R), smm.tangent_push_stiefel(U, R), kind="rectangular"))

# projecting an arbitrary symmetric matrix onto the tangent space at a point
Xp = smm.flag_construct(smm.haar_rotation(6, 2), sig, a)
G = rng.standard_normal((6, 6))
Z = G + G.T
Tz = smm.tangent_project_flag(Z, Xp)
print("\nprojection is orthogonal:", abs(np.trace(Tz @ (Z - Tz))) < 1e-12)
