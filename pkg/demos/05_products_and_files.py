"""
Flags as tuples of projectors, and model files
==============================================

A flag is also a tuple of mutually orthogonal projectors summing to the
identity.  Every object can be written to a small text file that reads
back bit for bit.
"""

import tempfile
from pathlib import Path

import numpy as np

import smm

sig = smm.FlagSignature(5, (2, 3))
Xp = smm.flag_construct(smm.haar_rotation(5, 9), sig, smm.IsospectralParams((0.0, 1.0, 2.5)))
F = smm.flag_extract(Xp)

G = smm.flag_to_product(F)
print("ranks:", G.ranks)
print("sum of projectors is I:", np.allclose(sum(G.projectors), np.eye(5)))
H = smm.product_to_flag(G)
print("back to the same flag:", all(np.allclose(p, q) for p, q in zip(F.projectors(), H.projectors())))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "flag.smm"
    smm.write_model(Xp, path, seed=9, prng=smm.PRNG_ID)
    print()
    print("\n".join(path.read_text().splitlines()[:7]))
    again = smm.read_model(path)
    print("...\nidentical matrix after reading:", np.array_equal(again.X, Xp.X))
