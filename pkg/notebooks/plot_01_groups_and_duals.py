"""
Finite abelian groups and their duals
=====================================

Groups are written as descriptors like ``"2^1:2+7^1:4"``, meaning
two copies of Z/2 and four copies of Z/7.
"""

import numpy as np

from fusion_census import FinAbGroup, GroupHom, dual_hom, pairing

A = FinAbGroup.parse("2^1:1+2^2:1")
print(A.descriptor(), "order", A.order)

# %%
# A homomorphism is an integer matrix acting on coordinate vectors.
# The dual map is again a matrix, rescaled so the pairing lands in Z/exp(A).

g = GroupHom(A, A, np.array([[1, 1], [2, 3]]))
gd = dual_hom(g)
x, f = (1, 2), (0, 1)
print(pairing(A, gd(f), x), pairing(A, f, g(x)))
