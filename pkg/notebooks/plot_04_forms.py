"""
Decomposing forms gamma: A -> A*
================================

Valid forms split into orthogonal blocks. Reassembling the blocks
after the change of basis gives back the original matrix.
"""

import numpy as np

from fusion_census import FinAbGroup, decompose, enumerate_gamma_classes
from fusion_census.oracle import exhaustive_gamma_solutions, gamma_orbits

A = FinAbGroup.parse("2^1:2+2^2:2")
classes = enumerate_gamma_classes(A)
print(len(classes), "classes predicted")

# %%
# The brute-force orbit count agrees.

sols = exhaustive_gamma_solutions(A)
print(len(sols), "solutions in", gamma_orbits(A, sols).count, "orbits")

# %%
# Pick one at random and decompose it.

rng = np.random.default_rng(0)
g = sols[int(rng.integers(len(sols)))]
d = decompose(A, g)
print(d.to_json())
print("reassembles:", d.reassemble() == g)
