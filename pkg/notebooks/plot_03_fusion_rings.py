"""
Fusion rings R_{p,G}
====================

``R_{p,G}`` has the elements of G plus p - 1 extra simple objects.
Their Frobenius-Perron dimensions equal sqrt(|G|).
"""

import math

from fusion_census import FinAbGroup, build_RpG, fp_dims, verify_axioms

G = FinAbGroup.parse("2^1:2")
R = build_RpG(3, G)
verify_axioms(R)
print("rank", R.rank)
print("dims", [round(d, 9) for d in fp_dims(R)], "sqrt|G| =", math.sqrt(G.order))
