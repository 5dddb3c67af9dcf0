"""
The split orthogonal group of A + A*
====================================

Brute-force enumeration for tiny groups, and the delta-zero normal form.
"""

from fusion_census import FinAbGroup, normalize_delta_zero
from fusion_census.oracle import enumerate_orthogonal_group

for desc in ("2", "3", "2^1:2", "2+2^2"):
    elems = enumerate_orthogonal_group(FinAbGroup.parse(desc))
    print(desc, len(elems))

# %%
# Elements with an invertible off-diagonal block can be conjugated to one
# whose lower-right block vanishes; the conjugating move is unique.

elems = enumerate_orthogonal_group(FinAbGroup.parse("3"))
for M in elems:
    try:
        print(normalize_delta_zero(M, check_unique=True))
    except Exception as exc:
        print("no normal form:", type(exc).__name__)
