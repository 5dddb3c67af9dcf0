"""
The two censuses
================

Counts for dimension p q^2 and for the rings R_{3,A}.
"""

from fusion_census import census_pq2, census_R3A

for p, q in [(3, 2), (5, 19), (7, 13)]:
    rep = census_pq2(p, q, "general")
    print(p, q, rep.counts)

# %%
# For small A the brute-force oracle confirms the formula.

for desc in ("trivial", "2^1:2", "5^1:1", "2^1:2+2^2:2"):
    rep = census_R3A(desc, oracle_check=desc == "2^1:2")
    print(desc, rep.count, rep.oracle_checked)
