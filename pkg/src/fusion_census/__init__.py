"""Exact censuses of Z/p-graded extensions of pointed fusion categories.

Modules:

* ``finab``      finite abelian groups, duals and homomorphism matrices
* ``orthogroup`` the split orthogonal group ``O(A + A*)``
* ``fusering``   fusion rings, ``R_{p,G}``, Frobenius-Perron dimensions
* ``formsolve``  normal forms and block decomposition of ``gamma: A -> A*``
* ``classify``   the ``p q^2`` and ``R_{3,A}`` censuses
* ``oracle``     brute-force ground truth for small instances
* ``lemmas``     exhaustive structural checks
* ``cli``        command-line front end
"""

from .errors import (ConsistencyError, DomainError, FusionCensusError, NormalFormError,
                     NumericError, ResourceError, SingularityError, SolveError,
                     UnsupportedError)
from .finab import FinAbGroup, GroupHom, dual_hom, enumerate_elements, pairing
from .orthogroup import OrthElem, orth_membership, orth_mul, orth_pow, normalize_delta_zero
from .fusering import FusionRing, build_group_ring, build_RpG, fp_dims, verify_axioms
from .formsolve import (canonical_skew, decompose, enumerate_gamma_classes,
                        hensel_lift_quadratic, solve_special_gamma)
from .classify import (FqSquared, RootPair, build_M, census_pq2, census_R3A,
                       is_group_theoretical, pth_roots_in_Fq2)

__version__ = "0.1.0"
