"""
Fusion rings as combinatorial data.

A ring is a basis ``X_0 = 1, X_1, ..., X_{m-1}``, non-negative structure
constants ``N[i, j, k]`` (the multiplicity of ``X_k`` in ``X_i X_j``) and
the duality involution ``star``.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError, UnsupportedError
from .finab import FinAbGroup, enumerate_elements


@dataclass(frozen=True, eq=False)
class FusionRing:
    labels: tuple
    N: np.ndarray
    star: tuple

    def __post_init__(self):
        m = len(self.labels)
        N = np.asarray(self.N, dtype=np.int64)
        if N.shape != (m, m, m):
            raise DomainError(f"structure constants must have shape {(m, m, m)}")
        if np.any(N < 0):
            raise DomainError("structure constants must be non-negative")
        if sorted(self.star) != list(range(m)):
            raise DomainError("star must be a permutation of the basis")
        N.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "star", tuple(int(s) for s in self.star))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def rank(self):
        return len(self.labels)

    def mult_matrix(self, i):
        """Left multiplication by ``X_i``: ``(N_i)[k, j] = N[i, j, k]``."""
        return self.N[i].T

    def product(self, i, j):
        return {k: int(v) for k, v in enumerate(self.N[i, j]) if v}

    def invertibles(self):
        """Basis elements ``X`` with ``X X* = 1``."""
        unit = np.zeros(self.rank, dtype=np.int64)
        unit[0] = 1
        return [i for i in range(self.rank) if np.array_equal(self.N[i, self.star[i]], unit)]

    def to_json(self):
        triples = [[int(i), int(j), int(k), int(self.N[i, j, k])]
                   for i, j, k in zip(*np.nonzero(self.N))]
        return json.dumps({"basis": list(self.labels), "star": list(self.star), "N": triples})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        m = len(d["basis"])
        N = np.zeros((m, m, m), dtype=np.int64)
        for i, j, k, v in d["N"]:
            N[i, j, k] = v
        return cls(tuple(d["basis"]), N, tuple(d["star"]))


# finite groups as tables -------------------------------------------------------

def validate_group_table(table):
    """Check a Cayley table with the identity at index 0; returns the inverse map."""
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    if T.shape != (n, n) or n == 0:
        raise DomainError("group table must be a non-empty square array")
    if not np.array_equal(T[0], np.arange(n)) or not np.array_equal(T[:, 0], np.arange(n)):
        raise DomainError("index 0 must be the identity")
    for row in list(T) + list(T.T):
        if sorted(row.tolist()) != list(range(n)):
            raise DomainError("group table is not a Latin square")
    if not np.array_equal(T[T, :], T[:, T]):
        raise DomainError("group table is not associative")
    return [int(np.nonzero(T[g] == 0)[0][0]) for g in range(n)]


def abelian_group_table(A):
    """Cayley table of ``A`` on its lexicographically ordered elements."""
    elems = list(enumerate_elements(A))
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[A.add(x, y)] for y in elems] for x in elems]
    return elems, table


def is_abelian_table(table):
    T = np.asarray(table)
    return bool(np.array_equal(T, T.T))


def _as_table(G):
    if isinstance(G, FinAbGroup):
        elems, table = abelian_group_table(G)
        return [str(e) for e in elems], table
    table = np.asarray(G, dtype=np.int64)
    return [f"g{i}" for i in range(table.shape[0])], table.tolist()


def build_group_ring(G):
    """``Z[G]`` for a FinAbGroup or a Cayley table (identity at index 0)."""
    labels, table = _as_table(G)
    inv = validate_group_table(table)
    n = len(labels)
    N = np.zeros((n, n, n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            N[g, h, table[g][h]] = 1
    return FusionRing(tuple(labels), N, tuple(inv))


def build_RpG(p, G):
    """The ring generated by ``Z[G]`` and ``X_1..X_{p-1}``.

    ``g X_i = X_i g = X_i``, ``X_i* = X_{p-i}``, and ``X_i X_j`` is
    ``sqrt|G| X_{i+j}`` when ``i + j != p`` and the sum of all group
    elements when ``i + j == p``.
    """
    if p < 1:
        raise DomainError("p must be a positive integer")
    labels, table = _as_table(G)
    inv = validate_group_table(table)
    n = len(labels)
    root = math.isqrt(n)
    if p >= 3 and root * root != n:
        raise DomainError(f"|G| = {n} is not a perfect square")
    m = n + p - 1
    N = np.zeros((m, m, m), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            N[g, h, table[g][h]] = 1

    def X(i):
        return n + i - 1

    for i in range(1, p):
        for g in range(n):
            N[g, X(i), X(i)] = 1
            N[X(i), g, X(i)] = 1
        for j in range(1, p):
            if i + j == p:
                N[X(i), X(j), :n] = 1
            else:
                N[X(i), X(j), X((i + j) % p)] = root
    star = list(inv) + [X(p - i) for i in range(1, p)]
    return FusionRing(tuple(labels) + tuple(f"X{i}" for i in range(1, p)), N, tuple(star))


# Frobenius-Perron dimensions ------------------------------------------------------

def perron_root(matrix, tol=1e-9, max_iter=10**5):
    """Spectral radius of a non-negative matrix by shifted power iteration.

    Iterates ``(N + 1) v`` from the all-ones vector; the Collatz-Wielandt
    quotients bracket the Perron root of ``N + 1`` and the loop stops once
    the bracket is narrower than ``tol``.
    """
    N = np.asarray(matrix, dtype=float)
    shifted = N + np.eye(N.shape[0])
    v = np.ones(N.shape[0])
    for _ in range(max_iter):
        w = shifted @ v
        ratios = w / v
        lo, hi = ratios.min(), ratios.max()
        if hi - lo < tol:
            return 0.5 * (lo + hi) - 1.0
        v = w / np.linalg.norm(w)
    raise NumericError("power iteration did not converge")


def fp_dims(R, tol=1e-9):
    """FPdim of each basis element; invertible objects get exactly 1."""
    inv = set(R.invertibles())
    return [1.0 if i in inv else float(perron_root(R.mult_matrix(i), tol)) for i in range(R.rank)]


def global_dimension(R):
    return sum(d * d for d in fp_dims(R))


# axioms ---------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violation: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def verify_axioms(R):
    """Check unit, duality, involution and associativity; stop at the first failure."""
    N, star, m = R.N, R.star, R.rank
    for j in range(m):
        for k in range(m):
            e = int(j == k)
            if N[0, j, k] != e or N[j, 0, k] != e:
                return AxiomReport(False, "unit", (j, k))
    if star[0] != 0 or any(star[star[i]] != i for i in range(m)):
        return AxiomReport(False, "star is not an involution fixing 1", ())
    for i in range(m):
        for j in range(m):
            if N[i, star[j], 0] != int(i == j):
                return AxiomReport(False, "N(i, j*, 0) = delta_ij", (i, j))
    s = np.array(star)
    flipped = N[np.ix_(s, s, s)].transpose(1, 0, 2)
    bad = np.argwhere(N != flipped)
    if len(bad):
        return AxiomReport(False, "N(i,j,k) = N(j*,i*,k*)", tuple(int(x) for x in bad[0]))
    # (X_i X_j) X_k = X_i (X_j X_k), one i at a time; float64 is exact at these sizes
    F = N.astype(float)
    flat_right = F.reshape(m, m * m)
    flat_left = F.reshape(m * m, m)
    for i in range(m):
        left = F[i] @ flat_right
        right = (flat_left @ F[i]).reshape(m, m * m)
        if not np.array_equal(left, right):
            j, kl = np.argwhere(left != right)[0]
            return AxiomReport(False, "associativity", (i, int(j)) + divmod(int(kl), m))
    return AxiomReport(True)


# gradings -------------------------------------------------------------------

def detect_universal_grading_group(R):
    """Z/p-grading of a ring with the R_{p,G} support pattern.

    Invertibles sit in degree 0; the first non-invertible is ``X_1`` and
    ``X_{k+1}`` is the unique non-invertible in ``X_1 X_k``.  Returns
    ``(Z/p, degrees)``; a group ring gives the trivial group.
    """
    inv = set(R.invertibles())
    non_inv = [i for i in range(R.rank) if i not in inv]
    p = len(non_inv) + 1
    degree = {i: 0 for i in inv}
    if non_inv:
        x1 = non_inv[0]
        current = x1
        degree[x1] = 1
        for k in range(2, p):
            support = [c for c in R.product(x1, current) if c not in inv]
            if len(support) != 1 or support[0] in degree:
                raise UnsupportedError("ring does not have the R_{p,G} support pattern")
            current = support[0]
            degree[current] = k
        if set(R.product(x1, current)) - inv:
            raise UnsupportedError("ring does not have the R_{p,G} support pattern")
    degrees = [degree[i] for i in range(R.rank)]
    for i, j, k in zip(*np.nonzero(R.N)):
        if degrees[k] != (degrees[i] + degrees[j]) % p:
            raise UnsupportedError(f"support of X{i} X{j} is not homogeneous")
    group = FinAbGroup.from_cyclic_orders([p]) if p > 1 else FinAbGroup.trivial()
    return group, degrees
