"""
Finite abelian groups, their duals and homomorphisms, in exact arithmetic.

A group is stored as a sorted list of prime-power cyclic factors
``(q, n, a)`` meaning ``(Z/q^n)^a``.  Elements are plain tuples of residues,
one per cyclic factor (multiplicities expanded).  The dual group ``A*`` uses
the same factor list; a functional ``f`` pairs with ``a`` as

    <f, a> = sum_i f_i * a_i * (L / d_i)   (mod L)

where ``d_i`` is the order of factor ``i`` and ``L`` the exponent of ``A``.
This is the usual Q/Z-valued pairing scaled by ``L``.

A homomorphism ``f: A -> B`` is an integer matrix with one row per cyclic
factor of ``B``; entry ``e[i][j]`` is reduced modulo the order of target
factor ``i`` and must be a multiple of ``n_i / gcd(n_i, m_j)`` so that the
map out of ``Z/m_j`` is well defined.  In particular entries between
factors of different primes are forced to zero.

Conventions:

* ``A**`` is identified with ``A`` through the same coordinates, so
  ``dual_hom(dual_hom(f)) == f`` holds on the nose.
* ``dual_hom(f o g) == dual_hom(g) o dual_hom(f)``; no signs are introduced.
"""

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from sympy import factorint, isprime

from . import config
from .errors import ConsistencyError, DomainError, ResourceError

# products of two residues and a short row sum must stay inside int64
_MAX_FACTOR_ORDER = 2**24
_MAX_GROUP_ORDER = 2**63 - 1


@dataclass(frozen=True)
class FinAbGroup:
    """``(Z/q1^n1)^a1 + ... + (Z/qk^nk)^ak`` with the factors sorted by (q, n)."""

    factors: tuple = ()

    def __post_init__(self):
        merged = {}
        for item in self.factors:
            if len(item) != 3:
                raise DomainError(f"factor {item!r} is not a (q, n, a) triple")
            q, n, a = (int(v) for v in item)
            if not isprime(q):
                raise DomainError(f"{q} is not prime")
            if n < 1 or a < 1:
                raise DomainError(f"exponent and multiplicity must be >= 1, got {item!r}")
            merged[(q, n)] = merged.get((q, n), 0) + a
        factors = tuple((q, n, a) for (q, n), a in sorted(merged.items()))
        object.__setattr__(self, "factors", factors)
        order = 1
        for q, n, a in factors:
            if q**n > _MAX_FACTOR_ORDER:
                raise DomainError(f"cyclic factor {q}^{n} too large for exact int64 arithmetic")
            order *= q ** (n * a)
            if order > _MAX_GROUP_ORDER:
                raise DomainError("group order overflows 64 bits")

    # constructors -------------------------------------------------------

    @classmethod
    def parse(cls, text):
        """Parse a descriptor such as ``"2^2:2 + 7^1:4"``; ``"1"`` or ``""`` is trivial."""
        s = re.sub(r"\s+", "", text).lower()
        if s in ("", "1", "0", "trivial"):
            return cls(())
        factors = []
        for term in s.split("+"):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?(?::(\d+))?", term)
            if m is None:
                raise DomainError(f"cannot parse group term {term!r}")
            q = int(m.group(1))
            n = int(m.group(2) or 1)
            a = int(m.group(3) or 1)
            factors.append((q, n, a))
        return cls(tuple(factors))

    @classmethod
    def from_cyclic_orders(cls, orders):
        """Primary decomposition of ``Z/m1 + Z/m2 + ...``."""
        factors = []
        for m in orders:
            if m < 1:
                raise DomainError(f"cyclic order must be positive, got {m}")
            for q, n in factorint(m).items():
                factors.append((q, n, 1))
        return cls(tuple(factors))

    @classmethod
    def trivial(cls):
        return cls(())

    # basic invariants ---------------------------------------------------

    @cached_property
    def orders(self):
        """Orders of the expanded cyclic factors, as a tuple of ints."""
        return tuple(q**n for q, n, a in self.factors for _ in range(a))

    @cached_property
    def primes_of_coords(self):
        return tuple(q for q, n, a in self.factors for _ in range(a))

    @cached_property
    def order(self):
        return math.prod(self.orders)

    @cached_property
    def exponent(self):
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def rank(self):
        return len(self.orders)

    @property
    def primes(self):
        return sorted({q for q, _, _ in self.factors})

    def multiplicities(self):
        return [a for _, _, a in self.factors]

    def is_elementary(self):
        """True for ``(Z/q)^a`` with a single prime (or the trivial group)."""
        return len(self.factors) == 0 or (len(self.factors) == 1 and self.factors[0][1] == 1)

    def is_homogeneous(self):
        return len(set(self.orders)) <= 1

    def primary_part(self, q):
        return FinAbGroup(tuple(f for f in self.factors if f[0] == q))

    def coords_of_prime(self, q):
        return [i for i, p in enumerate(self.primes_of_coords) if p == q]

    def doubled(self):
        """The factor list of ``A + A*`` laid out as (A coords, A* coords); returns orders."""
        return self.orders + self.orders

    def descriptor(self):
        if not self.factors:
            return "1"
        return "+".join(f"{q}^{n}:{a}" for q, n, a in self.factors)

    def __str__(self):
        if not self.factors:
            return "trivial"
        parts = []
        for q, n, a in self.factors:
            base = f"Z/{q**n}"
            parts.append(base if a == 1 else f"({base})^{a}")
        return " + ".join(parts)

    # elements -----------------------------------------------------------

    def zero(self):
        return (0,) * self.rank

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def scale(self, c, x):
        return tuple((c * a) % d for a, d in zip(x, self.orders))

    def reduce(self, x):
        if len(x) != self.rank:
            raise DomainError(f"element {x!r} has wrong length for {self}")
        return tuple(int(a) % d for a, d in zip(x, self.orders))

    def element_order(self, x):
        return math.lcm(*(d // math.gcd(d, a) for a, d in zip(x, self.orders))) if x else 1

    def unit_vector(self, i):
        v = [0] * self.rank
        v[i] = 1
        return tuple(v)


def enumerate_elements(A, cap=None):
    """All elements of ``A`` in lexicographic coordinate order."""
    cap = config.ELEMENT_CAP if cap is None else cap
    if A.order > cap:
        raise ResourceError(f"|A| = {A.order} exceeds element cap {cap}")
    return itertools.product(*(range(d) for d in A.orders))


def pairing(A, f, a):
    """``<f, a>`` for ``f`` in ``A*`` and ``a`` in ``A``, valued in ``Z/exponent(A)``."""
    L = A.exponent
    return sum(fi * ai * (L // d) for fi, ai, d in zip(f, a, A.orders)) % L


class GroupHom:
    """A homomorphism ``source -> target`` stored as an integer matrix.

    Duals share factor lists with their groups, so a map ``A -> A*`` is a
    ``GroupHom(A, A, ...)``; which side is "starred" is a matter of use.
    """

    __slots__ = ("source", "target", "entries", "_key")

    def __init__(self, source, target, entries, check=True):
        self.source = source
        self.target = target
        E = np.array(entries, dtype=np.int64).reshape(target.rank, source.rank)
        if target.rank:
            E = E % np.array(target.orders, dtype=np.int64)[:, None]
        if check:
            bad = E % _step_matrix(source, target)
            if np.any(bad):
                i, j = map(int, np.argwhere(bad)[0])
                raise DomainError(
                    f"entry ({i},{j}) = {E[i, j]} is not a well-defined map "
                    f"Z/{source.orders[j]} -> Z/{target.orders[i]}")
        E.setflags(write=False)
        self.entries = E
        self._key = None

    # constructors

    @classmethod
    def identity(cls, A):
        return cls(A, A, np.eye(A.rank, dtype=np.int64), check=False)

    @classmethod
    def zero(cls, A, B=None):
        B = A if B is None else B
        return cls(A, B, np.zeros((B.rank, A.rank), dtype=np.int64), check=False)

    @classmethod
    def scalar(cls, A, c):
        return cls(A, A, c * np.eye(A.rank, dtype=np.int64), check=False)

    # value semantics

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(int(v) for v in self.entries.flat)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.key == other.key)

    def __hash__(self):
        return hash((self.source, self.target, self.key))

    def __repr__(self):
        return f"GroupHom({self.source} -> {self.target}, {self.entries.tolist()})"

    def tolist(self):
        return self.entries.tolist()

    # arithmetic

    def __call__(self, x):
        if len(x) != self.source.rank:
            raise DomainError("element length does not match source")
        v = self.entries @ np.array(x, dtype=np.int64).reshape(-1)
        return tuple(int(a) % d for a, d in zip(v, self.target.orders))

    def __matmul__(self, other):
        return compose(self, other)

    def _same_shape(self, other):
        if self.source != other.source or self.target != other.target:
            raise DomainError("homomorphisms have different source/target")

    def __add__(self, other):
        self._same_shape(other)
        return GroupHom(self.source, self.target, self.entries + other.entries, check=False)

    def __sub__(self, other):
        self._same_shape(other)
        return GroupHom(self.source, self.target, self.entries - other.entries, check=False)

    def __neg__(self):
        return GroupHom(self.source, self.target, -self.entries, check=False)

    def __rmul__(self, c):
        return GroupHom(self.source, self.target, int(c) * self.entries, check=False)

    def dual(self):
        return dual_hom(self)

    def inverse(self):
        return hom_inverse(self)

    def is_zero(self):
        return not np.any(self.entries)

    def __pow__(self, k):
        if self.source != self.target:
            raise DomainError("powers need an endomorphism")
        result = GroupHom.identity(self.source)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def _step_matrix(source, target):
    """``step[i][j] = n_i / gcd(n_i, m_j)``: entries must be multiples of it."""
    n = np.array(target.orders, dtype=np.int64)[:, None]
    m = np.array(source.orders, dtype=np.int64)[None, :]
    return n // np.gcd(n, m) if target.rank and source.rank else \
        np.ones((target.rank, source.rank), dtype=np.int64)


def compose(f, g):
    """``f o g`` (apply ``g`` first)."""
    if g.target != f.source:
        raise DomainError(f"cannot compose: {g.target} != {f.source}")
    E = f.entries @ g.entries if f.source.rank else \
        np.zeros((f.target.rank, g.source.rank), dtype=np.int64)
    return GroupHom(g.source, f.target, E, check=False)


def dual_hom(f):
    """The transpose ``B* -> A*`` of ``f: A -> B`` with factor-order rescaling."""
    A, B = f.source, f.target
    if not A.rank or not B.rank:
        return GroupHom(B, A, np.zeros((A.rank, B.rank), dtype=np.int64), check=False)
    n = np.array(B.orders, dtype=np.int64)[:, None]
    m = np.array(A.orders, dtype=np.int64)[None, :]
    g = np.gcd(n, m)
    C = (f.entries // (n // g)) * (m // g)
    return GroupHom(B, A, C.T, check=False)


def gram_matrix(gamma):
    """``G[i][j] = <gamma(e_j), e_i>`` in ``Z/L``, for ``gamma: A -> A*``."""
    A = gamma.source
    if gamma.target != A:
        raise DomainError("gram_matrix needs a map A -> A*")
    L = A.exponent
    scale = np.array([L // d for d in A.orders], dtype=np.int64)[:, None]
    return (gamma.entries * scale) % L if A.rank else gamma.entries


def is_skew(gamma):
    """``dual_hom(gamma) == -gamma``."""
    return dual_hom(gamma) == -gamma


def is_alternating(gamma):
    """``<gamma(a), a> == 0`` for every ``a``.

    Polarization: the form vanishes on the diagonal of the generators and the
    symmetrized Gram matrix vanishes.
    """
    G = gram_matrix(gamma)
    L = gamma.source.exponent
    return not np.any(np.diag(G) % L) and not np.any((G + G.T) % L)


def is_alternating_exhaustive(gamma, cap=None):
    """The same test, evaluated on every element (small groups only)."""
    A = gamma.source
    return all(pairing(A, gamma(a), a) == 0 for a in enumerate_elements(A, cap))


# inversion -----------------------------------------------------------------

def _inv_mod_prime(M, q):
    """Inverse of a square integer matrix over F_q, or ``None`` if singular."""
    k = len(M)
    work = [[int(v) % q for v in row] + [int(i == j) for j in range(k)]
            for i, row in enumerate(np.asarray(M).tolist())]
    for col in range(k):
        pivot = next((r for r in range(col, k) if work[r][col]), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        inv = pow(work[col][col], -1, q)
        prow = work[col] = [(v * inv) % q for v in work[col]]
        for r in range(k):
            c = work[r][col]
            if r != col and c:
                work[r] = [(v - c * w) % q for v, w in zip(work[r], prow)]
    return np.array([row[k:] for row in work], dtype=np.int64).reshape(k, k)


def rank_mod_prime(M, q):
    """Rank of an integer matrix over F_q."""
    work = np.array(M, dtype=np.int64) % q
    rows, cols = work.shape
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if work[r, col]), None)
        if pivot is None:
            continue
        work[[rank, pivot]] = work[[pivot, rank]]
        work[rank] = (work[rank] * pow(int(work[rank, col]), -1, q)) % q
        for r in range(rows):
            if r != rank and work[r, col]:
                work[r] = (work[r] - work[r, col] * work[rank]) % q
        rank += 1
    return rank


@lru_cache(maxsize=None)
def _inversion_plan(orders):
    """Per prime: coordinate indices, their orders, and the equal-exponent layers."""
    plan = []
    by_prime = {}
    for i, d in enumerate(orders):
        by_prime.setdefault(min(factorint(d)), []).append(i)
    for q, idx in sorted(by_prime.items()):
        o = np.array([orders[i] for i in idx], dtype=np.int64)
        layers = [np.nonzero(o == d)[0] for d in sorted(set(o.tolist()))]
        plan.append((q, np.array(idx), o, layers))
    return plan


def _invert_endo(E, orders):
    """Inverse of an endomorphism matrix of ``+ Z/orders[i]``, or ``None``.

    Works one prime at a time.  Modulo the radical of the endomorphism ring
    only the blocks between equal exponents survive; invert those over F_q,
    then refine with Newton steps ``g <- g + g(1 - Eg)``, which square the
    error and terminate because the radical is nilpotent.
    """
    orders = tuple(orders)
    if not orders:
        return E.copy()
    inv = np.zeros_like(E)
    for q, idx, o, layers in _inversion_plan(orders):
        single = len(idx) == len(orders)
        Eq = E if single else E[np.ix_(idx, idx)]
        if len(layers) == 1:
            g = _inv_mod_prime(Eq, q)
            if g is None:
                return None
        else:
            g = np.zeros_like(Eq)
            for layer in layers:
                block = _inv_mod_prime(Eq[np.ix_(layer, layer)], q)
                if block is None:
                    return None
                g[np.ix_(layer, layer)] = block
        if o[0] != q or len(layers) > 1:
            ident = np.eye(len(idx), dtype=np.int64)
            for _ in range(64):
                err = (ident - Eq @ g) % o[:, None]
                if not err.any():
                    break
                g = (g + g @ err) % o[:, None]
            else:
                raise ConsistencyError("Newton inversion did not terminate")
        if single:
            return g
        inv[np.ix_(idx, idx)] = g
    return inv


def is_isomorphism(f):
    """Exact bijectivity test; the groups must have equal order."""
    if f.source.order != f.target.order:
        raise DomainError("is_isomorphism needs groups of equal order")
    if f.source != f.target:
        # equal order but different invariants: never isomorphic
        return False
    return _invert_endo(f.entries, f.source.orders) is not None


def hom_inverse(f):
    if f.source != f.target:
        raise DomainError("only automorphisms of a group can be inverted here")
    inv = _invert_endo(f.entries, f.source.orders)
    if inv is None:
        raise DomainError("homomorphism is not invertible")
    return GroupHom(f.target, f.source, inv, check=False)


def is_injective_exhaustive(f, cap=None):
    """Brute force: the kernel is trivial."""
    cap = config.EXHAUSTIVE_CHECK_CAP if cap is None else cap
    zero = f.target.zero()
    return sum(1 for x in enumerate_elements(f.source, cap) if f(x) == zero) == 1


def hom_from_columns(source, target, columns):
    """The hom sending the ``j``-th generator of ``source`` to ``columns[j]``."""
    E = np.array(columns, dtype=np.int64).reshape(source.rank, target.rank).T
    return GroupHom(source, target, E)


def block_hom(A, alpha, beta, gamma, delta):
    """Assemble ``[[alpha, beta], [gamma, delta]]`` into one matrix on ``A + A*``."""
    return np.block([[alpha.entries, beta.entries], [gamma.entries, delta.entries]])


def random_hom(A, B, rng):
    """A uniformly random homomorphism ``A -> B``; ``rng`` is a numpy Generator."""
    step = _step_matrix(A, B)
    n = np.array(B.orders, dtype=np.int64)[:, None]
    E = rng.integers(0, n // step, size=(B.rank, A.rank)) * step if A.rank and B.rank else \
        np.zeros((B.rank, A.rank), dtype=np.int64)
    return GroupHom(A, B, E, check=False)


def random_automorphism(A, rng, max_tries=10**4):
    """Rejection-sample a uniformly random automorphism of ``A``."""
    for _ in range(max_tries):
        h = random_hom(A, A, rng)
        if _invert_endo(h.entries, A.orders) is not None:
            return h
    raise ResourceError("no invertible endomorphism found")
