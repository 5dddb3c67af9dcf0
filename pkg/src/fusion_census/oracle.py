"""
Brute-force ground truth on small instances.

Nothing here is clever on purpose.  Homomorphisms are enumerated entry by
entry, orthogonal elements generator image by generator image, Lagrangians
subgroup by subgroup, and orbits are found by union-find over an explicit
universe.  Every closed-form count elsewhere in the package is checked
against these routines in the test suite.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import ConsistencyError, ResourceError
from .finab import (GroupHom, _invert_endo, _step_matrix, dual_hom,
                    enumerate_elements, is_alternating)
from .orthogroup import OrthElem, quadratic_form


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x


@dataclass
class OrbitPartition:
    universe: list
    orbit_id: dict
    representatives: list
    generators: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.representatives)

    def orbits(self):
        out = [[] for _ in self.representatives]
        for x in self.universe:
            out[self.orbit_id[x]].append(x)
        return out


def orbit_count(universe, generators):
    """Partition ``universe`` into orbits of the group generated by ``generators``.

    Each generator is a callable on universe elements.  Orbits are numbered
    by their minimal element, which is also the representative.
    """
    universe = list(universe)
    members = set(universe)
    uf = UnionFind(universe)
    for g in generators:
        for x in universe:
            y = g(x)
            if y not in members:
                raise ConsistencyError(f"generator maps {x!r} outside the universe")
            uf.union(x, y)
    best = {}
    for x in universe:
        r = uf.find(x)
        if r not in best or x < best[r]:
            best[r] = x
    reps = sorted(best.values())
    index = {rep: i for i, rep in enumerate(reps)}
    orbit_id = {x: index[best[uf.find(x)]] for x in universe}
    return OrbitPartition(universe, orbit_id, reps, list(generators))


# homomorphisms and automorphisms ---------------------------------------------

def hom_count(A, B):
    return math.prod(math.gcd(n, m) for n in B.orders for m in A.orders)


def _hom_batches(A, B, cap=None, chunk=1 << 15):
    """Entry arrays of every hom ``A -> B``, lexicographic in row-major entries, in chunks."""
    cap = config.oracle_cap(config.HOM_SCAN_CAP) if cap is None else cap
    total = hom_count(A, B)
    if total > cap:
        raise ResourceError(f"|Hom| = {total} exceeds scan cap {cap}")
    step = _step_matrix(A, B)
    sizes = [int(n) // int(s) for n, row in zip(B.orders, step) for s in row]
    steps = np.array(step, dtype=np.int64).reshape(-1)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((len(idx), len(sizes)), dtype=np.int64)
        for k in range(len(sizes) - 1, -1, -1):
            digits[:, k] = idx % sizes[k]
            idx //= sizes[k]
        yield (digits * steps).reshape(len(digits), B.rank, A.rank)


def enumerate_homs(A, B, cap=None):
    """Every homomorphism ``A -> B``, lexicographic in the row-major entries."""
    for batch in _hom_batches(A, B, cap):
        for E in batch:
            yield GroupHom(A, B, E, check=False)


def _element_columns(A):
    """All elements of ``A`` as the columns of an ``r x |A|`` array, lexicographic."""
    return np.array(list(enumerate_elements(A)), dtype=np.int64).reshape(A.order, A.rank).T


def _images(A, E, X):
    return (E @ X) % np.array(A.orders, dtype=np.int64)[:, None]


def _injective_mask(A, E, X):
    """Per matrix in the batch: the kernel, found by evaluating on every element, is trivial."""
    zero = ~_images(A, E, X).any(axis=1)
    return zero.sum(axis=1) == 1


def _index_of(A, cols):
    """Lexicographic index of each column; inverse of :func:`_element_columns`."""
    weights = np.ones(A.rank, dtype=np.int64)
    for i in range(A.rank - 2, -1, -1):
        weights[i] = weights[i + 1] * A.orders[i + 1]
    return np.einsum("i,...in->...n", weights, cols)


def _dual_batch(A, E):
    n = np.array(A.orders, dtype=np.int64)
    g = np.gcd(n[:, None], n[None, :])
    C = (E // (n[:, None] // g)) * (n[None, :] // g)
    return np.swapaxes(C, 1, 2)


def _valid_gamma_mask(A, E, X):
    """``<gamma* gamma^-1 gamma* a, a> = 0`` for all ``a``, evaluated literally.

    For bijective ``gamma`` put ``c = gamma^-1 gamma* a``; then the value is
    ``<gamma a, c>``, and ``c`` is looked up as the element with ``gamma c = gamma* a``.
    """
    L = A.exponent
    scale = np.array([L // d for d in A.orders], dtype=np.int64)
    g_img = _images(A, E, X)
    gs_img = _images(A, _dual_batch(A, E), X)
    pos = np.argsort(_index_of(A, g_img), axis=1)
    c = np.take_along_axis(pos, _index_of(A, gs_img), axis=1)
    Xc = np.moveaxis(X[:, c], 0, 1)
    val = np.einsum("i,bin,bin->bn", scale, g_img, Xc) % L
    return ~val.any(axis=1)


def automorphisms(A, cap=None):
    X = _element_columns(A)
    out = []
    for batch in _hom_batches(A, A, cap):
        for E in batch[_injective_mask(A, batch, X)]:
            out.append(GroupHom(A, A, E, check=False))
    return out


def closure(gens, identity):
    seen = {identity.key: identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = g @ h
                if k.key not in seen:
                    seen[k.key] = k
                    nxt.append(k)
        frontier = nxt
    return seen


def _hom_codes(A, E):
    """Injective integer code of each endomorphism matrix in a batch."""
    radix = np.repeat(np.array(A.orders, dtype=np.int64), A.rank)
    weights = np.ones(len(radix), dtype=np.int64)
    for i in range(len(radix) - 2, -1, -1):
        weights[i] = weights[i + 1] * radix[i + 1]
    return E.reshape(len(E), -1) @ weights


def _closure_codes(A, gens):
    """Codes of the subgroup generated by ``gens``, by breadth-first search on arrays."""
    orders = np.array(A.orders, dtype=np.int64)[:, None]
    G = np.array([g.entries for g in gens], dtype=np.int64).reshape(len(gens), A.rank, A.rank)
    frontier = np.eye(A.rank, dtype=np.int64)[None]
    seen = _hom_codes(A, frontier)
    while len(frontier):
        new = (G[:, None] @ frontier[None]).reshape(-1, A.rank, A.rank) % orders
        codes, first = np.unique(_hom_codes(A, new), return_index=True)
        fresh = ~np.isin(codes, seen)
        frontier = new[first[fresh]]
        seen = np.union1d(seen, codes[fresh])
    return seen


def automorphism_generators(A, cap=None):
    """A generating set for Aut(A), chosen greedily from the sorted full list."""
    if A.rank * math.log2(max(A.order, 2)) > 62:
        raise ResourceError("endomorphism codes overflow 64 bits")
    auts = automorphisms(A, cap)
    codes = _hom_codes(A, np.array([h.entries for h in auts]).reshape(len(auts), A.rank, A.rank))
    gens = []
    generated = set(_hom_codes(A, np.eye(A.rank, dtype=np.int64)[None]).tolist())
    for h, code in zip(auts, codes.tolist()):
        if code not in generated:
            gens.append(h)
            generated = set(_closure_codes(A, gens).tolist())
    if len(generated) != len(auts):
        raise ConsistencyError("greedy generating set does not generate Aut(A)")
    return gens


# gamma scans -----------------------------------------------------------------

def valid_gamma_predicate(gamma):
    """``gamma`` invertible and ``gamma* gamma^-1 gamma*`` alternating."""
    inv = _invert_endo(gamma.entries, gamma.source.orders)
    if inv is None:
        return False
    g_star = dual_hom(gamma)
    g_inv = GroupHom(gamma.target, gamma.source, inv, check=False)
    return is_alternating(g_star @ g_inv @ g_star)


def exhaustive_gamma_solutions(A, predicate=valid_gamma_predicate, cap=None):
    """Every ``gamma: A -> A*`` accepted by ``predicate``.

    The default predicate runs as a whole-batch array scan (kernel and
    alternating condition evaluated on every element); other predicates are
    called one hom at a time.
    """
    if predicate is not valid_gamma_predicate:
        return [g for g in enumerate_homs(A, A, cap) if predicate(g)]
    X = _element_columns(A)
    out = []
    for batch in _hom_batches(A, A, cap):
        inv = batch[_injective_mask(A, batch, X)]
        for E in inv[_valid_gamma_mask(A, inv, X)]:
            out.append(GroupHom(A, A, E, check=False))
    return out


def gamma_orbits(A, solutions=None, cap=None, generators=None):
    """Orbits of ``gamma -> psi* gamma psi`` on the valid-gamma solution set.

    ``generators`` defaults to a full generating set of Aut(A).  A smaller
    set gives a finer partition, so a count of 1 is still conclusive.
    """
    if solutions is None:
        solutions = exhaustive_gamma_solutions(A, cap=cap)
    by_key = {g.key: g for g in solutions}
    gens = automorphism_generators(A, cap) if generators is None else generators

    def action(psi):
        psi_star = dual_hom(psi)
        return lambda k: (psi_star @ by_key[k] @ psi).key

    return orbit_count(sorted(by_key), [action(psi) for psi in gens])


# orthogonal group ------------------------------------------------------------

def _doubled_elements(A, cap):
    n = A.order ** 2
    if n > cap:
        raise ResourceError(f"|A + A*| = {n} exceeds cap {cap}")
    return [a + f for a in enumerate_elements(A, cap) for f in enumerate_elements(A, cap)]


def _bilinear(A, v, w):
    s = tuple((x + y) for x, y in zip(v, w))
    L = A.exponent
    return (quadratic_form(A, s) - quadratic_form(A, v) - quadratic_form(A, w)) % L


def enumerate_orthogonal_group(A, cap=None):
    """All of O(A + A*) by backtracking over generator images.

    The image of each generator must have compatible order, the same value
    of the quadratic form, and the same bilinear pairing with the images
    already chosen.  Survivors are kept only if invertible.  Q and the
    bilinear form are tabulated once over the whole of A + A*.
    """
    cap = config.oracle_cap(config.ORTH_CAP) if cap is None else cap
    space = _doubled_elements(A, cap)
    orders = A.orders + A.orders
    r2 = len(orders)
    Q = [quadratic_form(A, v) for v in space]
    index = {v: i for i, v in enumerate(space)}
    zero = index[tuple([0] * r2)]
    B = [[(Q[index[tuple((x + y) % o for x, y, o in zip(v, w, orders))]] - Q[i] - Q[j]) % A.exponent
          for j, w in enumerate(space)] for i, v in enumerate(space)]
    gens = [index[tuple(1 if i == j else 0 for i in range(r2))] for j in range(r2)]
    candidates = []
    for j, u in enumerate(gens):
        d = orders[j]
        candidates.append([i for i, v in enumerate(space)
                           if all((d * x) % o == 0 for x, o in zip(v, orders))
                           and Q[i] == Q[u] and i != zero])
    result = []

    def extend(chosen):
        j = len(chosen)
        if j == r2:
            M = np.array([space[i] for i in chosen], dtype=np.int64).reshape(r2, r2).T
            if _invert_endo(M, orders) is not None:
                result.append(OrthElem.from_matrix(A, M))
            return
        target = [B[gens[j]][gens[k]] for k in range(j)]
        for v in candidates[j]:
            row = B[v]
            if all(row[w] == t for w, t in zip(chosen, target)):
                extend(chosen + [v])

    extend([])
    result.sort(key=lambda M: M.key)
    return result


# Lagrangians -----------------------------------------------------------------

@dataclass(frozen=True)
class Lagrangian:
    """A subgroup of A + A* recorded by its sorted elements and a generating set."""

    elements: frozenset
    generators: tuple

    def __contains__(self, v):
        return tuple(v) in self.elements

    def __len__(self):
        return len(self.elements)

    @property
    def key(self):
        return tuple(sorted(self.elements))

    def is_invariant(self, M):
        return all(M(g) in self.elements for g in self.generators)


def _span(orders, gens):
    elems = {tuple(0 for _ in orders)}
    for g in gens:
        new = set()
        for e in elems:
            x = e
            while True:
                new.add(x)
                x = tuple((a + b) % o for a, b, o in zip(x, g, orders))
                if x == e:
                    break
        elems = new
    return frozenset(elems)


def _lagrangians_rref(A):
    """Elementary abelian ``A``: scan reduced row echelon bases of r-dim subspaces."""
    q = A.orders[0]
    r = A.rank
    n = 2 * r
    found = []
    for pivots in itertools.combinations(range(n), r):
        free = [[j for j in range(pivots[i] + 1, n) if j not in pivots] for i in range(r)]

        def rows_from(i, rows):
            if i == r:
                found.append(tuple(rows))
                return
            for vals in itertools.product(range(q), repeat=len(free[i])):
                row = [0] * n
                row[pivots[i]] = 1
                for j, v in zip(free[i], vals):
                    row[j] = v
                row = tuple(row)
                if quadratic_form(A, row) != 0:
                    continue
                if any(_bilinear(A, row, other) for other in rows):
                    continue
                rows_from(i + 1, rows + [row])

        rows_from(0, [])
    orders = A.orders + A.orders
    return [Lagrangian(_span(orders, basis), basis) for basis in found]


def _lagrangians_dfs(A, cap):
    """Any ``A``: grow isotropic subgroups one generator at a time."""
    space = _doubled_elements(A, cap)
    orders = A.orders + A.orders
    zero = tuple(0 for _ in orders)
    iso = [v for v in space if v != zero and quadratic_form(A, v) == 0]
    target = A.order
    start = (frozenset([zero]), ())
    seen = {start[0]}
    stack = [start]
    found = {}
    while stack:
        elems, gens = stack.pop()
        if len(elems) == target:
            found[elems] = gens
            continue
        for v in iso:
            if v in elems or any(_bilinear(A, v, g) for g in gens):
                continue
            new = _span(orders, gens + (v,))
            if new not in seen:
                seen.add(new)
                stack.append((new, gens + (v,)))
    out = [Lagrangian(e, g) for e, g in found.items()]
    out.sort(key=lambda L: L.key)
    return out


def enumerate_lagrangians(A, cap=None, method=None):
    """All subgroups ``L`` of A + A* with ``|L| = |A|`` on which the form vanishes.

    Such an ``L`` is automatically its own orthogonal complement, because the
    bilinear form on A + A* is non-degenerate.
    """
    cap = config.oracle_cap(config.ORTH_CAP) if cap is None else cap
    if A.order ** 2 > cap:
        raise ResourceError(f"|A + A*| = {A.order ** 2} exceeds cap {cap}")
    if method is None:
        method = "rref" if A.is_elementary() and A.rank else "dfs"
    if method == "rref":
        out = _lagrangians_rref(A)
        out.sort(key=lambda L: L.key)
        return out
    return _lagrangians_dfs(A, cap)


def orthogonal_complement(A, L, cap=None):
    cap = config.oracle_cap(config.ORTH_CAP) if cap is None else cap
    return frozenset(v for v in _doubled_elements(A, cap)
                     if all(_bilinear(A, v, g) == 0 for g in L.generators))
