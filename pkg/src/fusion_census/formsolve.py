"""
Canonical forms for the maps ``gamma: A -> A*`` that classify
Z/3-graded extensions of ``Vec_A``.

On a block ``C + C`` with ``C = Z/q^n`` there are two normal forms:

* skew:     ``[[0, 1], [-1, 0]]``
* special:  ``[[1, a - 1], [1, 1]]``, for which ``x = gamma^-1 gamma*``
  equals ``[[a, 1], [-1, 0]]`` and so satisfies ``x^2 = a x - 1``.

:func:`decompose` splits a valid ``gamma`` into mutually orthogonal blocks
of these two kinds and returns the change of basis that realizes it.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError, SolveError, UnsupportedError
from .finab import (FinAbGroup, GroupHom, dual_hom, enumerate_elements,
                    is_alternating, is_isomorphism, pairing)
from .orthogroup import x_of


@dataclass(frozen=True, order=True)
class FormBlockTag:
    """``kind`` is ``"skew"`` or ``"special"``; ``a`` is only set for special blocks."""

    kind: str
    a: int = 0

    def __str__(self):
        return "skew" if self.kind == "skew" else f"special({self.a})"


SKEW = FormBlockTag("skew")


def Special(a):
    return FormBlockTag("special", a)


def _cyclic_square(q, n):
    return FinAbGroup(((q, n, 2),))


def canonical_skew(q, n=1):
    """The standard symplectic form on ``(Z/q^n)^2``."""
    return GroupHom(_cyclic_square(q, n), _cyclic_square(q, n), [[0, 1], [-1, 0]])


def special_form(q, n=1, a=1):
    return GroupHom(_cyclic_square(q, n), _cyclic_square(q, n), [[1, a - 1], [1, 1]])


def _check_special_hypothesis(a, q):
    if (a * a - 4) % q == 0:
        raise DomainError(f"{q} divides a^2 - 4 = {a * a - 4}")


def satisfies_special_relation(gamma, a):
    """``gamma`` invertible and ``x^2 = a x - 1`` for ``x = gamma^-1 gamma*``."""
    if not is_isomorphism(gamma):
        return False
    x = gamma.inverse() @ dual_hom(gamma)
    return x @ x == a * x - GroupHom.identity(gamma.source)


def solve_special_gamma(a, q, n=1):
    """The representative of the unique class with ``(gamma^-1 gamma*)^2 = a gamma^-1 gamma* - 1``."""
    _check_special_hypothesis(a, q)
    gamma = special_form(q, n, a)
    if not satisfies_special_relation(gamma, a):
        raise ConsistencyError("special normal form fails its defining relation")
    return gamma


def hensel_lift_quadratic(a, target, q, n):
    """Solve ``y^2 + a y t + t^2 = target (mod q^n)``.

    A seed is found by search modulo ``q`` (modulo 8 when ``q = 2``) among
    pairs whose ``y``-derivative ``2y + a t`` is a unit; ``t`` is then frozen
    and ``y`` refined by Newton steps, each doubling the precision.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    modulus = q**n
    base_exp = min(3, n) if q == 2 else 1
    base = q**base_exp

    def f(y, t):
        return y * y + a * y * t + t * t - target

    seed = next(((y, t) for t in range(base) for y in range(base)
                 if f(y, t) % base == 0 and (2 * y + a * t) % q), None)
    if seed is None:
        raise SolveError(f"no solution with unit derivative modulo {base}")
    y, t = seed
    exp = base_exp
    while exp < n:
        exp = min(2 * exp, n)
        mod = q**exp
        y = (y - f(y, t) * pow(2 * y + a * t, -1, mod)) % mod
    y, t = y % modulus, t % modulus
    if f(y, t) % modulus:
        raise ConsistencyError("Hensel lift produced a non-solution")
    return y, t


# 2x2 block normalization -----------------------------------------------------------

def _mat(q, n, rows):
    return GroupHom(_cyclic_square(q, n), _cyclic_square(q, n), rows)


def normalize_skew_block(gamma):
    """``psi`` with ``psi* gamma psi = canonical_skew`` for an alternating non-degenerate 2x2 block."""
    (q, n, _), = gamma.source.factors
    if not is_alternating(gamma) or not is_isomorphism(gamma):
        raise DomainError("block is not a non-degenerate alternating form")
    s = pow(int(gamma.entries[0, 1]), -1, q**n)
    psi = _mat(q, n, [[1, 0], [0, s]])
    if dual_hom(psi) @ gamma @ psi != canonical_skew(q, n):
        raise ConsistencyError("skew normalization failed")
    return psi


def normalize_special_block(gamma, a=1):
    """``psi`` with ``psi* gamma psi = special_form(a)``.

    First conjugate ``x`` to ``[[a, 1], [-1, 0]]`` with a matrix
    ``T = [[(a-d)y + b, y], [cy + d, 1]]`` of unit determinant, which leaves
    ``gamma`` as ``d' [[1, a-1], [1, 1]]``; then rescale by
    ``S = [[a y + t, y], [-y, t]]`` where ``y^2 + a y t + t^2 = 1/d'``.
    """
    (q, n, _), = gamma.source.factors
    mod = q**n
    _check_special_hypothesis(a, q)
    if not satisfies_special_relation(gamma, a):
        raise DomainError("block does not satisfy x^2 = a x - 1")
    x = x_of(gamma).entries
    b, c, d = int(x[0, 1]), int(x[1, 0]), int(x[1, 1])
    y = next((y for y in range(q) if (-c * y * y + (a - 2 * d) * y + b) % q), None)
    if y is None:
        raise ConsistencyError("no conjugating matrix with unit determinant")
    T = _mat(q, n, [[(a - d) * y + b, y], [c * y + d, 1]])
    g1 = dual_hom(T) @ gamma @ T
    scale = int(g1.entries[0, 0])
    if g1 != scale * special_form(q, n, a):
        raise ConsistencyError("x-conjugation did not reach the special shape")
    yy, tt = hensel_lift_quadratic(a, pow(scale, -1, mod), q, n)
    S = _mat(q, n, [[a * yy + tt, yy], [-yy, tt]])
    psi = T @ S
    if dual_hom(psi) @ gamma @ psi != special_form(q, n, a) or not is_isomorphism(psi):
        raise ConsistencyError("special normalization failed")
    return psi


# decomposition -------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    prime: int
    exponent: int
    tag: FormBlockTag
    basis: tuple   # two elements of A spanning C + C

    @property
    def sort_key(self):
        return (self.prime, self.exponent, self.tag)


@dataclass
class Decomposition:
    A: FinAbGroup
    gamma: GroupHom
    blocks: list
    change_of_basis: GroupHom      # canonical coordinates -> A
    canonical: GroupHom = field(default=None)

    @property
    def psi(self):
        """The inverse change of basis: ``dual(psi) canonical psi == gamma``."""
        return self.change_of_basis.inverse()

    def reassemble(self):
        psi = self.psi
        return dual_hom(psi) @ self.canonical @ psi

    def skew_counts(self):
        counts = {}
        for blk in self.blocks:
            key = (blk.prime, blk.exponent)
            counts.setdefault(key, 0)
            counts[key] += blk.tag == SKEW
        return counts

    def to_json(self):
        return json.dumps({
            "blocks": [{"prime": b.prime, "exponent": b.exponent, "tag": str(b.tag)}
                       for b in self.blocks],
            "basis": [list(v) for b in self.blocks for v in b.basis],
        })


def canonical_gamma(A, skew_counts):
    """Block-diagonal normal form: per ``(q, n)`` the first ``k`` blocks skew, the rest special."""
    E = np.zeros((A.rank, A.rank), dtype=np.int64)
    offset = 0
    for q, n, a in A.factors:
        if a % 2:
            raise DomainError(f"multiplicity of Z/{q**n} is odd")
        k = skew_counts.get((q, n), 0)
        if not 0 <= k <= a // 2:
            raise DomainError(f"cannot have {k} skew blocks in (Z/{q**n})^{a}")
        for blk in range(a // 2):
            i = offset + 2 * blk
            E[i:i + 2, i:i + 2] = [[0, 1], [-1, 0]] if blk < k else [[1, 0], [1, 1]]
        offset += a
    return GroupHom(A, A, E)


def _pair_value(A, gamma, u, v):
    """``<gamma(u), v>`` in ``Z/exponent(A)``."""
    return pairing(A, gamma(u), v)


def _block_gram(A, gamma, basis, q, n):
    """2x2 matrix over ``Z/q^n``: entry ``[i][j] = <gamma(b_j), b_i>``."""
    L = A.exponent
    rows = []
    for bi in basis:
        row = []
        for bj in basis:
            val = _pair_value(A, gamma, bj, bi)
            scaled = val * q**n
            if scaled % L:
                raise ConsistencyError("block value does not live in Z/q^n")
            row.append(scaled // L)
        rows.append(row)
    return _mat(q, n, rows)


def _max_exponent(A, elems, q):
    n = 0
    for v in elems:
        o = A.element_order(v)
        k = 0
        while o > 1:
            o //= q
            k += 1
        n = max(n, k)
    return n


def _top_value(A, value, q, n):
    """Whether ``q^(n-1) * value`` is non-zero in ``Q/Z`` (value given in ``Z/L``)."""
    return (q ** (n - 1) * value) % A.exponent != 0


def _peel(A, gamma, x, elems, q, special):
    """Split ``elems`` (a subgroup, as a set) into orthogonal rank-2 blocks."""
    blocks = []
    current = set(elems)
    while len(current) > 1:
        n = _max_exponent(A, current, q)
        divisible = {A.scale(q, v) for v in current}
        ordered = sorted(current - divisible)
        if special:
            g = next((v for v in ordered
                      if _top_value(A, _pair_value(A, gamma, v, v), q, n)), None)
            if g is None:
                raise ConsistencyError("no generator with q^(n-1) gamma(g, g) != 0")
            basis = (g, x(g))
        else:
            g = next(v for v in ordered if A.element_order(v) == q**n)
            partner = next((v for v in sorted(current)
                            if _top_value(A, _pair_value(A, gamma, g, v), q, n)), None)
            if partner is None:
                raise ConsistencyError("gamma is degenerate on the skew part")
            basis = (g, partner)
        rest = {v for v in current
                if all(_pair_value(A, gamma, b, v) == 0 and _pair_value(A, gamma, v, b) == 0
                       for b in basis)}
        if len(rest) * q ** (2 * n) != len(current):
            raise ConsistencyError("peeled block is not a direct summand")
        blocks.append((n, basis))
        current = rest
    return blocks


def _check_gamma(A, gamma):
    from .oracle import valid_gamma_predicate
    if gamma.source != A or gamma.target != A:
        raise DomainError("gamma must be a map A -> A*")
    if 3 in A.primes:
        raise UnsupportedError("3-primary components are not supported")
    if not valid_gamma_predicate(gamma):
        raise DomainError("gamma must be invertible with gamma* gamma^-1 gamma* alternating")


def decompose(A, gamma):
    """Orthogonal block decomposition of a valid ``gamma`` on ``A`` (``3`` not dividing ``|A|``).

    ``A`` may have several primes; each primary part is handled separately.
    The kernel of ``x + 1`` carries the skew blocks and the image of
    ``x + 1`` the special ones.  Generators are picked lexicographically
    so the output is deterministic.
    """
    _check_gamma(A, gamma)
    x = x_of(gamma)
    one = GroupHom.identity(A)
    x_plus = x + one
    elems = list(enumerate_elements(A))
    blocks = []
    for q in A.primes:
        idx = A.coords_of_prime(q)
        part = [v for v in elems if all(v[i] == 0 for i in range(A.rank) if i not in idx)]
        kernel = [v for v in part if x_plus(v) == A.zero()]
        image = sorted({x_plus(v) for v in part})
        if len(kernel) * len(image) != len(part):
            raise ConsistencyError("A is not Ker(x + 1) + Im(x + 1)")
        for special, sub in ((False, kernel), (True, image)):
            for n, basis in _peel(A, gamma, x, sub, q, special):
                gram = _block_gram(A, gamma, basis, q, n)
                if special:
                    tag, psi = Special(1), normalize_special_block(gram, 1)
                else:
                    tag, psi = SKEW, normalize_skew_block(gram)
                P = psi.entries
                new = tuple(
                    A.add(A.scale(int(P[0, j]), basis[0]), A.scale(int(P[1, j]), basis[1]))
                    for j in range(2))
                blocks.append(Block(q, n, tag, new))
    blocks.sort(key=lambda b: b.sort_key)

    columns = [None] * A.rank
    offset = 0
    counts = {}
    for q, n, a in A.factors:
        mine = [b for b in blocks if (b.prime, b.exponent) == (q, n)]
        if 2 * len(mine) != a:
            raise ConsistencyError(f"found {len(mine)} blocks for (Z/{q**n})^{a}")
        for k, b in enumerate(mine):
            columns[offset + 2 * k] = b.basis[0]
            columns[offset + 2 * k + 1] = b.basis[1]
        counts[(q, n)] = sum(b.tag == SKEW for b in mine)
        offset += a
    P = GroupHom(A, A, np.array(columns, dtype=np.int64).reshape(A.rank, A.rank).T)
    canonical = canonical_gamma(A, counts)
    if not is_isomorphism(P) or dual_hom(P) @ gamma @ P != canonical:
        raise ConsistencyError("change of basis does not reach the canonical form")
    return Decomposition(A, gamma, blocks, P, canonical)


# classes --------------------------------------------------------------------

@dataclass(frozen=True)
class GammaClass:
    """One equivalence class of valid ``gamma``: number of skew blocks per ``(q, n)``."""

    A: FinAbGroup
    skew_counts: tuple    # ((q, n, k), ...)
    gamma: GroupHom

    def describe(self):
        parts = [f"Z/{q**n}: {k} skew" for q, n, k in self.skew_counts]
        return ", ".join(parts) if parts else "trivial"


def enumerate_gamma_classes(A):
    """All classes of ``gamma`` with ``gamma* gamma^-1 gamma*`` alternating, up to ``psi``.

    Empty when some multiplicity is odd.  Otherwise one class for each way
    of choosing ``k`` skew blocks in ``[0, a/2]`` per factor.
    """
    if A.order % 3 == 0:
        raise DomainError("|A| must not be divisible by 3")
    if any(a % 2 for a in A.multiplicities()):
        return []
    keys = [(q, n) for q, n, _ in A.factors]
    out = []
    for ks in itertools.product(*(range(a // 2 + 1) for _, _, a in A.factors)):
        counts = dict(zip(keys, ks))
        out.append(GammaClass(A, tuple((q, n, k) for (q, n), k in counts.items()),
                              canonical_gamma(A, counts)))
    return out


def classify_gamma(A, gamma):
    """The :class:`GammaClass` containing ``gamma``."""
    counts = decompose(A, gamma).skew_counts()
    return GammaClass(A, tuple((q, n, counts[(q, n)]) for q, n, _ in A.factors),
                      canonical_gamma(A, counts))
