"""
The split orthogonal group O(A + A*).

An element is a 2x2 block map ``[[alpha, beta], [gamma, delta]]`` acting on
column vectors ``(a, f)`` with ``a`` in ``A`` and ``f`` in ``A*``.  It must
preserve the hyperbolic form ``Q(a + f) = <f, a>``.  Polarizing that
condition gives three identities, which is how membership is decided for
large ``A``:

    dual(alpha) o gamma   alternating
    dual(beta)  o delta   alternating
    dual(beta) o gamma + dual(delta) o alpha == Id
"""

import json
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import ConsistencyError, DomainError, NormalFormError
from .finab import (FinAbGroup, GroupHom, _invert_endo, compose, dual_hom,
                    enumerate_elements, is_alternating, is_isomorphism, pairing)


@dataclass(frozen=True, eq=False)
class OrthElem:
    A: FinAbGroup
    alpha: GroupHom
    beta: GroupHom
    gamma: GroupHom
    delta: GroupHom

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            h = getattr(self, name)
            if h.source != self.A or h.target != self.A:
                raise DomainError(f"block {name} does not act on {self.A}")

    @classmethod
    def from_blocks(cls, A, alpha, beta, gamma, delta):
        """Build from nested lists (or GroupHoms)."""
        def hom(x):
            return x if isinstance(x, GroupHom) else GroupHom(A, A, x)
        return cls(A, hom(alpha), hom(beta), hom(gamma), hom(delta))

    @classmethod
    def from_matrix(cls, A, M):
        M = np.asarray(M, dtype=np.int64)
        r = A.rank
        if M.shape != (2 * r, 2 * r):
            raise DomainError(f"expected a {2 * r}x{2 * r} matrix")
        return cls.from_blocks(A, M[:r, :r], M[:r, r:], M[r:, :r], M[r:, r:])

    @classmethod
    def identity(cls, A):
        one, zero = GroupHom.identity(A), GroupHom.zero(A)
        return cls(A, one, zero, zero, one)

    def matrix(self):
        return np.block([[self.alpha.entries, self.beta.entries],
                         [self.gamma.entries, self.delta.entries]])

    @property
    def key(self):
        return self.alpha.key + self.beta.key + self.gamma.key + self.delta.key

    def __eq__(self, other):
        return isinstance(other, OrthElem) and self.A == other.A and self.key == other.key

    def __hash__(self):
        return hash((self.A, self.key))

    def __repr__(self):
        return f"OrthElem({self.A}, {self.matrix().tolist()})"

    def __call__(self, v):
        r = self.A.rank
        a, f = tuple(v[:r]), tuple(v[r:])
        top = self.A.add(self.alpha(a), self.beta(f))
        bottom = self.A.add(self.gamma(a), self.delta(f))
        return top + bottom

    def __matmul__(self, other):
        return orth_mul(self, other)

    def to_json(self):
        return json.dumps({
            "group": self.A.descriptor(),
            "alpha": self.alpha.tolist(), "beta": self.beta.tolist(),
            "gamma": self.gamma.tolist(), "delta": self.delta.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        A = FinAbGroup.parse(d["group"])
        return cls.from_blocks(A, d["alpha"], d["beta"], d["gamma"], d["delta"])


def quadratic_form(A, v):
    """``Q(a + f) = <f, a>``."""
    r = A.rank
    return pairing(A, v[r:], v[:r])


def _is_invertible(M):
    return _invert_endo(M.matrix(), M.A.orders + M.A.orders) is not None


def orth_identities(M):
    """The three polarized identities, as a tuple of booleans."""
    ident = GroupHom.identity(M.A)
    b_star = dual_hom(M.beta)
    return (
        is_alternating(compose(dual_hom(M.alpha), M.gamma)),
        is_alternating(compose(b_star, M.delta)),
        compose(b_star, M.gamma) + compose(dual_hom(M.delta), M.alpha) == ident,
    )


def orth_membership_exhaustive(M, cap=None):
    A = M.A
    cap = config.oracle_cap(config.ORTH_CAP) if cap is None else cap
    for a in enumerate_elements(A, cap):
        for f in enumerate_elements(A, cap):
            v = a + f
            if quadratic_form(A, M(v)) != quadratic_form(A, v):
                return False
    return _is_invertible(M)


def orth_membership(M, exhaustive=None):
    """Whether ``M`` lies in O(A + A*).

    Small groups (``|A|^2 <= ORTH_CAP``) are checked on every vector as well
    as through the identities, and the two answers must agree.
    """
    algebraic = all(orth_identities(M)) and _is_invertible(M)
    if exhaustive is None:
        exhaustive = M.A.order ** 2 <= config.ORTH_CAP
    if exhaustive:
        brute = orth_membership_exhaustive(M, cap=max(config.ORTH_CAP, M.A.order))
        if brute != algebraic:
            raise ConsistencyError(f"membership routes disagree on {M!r}")
    return algebraic


def delta_zero_criterion(M):
    """For ``delta == 0``: ``dual(gamma) o alpha`` alternating and ``beta == dual(gamma)^-1``."""
    if not M.delta.is_zero():
        raise DomainError("criterion only applies when delta = 0")
    g_star = dual_hom(M.gamma)
    if not is_isomorphism(g_star):
        return False
    return is_alternating(compose(g_star, M.alpha)) and M.beta == g_star.inverse()


def orth_mul(M, N):
    if M.A != N.A:
        raise DomainError("elements act on different groups")
    return OrthElem(
        M.A,
        M.alpha @ N.alpha + M.beta @ N.gamma,
        M.alpha @ N.beta + M.beta @ N.delta,
        M.gamma @ N.alpha + M.delta @ N.gamma,
        M.gamma @ N.beta + M.delta @ N.delta,
    )


def orth_pow(M, k):
    if k < 0:
        return orth_pow(orth_inverse(M), -k)
    result = OrthElem.identity(M.A)
    base = M
    while k:
        if k & 1:
            result = orth_mul(result, base)
        base = orth_mul(base, base)
        k >>= 1
    return result


def orth_inverse(M):
    """``[[delta*, beta*], [gamma*, alpha*]]``, the adjoint for the hyperbolic form."""
    inv = OrthElem(M.A, dual_hom(M.delta), dual_hom(M.beta),
                   dual_hom(M.gamma), dual_hom(M.alpha))
    if orth_mul(M, inv) != OrthElem.identity(M.A):
        raise DomainError("element is not in O(A + A*)")
    return inv


@dataclass(frozen=True)
class EquivMove:
    """``kind`` is ``"basis_change"`` (hom psi: A -> A) or ``"lower_unipotent"`` (phi: A -> A*)."""

    kind: str
    hom: GroupHom

    def element(self):
        A = self.hom.source
        one, zero = GroupHom.identity(A), GroupHom.zero(A)
        if self.kind == "lower_unipotent":
            return OrthElem(A, one, zero, self.hom, one)
        if self.kind == "basis_change":
            psi = self.hom
            return OrthElem(A, psi, zero, zero, dual_hom(psi.inverse()))
        raise DomainError(f"unknown move kind {self.kind!r}")

    def conjugate(self, M):
        """``C M C^-1``."""
        C = self.element()
        return orth_mul(orth_mul(C, M), orth_inverse(C))


def normalize_delta_zero(M, check_unique=False):
    """Conjugate by ``[[1, 0], [phi, 1]]`` with ``phi = -delta beta^-1`` so that delta = 0.

    Returns ``(M', move)``.  With ``check_unique`` the uniqueness of ``phi``
    among all alternating maps is verified by brute force (tiny ``A`` only).
    """
    A = M.A
    if not is_isomorphism(M.beta):
        raise NormalFormError("beta is not an isomorphism")
    phi = -(M.delta @ M.beta.inverse())
    if not is_alternating(phi):
        raise DomainError("phi is not alternating; M is not orthogonal")
    move = EquivMove("lower_unipotent", phi)
    out = move.conjugate(M)
    if not out.delta.is_zero() or out.beta != M.beta or out.alpha != M.alpha - M.beta @ phi:
        raise ConsistencyError("delta-zero normalization failed")
    if check_unique:
        if unique_delta_zero_witnesses(M) != [phi]:
            raise ConsistencyError("phi reaching delta = 0 is not unique")
    return out, move


def unique_delta_zero_witnesses(M):
    """Every alternating ``phi`` whose move gives ``delta = 0``, by scanning all of Hom(A, A*).

    The lower-right block of the conjugate is ``phi beta + delta``; the scan
    evaluates it for every ``phi`` at once and confirms survivors by conjugating.
    """
    from .oracle import _hom_batches
    A = M.A
    orders = np.array(A.orders, dtype=np.int64)[:, None]
    hits = []
    for batch in _hom_batches(A, A):
        lower = (batch @ M.beta.entries + M.delta.entries) % orders
        for P in batch[~lower.reshape(len(batch), -1).any(axis=1)]:
            phi = GroupHom(A, A, P, check=False)
            if is_alternating(phi) and EquivMove("lower_unipotent", phi).conjugate(M).delta.is_zero():
                hits.append(phi)
    return hits


def act_basis_change(psi, pair):
    """``(alpha, gamma) -> (psi^-1 alpha psi, psi* gamma psi)``."""
    alpha, gamma = pair
    if not is_isomorphism(psi):
        raise DomainError("psi must be invertible")
    return psi.inverse() @ alpha @ psi, dual_hom(psi) @ gamma @ psi


def x_of(gamma):
    """``gamma^-1 o gamma*``.

    When ``gamma* gamma^-1 gamma*`` is alternating the result must satisfy
    ``x^3 = -1``; that is checked on the way out.
    """
    if gamma.source != gamma.target:
        raise DomainError("gamma must map A -> A*")
    if not is_isomorphism(gamma):
        raise DomainError("gamma is singular")
    g_star = dual_hom(gamma)
    x = gamma.inverse() @ g_star
    if is_alternating(g_star @ gamma.inverse() @ g_star):
        if x ** 3 != -GroupHom.identity(gamma.source):
            raise ConsistencyError("x^3 != -1 although gamma* gamma^-1 gamma* is alternating")
    return x


def normal_form_matrix(alpha, gamma):
    """``[[alpha, dual(gamma)^-1], [gamma, 0]]``."""
    A = alpha.source
    return OrthElem(A, alpha, dual_hom(gamma).inverse(), gamma, GroupHom.zero(A))
