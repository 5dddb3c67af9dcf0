"""
Censuses of integral fusion categories of dimension ``p q^2`` and of
categorifications of ``R_{3,A}``.

Root pairs ``{zeta_1, zeta_2}`` are counted abstractly as unordered pairs
of exponents in ``Z/p``; the finite-field model ``F_{q^2}`` is only needed
when matrices are materialized for cross-checks.
"""

import itertools
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
import sympy

from . import config, oracle
from .errors import DomainError, ResourceError, SingularityError
from .finab import FinAbGroup, GroupHom, dual_hom, rank_mod_prime
from .formsolve import enumerate_gamma_classes
from .orthogroup import OrthElem, orth_membership, orth_pow


# F_{q^2} --------------------------------------------------------------------

class FqSquared:
    """``F_q[t] / (t^2 - s t - c)``; elements are pairs ``(x0, x1)`` for ``x0 + x1 t``."""

    def __init__(self, q):
        if not sympy.isprime(q):
            raise DomainError(f"{q} is not prime")
        self.q = q
        self.s, self.c = self._choose_modulus(q)

    @staticmethod
    def _choose_modulus(q):
        for c in range(q):
            for s in (0, 1):
                if all((t * t - s * t - c) % q for t in range(q)):
                    return s, c
        raise DomainError(f"no irreducible quadratic found over F_{q}")

    def __repr__(self):
        poly = "t^2 - t" if self.s else "t^2"
        return f"F_{self.q}^2[{poly} - {self.c}]"

    def __eq__(self, other):
        return isinstance(other, FqSquared) and self.q == other.q

    def __hash__(self):
        return hash(("Fq2", self.q))

    # arithmetic on pairs
    def elem(self, x0, x1=0):
        return (x0 % self.q, x1 % self.q)

    @property
    def zero(self):
        return (0, 0)

    @property
    def one(self):
        return (1, 0)

    def add(self, x, y):
        return self.elem(x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return self.elem(x[0] - y[0], x[1] - y[1])

    def neg(self, x):
        return self.elem(-x[0], -x[1])

    def mul(self, x, y):
        a0, a1 = x
        b0, b1 = y
        top = a1 * b1
        return self.elem(a0 * b0 + self.c * top, a0 * b1 + a1 * b0 + self.s * top)

    def pow(self, x, k):
        if k < 0:
            return self.pow(self.inv(x), -k)
        out, base = self.one, x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def inv(self, x):
        if x == self.zero:
            raise SingularityError("division by zero in F_q^2")
        return self.pow(x, self.q * self.q - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def frobenius(self, x):
        return self.pow(x, self.q)

    def in_base(self, x):
        """Whether ``x`` lies in ``F_q`` (the Frobenius-fixed subfield)."""
        return self.frobenius(x) == x

    def to_base(self, x):
        if not self.in_base(x):
            raise DomainError(f"{x} is not in F_{self.q}")
        return x[0]

    def elements(self):
        return [(x0, x1) for x1 in range(self.q) for x0 in range(self.q)]

    def format(self, x):
        x0, x1 = x
        if not x1:
            return str(x0)
        return f"{x0}+{x1}t" if x0 else f"{x1}t"


def primitive_pth_root(p, F):
    """The first element of order ``p`` in enumeration order, or ``None``."""
    order = F.q * F.q - 1
    if order % p:
        return None
    for g in F.elements():
        if g == F.zero:
            continue
        z = F.pow(g, order // p)
        if z != F.one:
            return z
    return None


def pth_roots_in_Fq2(p, q, F=None):
    """All ``z`` in ``F_{q^2}`` with ``z^p = 1``, listed as ``zeta^0, zeta^1, ...``."""
    if p == q:
        raise DomainError("p must differ from q")
    F = F or FqSquared(q)
    zeta = primitive_pth_root(p, F)
    if zeta is None:
        return [F.one]
    return [F.pow(zeta, k) for k in range(p)]


# root pairs ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class RootPair:
    """Unordered pair ``{zeta^e1, zeta^e2}`` with ``e1 <= e2`` exponents mod ``p``."""

    p: int
    e1: int
    e2: int

    def __post_init__(self):
        e1, e2 = sorted((self.e1 % self.p, self.e2 % self.p))
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)

    @property
    def exponents(self):
        return (self.e1, self.e2)

    @property
    def distinct(self):
        return self.e1 != self.e2

    @property
    def pointed(self):
        """``zeta_1 zeta_2 = 1``."""
        return (self.e1 + self.e2) % self.p == 0

    @property
    def admissible(self):
        return self.distinct and not self.pointed

    def lambda_in_base(self, q):
        """``zeta_1 zeta_2`` lies in ``F_q`` iff ``p | (e1 + e2)(q - 1)``."""
        return ((self.e1 + self.e2) * (q - 1)) % self.p == 0

    def act(self, g):
        return RootPair(self.p, g * self.e1, g * self.e2)

    def inverse(self):
        return self.act(-1)

    def zetas(self, F):
        z = primitive_pth_root(self.p, F)
        if z is None:
            raise DomainError(f"F_{F.q}^2 has no primitive {self.p}-th root of unity")
        return F.pow(z, self.e1), F.pow(z, self.e2)

    def a_lambda(self, F):
        z1, z2 = self.zetas(F)
        return F.add(z1, z2), F.mul(z1, z2)

    def __str__(self):
        return f"{{z^{self.e1}, z^{self.e2}}}"


def all_pairs(p):
    return [RootPair(p, e1, e2) for e1, e2 in itertools.combinations(range(p), 2)]


def admissible_pairs(p):
    return [r for r in all_pairs(p) if r.admissible]


# the census matrix -----------------------------------------------------------

def build_M(p, q, pair, F=None):
    """The normal-form element of ``O(A + A*)``, ``A = (Z/q)^2``, attached to a root pair.

    ``M = [[alpha, (gamma*)^-1], [gamma, 0]]`` with
    ``gamma = [[-1, -(l + 1/l + 1)], [1, -1]]`` and
    ``alpha = a/(l + 1) [[1, -1], [1, (l^2 + l + 1)/l]]``, where
    ``a = zeta_1 + zeta_2`` and ``l = zeta_1 zeta_2``.  This ``alpha`` is the
    unique map with ``gamma* alpha`` alternating and trace ``a + a/l``.
    Entries are computed in ``F_{q^2}`` and must be Frobenius-fixed.
    """
    if p == q or p % 2 == 0:
        raise DomainError("p must be an odd prime different from q")
    if (q * q - 1) % p:
        raise DomainError(f"{p} does not divide q^2 - 1 = {q * q - 1}")
    if not pair.distinct:
        raise DomainError("the two roots must be distinct")
    F = F or FqSquared(q)
    a, lam = pair.a_lambda(F)
    one, zero = F.one, F.zero
    lam1 = F.add(lam, one)
    if lam1 == zero:
        raise SingularityError(f"lambda = -1 for {pair} over F_{q}")
    if pair.pointed:
        raise DomainError(f"{pair} lies in the pointed stratum")
    lam1_sq = F.mul(lam1, lam1)
    quad = F.add(F.add(F.mul(lam, lam), lam), one)      # l^2 + l + 1
    k = F.div(a, lam1)
    m_l = F.neg(F.div(lam, lam1_sq))
    rows = [
        [k, F.neg(k), m_l, m_l],
        [k, F.div(F.mul(k, quad), lam), F.div(quad, lam1_sq), m_l],
        [F.neg(one), F.neg(F.div(quad, lam)), zero, zero],
        [one, F.neg(one), zero, zero],
    ]
    A = FinAbGroup.from_cyclic_orders([q, q])
    return OrthElem.from_matrix(A, [[F.to_base(x) for x in row] for row in rows])


def case2_lagrangian(q, lam):
    """``<(1, -lambda, 0, 0), (0, 0, lambda, 1)>`` for ``lambda`` in ``F_q``."""
    v = (1, (-lam) % q, 0, 0)
    w = (0, 0, lam % q, 1)
    orders = (q, q, q, q)
    return oracle.Lagrangian(oracle._span(orders, (v, w)), (v, w))


@dataclass(frozen=True)
class GTVerdict:
    group_theoretical: bool
    certificate: object = None     # an invariant Lagrangian, when one exists
    searched: int = 0

    def __bool__(self):
        return self.group_theoretical


def is_group_theoretical(M, lagrangians=None, cap=None):
    """Search every Lagrangian of ``A + A*`` for one with ``M L = L``."""
    if lagrangians is None:
        lagrangians = oracle.enumerate_lagrangians(M.A, cap=cap)
    for L in lagrangians:
        if L.is_invariant(M):
            return GTVerdict(True, L, len(lagrangians))
    return GTVerdict(False, None, len(lagrangians))


@dataclass(frozen=True)
class CaseVerdict:
    case: str               # dim0, dim1 or dim2: rank of the projection of L to A
    invariant: bool
    coefficients: tuple = ()   # images of the generators in terms of the generators


def _solve_in_span(q, gens, target):
    for cs in itertools.product(range(q), repeat=len(gens)):
        combo = tuple(sum(c * g[i] for c, g in zip(cs, gens)) % q for i in range(len(target)))
        if combo == tuple(target):
            return cs
    return None


def lagrangian_case_analysis(M, L):
    """Classify ``L`` by the dimension of its projection to ``A``, and test invariance."""
    A = M.A
    if not A.is_elementary():
        raise DomainError("case analysis is for elementary abelian A")
    q, r = A.orders[0], A.rank
    proj = np.array([g[:r] for g in L.generators], dtype=np.int64).reshape(-1, r)
    dim = rank_mod_prime(proj, q) if len(L.generators) else 0
    invariant = L.is_invariant(M)
    coeffs = ()
    if invariant:
        coeffs = tuple(_solve_in_span(q, L.generators, M(g)) for g in L.generators)
    return CaseVerdict(f"dim{dim}", invariant, coeffs)


# counting --------------------------------------------------------------------

def xi_action(p, g):
    """``g`` in ``Aut(Z/p)`` acts on ``H^3(Z/p, C*) = Z/p`` by multiplication by ``g^-2``."""
    k = pow(g, -2, p)
    return lambda xi: (k * xi) % p


def xi_orbits(p):
    return oracle.orbit_count(range(p), [xi_action(p, sympy.primitive_root(p))])


@dataclass(frozen=True)
class ExtensionDatum:
    xi: int
    payload: object
    group_theoretical: bool = False
    pointed: bool = False

    def to_dict(self):
        payload = self.payload
        if isinstance(payload, RootPair):
            payload = {"pair": list(payload.exponents)}
        return {"xi": self.xi, "payload": payload,
                "group_theoretical": self.group_theoretical, "pointed": self.pointed}


@dataclass
class CensusReport:
    kind: str
    inputs: dict
    branch: str
    mode: str
    orbits: list
    counts: dict
    wall_time: float = 0.0
    oracle_checked: bool = False
    oracle: dict = field(default_factory=dict)

    @property
    def count(self):
        return self.counts["count"]

    def to_dict(self):
        return {
            "kind": self.kind,
            "inputs": self.inputs,
            "branch": self.branch,
            "mode": self.mode,
            "counts": self.counts,
            "orbits": [o.to_dict() for o in self.orbits],
            "oracle_checked": self.oracle_checked,
            "oracle": self.oracle,
            "wall_time": round(self.wall_time, 6),
        }

    def to_json(self, timing=True):
        d = self.to_dict()
        if not timing:
            d.pop("wall_time")
        return json.dumps(d, indent=2)

    TSV_COLUMNS = ("p", "q_or_A", "branch", "count_grading", "count_general", "oracle_checked")

    def to_tsv(self):
        if self.kind == "pq2":
            p, target = self.inputs["p"], self.inputs["q"]
        else:
            p, target = 3, self.inputs["group"]
        row = (p, target, self.branch, self.counts["count_grading"],
               self.counts["count_general"], str(self.oracle_checked).lower())
        return "\t".join(self.TSV_COLUMNS) + "\n" + "\t".join(map(str, row)) + "\n"


def pair_classes(p, q=None):
    """Non-group-theoretical pairs up to ``{z1, z2} ~ {1/z1, 1/z2}``."""
    pairs = [r for r in admissible_pairs(p) if q is None or not r.lambda_in_base(q)]
    return oracle.orbit_count(pairs, [RootPair.inverse])


def _pq2_branch(p, q):
    if p == 2:
        return "tambara_yamagami"
    if (q + 1) % p == 0:
        return "root_pair_family"
    return "group_theoretical_only"


def census_pq2(p, q, mode="general", oracle_check=False, cap=None):
    """Non-group-theoretical integral fusion categories of dimension ``p q^2``.

    ``mode`` is ``"grading"`` (equivalences preserving each component) or
    ``"general"`` (also relabelling components by ``Aut(Z/p)``).
    """
    start = time.perf_counter()
    for n in (p, q):
        if not sympy.isprime(n):
            raise DomainError(f"{n} is not prime")
    if p == q:
        raise DomainError("p and q must be distinct")
    if mode not in ("grading", "general"):
        raise DomainError(f"unknown mode {mode!r}")
    branch = _pq2_branch(p, q)
    inputs = {"p": p, "q": q}
    oracle_info = {}

    if branch == "tambara_yamagami":
        orbits = [ExtensionDatum(0, {"form": "anisotropic", "tau": s}) for s in ("+", "-")]
        counts = {"count": 2, "count_grading": 2, "count_general": 2, "pair_classes": 0}
        if oracle_check:
            found = 2 * anisotropic_form_classes(q).count
            oracle_info = {"ty_classes": found, "agree": found == 2}
    elif branch == "group_theoretical_only":
        orbits = []
        counts = {"count": 0, "count_grading": 0, "count_general": 0, "pair_classes": 0}
        if oracle_check and (q * q - 1) % p == 0:
            oracle_info = _root_pair_oracle(p, q, cap)
            oracle_info["agree"] = oracle_info["non_gt_general"] == 0
        elif oracle_check:
            roots = len(pth_roots_in_Fq2(p, q))
            oracle_info = {"pth_roots": roots, "agree": roots == 1}
    else:
        classes = pair_classes(p, q)
        g = sympy.primitive_root(p)
        universe = [(xi, r) for xi in range(p) for r in classes.universe]
        grading = oracle.orbit_count(universe, [lambda u: (u[0], u[1].inverse())])
        general = oracle.orbit_count(
            universe, [lambda u: (xi_action(p, g)(u[0]), u[1].act(g)),
                       lambda u: (u[0], u[1].inverse())])
        chosen = grading if mode == "grading" else general
        orbits = [ExtensionDatum(xi, r) for xi, r in chosen.representatives]
        counts = {"count": chosen.count, "count_grading": grading.count,
                  "count_general": general.count, "pair_classes": classes.count,
                  "xi_orbits": xi_orbits(p).count}
        if oracle_check:
            oracle_info = _root_pair_oracle(p, q, cap)
            oracle_info["agree"] = (oracle_info["non_gt_grading"] == grading.count
                                    and oracle_info["non_gt_general"] == general.count)
    return CensusReport("pq2", inputs, branch, mode, orbits, counts,
                        time.perf_counter() - start, bool(oracle_info.get("agree")), oracle_info)


def _root_pair_oracle(p, q, cap=None):
    """Recount with explicit roots in ``F_{q^2}``, built matrices and a Lagrangian search."""
    F = FqSquared(q)
    roots = pth_roots_in_Fq2(p, q, F)
    lagrangians = oracle.enumerate_lagrangians(FinAbGroup.from_cyclic_orders([q, q]), cap=cap)
    non_gt = []
    criterion_ok = True
    for z1, z2 in itertools.combinations(roots, 2):
        lam = F.mul(z1, z2)
        if lam == F.one:
            continue
        pair = RootPair(p, roots.index(z1), roots.index(z2))
        M = build_M(p, q, pair, F)
        if orth_pow(M, p) != OrthElem.identity(M.A) or not orth_membership(M):
            raise DomainError(f"census matrix for {pair} is not of order dividing {p}")
        gt = is_group_theoretical(M, lagrangians).group_theoretical
        criterion_ok &= gt == F.in_base(lam)
        if not gt:
            non_gt.append(tuple(sorted((z1, z2))))

    def power(g):
        return lambda u: (u[0] if g == -1 else xi_action(p, g)(u[0]),
                          tuple(sorted(F.pow(z, g) for z in u[1])))

    universe = [(xi, pr) for xi in range(p) for pr in non_gt]
    grading = oracle.orbit_count(universe, [power(-1)])
    general = oracle.orbit_count(universe, [power(-1), power(sympy.primitive_root(p))])
    return {"lagrangians": len(lagrangians), "lambda_criterion": criterion_ok,
            "non_gt_pairs": len(non_gt), "non_gt_grading": grading.count,
            "non_gt_general": general.count}


def anisotropic_form_classes(q):
    """GL_2(F_q)-classes of binary quadratic forms ``u x^2 + v x y + w y^2`` with no non-trivial zero."""
    vecs = [(x, y) for x in range(q) for y in range(q) if (x, y) != (0, 0)]

    def value(f, x, y):
        u, v, w = f
        return (u * x * x + v * x * y + w * y * y) % q

    forms = [f for f in itertools.product(range(q), repeat=3)
             if all(value(f, x, y) for x, y in vecs)]

    def substitute(P):
        (a, b), (c, d) = P

        def act(f):
            # f(a x + b y, c x + d y)
            return (value(f, a, c), (value(f, a + b, c + d) - value(f, a, c) - value(f, b, d)) % q,
                    value(f, b, d))
        return act

    gens = oracle.automorphism_generators(FinAbGroup.from_cyclic_orders([q, q]))
    mats = [tuple(tuple(int(x) for x in row) for row in g.entries) for g in gens]
    return oracle.orbit_count(forms, [substitute(P) for P in mats])


def normal_form_classes(p, q, cap=None):
    """Brute-force classes of ``(alpha, gamma)`` over ``(Z/q)^2`` with ``delta = 0``.

    Keeps pairs with ``gamma`` invertible, ``gamma* alpha`` alternating and
    ``M^p = Id`` for ``M = [[alpha, (gamma*)^-1], [gamma, 0]]``, then takes
    orbits under ``(alpha, gamma) -> (psi^-1 alpha psi, psi* gamma psi)``.
    Returns the partition and a group-theoretical flag per class.
    """
    cap = config.oracle_cap(config.HOM_SCAN_CAP) if cap is None else cap
    if q ** 8 > cap:
        raise ResourceError(f"q^8 = {q ** 8} exceeds scan cap {cap}")
    mats = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64).reshape(-1, 2, 2)
    det = (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % q
    gammas = mats[det != 0]
    gdet = det[det != 0]
    # (gamma^T)^-1 = adj(gamma)^T / det
    inv_det = np.array([pow(int(d), -1, q) for d in gdet])
    adj = np.stack([np.stack([gammas[:, 1, 1], -gammas[:, 0, 1]], -1),
                    np.stack([-gammas[:, 1, 0], gammas[:, 0, 0]], -1)], 1)
    betas = (np.transpose(adj, (0, 2, 1)) * inv_det[:, None, None]) % q
    sols = []
    for gamma, beta in zip(gammas, betas):
        prod = (gamma.T[None] @ mats) % q          # gamma* alpha for every alpha
        alt = ((prod[:, 0, 0] == 0) & (prod[:, 1, 1] == 0)
               & ((prod[:, 0, 1] + prod[:, 1, 0]) % q == 0))
        alphas = mats[alt]
        if not len(alphas):
            continue
        big = np.zeros((len(alphas), 4, 4), dtype=np.int64)
        big[:, :2, :2] = alphas
        big[:, :2, 2:] = beta
        big[:, 2:, :2] = gamma
        power = np.broadcast_to(np.eye(4, dtype=np.int64), big.shape).copy()
        for _ in range(p):
            power = (power @ big) % q
        ok = np.all(power == np.eye(4, dtype=np.int64), axis=(1, 2))
        for alpha in alphas[ok]:
            sols.append((tuple(alpha.ravel().tolist()), tuple(gamma.ravel().tolist())))
    A = FinAbGroup.from_cyclic_orders([q, q])
    gens = oracle.automorphism_generators(A)

    def act(psi):
        P = psi.entries
        Pinv = psi.inverse().entries

        def f(u):
            al = np.array(u[0]).reshape(2, 2)
            ga = np.array(u[1]).reshape(2, 2)
            return (tuple(((Pinv @ al @ P) % q).ravel().tolist()),
                    tuple(((P.T @ ga @ P) % q).ravel().tolist()))
        return f

    partition = oracle.orbit_count(sols, [act(g) for g in gens])
    lagrangians = oracle.enumerate_lagrangians(A)
    gt = []
    for alpha, gamma in partition.representatives:
        M = OrthElem.from_blocks(A, np.array(alpha).reshape(2, 2),
                                 dual_hom(GroupHom(A, A, np.array(gamma).reshape(2, 2))).inverse(),
                                 np.array(gamma).reshape(2, 2), np.zeros((2, 2), dtype=np.int64))
        gt.append(is_group_theoretical(M, lagrangians).group_theoretical)
    return partition, gt


# R_{3,A} ---------------------------------------------------------------------

def abelian_invariants_from_table(table):
    """Factor list of an abelian group given by its Cayley table (identity at 0).

    With ``c_k`` the number of elements killed by ``q^k``, ``log_q c_k -
    log_q c_(k-1)`` counts the cyclic factors of order at least ``q^k``.
    """
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    orders = []
    for g in range(n):
        k, x = 1, g
        while x != 0:
            x = int(T[x, g])
            k += 1
        orders.append(k)
    factors = []
    for q, e in sympy.factorint(n).items():
        logs = []
        for k in range(e + 1):
            c = sum(1 for o in orders if (q**k) % o == 0)
            logs.append(sympy.multiplicity(q, c))
        at_least = [logs[k] - logs[k - 1] for k in range(1, e + 1)] + [0]
        for k in range(1, e + 1):
            if at_least[k - 1] > at_least[k]:
                factors.append((q, k, at_least[k - 1] - at_least[k]))
    return FinAbGroup(tuple(factors))


def census_R3A(group, oracle_check=False, cap=None):
    """Categorifications of ``R_{3,A}``: ``3 prod(a_i/2 + 1)`` when ``A`` is abelian with even multiplicities."""
    start = time.perf_counter()
    if isinstance(group, str):
        group = FinAbGroup.parse(group)
    if isinstance(group, FinAbGroup):
        A, abelian, label = group, True, group.descriptor()
        order = A.order
    else:
        from .fusering import is_abelian_table, validate_group_table
        validate_group_table(group)
        order = len(group)
        abelian = is_abelian_table(group)
        A = abelian_invariants_from_table(group) if abelian else None
        label = A.descriptor() if abelian else f"nonabelian[{order}]"
    if order % 3 == 0:
        raise DomainError("|A| must not be divisible by 3")
    inputs = {"group": label}
    if not abelian:
        counts = {"count": 0, "count_grading": 0, "count_general": 0, "gamma_classes": 0}
        return CensusReport("r3a", inputs, "non_abelian", "general", [], counts,
                            time.perf_counter() - start, False, {})
    classes = enumerate_gamma_classes(A)
    orbits = [ExtensionDatum(xi, c.describe()) for c in classes for xi in range(3)]
    n = 3 * len(classes)
    counts = {"count": n, "count_grading": n, "count_general": n, "gamma_classes": len(classes)}
    branch = "gamma_classes" if classes else "odd_multiplicity"
    info = {}
    if oracle_check:
        found = oracle.gamma_orbits(A, cap=cap).count
        info = {"gamma_orbits": found, "agree": found == len(classes)}
    return CensusReport("r3a", inputs, branch, "general", orbits, counts,
                        time.perf_counter() - start, bool(info.get("agree")), info)
