import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusion_census import oracle
from fusion_census.errors import DomainError, UnsupportedError
from fusion_census.finab import (FinAbGroup, GroupHom, dual_hom, is_alternating, is_isomorphism,
                                 is_skew, pairing, random_automorphism)
from fusion_census.formsolve import (SKEW, Special, canonical_gamma, canonical_skew,
                                     classify_gamma, decompose, enumerate_gamma_classes,
                                     hensel_lift_quadratic, normalize_skew_block,
                                     normalize_special_block, satisfies_special_relation,
                                     solve_special_gamma, special_form)
from fusion_census.lemmas import special_solutions

V4 = FinAbGroup.parse("2:2")


def G(desc):
    return FinAbGroup.parse(desc)


# canonical forms

def test_canonical_skew_examples():
    assert canonical_skew(5).tolist() == [[0, 1], [4, 0]]
    assert canonical_skew(2, 2).tolist() == [[0, 1], [3, 0]]
    for q, n in [(2, 1), (2, 2), (5, 1), (7, 1), (3, 1)]:
        g = canonical_skew(q, n)
        assert is_skew(g) and is_alternating(g) and is_isomorphism(g)


def test_solve_special_examples():
    g = solve_special_gamma(1, 2)
    assert g.tolist() == [[1, 0], [1, 1]]
    for a, q, n in [(1, 5, 1), (1, 2, 2), (1, 7, 1), (3, 7, 1), (0, 5, 2), (0, 3, 1)]:
        g = solve_special_gamma(a, q, n)
        m = q**n
        # direct 2x2 arithmetic: x = gamma^-1 gamma^T
        E = g.entries
        det = int(E[0, 0] * E[1, 1] - E[0, 1] * E[1, 0]) % m
        inv = (pow(det, -1, m) * np.array([[E[1, 1], -E[0, 1]], [-E[1, 0], E[0, 0]]])) % m
        x = (inv @ E.T) % m
        assert np.array_equal((x @ x) % m, (a * x - np.eye(2, dtype=int)) % m)
    with pytest.raises(DomainError):
        solve_special_gamma(1, 3)
    with pytest.raises(DomainError):
        solve_special_gamma(2, 5)


def test_special_solution_set_Z5_single_orbit():
    sols = special_solutions(5, 1, 1)
    # independent loop over all 5^4 matrices
    brute = [GroupHom(G("5:2"), G("5:2"), np.array(e).reshape(2, 2))
             for e in itertools.product(range(5), repeat=4)]
    brute = [g for g in brute if satisfies_special_relation(g, 1)]
    assert sorted(g.key for g in sols) == sorted(g.key for g in brute)
    assert oracle.gamma_orbits(G("5:2"), sols).count == 1


def test_unique_skew_Z2_squared():
    homs = list(oracle.enumerate_homs(V4, V4))
    assert len(homs) == 16
    alt = [g for g in homs if is_alternating(g) and is_isomorphism(g)]
    assert alt == [canonical_skew(2)]
    part = oracle.gamma_orbits(V4, alt)
    assert part.count == 1


# Hensel

@pytest.mark.parametrize("a,target,q,n", [(1, 1, 5, 1), (1, 1, 2, 3), (1, 3, 7, 2), (1, 2, 5, 3),
                                          (3, 5, 11, 2), (1, 1, 2, 6), (0, 1, 13, 2)])
def test_hensel_solutions(a, target, q, n):
    y, t = hensel_lift_quadratic(a, target, q, n)
    m = q**n
    assert (y * y + a * y * t + t * t - target) % m == 0
    assert 0 <= y < m and 0 <= t < m


def test_hensel_examples_against_exhaustive_oracle():
    assert hensel_lift_quadratic(1, 1, 5, 1) == (1, 0)
    sols8 = {(y, t) for y in range(8) for t in range(8) if (y * y + y * t + t * t - 1) % 8 == 0}
    assert hensel_lift_quadratic(1, 1, 2, 3) in sols8
    sols49 = {(y, t) for y in range(49) for t in range(49) if (y * y + y * t + t * t - 3) % 49 == 0}
    assert len(sols49) > 0
    assert hensel_lift_quadratic(1, 3, 7, 2) in sols49


def test_hensel_no_unit_derivative():
    from fusion_census.errors import SolveError
    with pytest.raises(SolveError):
        hensel_lift_quadratic(2, 0, 2, 1)
    with pytest.raises(DomainError):
        hensel_lift_quadratic(1, 1, 5, 0)


@given(st.sampled_from([2, 5, 7, 11, 13]), st.integers(1, 5), st.integers(0, 50), st.integers(1, 50))
def test_hensel_property(q, n, a, target):
    if (a * a - 4) % q == 0 or target % q == 0:
        return
    y, t = hensel_lift_quadratic(a, target, q, n)
    assert (y * y + a * y * t + t * t - target) % q**n == 0


# 2x2 normalizers

@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (5, 1), (7, 1)])
def test_normalize_skew_block(q, n):
    A = FinAbGroup(((q, n, 2),))
    for g in oracle.enumerate_homs(A, A):
        if is_alternating(g) and is_isomorphism(g):
            psi = normalize_skew_block(g)
            assert dual_hom(psi) @ g @ psi == canonical_skew(q, n)


@pytest.mark.parametrize("q,n,a", [(2, 1, 1), (2, 2, 1), (5, 1, 1), (7, 1, 1), (7, 1, 3)])
def test_normalize_special_block(q, n, a):
    target = special_form(q, n, a)
    for g in special_solutions(q, n, a):
        psi = normalize_special_block(g, a)
        assert is_isomorphism(psi)
        assert dual_hom(psi) @ g @ psi == target


# decomposition

def test_decompose_examples():
    d = decompose(G("5:2"), canonical_skew(5))
    assert [b.tag for b in d.blocks] == [SKEW]
    d = decompose(V4, GroupHom(V4, V4, [[1, 0], [1, 1]]))
    assert [b.tag for b in d.blocks] == [Special(1)]
    A = G("2:4")
    E = np.zeros((4, 4), dtype=np.int64)
    E[:2, :2] = [[0, 1], [1, 0]]
    E[2:, 2:] = [[1, 0], [1, 1]]
    g = GroupHom(A, A, E)
    d = decompose(A, g)
    assert sorted(str(b.tag) for b in d.blocks) == sorted([str(SKEW), str(Special(1))])
    assert d.reassemble() == g
    b0, b1 = d.blocks
    for u in b0.basis:
        for v in b1.basis:
            assert pairing(A, g(u), v) == 0 == pairing(A, g(v), u)


def test_decompose_errors():
    with pytest.raises(UnsupportedError):
        decompose(G("3:2"), canonical_skew(3))
    with pytest.raises(DomainError):
        decompose(V4, GroupHom.identity(V4))      # x = Id, not a valid gamma
    with pytest.raises(DomainError):
        decompose(V4, GroupHom.zero(V4))


def test_decompose_json_shape():
    import json
    d = json.loads(decompose(G("2:2+5:2"), canonical_gamma(G("2:2+5:2"), {(2, 1): 1})).to_json())
    assert d["blocks"] == [{"prime": 2, "exponent": 1, "tag": "skew"},
                           {"prime": 5, "exponent": 1, "tag": "special(1)"}]
    assert len(d["basis"]) == 4


ROUNDTRIP_GROUPS = ["2:2", "2:4", "5:2", "2^2:2", "2:2+2^2:2", "2:2+5:2", "7:2", "2^3:2", "2:6"]


@given(st.sampled_from(ROUNDTRIP_GROUPS), st.integers(0, 2**32 - 1))
def test_decompose_reassemble_roundtrip(desc, seed):
    A = G(desc)
    rng = np.random.default_rng(seed)
    classes = enumerate_gamma_classes(A)
    cls = classes[int(rng.integers(len(classes)))]
    psi = random_automorphism(A, rng)
    g = dual_hom(psi) @ cls.gamma @ psi
    d = decompose(A, g)
    assert d.reassemble() == g
    assert dual_hom(d.psi) @ d.canonical @ d.psi == g
    assert classify_gamma(A, g).skew_counts == cls.skew_counts
    for i, b in enumerate(d.blocks):
        for c in d.blocks[i + 1:]:
            for u in b.basis:
                for v in c.basis:
                    assert pairing(A, g(u), v) == 0


def test_decompose_is_deterministic():
    A = G("2:4")
    rng = np.random.default_rng(7)
    psi = random_automorphism(A, rng)
    g = dual_hom(psi) @ canonical_gamma(A, {(2, 1): 1}) @ psi
    assert decompose(A, g).to_json() == decompose(A, g).to_json()


# classes

def test_enumerate_classes_examples():
    assert len(enumerate_gamma_classes(V4)) == 2
    assert enumerate_gamma_classes(G("5")) == []
    assert len(enumerate_gamma_classes(G("2:2+7:2"))) == 4
    assert len(enumerate_gamma_classes(FinAbGroup.trivial())) == 1
    with pytest.raises(DomainError):
        enumerate_gamma_classes(G("3:2"))


def test_class_representatives_are_valid():
    for desc in ROUNDTRIP_GROUPS:
        for c in enumerate_gamma_classes(G(desc)):
            assert oracle.valid_gamma_predicate(c.gamma)


@pytest.mark.parametrize("desc", ["2:2", "2^2:2", "5:2", "2:4"])
def test_class_count_matches_oracle(desc):
    A = G(desc)
    sols = oracle.exhaustive_gamma_solutions(A)
    part = oracle.gamma_orbits(A, sols)
    assert part.count == len(enumerate_gamma_classes(A))
    # each orbit carries exactly one class label, and gamma* lands in the same orbit
    labels = {}
    for g in sols:
        labels.setdefault(part.orbit_id[g.key], set()).add(classify_gamma(A, g).skew_counts)
        assert part.orbit_id[dual_hom(g).key] == part.orbit_id[g.key]
    assert all(len(v) == 1 for v in labels.values())
    assert len({next(iter(v)) for v in labels.values()}) == part.count


@pytest.mark.parametrize("q,n,a", [(2, 1, 1), (2, 2, 1), (5, 1, 1), (7, 1, 1), (5, 2, 1)])
def test_special_uniqueness(q, n, a):
    from fusion_census.lemmas import verify_uniquegamma
    check = verify_uniquegamma(q, n, a)
    assert check.passed and check.details["orbits"] == 1
