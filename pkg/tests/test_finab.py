from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import homs, small_groups
from fusion_census.errors import DomainError, ResourceError
from fusion_census.finab import (FinAbGroup, GroupHom, compose, dual_hom, enumerate_elements,
                                 gram_matrix, is_alternating, is_alternating_exhaustive,
                                 is_injective_exhaustive, is_isomorphism, is_skew, pairing,
                                 random_automorphism, random_hom, rank_mod_prime)

V4 = FinAbGroup.parse("2^1:2")


def H(A, rows, B=None):
    return GroupHom(A, A if B is None else B, rows)


# parsing and invariants

def test_parse_descriptor_forms():
    A = FinAbGroup.parse(" 2^2:2 + 7^1:4 ")
    assert A.factors == ((2, 2, 2), (7, 1, 4))
    assert A.order == 16 * 7**4
    assert FinAbGroup.parse("2^1:2").orders == (2, 2)
    assert FinAbGroup.parse("1").order == 1
    assert FinAbGroup.parse("TRIVIAL").rank == 0


def test_factors_are_sorted_and_merged():
    A = FinAbGroup(((7, 1, 1), (2, 2, 1), (2, 1, 1), (2, 1, 2)))
    assert A.factors == ((2, 1, 3), (2, 2, 1), (7, 1, 1))
    assert A.descriptor() == "2^1:3+2^2:1+7^1:1"
    assert FinAbGroup.parse(A.descriptor()) == A


@pytest.mark.parametrize("bad", ["4", "2^0", "2:0", "x", "2^1:2+", "6^1:1"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(DomainError):
        FinAbGroup.parse(bad)


def test_order_overflow_rejected():
    with pytest.raises(DomainError):
        FinAbGroup(((2, 1, 70),))


def test_from_cyclic_orders_primary_decomposition():
    assert FinAbGroup.from_cyclic_orders([12, 2]) == FinAbGroup.parse("2:1+2^2+3")


def test_element_ops():
    A = FinAbGroup.parse("2+2^2")
    assert A.orders == (2, 4)
    assert A.add((1, 3), (1, 2)) == (0, 1)
    assert A.neg((1, 1)) == (1, 3)
    assert A.element_order((0, 2)) == 2
    assert A.exponent == 4


# worked examples

def test_compose_examples():
    assert compose(GroupHom.identity(V4), GroupHom.identity(V4)) == GroupHom.identity(V4)
    assert compose(H(V4, [[1, 1], [0, 1]]), H(V4, [[1, 0], [1, 1]])) == H(V4, [[0, 1], [1, 1]])
    f = H(V4, [[1, 1], [0, 1]])
    assert (GroupHom.zero(V4) @ f).is_zero() and (f @ GroupHom.zero(V4)).is_zero()


def test_compose_shape_mismatch():
    with pytest.raises(DomainError):
        compose(GroupHom.identity(V4), GroupHom.identity(FinAbGroup.parse("5")))


def test_dual_examples():
    assert dual_hom(GroupHom.identity(V4)) == GroupHom.identity(V4)
    assert dual_hom(H(V4, [[1, 1], [0, 1]])) == H(V4, [[1, 0], [1, 1]])


def test_isomorphism_examples():
    assert is_isomorphism(GroupHom.identity(V4))
    Z4 = FinAbGroup.parse("2^2")
    assert not is_isomorphism(GroupHom.scalar(Z4, 2))
    assert is_isomorphism(H(V4, [[1, 1], [1, 0]]))
    with pytest.raises(DomainError):
        is_isomorphism(GroupHom.zero(V4, FinAbGroup.parse("2")))


def test_enumerate_examples():
    assert list(enumerate_elements(FinAbGroup.parse("2"))) == [(0,), (1,)]
    assert len(list(enumerate_elements(V4))) == 4
    assert len(list(enumerate_elements(FinAbGroup.parse("2+2^2")))) == 8
    assert list(enumerate_elements(FinAbGroup.trivial())) == [()]
    with pytest.raises(ResourceError):
        list(enumerate_elements(FinAbGroup.parse("2:8"), cap=100))


def test_skew_alternating_examples():
    Z5sq = FinAbGroup.parse("5:2")
    for A in (V4, Z5sq):
        assert is_skew(GroupHom.zero(A)) and is_alternating(GroupHom.zero(A))
    sympl = H(Z5sq, [[0, 1], [-1, 0]])
    assert is_skew(sympl) and is_alternating(sympl)
    swap = H(V4, [[0, 1], [1, 0]])
    assert is_skew(swap) and is_alternating(swap)
    diag = H(V4, [[1, 0], [0, 1]])
    assert is_skew(diag) and not is_alternating(diag)   # skew does not imply alternating at q = 2
    assert not is_alternating_exhaustive(diag)


def test_well_definedness_is_enforced():
    Z2, Z4 = FinAbGroup.parse("2"), FinAbGroup.parse("2^2")
    GroupHom(Z2, Z4, [[2]])
    with pytest.raises(DomainError):
        GroupHom(Z2, Z4, [[1]])
    # different primes: only the zero map
    with pytest.raises(DomainError):
        GroupHom(Z2, FinAbGroup.parse("5"), [[1]])


# properties

def _rescaled_pairing(A, f, a):
    return Fraction(pairing(A, f, a), A.exponent)


@given(st.data())
def test_compose_matches_pointwise_application(data):
    A = data.draw(small_groups())
    B = data.draw(small_groups())
    C = data.draw(small_groups())
    g = data.draw(homs(A, B))
    f = data.draw(homs(B, C))
    fg = compose(f, g)
    for x in enumerate_elements(A):
        assert fg(x) == f(g(x))


@given(st.data())
def test_compose_associative(data):
    A, B, C, D = (data.draw(small_groups()) for _ in range(4))
    h, g, f = data.draw(homs(A, B)), data.draw(homs(B, C)), data.draw(homs(C, D))
    assert (f @ g) @ h == f @ (g @ h)
    assert GroupHom.identity(D) @ f == f == f @ GroupHom.identity(C)


@given(st.data())
def test_dual_is_adjoint_for_the_pairing(data):
    A = data.draw(small_groups(max_order=16))
    B = data.draw(small_groups(max_order=16))
    f = data.draw(homs(A, B))
    fd = dual_hom(f)
    for phi in enumerate_elements(B):
        for a in enumerate_elements(A):
            assert _rescaled_pairing(B, phi, f(a)) == _rescaled_pairing(A, fd(phi), a)


@given(st.data())
def test_dual_contravariant_involution(data):
    A, B, C = (data.draw(small_groups()) for _ in range(3))
    g, f = data.draw(homs(A, B)), data.draw(homs(B, C))
    assert dual_hom(dual_hom(f)) == f
    assert dual_hom(f @ g) == dual_hom(g) @ dual_hom(f)


def test_double_dual_random_over_Z4_Z2(rng):
    A = FinAbGroup.parse("2+2^2")
    for _ in range(50):
        f = random_hom(A, A, rng)
        assert dual_hom(dual_hom(f)) == f


@given(st.data())
def test_pairing_biadditive_nondegenerate(data):
    A = data.draw(small_groups(max_order=16))
    elems = list(enumerate_elements(A))
    f, g, a = (data.draw(st.sampled_from(elems)) for _ in range(3))
    L = A.exponent
    assert pairing(A, A.add(f, g), a) == (pairing(A, f, a) + pairing(A, g, a)) % L
    assert pairing(A, a, A.add(f, g)) == (pairing(A, a, f) + pairing(A, a, g)) % L
    if f != A.zero():
        assert any(pairing(A, f, x) for x in elems)


@given(st.data())
def test_isomorphism_agrees_with_injectivity(data):
    A = data.draw(small_groups(max_order=64))
    f = data.draw(homs(A, A))
    assert is_isomorphism(f) == is_injective_exhaustive(f)
    if is_isomorphism(f):
        assert f @ f.inverse() == GroupHom.identity(A)


def test_isomorphism_exhaustive_small_groups():
    from fusion_census.oracle import enumerate_homs
    for desc in ("2:2", "2+2^2", "3:2", "2^2:2"):
        A = FinAbGroup.parse(desc)
        for f in enumerate_homs(A, A):
            assert is_isomorphism(f) == is_injective_exhaustive(f)


@given(st.data())
def test_alternating_implies_skew_and_matches_exhaustive(data):
    A = data.draw(small_groups(max_order=32))
    g = data.draw(homs(A, A))
    alt = is_alternating(g)
    assert alt == is_alternating_exhaustive(g)
    if alt:
        assert is_skew(g)


def test_skew_equals_alternating_at_odd_q():
    from fusion_census.oracle import enumerate_homs
    A = FinAbGroup.parse("5:2")
    for g in enumerate_homs(A, A):
        assert is_skew(g) == is_alternating(g)


def test_gram_matrix_entries_are_pairings():
    A = FinAbGroup.parse("2+2^2")
    g = H(A, [[1, 0], [2, 3]])
    G = gram_matrix(g)
    for i in range(2):
        for j in range(2):
            assert G[i, j] == pairing(A, g(A.unit_vector(j)), A.unit_vector(i))


def test_random_automorphism_is_invertible(rng):
    A = FinAbGroup.parse("2^1:2+2^2:2")
    for _ in range(20):
        assert is_isomorphism(random_automorphism(A, rng))


def test_rank_mod_prime():
    assert rank_mod_prime(np.array([[1, 1], [1, 1]]), 2) == 1
    assert rank_mod_prime(np.array([[1, 2], [3, 4]]), 5) == 2
    assert rank_mod_prime(np.array([[1, 2], [3, 4]]), 2) == 1


def test_trivial_group_is_legal():
    T = FinAbGroup.trivial()
    f = GroupHom.identity(T)
    assert is_isomorphism(f) and is_alternating(f) and dual_hom(f) == f
