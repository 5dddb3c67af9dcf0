import json

import pytest

from fusion_census import lemmas
from fusion_census.errors import DomainError


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (5, 1), (7, 1)])
def test_uniqueskew(q, n):
    check = lemmas.verify_uniqueskew(q, n)
    assert check.passed and check.details["orbits"] == 1


def test_uniqueskew_q2_literal_skew_has_two_orbits():
    d = lemmas.verify_uniqueskew(2).details
    assert d["alternating_forms"] == 1
    assert d["skew_forms"] == 4 and d["skew_orbits"] == 2


def test_uniqueskew_odd_q_notions_coincide():
    d = lemmas.verify_uniqueskew(5).details
    assert d["skew_forms"] == d["alternating_forms"] and d["skew_orbits"] == 1


@pytest.mark.parametrize("q,n,a,count", [(2, 1, 1, 2), (2, 2, 1, 16), (5, 1, 1, 80), (7, 1, 1, 336)])
def test_uniquegamma_counts(q, n, a, count):
    check = lemmas.verify_uniquegamma(q, n, a)
    assert check.passed
    assert check.details["solutions"] == count == check.details["normalized"]


def test_uniquegamma_hypothesis():
    with pytest.raises(DomainError):
        lemmas.verify_uniquegamma(3, 1, 1)


@pytest.mark.parametrize("m,pairs", [(2, 12), (3, 144), (4, 384), (5, 2400)])
def test_commutes(m, pairs):
    check = lemmas.verify_commutes(m)
    assert check.passed and check.details == {"pairs": pairs, "failures": 0}


@pytest.mark.parametrize("desc", ["2:2", "2^2:2", "5:2"])
def test_qgp_exhaustive(desc):
    assert lemmas.verify_qgp(desc).passed


@pytest.mark.parametrize("desc", ["2:4", "2:2+2^2:2", "2:2+5:2", "7:2"])
def test_qgp_sampled(desc):
    assert lemmas.verify_qgp(desc, samples=25, seed=3).passed


@pytest.mark.parametrize("p,q", [(3, 2), (3, 5), (3, 7), (5, 11), (7, 13)])
def test_claim2(p, q):
    check = lemmas.verify_claim2(p, q, cap=10**6)
    assert check.passed


def test_check_json():
    d = json.loads(lemmas.verify_commutes(2).to_json())
    assert d == {"name": "commutes", "passed": True, "params": {"qn": 2},
                 "details": {"pairs": 12, "failures": 0}}
