import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extrapkit.errors import DomainError
from extrapkit.exponents import (
    INF,
    Exponent,
    Reciprocal,
    as_exponent,
    conjugate,
    exp_str,
    harmonic_sum,
)

finite_exponents = st.fractions(min_value=0, max_value=100).map(Exponent)
positive_exponents = st.fractions(min_value=Fraction(1, 50), max_value=100).map(Exponent)


def test_conjugate_endpoints():
    assert conjugate(1) == INF
    assert conjugate(INF) == Exponent(1)
    assert conjugate(2) == Exponent(2)
    assert conjugate(Fraction(4, 3)) == Exponent(4)


def test_conjugate_rejects_below_one():
    with pytest.raises(DomainError):
        conjugate(Fraction(1, 2))


def test_harmonic_sum_examples():
    assert harmonic_sum([2, 2]) == Exponent(1)
    assert harmonic_sum([INF, 3]) == Exponent(3)
    assert harmonic_sum([4, 4]) == Exponent(2)


def test_harmonic_sum_rejects_zero():
    with pytest.raises(DomainError):
        harmonic_sum([2, 0])


def test_reciprocal_convention():
    assert INF.reciprocal() == Exponent(0)
    assert Exponent(0).reciprocal() == INF
    assert Exponent(Fraction(3, 2)).reciprocal() == Exponent(Fraction(2, 3))


def test_negative_rejected_at_boundary():
    with pytest.raises(DomainError):
        Exponent(Fraction(-1, 2))
    with pytest.raises(DomainError):
        Exponent("-3/2")


def test_parse_and_str_roundtrip():
    for text in ("inf", "2", "3/2", "0", "17/12"):
        assert str(Exponent.parse(text)) == text
    with pytest.raises(DomainError):
        Exponent.parse("2.5")
    with pytest.raises(DomainError):
        Exponent.parse("1e3")


def test_exp_str_signed_fraction():
    assert exp_str(Fraction(-1, 6)) == "-1/6"
    assert exp_str(INF) == "inf"


def test_arithmetic_conventions():
    assert Exponent(3) / INF == Exponent(0)
    assert Exponent(3) / Exponent(0) == INF
    assert INF * Exponent(2) == INF
    with pytest.raises(DomainError):
        INF * Exponent(0)
    with pytest.raises(DomainError):
        INF - INF


def test_ordering_total_with_inf_max():
    vals = [Exponent(0), Exponent(Fraction(1, 3)), Exponent(1), Exponent(7), INF]
    assert sorted(vals, key=lambda e: (e.is_inf, e._num)) == vals
    assert all(v <= INF for v in vals)
    assert INF > 10**9


def test_seeded_conjugate_identity_corpus():
    # 1/p + 1/p' = 1 exactly on 1000 seeded rationals in (1, inf)
    rnd = random.Random(20240601)
    for _ in range(1000):
        p = Exponent(1 + Fraction(rnd.randint(1, 400), rnd.randint(1, 40)))
        pp = conjugate(p)
        assert p.reciprocal().frac + pp.reciprocal().frac == 1
        assert conjugate(pp) == p


@given(finite_exponents)
def test_reciprocal_involutive(e):
    assert e.reciprocal().reciprocal() == e


@given(positive_exponents, positive_exponents, positive_exponents)
def test_harmonic_sum_commutes_and_associates(a, b, c):
    assert harmonic_sum([a, b]) == harmonic_sum([b, a])
    assert harmonic_sum([harmonic_sum([a, b]), c]) == harmonic_sum([a, b, c])


@given(st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_reciprocal_form_roundtrip(v):
    r = Reciprocal.of(Exponent(v))
    assert r.to_exponent() == Exponent(v)
    assert Reciprocal.of(r.to_exponent()) == r


def test_reciprocal_form_negative_rejected():
    with pytest.raises(DomainError):
        Reciprocal(Fraction(-1, 2)).to_exponent()
