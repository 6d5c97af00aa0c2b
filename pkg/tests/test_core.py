from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import rule
from rumcheck.core import (
    AlternativeSet,
    PreferenceDistribution,
    check_size,
    enumerate_orders,
    full_domain,
    induce_rcr,
    lattice_pairs,
    maximal,
    to_rational,
    validate_rcr,
)
from rumcheck.errors import (
    DuplicateMenu,
    EmptyMenu,
    NegativeProbability,
    NotADistribution,
    ParseError,
    SumNotOne,
    TooLarge,
    UnknownAlternative,
)

ABC = AlternativeSet(("a", "b", "c"))


def test_singleton_menu_is_valid():
    p = validate_rcr({("a",): {"a": F(1)}}, ABC)
    assert p.p(0, 0b001) == 1


def test_symmetric_split_is_valid():
    p = validate_rcr({("a", "b"): {"a": F(1, 2), "b": F(1, 2)}}, ABC)
    assert p.p(1, 0b011) == F(1, 2)


def test_sum_not_one():
    with pytest.raises(SumNotOne) as info:
        validate_rcr({("a", "b"): {"a": F(1, 2), "b": F(1, 3)}}, ABC)
    assert info.value.total == F(5, 6)


@pytest.mark.parametrize(
    "raw, exc",
    [
        ({("a", "b"): {"a": F(-1, 2), "b": F(3, 2)}}, NegativeProbability),
        ({("a", "d"): {"a": F(1)}}, UnknownAlternative),
        ({("a", "b"): {"c": F(1)}}, UnknownAlternative),
        ({(): {}}, EmptyMenu),
        ({("a", "b"): {"a": F(1)}, ("b", "a"): {"b": F(1)}}, DuplicateMenu),
    ],
)
def test_validation_errors(raw, exc):
    with pytest.raises(exc):
        validate_rcr(raw, ABC)


def test_unlisted_members_get_zero():
    p = rule("abc", {"abc": {"b": 1}})
    assert p.p(0, 0b111) == 0 and p.p(2, 0b111) == 0


@pytest.mark.parametrize("value, expected", [("1/3", F(1, 3)), ("2", F(2)), (3, F(3)), (" -4/6 ", F(-2, 3))])
def test_to_rational_accepts_exact_forms(value, expected):
    assert to_rational(value) == expected


@pytest.mark.parametrize("value", [0.5, "0.5", "1e-3", True, "abc", None])
def test_to_rational_rejects_inexact_forms(value):
    with pytest.raises(ParseError):
        to_rational(value)


@pytest.mark.parametrize("n, count", [(1, 1), (3, 6), (5, 120)])
def test_enumerate_orders_counts(n, count):
    orders = enumerate_orders(n)
    assert len(orders) == count == len(set(orders))
    assert orders == sorted(orders)


def test_enumerate_orders_guard(monkeypatch):
    with pytest.raises(TooLarge):
        enumerate_orders(9)
    monkeypatch.setenv("RUM_MAX_N", "9")
    check_size(9, 8, "test")


@pytest.mark.parametrize(
    "order, menu, top",
    [((0, 1, 2), 0b110, 1), ((0, 1, 2), 0b001, 0), ((2, 0, 1), 0b111, 2)],
)
def test_maximal(order, menu, top):
    assert maximal(order, menu) == top


def test_maximal_empty_menu():
    with pytest.raises(EmptyMenu):
        maximal((0, 1, 2), 0)


def test_degenerate_distribution_picks_a():
    p = induce_rcr(PreferenceDistribution({(0, 1, 2): F(1)}), full_domain(3), ABC)
    for a in full_domain(3):
        if a & 1:
            assert p.p(0, a) == 1


def test_uniform_distribution_is_uniform():
    nu = PreferenceDistribution({o: F(1, 6) for o in enumerate_orders(3)})
    p = induce_rcr(nu, full_domain(3), ABC)
    for x, a in p.pairs():
        assert p.p(x, a) == F(1, bin(a).count("1"))


def test_reversed_pair_mixture():
    nu = PreferenceDistribution({(0, 1, 2): F(1, 2), (2, 1, 0): F(1, 2)})
    p = induce_rcr(nu, [0b111], ABC)
    assert (p.p(0, 7), p.p(1, 7), p.p(2, 7)) == (F(1, 2), 0, F(1, 2))


def test_not_a_distribution():
    with pytest.raises(NotADistribution):
        induce_rcr(PreferenceDistribution({(0, 1, 2): F(1, 2)}, relaxed=True), [0b111], ABC)


def test_lattice_pairs_order():
    pairs = lattice_pairs(3)
    assert len(pairs) == 12
    sizes = [bin(a).count("1") for _, a in pairs]
    assert sizes == sorted(sizes, reverse=True)


weights = st.lists(st.integers(0, 5), min_size=6, max_size=6).filter(any)


@settings(max_examples=60, deadline=None)
@given(weights, st.sets(st.integers(1, 7), min_size=1))
def test_induced_rule_is_valid(ws, menus):
    orders = enumerate_orders(3)
    total = sum(ws)
    nu = PreferenceDistribution({o: F(w, total) for o, w in zip(orders, ws) if w})
    p = induce_rcr(nu, sorted(menus), ABC)
    for a in p.menus:
        assert sum(p.p(x, a) for x in range(3) if a >> x & 1) == 1
        assert all(p.p(x, a) >= 0 for x in range(3) if a >> x & 1)


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)), st.integers(1, 15))
def test_maximal_is_argmax(order, menu):
    rank = {x: i for i, x in enumerate(order)}
    assert maximal(tuple(order), menu) == min((x for x in range(4) if menu >> x & 1), key=rank.get)


def test_factorial_consistency():
    assert len(enumerate_orders(4)) == math.factorial(4)
