from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import linear_extensions, rule
from rumcheck.core import AlternativeSet, PreferenceDistribution, enumerate_orders, full_domain, induce_rcr
from rumcheck.datasets import random_rule
from rumcheck.errors import CyclicOrder
from rumcheck.hrep import hrep_feasible, q_index
from rumcheck.mobius import mobius_inverse
from rumcheck.monotone import (
    PartialOrder,
    is_monotone_rcr,
    monotone_constraint_rows,
    monotone_feasible,
    monotone_orders,
    restricted_orders_check,
    upper_set,
)


def random_order(n: int, rng: random.Random) -> PartialOrder:
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3]
    return PartialOrder.from_pairs(n, pairs)


def test_upper_sets():
    assert all(upper_set(PartialOrder.empty(3), x) == frozenset() for x in range(3))
    assert upper_set(PartialOrder.from_pairs(4, [(0, 2)]), 2) == {0}
    chain = PartialOrder.from_pairs(3, [(0, 1), (1, 2)])
    assert upper_set(chain, 2) == {0, 1}


def test_cycle_rejected():
    with pytest.raises(CyclicOrder):
        PartialOrder.from_pairs(3, [(0, 1), (1, 2), (2, 0)])


def test_is_monotone_rcr():
    order = PartialOrder.from_pairs(2, [(0, 1)])
    assert is_monotone_rcr(rule("wy", {"wy": {"w": "1/2", "y": "1/2"}}), PartialOrder.empty(2))
    assert not is_monotone_rcr(rule("wy", {"wy": {"w": "1/2", "y": "1/2"}}), order)
    assert is_monotone_rcr(rule("wy", {"wy": {"w": 1}}), order)


def test_constraint_rows():
    assert monotone_constraint_rows(PartialOrder.empty(3), 3) == []
    (coeffs, rhs, _), = monotone_constraint_rows(PartialOrder.from_pairs(2, [(0, 1)]), 2)
    assert coeffs == {q_index(2)[(1, 0b11)]: 1} and rhs == 0
    (coeffs, _, label), = monotone_constraint_rows(PartialOrder.from_pairs(3, [(0, 1)]), 3)
    idx = q_index(3)
    assert set(coeffs) == {idx[(1, 0b011)], idx[(1, 0b111)]} and label == ("monotone", 1)


def test_empty_order_matches_hrep():
    p = rule("abc", {"ab": {"a": 1}, "bc": {"b": 1}, "ac": {"c": 1}})
    assert monotone_feasible(p, PartialOrder.empty(3)).feasible == hrep_feasible(p).feasible


def test_dominated_choice_rejected():
    # w dominates y, yet y is chosen from {w, y}
    p = rule("wxyz", {"wy": {"w": "1/2", "y": "1/2"}})
    order = PartialOrder.from_pairs(4, [(0, 2), (1, 3)])
    for method in ("hrep", "pslack"):
        assert not monotone_feasible(p, order, method).feasible
    assert not restricted_orders_check(p, order).feasible


def test_linear_extension_counts():
    assert len(monotone_orders(PartialOrder.empty(3), 3)) == 6
    assert len(monotone_orders(PartialOrder.from_pairs(3, [(0, 1), (1, 2)]), 3)) == 1
    assert monotone_orders(PartialOrder.from_pairs(3, [(0, 1)]), 3) == [(0, 1, 2), (0, 2, 1), (2, 0, 1)]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_extensions_match_oracle(n, rng):
    order = random_order(n, rng)
    assert monotone_orders(order, n) == linear_extensions(n, order.pairs)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_monotone_support_is_feasible(n, rng):
    order = random_order(n, rng)
    ext = monotone_orders(order, n)
    chosen = rng.sample(ext, min(len(ext), 3))
    nu = PreferenceDistribution({o: F(1, len(chosen)) for o in chosen})
    menus = rng.sample(list(full_domain(n)), rng.randint(1, 2 ** n - 1))
    p = induce_rcr(nu, sorted(menus), AlternativeSet.of_size(n))
    for method in ("hrep", "pslack"):
        res = monotone_feasible(p, order, method)
        assert res.feasible
    q = monotone_feasible(p, order).stats["q"]
    for x in range(n):
        up = order.upper_mask(x)
        for (y, a), v in q.values.items():
            if y == x and a & up:
                assert v == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_matches_restricted_vrep(n, rng):
    order = random_order(n, rng)
    menus = rng.sample(list(full_domain(n)), rng.randint(1, 2 ** n - 1))
    p = random_rule(AlternativeSet.of_size(n), sorted(menus), rng, max_den=3)
    expected = restricted_orders_check(p, order).feasible
    assert monotone_feasible(p, order, "hrep").feasible == expected
    assert monotone_feasible(p, order, "pslack").feasible == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_full_domain_characterization(n, rng):
    order = random_order(n, rng)
    ext = monotone_orders(order, n)
    # half from monotone distributions, half arbitrary
    if rng.random() < 0.5:
        pool = ext if rng.random() < 0.7 else enumerate_orders(n)
        chosen = rng.sample(pool, min(len(pool), 2))
        p = induce_rcr(PreferenceDistribution({o: F(1, len(chosen)) for o in chosen}), full_domain(n), AlternativeSet.of_size(n))
    else:
        p = random_rule(AlternativeSet.of_size(n), full_domain(n), rng, max_den=2)
    expected = all(v >= 0 for v in mobius_inverse(p).values.values()) and is_monotone_rcr(p, order)
    assert monotone_feasible(p, order).feasible == expected
