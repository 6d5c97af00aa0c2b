from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import alternating_sum, uniform_full
from rumcheck.core import AlternativeSet, PreferenceDistribution, enumerate_orders, full_domain, induce_rcr, lattice_pairs, validate_rcr
from rumcheck.errors import IncompleteDomain
from rumcheck.mobius import (
    LatticeFunction,
    accumulate,
    full_rule_function,
    inflow_outflow_gap,
    is_full_rule,
    is_set_constant,
    mobius_inverse,
    satisfies_inflow_outflow,
    satisfies_qtop,
)


def random_full_rule(n: int, rng: random.Random, zeros: bool = True):
    raw = {}
    for a in full_domain(n):
        xs = [x for x in range(n) if a >> x & 1]
        w = [rng.randint(0 if zeros else 1, 5) for _ in xs]
        if not any(w):
            w[0] = 1
        raw[a] = {x: F(v, sum(w)) for x, v in zip(xs, w)}
    return validate_rcr(raw, AlternativeSet.of_size(n))


def random_lattice_function(n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> LatticeFunction:
    return LatticeFunction(n, {pair: F(rng.randint(lo, hi), rng.randint(1, 4)) for pair in lattice_pairs(n)})


rules = st.builds(random_full_rule, st.integers(1, 5), st.randoms(use_true_random=False))


def test_singleton_universe():
    p = validate_rcr({(0b1): {0: F(1)}}, AlternativeSet.of_size(1))
    assert mobius_inverse(p)[(0, 1)] == 1


def test_uniform_three():
    q = mobius_inverse(uniform_full(3))
    for x in range(3):
        assert q[(x, 0b111)] == F(1, 3)
        assert q[(x, 1 << x)] == F(1, 3)
        for y in range(3):
            if y != x:
                assert q[(x, 1 << x | 1 << y)] == F(1, 6)


def test_uniform_three_against_alternating_sum():
    p = uniform_full(3)
    q = mobius_inverse(p)
    values = dict(full_rule_function(p).values)
    for x, a in lattice_pairs(3):
        assert q[(x, a)] == alternating_sum(values, 3, x, a)


def test_degenerate_order():
    alts = AlternativeSet.of_size(3)
    p = induce_rcr(PreferenceDistribution({(0, 1, 2): F(1)}), full_domain(3), alts)
    q = mobius_inverse(p)
    assert q[(0, 0b111)] == 1
    assert all(q[(0, a)] == 0 for x, a in lattice_pairs(3) if x == 0 and a != 0b111)
    assert q[(1, 0b110)] == 1


def test_incomplete_domain():
    p = validate_rcr({0b11: {0: F(1)}}, AlternativeSet.of_size(2))
    with pytest.raises(IncompleteDomain):
        mobius_inverse(p)
    with pytest.raises(IncompleteDomain):
        LatticeFunction(2, {(0, 0b11): F(1)})


def test_accumulate_examples():
    assert all(v == 0 for v in accumulate(LatticeFunction.zeros(3)).values.values())
    q = LatticeFunction.from_callable(3, lambda x, a: F(1, 3) if a == 0b111 else F(0))
    assert all(v == F(1, 3) for v in accumulate(q).values.values())
    p = uniform_full(3)
    assert accumulate(mobius_inverse(p)) == full_rule_function(p)


def test_set_constant_examples():
    assert is_set_constant(full_rule_function(uniform_full(3)))
    assert not is_set_constant(LatticeFunction.from_callable(3, lambda x, a: F(1)))
    assert is_set_constant(LatticeFunction.from_callable(3, lambda x, a: F(1, bin(a).count("1"))))


def test_qtop_reports_first_failure():
    q = LatticeFunction.from_callable(3, lambda x, a: F(2, 3) if a == 0b111 else F(0))
    verdict = satisfies_qtop(q)
    assert not verdict and verdict.failed == 2
    q = LatticeFunction(1, {(0, 1): F(-1)})
    assert satisfies_qtop(q).failed == 2


def test_qtop_condition_three():
    # top sums to one and every menu balances, yet q(b, X) < 0
    q = LatticeFunction(2, {(0, 3): F(2), (1, 3): F(-1), (0, 1): F(-1), (1, 2): F(2)})
    assert inflow_outflow_gap(q, 0b01) == 0 and inflow_outflow_gap(q, 0b10) == 0
    assert satisfies_qtop(q).failed == 3


@settings(max_examples=80, deadline=None)
@given(rules)
def test_round_trip(p):
    f = full_rule_function(p)
    assert accumulate(mobius_inverse(f)) == f


@settings(max_examples=60, deadline=None)
@given(rules)
def test_forward_direction_and_top_agrees(p):
    q = mobius_inverse(p)
    assert satisfies_qtop(q)
    ground = (1 << p.n) - 1
    for x in range(p.n):
        assert q[(x, ground)] == p.p(x, ground)


@settings(max_examples=60, deadline=None)
@given(rules)
def test_matches_alternating_sum(p):
    values = dict(full_rule_function(p).values)
    q = mobius_inverse(p)
    for x, a in lattice_pairs(p.n):
        assert q[(x, a)] == alternating_sum(values, p.n, x, a)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.randoms(use_true_random=False))
def test_qtop_iff_accumulate_is_rule(n, rng):
    # mix arbitrary q with q that come from rules so both sides are exercised
    if rng.random() < 0.5:
        q = random_lattice_function(n, rng)
    else:
        q = mobius_inverse(random_full_rule(n, rng))
        if rng.random() < 0.5:
            pair = rng.choice(lattice_pairs(n))
            q = LatticeFunction(n, {**q.values, pair: q[pair] + F(rng.choice([-1, 1]), 7)})
    assert bool(satisfies_qtop(q)) == is_full_rule(accumulate(q))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.randoms(use_true_random=False), st.booleans())
def test_inflow_outflow_iff_set_constant(n, rng, constant):
    if constant:
        # rescale a rule's menus by a common total
        p = full_rule_function(random_full_rule(n, rng))
        k = F(rng.randint(-3, 3), rng.randint(1, 3))
        f = LatticeFunction(n, {pair: k * v for pair, v in p.values.items()})
    else:
        f = random_lattice_function(n, rng)
    assert satisfies_inflow_outflow(mobius_inverse(f)) == is_set_constant(f)


def test_distribution_weights_match_mobius():
    # q(x, A) equals the mass of orders ranking X - A above x above A - x
    rng = random.Random(5)
    n = 4
    orders = enumerate_orders(n)
    raw = {o: rng.randint(0, 4) for o in orders}
    total = sum(raw.values())
    nu = PreferenceDistribution({o: F(w, total) for o, w in raw.items() if w})
    q = mobius_inverse(induce_rcr(nu, full_domain(n), AlternativeSet.of_size(n)))
    ground = (1 << n) - 1
    for x, a in lattice_pairs(n):
        k = n - bin(a).count("1")
        mass = sum(
            (w for o, w in nu.weights.items() if o[k] == x and {*o[:k]} == {y for y in range(n) if (ground & ~a) >> y & 1}),
            F(0),
        )
        assert q[(x, a)] == mass
