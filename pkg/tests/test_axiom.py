from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import condorcet, corpus, rule, uniform_full
from rumcheck.axiom import (
    Assignment,
    Capacity,
    certificate_to_pair,
    is_feasible_pair,
    is_locally_feasible_pair,
    local_violations,
    sample_pair,
    scale_capacity,
    verify_rumme,
)
from rumcheck.core import AlternativeSet, full_domain
from rumcheck.datasets import random_rule
from rumcheck.errors import DomainMismatch, InvalidCertificate
from rumcheck.hrep import build_general_system, hrep_feasible
from rumcheck.lp import FarkasCertificate, solve_feasibility


def zero_capacity(n: int) -> Capacity:
    return Capacity(n, {})


def test_feasible_pair_examples():
    p = condorcet()
    zero = Assignment({pair: F(0) for pair in p.pairs()})
    assert is_feasible_pair(zero, zero_capacity(3), p)
    ones = Assignment({pair: F(1) for pair in p.pairs()})
    assert is_feasible_pair(ones, Capacity(3, {0b111: F(3)}), p)
    assert not is_feasible_pair(ones, Capacity(3, {0b111: F(2)}), p)


def test_domain_mismatch():
    with pytest.raises(DomainMismatch):
        is_feasible_pair(Assignment({}), zero_capacity(3), condorcet())


def test_local_examples():
    zero = Assignment({(0, 0b11): F(0), (1, 0b11): F(0)})
    assert is_locally_feasible_pair(zero, zero_capacity(2))
    assert is_locally_feasible_pair(zero, Capacity(2, {a: F(bin(a).count("1")) for a in full_domain(2)}))
    single = Assignment({(0, 0b1): F(1)})
    assert local_violations(single, zero_capacity(1)) == [(0, 0b1)]


def test_capacity_must_vanish_on_empty():
    with pytest.raises(ValueError):
        Capacity(2, {0: F(1)})


def test_zero_certificate_rejected():
    system = build_general_system(condorcet())
    with pytest.raises(InvalidCertificate):
        certificate_to_pair(FarkasCertificate(tuple(F(0) for _ in range(system.num_rows))), system)


def test_condorcet_pair():
    p = condorcet()
    system = build_general_system(p)
    res = solve_feasibility(system)
    a, c = certificate_to_pair(res.certificate, system)
    assert is_locally_feasible_pair(a, c) and not is_feasible_pair(a, c, p)


def test_uniform_rule_all_feasible():
    report = verify_rumme(uniform_full(3), trials=100, rng_seed=1)
    assert report.rationalizable and report.feasible_trials == 100 and report.consistent


def test_condorcet_report():
    report = verify_rumme(condorcet())
    assert not report.rationalizable and report.witness is not None and report.consistent


def test_no_observations_note():
    report = verify_rumme(rule("abc", {}), trials=5)
    assert report.rationalizable and report.notes and report.feasible_trials == 5


def test_general_system_equivalence():
    for p in corpus(45, 41):
        assert solve_feasibility(build_general_system(p)).feasible == hrep_feasible(p).feasible


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_infeasible_full_domain_certificates(n, rng):
    p = random_rule(AlternativeSet.of_size(n), full_domain(n), rng, max_den=2)
    system = build_general_system(p)
    res = solve_feasibility(system)
    if res.feasible:
        return
    a, c = certificate_to_pair(res.certificate, system)
    assert is_locally_feasible_pair(a, c) and not is_feasible_pair(a, c, p)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.randoms(use_true_random=False), st.fractions(0, 5, max_denominator=6))
def test_scaling_closure(n, rng, lam):
    p = random_rule(AlternativeSet.of_size(n), full_domain(n), rng)
    a, c = sample_pair(p, rng)
    assert is_locally_feasible_pair(a, c)
    assert is_locally_feasible_pair(a.scaled(lam), scale_capacity(c, lam))
    if lam > 0:
        assert is_feasible_pair(a, c, p) == is_feasible_pair(a.scaled(lam), scale_capacity(c, lam), p)


def test_sampled_capacity_is_tight():
    rng = random.Random(2)
    p = uniform_full(3)
    a, c = sample_pair(p, rng)
    for mask in full_domain(3):
        lowered = Capacity(3, {**c.values, mask: c(mask) - F(1, 2)})
        assert not is_locally_feasible_pair(a, lowered)
