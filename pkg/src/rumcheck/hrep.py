"""Half-space tests: extend an observed rule to the full menu lattice.

Two slack formulations are built here.

* The q-system has one nonnegative unknown ``q(x, A)`` per lattice pair,
  standing for the Möbius inverse of the extended rule.  Its rows are
  observed consistency, inflow-equals-outflow at unobserved proper menus,
  and normalization at the grand set when that set is unobserved.
* The p-system has one nonnegative unknown per unobserved pair, standing
  for the missing choice probabilities, plus sum-to-one rows and one
  Block-Marschak inequality per lattice pair.

Variables are ordered by (|A| descending, A, x) and rows by group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from rumcheck.core import (
    MAX_LATTICE_N,
    Pair,
    RandomChoiceRule,
    check_size,
    full_domain,
    lattice_key,
    lattice_pairs,
    members,
    popcount,
    supersets,
)
from rumcheck.lp import FeasibilityResult, LinearSystem, solve_feasibility
from rumcheck.mobius import LatticeFunction

MAX_SOLVE_N = 10

CONSISTENCY = "consistency"
INFLOW = "inflow"
NORMALIZATION = "normalization"
SUM_TO_ONE = "sum"
BLOCK_MARSCHAK = "block-marschak"
MONOTONE = "monotone"


def predicted_row_count(n: int, menus: Iterable[int] | None = None) -> int:
    """|X| 2^(|X|-1) minus (|A| - 1) summed over unobserved menus."""
    total = n * (1 << (n - 1))
    if menus is None:
        return total
    observed = set(menus)
    # sum over all nonempty A of (|A|-1) is n 2^(n-1) - (2^n - 1)
    all_excess = total - ((1 << n) - 1)
    observed_excess = sum(popcount(a) - 1 for a in observed)
    return total - (all_excess - observed_excess)


def m_row_count(n: int) -> int:
    return math.factorial(n)


@dataclass(frozen=True)
class MatrixStats:
    n: int
    m_rows: int
    n_rows: int
    n_columns: int
    predicted_n_rows: int


def matrix_stats(n: int, menus: Iterable[int] | None = None) -> MatrixStats:
    """Row and column counts of both matrices without building either."""
    check_size(n, MAX_LATTICE_N, "matrix statistics")
    menus = None if menus is None else set(menus)
    columns = n * (1 << (n - 1))
    if menus is None:
        rows = columns
    else:
        # observed pairs plus one balance/normalization row per unobserved menu
        observed_pairs = sum(popcount(a) for a in menus)
        rows = observed_pairs + ((1 << n) - 1 - len(menus))
    return MatrixStats(n, m_row_count(n), rows, columns, predicted_row_count(n, menus))


def q_index(n: int) -> dict[Pair, int]:
    return {pair: k for k, pair in enumerate(lattice_pairs(n))}


def build_q_system(p: RandomChoiceRule, inflow_everywhere: bool = False) -> LinearSystem:
    """The Möbius-slack system for ``p``.

    With ``inflow_everywhere`` the balance rows cover every proper nonempty
    menu and the normalization row is always present; that variant is the
    preference-free program whose certificates become assignment/capacity
    pairs.
    """
    n = p.n
    check_size(n, MAX_LATTICE_N, "q-system construction")
    pairs = lattice_pairs(n)
    idx = {pair: k for k, pair in enumerate(pairs)}
    ground = (1 << n) - 1
    system = LinearSystem(len(pairs), var_labels=list(pairs))
    one = Fraction(1)
    for a in p.menus:
        for x in members(a):
            coeffs = {idx[(x, b)]: one for b in supersets(a, n)}
            system.add_eq(coeffs, p.p(x, a), (CONSISTENCY, x, a))
    for a in full_domain(n):
        if a == ground or (p.observed(a) and not inflow_everywhere):
            continue
        # signs chosen so certificate multipliers on these rows read as capacities
        coeffs = {idx[(x, a)]: -one for x in members(a)}
        for y in members(ground & ~a):
            coeffs[idx[(y, a | 1 << y)]] = one
        system.add_eq(coeffs, 0, (INFLOW, a))
    if inflow_everywhere or not p.observed(ground):
        system.add_eq({idx[(x, ground)]: one for x in range(n)}, 1, (NORMALIZATION,))
    return system


def build_general_system(p: RandomChoiceRule) -> LinearSystem:
    return build_q_system(p, inflow_everywhere=True)


def q_witness(n: int, solution: Sequence[Fraction]) -> LatticeFunction:
    return LatticeFunction(n, dict(zip(lattice_pairs(n), solution)))


def hrep_feasible(p: RandomChoiceRule, extra_rows: Sequence[tuple] = ()) -> FeasibilityResult:
    """Solve the q-system; a feasible result carries ``stats["q"]``.

    ``extra_rows`` are ``(coeffs, rhs, label)`` equalities over the same
    variables (used for monotonicity).
    """
    check_size(p.n, MAX_SOLVE_N, "the q-system solver")
    system = build_q_system(p)
    for coeffs, rhs, label in extra_rows:
        system.add_eq(coeffs, rhs, label)
    res = solve_feasibility(system)
    res.stats["rows"] = system.num_rows
    if res.feasible:
        res.stats["q"] = q_witness(p.n, res.solution)
    return res


# -- p-slack system -------------------------------------------------------------

def p_variables(p: RandomChoiceRule) -> list[Pair]:
    return [(x, a) for a in full_domain(p.n) if not p.observed(a) for x in members(a)]


def mobius_expression(p: RandomChoiceRule, idx: dict[Pair, int], x: int, a: int) -> tuple[dict[int, Fraction], Fraction]:
    """q(x,A) as an affine function of the p-slack variables: (coeffs, constant)."""
    coeffs: dict[int, Fraction] = {}
    const = Fraction(0)
    base = popcount(a)
    for b in supersets(a, p.n):
        sign = 1 if (popcount(b) - base) % 2 == 0 else -1
        if p.observed(b):
            const += sign * p.p(x, b)
        else:
            coeffs[idx[(x, b)]] = Fraction(sign)
    return coeffs, const


def build_p_system(p: RandomChoiceRule) -> LinearSystem:
    n = p.n
    check_size(n, MAX_LATTICE_N, "p-system construction")
    variables = p_variables(p)
    idx = {pair: k for k, pair in enumerate(variables)}
    system = LinearSystem(len(variables), var_labels=variables)
    for a in full_domain(n):
        if not p.observed(a):
            system.add_eq({idx[(x, a)]: Fraction(1) for x in members(a)}, 1, (SUM_TO_ONE, a))
    for x, a in lattice_pairs(n):
        coeffs, const = mobius_expression(p, idx, x, a)
        system.add_ineq(coeffs, -const, (BLOCK_MARSCHAK, x, a))
    return system


def extended_rule_values(p: RandomChoiceRule, solution: Sequence[Fraction]) -> LatticeFunction:
    """Full-lattice rule from observed values plus p-slack values."""
    values = dict(p.probs)
    values.update(zip(p_variables(p), solution))
    return LatticeFunction(p.n, values)


def pslack_feasible(p: RandomChoiceRule, extra_rows: Sequence[tuple] = ()) -> FeasibilityResult:
    """Solve the p-system; a feasible result carries ``stats["extension"]``.

    ``extra_rows`` are ``(coeffs, rhs, label)`` equalities over the p-slack
    variables.
    """
    check_size(p.n, MAX_SOLVE_N, "the p-system solver")
    system = build_p_system(p)
    for coeffs, rhs, label in extra_rows:
        system.add_eq(coeffs, rhs, label)
    res = solve_feasibility(system)
    res.stats["rows"] = system.num_rows
    if res.feasible:
        res.stats["extension"] = extended_rule_values(p, res.solution)
    return res


def unobserved_menus(p: RandomChoiceRule) -> list[int]:
    return sorted((a for a in range(1, 1 << p.n) if not p.observed(a)), key=lattice_key)
