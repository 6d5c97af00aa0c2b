"""Vertex-representation tests: the order-by-pair incidence matrix and its LPs.

The matrix has one row per linear order and one column per observed pair
``(x, A)``; the entry is 1 when ``x`` is the top of ``A`` under the order.
A choice rule is rationalizable iff some ``nu >= 0`` has ``nu^T M = p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from rumcheck.core import (
    MAX_ORDER_N,
    LinearOrder,
    Pair,
    PreferenceDistribution,
    RandomChoiceRule,
    check_size,
    enumerate_orders,
    lattice_key,
    maximal,
    members,
)
from rumcheck.lp import (
    FarkasCertificate,
    FeasibilityResult,
    LinearSystem,
    minimize,
    solve_feasibility,
)

ARSP_MAX_N = 6
ARSP_MAX_LEN = 4


@dataclass(frozen=True)
class VRepMatrix:
    orders: tuple[LinearOrder, ...]
    pairs: tuple[Pair, ...]
    tops: tuple[tuple[int, ...], ...]  # per order: column indices holding a 1

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.orders), len(self.pairs))

    def entry(self, row: int, col: int) -> int:
        return int(col in self._row_sets[row])

    @cached_property
    def _row_sets(self) -> list[frozenset[int]]:
        return [frozenset(t) for t in self.tops]

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int8)
        for i, cols in enumerate(self.tops):
            out[i, list(cols)] = 1
        return out


def _columns(menus: Sequence[int]) -> list[Pair]:
    return [(x, a) for a in sorted(set(menus), key=lattice_key) for x in members(a)]


def order_column(order: LinearOrder, pairs: Sequence[Pair], index: dict[Pair, int] | None = None) -> tuple[int, ...]:
    """Column indices of ``pairs`` that ``order`` rationalizes."""
    if index is None:
        index = {pair: k for k, pair in enumerate(pairs)}
    menus = dict.fromkeys(a for _, a in pairs)
    return tuple(sorted(index[(maximal(order, a), a)] for a in menus))


def build_m_matrix(n: int, menus: Sequence[int], orders: Sequence[LinearOrder] | None = None) -> VRepMatrix:
    check_size(n, MAX_ORDER_N, "the order-incidence matrix")
    if orders is None:
        orders = enumerate_orders(n)
    pairs = _columns(menus)
    index = {pair: k for k, pair in enumerate(pairs)}
    tops = tuple(order_column(o, pairs, index) for o in orders)
    return VRepMatrix(tuple(orders), tuple(pairs), tops)


def vrep_system(p: RandomChoiceRule, orders: Sequence[LinearOrder] | None = None) -> LinearSystem:
    """``nu >= 0`` with ``nu^T M = p``; a sum-to-one row only when nothing is observed."""
    m = build_m_matrix(p.n, p.menus, orders)
    system = LinearSystem(len(m.orders), var_labels=list(m.orders))
    rows: list[dict[int, Fraction]] = [{} for _ in m.pairs]
    for j, cols in enumerate(m.tops):
        for c in cols:
            rows[c][j] = Fraction(1)
    for (x, a), coeffs in zip(m.pairs, rows):
        system.add_eq(coeffs, p.p(x, a), ("pair", x, a))
    if not m.pairs:
        system.add_eq({j: Fraction(1) for j in range(len(m.orders))}, 1, ("normalization",))
    return system


def _distribution(orders: Sequence[LinearOrder], nu: Sequence[Fraction]) -> PreferenceDistribution:
    return PreferenceDistribution({o: w for o, w in zip(orders, nu) if w != 0})


def vrep_feasible(p: RandomChoiceRule, orders: Sequence[LinearOrder] | None = None) -> FeasibilityResult:
    """Decide ``exists nu >= 0: nu^T M = p``.

    ``orders`` restricts the rows of ``M`` (all orders by default).  A feasible
    result carries ``stats["distribution"]``.
    """
    if orders is None:
        orders = enumerate_orders(p.n)
    system = vrep_system(p, orders)
    res = solve_feasibility(system)
    if res.feasible:
        res.stats["distribution"] = _distribution(orders, res.solution)
    return res


def linf_statistic(p: RandomChoiceRule) -> Fraction:
    """min over nu >= 0 of max |(nu^T M - p)(x,A)|, solved exactly.

    The bound is written as ``t = top + u`` with ``top`` the largest observed
    probability and ``u`` free, so ``nu = 0, u = 0`` is a starting vertex and
    the solver needs no phase-one work.
    """
    m = build_m_matrix(p.n, p.menus)
    if not m.pairs:
        return Fraction(0)
    k = len(m.orders)
    u = k
    top = max(p.p(x, a) for x, a in m.pairs)
    system = LinearSystem(k + 1, nonneg=[True] * k + [False], var_labels=list(m.orders) + ["u"])
    rows: list[dict[int, Fraction]] = [{} for _ in m.pairs]
    for j, cols in enumerate(m.tops):
        for c in cols:
            rows[c][j] = Fraction(1)
    for (x, a), coeffs in zip(m.pairs, rows):
        target = p.p(x, a)
        upper = {j: -c for j, c in coeffs.items()}
        upper[u] = Fraction(1)
        system.add_ineq(upper, -target - top, ("upper", x, a))
        lower = dict(coeffs)
        lower[u] = Fraction(1)
        system.add_ineq(lower, target - top, ("lower", x, a))
    res = minimize(system, {u: Fraction(1)})
    if res.status != "optimal":
        raise RuntimeError(f"L-infinity LP ended with status {res.status}")
    return res.value + top


def column_generation(
    p: RandomChoiceRule,
    seed_orders: Sequence[LinearOrder],
    orders: Sequence[LinearOrder] | None = None,
    max_iterations: int | None = None,
) -> FeasibilityResult:
    """Restricted-master loop over orders with exhaustive first-violator pricing.

    The restricted system is solved over the current orders; when it is
    infeasible its certificate ``r`` is priced against every excluded order
    in lexicographic sequence and the first order with ``r . m_order > 0``
    joins.  When no order prices out, ``r`` certifies the full system.

    ``orders`` is the universe to price over (all ``n!`` orders by default);
    the returned solution is indexed by it.  ``stats`` records ``iterations``
    and the ``added`` orders.
    """
    if not seed_orders:
        raise ValueError("column generation needs at least one seed order")
    all_orders = list(orders) if orders is not None else enumerate_orders(p.n)
    position = {o: i for i, o in enumerate(all_orders)}
    active = list(dict.fromkeys(tuple(o) for o in seed_orders))
    for o in active:
        if o not in position:
            raise ValueError(f"seed {o} is not among the orders being priced")
    pairs = _columns(p.menus)
    index = {pair: k for k, pair in enumerate(pairs)}
    columns = {o: order_column(o, pairs, index) for o in all_orders}
    added: list[LinearOrder] = []
    iterations = 0
    while True:
        iterations += 1
        res = solve_feasibility(vrep_system(p, active))
        if res.feasible:
            full = [Fraction(0)] * len(all_orders)
            for o, w in zip(active, res.solution):
                full[position[o]] = w
            stats = {
                "iterations": iterations,
                "added": added,
                "distribution": _distribution(active, res.solution),
            }
            return FeasibilityResult(solution=tuple(full), stats=stats)
        r = res.certificate.r
        in_active = set(active)
        entering = None
        for o in all_orders:
            if o in in_active:
                continue
            if not pairs:
                price = r[0]  # only the normalization row
            else:
                price = sum((r[c] for c in columns[o]), Fraction(0))
            if price > 0:
                entering = o
                break
        if entering is None:
            cert = FarkasCertificate(res.certificate.r, res.certificate.labels)
            return FeasibilityResult(certificate=cert, stats={"iterations": iterations, "added": added})
        active.append(entering)
        added.append(entering)
        if max_iterations is not None and iterations >= max_iterations:
            raise RuntimeError("column generation hit its iteration cap")


@dataclass(frozen=True)
class ArspViolation:
    sequence: tuple[Pair, ...]
    lhs: Fraction
    rhs: int


def arsp_search(p: RandomChoiceRule, max_len: int) -> ArspViolation | None:
    """Search multisets of observed pairs, shortest first, for
    ``sum p(x_i, A_i) > max over orders of #{i : x_i top of A_i}``.
    """
    check_size(p.n, ARSP_MAX_N, "sequence search")
    if max_len > ARSP_MAX_LEN:
        raise ValueError(f"sequence length capped at {ARSP_MAX_LEN}, got {max_len}")
    orders = enumerate_orders(p.n)
    pairs = p.pairs()
    hits = np.zeros((len(pairs), len(orders)), dtype=np.int64)
    for j, o in enumerate(orders):
        for i, (x, a) in enumerate(pairs):
            if maximal(o, a) == x:
                hits[i, j] = 1
    probs = [p.p(x, a) for x, a in pairs]
    for length in range(1, max_len + 1):
        for combo in itertools.combinations_with_replacement(range(len(pairs)), length):
            lhs = sum((probs[i] for i in combo), Fraction(0))
            if lhs <= 1:
                continue  # rhs >= 1: ranking x_1 first rationalizes pair 1
            rhs = int(hits[list(combo)].sum(axis=0).max())
            if lhs > rhs:
                return ArspViolation(tuple(pairs[i] for i in combo), lhs, rhs)
    return None
