"""Random utility with utilities monotone in a dominance partial order."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from rumcheck.core import (
    MAX_ORDER_N,
    LinearOrder,
    RandomChoiceRule,
    check_size,
    enumerate_orders,
    full_domain,
    members,
)
from rumcheck.errors import CyclicOrder
from rumcheck.hrep import (
    MONOTONE,
    hrep_feasible,
    mobius_expression,
    p_variables,
    pslack_feasible,
    q_index,
)
from rumcheck.lp import FeasibilityResult
from rumcheck.vrep import vrep_feasible


@dataclass(frozen=True)
class PartialOrder:
    """Strict dominance on ``range(n)``; ``(x, y)`` in ``pairs`` means x dominates y."""

    n: int
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> PartialOrder:
        """Transitively close ``pairs``; raise :class:`CyclicOrder` on a cycle."""
        reach = [0] * n
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"pair {(x, y)} outside range({n})")
            reach[x] |= 1 << y
        # Warshall over bitsets
        for k in range(n):
            bit = 1 << k
            for i in range(n):
                if reach[i] & bit:
                    reach[i] |= reach[k]
        closed = set()
        for x in range(n):
            if reach[x] >> x & 1:
                raise CyclicOrder(f"dominance relation has a cycle through {x}")
            closed.update((x, y) for y in members(reach[x]))
        return cls(n, frozenset(closed))

    @classmethod
    def empty(cls, n: int) -> PartialOrder:
        return cls(n, frozenset())

    def dominates(self, x: int, y: int) -> bool:
        return (x, y) in self.pairs

    def upper_mask(self, x: int) -> int:
        mask = 0
        for a, b in self.pairs:
            if b == x:
                mask |= 1 << a
        return mask


def upper_set(order: PartialOrder, x: int) -> frozenset[int]:
    """Alternatives that dominate ``x``."""
    return frozenset(a for a, b in order.pairs if b == x)


def is_monotone_rcr(p: RandomChoiceRule, order: PartialOrder) -> bool:
    for a in p.menus:
        for x, y in order.pairs:
            if a >> x & 1 and a >> y & 1 and p.p(y, a) != 0:
                return False
    return True


def dominated_pairs(order: PartialOrder, n: int) -> list[tuple[int, int]]:
    """Lattice pairs (x, A) where A contains something dominating x."""
    out = []
    for x in range(n):
        up = order.upper_mask(x)
        if up:
            out.extend((x, a) for a in full_domain(n) if a >> x & 1 and a & up)
    return out


def monotone_constraint_rows(order: PartialOrder, n: int) -> list[tuple[dict[int, Fraction], Fraction, tuple]]:
    """One zero-sum row over q(x, A) per dominated alternative ``x``.

    Rows are ``(coeffs, rhs, label)`` indexed like the q-system's variables.
    """
    idx = q_index(n)
    rows = []
    for x in range(n):
        up = order.upper_mask(x)
        if not up:
            continue
        coeffs = {idx[(x, a)]: Fraction(1) for a in full_domain(n) if a >> x & 1 and a & up}
        rows.append((coeffs, Fraction(0), (MONOTONE, x)))
    return rows


def monotone_pslack_rows(p: RandomChoiceRule, order: PartialOrder) -> list[tuple[dict[int, Fraction], Fraction, tuple]]:
    """The same constraints written over the p-slack variables."""
    idx = {pair: k for k, pair in enumerate(p_variables(p))}
    rows = []
    for x in range(p.n):
        up = order.upper_mask(x)
        if not up:
            continue
        coeffs: dict[int, Fraction] = {}
        const = Fraction(0)
        for a in full_domain(p.n):
            if a >> x & 1 and a & up:
                c, k = mobius_expression(p, idx, x, a)
                const += k
                for j, v in c.items():
                    coeffs[j] = coeffs.get(j, Fraction(0)) + v
        coeffs = {j: v for j, v in coeffs.items() if v != 0}
        rows.append((coeffs, -const, (MONOTONE, x)))
    return rows


def monotone_feasible(p: RandomChoiceRule, order: PartialOrder, method: str = "hrep") -> FeasibilityResult:
    """Rationalizability by utilities respecting ``order``.

    ``method`` is ``"hrep"`` (q-system plus monotonicity rows) or
    ``"pslack"`` (p-system plus the same rows rewritten over p-slacks).
    """
    if order.n != p.n:
        raise ValueError(f"partial order on {order.n} alternatives, rule on {p.n}")
    if method == "hrep":
        return hrep_feasible(p, monotone_constraint_rows(order, p.n))
    if method == "pslack":
        return pslack_feasible(p, monotone_pslack_rows(p, order))
    raise ValueError(f"unknown method {method!r}")


def monotone_orders(order: PartialOrder, n: int) -> list[LinearOrder]:
    """Linear extensions of ``order``, in lexicographic sequence."""
    check_size(n, MAX_ORDER_N, "linear extension enumeration")
    return [o for o in enumerate_orders(n) if order_respects(o, order)]


def restricted_orders_check(p: RandomChoiceRule, order: PartialOrder) -> FeasibilityResult:
    """Vertex-representation test over monotone orders only."""
    return vrep_feasible(p, monotone_orders(order, p.n))


def order_respects(o: Sequence[int], order: PartialOrder) -> bool:
    rank = {x: i for i, x in enumerate(o)}
    return all(rank[x] < rank[y] for x, y in order.pairs)
