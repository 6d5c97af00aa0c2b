"""Möbius inversion of choice rules over the subset lattice.

Functions on the full lattice are stored as dense per-alternative arrays
indexed by menu bitmask; entries whose menu does not contain the
alternative are unused and kept at zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from rumcheck.core import (
    MAX_LATTICE_N,
    AlternativeSet,
    RandomChoiceRule,
    check_size,
    full_domain,
    lattice_pairs,
    members,
    validate_rcr,
)
from rumcheck.errors import IncompleteDomain, RumError

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LatticeFunction:
    """A rational function f(x, A) defined for every ``x in A``, ``A`` nonempty."""

    n: int
    values: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        check_size(self.n, MAX_LATTICE_N, "lattice functions")
        expected = self.n * (1 << (self.n - 1))
        if len(self.values) != expected:
            raise IncompleteDomain(
                f"lattice function on {self.n} alternatives needs {expected} values, "
                f"got {len(self.values)}"
            )

    def __getitem__(self, pair: tuple[int, int]) -> Fraction:
        return self.values[pair]

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int, int], Fraction]) -> LatticeFunction:
        return cls(n, {(x, a): Fraction(fn(x, a)) for x, a in lattice_pairs(n)})

    @classmethod
    def zeros(cls, n: int) -> LatticeFunction:
        return cls(n, {pair: _ZERO for pair in lattice_pairs(n)})

    def menu_total(self, a: int) -> Fraction:
        return sum((self.values[(x, a)] for x in members(a)), _ZERO)


# Aliases naming the role a lattice function plays.
MobiusFunction = LatticeFunction


def _as_arrays(f: LatticeFunction) -> list[list[Fraction]]:
    size = 1 << f.n
    arrays = []
    for x in range(f.n):
        arr = [_ZERO] * size
        bit = 1 << x
        for a in range(bit, size):
            if a & bit:
                arr[a] = f.values[(x, a)]
        arrays.append(arr)
    return arrays


def _from_arrays(n: int, arrays: list[list[Fraction]]) -> LatticeFunction:
    return LatticeFunction(n, {(x, a): arrays[x][a] for x, a in lattice_pairs(n)})


def _superset_transform(f: LatticeFunction, sign: int) -> LatticeFunction:
    # sign=+1: g(x,A) = sum_{B>=A} f(x,B); sign=-1: its inverse (alternating sum).
    n = f.n
    arrays = _as_arrays(f)
    size = 1 << n
    for x, arr in enumerate(arrays):
        for i in range(n):
            if i == x:
                continue
            bit = 1 << i
            for a in range(size):
                if not a & bit:
                    if sign > 0:
                        arr[a] += arr[a | bit]
                    else:
                        arr[a] -= arr[a | bit]
    return _from_arrays(n, arrays)


def full_rule_function(p: RandomChoiceRule) -> LatticeFunction:
    if not p.is_full_domain:
        raise IncompleteDomain(
            f"rule observes {len(p.menus)} of {(1 << p.n) - 1} menus; Möbius inverse needs all"
        )
    return LatticeFunction(p.n, dict(p.probs))


def mobius_transform(f: LatticeFunction) -> LatticeFunction:
    """q(x,A) = sum over B containing A of (-1)^|B - A| f(x,B)."""
    return _superset_transform(f, -1)


def mobius_inverse(p: RandomChoiceRule | LatticeFunction) -> MobiusFunction:
    """Block-Marschak polynomials of a full-domain choice rule."""
    if isinstance(p, RandomChoiceRule):
        p = full_rule_function(p)
    return mobius_transform(p)


def accumulate(q: MobiusFunction) -> LatticeFunction:
    """f(x,A) = sum over B containing A of q(x,B); inverts :func:`mobius_inverse`."""
    return _superset_transform(q, +1)


def to_full_rule(f: LatticeFunction, alternatives: AlternativeSet | None = None) -> RandomChoiceRule:
    """Validate a lattice function as a full-domain random choice rule."""
    if alternatives is None:
        alternatives = AlternativeSet.of_size(f.n)
    raw = {a: {x: f.values[(x, a)] for x in members(a)} for a in full_domain(f.n)}
    return validate_rcr(raw, alternatives)


def is_full_rule(f: LatticeFunction) -> bool:
    try:
        to_full_rule(f)
    except RumError:
        return False
    return True


def is_set_constant(f: LatticeFunction) -> bool:
    totals = {f.menu_total(a) for a in full_domain(f.n)}
    return len(totals) <= 1


def inflow_outflow_gap(q: LatticeFunction, a: int) -> Fraction:
    """sum_{x in A} q(x,A) minus sum_{y not in A} q(y, A+y)."""
    outside = members(((1 << q.n) - 1) & ~a)
    return q.menu_total(a) - sum((q.values[(y, a | 1 << y)] for y in outside), _ZERO)


def satisfies_inflow_outflow(q: LatticeFunction) -> bool:
    ground = (1 << q.n) - 1
    return all(inflow_outflow_gap(q, a) == 0 for a in range(1, ground))


@dataclass(frozen=True)
class QtopVerdict:
    ok: bool
    failed: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def satisfies_qtop(q: MobiusFunction) -> QtopVerdict:
    """Decide whether ``q`` is the Möbius inverse of some full-domain choice rule.

    Conditions are checked in the fixed order 2, 1, 3 and the first failure
    is reported:

    1. inflow equals outflow at every proper nonempty menu,
    2. the top-set values sum to one,
    3. the accumulated function is nonnegative.
    """
    n = q.n
    ground = (1 << n) - 1
    top = q.menu_total(ground)
    if top != 1:
        return QtopVerdict(False, 2, f"sum_x q(x,X) = {top}")
    for a in range(1, ground):
        gap = inflow_outflow_gap(q, a)
        if gap != 0:
            return QtopVerdict(False, 1, f"inflow/outflow gap {gap} at menu {a:#b}")
    f = accumulate(q)
    for pair, v in f.values.items():
        if v < 0:
            return QtopVerdict(False, 3, f"accumulated value {v} < 0 at {pair}")
    return QtopVerdict(True)
