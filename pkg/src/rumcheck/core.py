"""Alternatives, menus, random choice rules and linear orders.

Menus are plain ``int`` bitmasks over alternative indices.  Every
collection of menus is kept in *lattice order*: larger menus first, ties
broken by bitmask value.  All probabilities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

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

MAX_LATTICE_N = 20
MAX_ORDER_N = 8

LinearOrder = tuple  # permutation of indices, best first
Pair = tuple  # (alternative index, menu bitmask)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def size_limit(default: int) -> int:
    """Return the active size guard; ``RUM_MAX_N`` overrides every default."""
    override = os.environ.get("RUM_MAX_N")
    if override:
        return int(override)
    return default


def check_size(n: int, default: int, what: str) -> None:
    limit = size_limit(default)
    if n > limit:
        raise TooLarge(f"{what} supports at most {limit} alternatives, got {n}")


def to_rational(value) -> Fraction:
    """Parse an exact rational: Fraction, int, or a ``"p/q"`` / ``"p"`` string.

    Floats and decimal strings are rejected.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ParseError(f"not an exact rational literal: {value!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ParseError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise ParseError(f"not an exact rational: {value!r} ({type(value).__name__})")


# -- bitmask helpers ---------------------------------------------------------

def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def lattice_key(mask: int) -> tuple[int, int]:
    return (-popcount(mask), mask)


def full_domain(n: int) -> tuple[int, ...]:
    """All nonempty subsets of an ``n``-element set, in lattice order."""
    return tuple(sorted(range(1, 1 << n), key=lattice_key))


def supersets(mask: int, n: int) -> Iterator[int]:
    """Yield every superset of ``mask`` inside the ground set, ``mask`` included."""
    rest = ((1 << n) - 1) & ~mask
    sub = rest
    while True:
        yield mask | sub
        if sub == 0:
            return
        sub = (sub - 1) & rest


def lattice_pairs(n: int) -> list[Pair]:
    """Every (x, A) with x in A, A a nonempty subset, sorted by (|A| desc, A, x)."""
    return [(x, a) for a in full_domain(n) for x in members(a)]


# -- ground types ------------------------------------------------------------

@dataclass(frozen=True)
class AlternativeSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(s) for s in self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate alternative labels: {names}")
        if not 1 <= len(names) <= MAX_LATTICE_N:
            raise TooLarge(f"need 1..{MAX_LATTICE_N} alternatives, got {len(names)}")

    @classmethod
    def of_size(cls, n: int) -> AlternativeSet:
        if n <= 26:
            return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))
        return cls(tuple(f"x{i}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def ground(self) -> int:
        return (1 << self.n) - 1

    def index(self, label) -> int:
        try:
            return self.names.index(str(label))
        except ValueError:
            raise UnknownAlternative(f"unknown alternative {label!r}") from None

    def menu(self, labels: Iterable) -> int:
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def labels(self, mask: int) -> list[str]:
        return [self.names[i] for i in members(mask)]

    def menu_str(self, mask: int) -> str:
        return "{" + ",".join(self.labels(mask)) + "}"


@dataclass(frozen=True)
class RandomChoiceRule:
    """Choice probabilities ``p(x, A)`` for every ``x in A``, ``A`` in ``menus``.

    Construct through :func:`validate_rcr` or :func:`induce_rcr`; the
    constructor itself does not re-check the probability axioms.
    """

    alternatives: AlternativeSet
    menus: tuple[int, ...]
    probs: Mapping[Pair, Fraction] = field(repr=False)

    @property
    def n(self) -> int:
        return self.alternatives.n

    def p(self, x: int, menu: int) -> Fraction:
        return self.probs[(x, menu)]

    def pairs(self) -> list[Pair]:
        """Observed pairs in lattice order."""
        return [(x, a) for a in self.menus for x in members(a)]

    def observed(self, menu: int) -> bool:
        return menu in self._menu_set

    @cached_property
    def _menu_set(self) -> frozenset[int]:
        return frozenset(self.menus)

    @property
    def is_full_domain(self) -> bool:
        return len(self.menus) == (1 << self.n) - 1

    def as_raw(self) -> dict[tuple[str, ...], dict[str, Fraction]]:
        names = self.alternatives.names
        return {
            tuple(self.alternatives.labels(a)): {names[x]: self.probs[(x, a)] for x in members(a)}
            for a in self.menus
        }


@dataclass(frozen=True)
class PreferenceDistribution:
    """Sparse weights on linear orders.

    ``relaxed=True`` marks a nonnegative vector that need not sum to one.
    """

    weights: Mapping[LinearOrder, Fraction]
    relaxed: bool = False

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def support(self) -> list[LinearOrder]:
        return sorted(o for o, w in self.weights.items() if w != 0)

    def normalized(self) -> PreferenceDistribution:
        t = self.total()
        if t <= 0:
            raise NotADistribution("cannot normalize a zero-mass vector")
        return PreferenceDistribution({o: w / t for o, w in self.weights.items()})


# -- operations ----------------------------------------------------------------

def _menu_mask(key, alternatives: AlternativeSet) -> int:
    if isinstance(key, int) and not isinstance(key, bool):
        if key & ~alternatives.ground:
            raise UnknownAlternative(f"menu mask {key:#b} outside the ground set")
        return key
    if isinstance(key, str):
        key = [key]
    return alternatives.menu(key)


def validate_rcr(raw: Mapping, alternatives: AlternativeSet) -> RandomChoiceRule:
    """Check and freeze observed choice probabilities.

    ``raw`` maps each menu (iterable of labels, or a bitmask) to a mapping
    from label to probability.  Members of a menu that are not keyed get
    probability zero.
    """
    probs: dict[Pair, Fraction] = {}
    seen: set[int] = set()
    for key, dist in raw.items():
        mask = _menu_mask(key, alternatives)
        if mask == 0:
            raise EmptyMenu("menus must be nonempty")
        if mask in seen:
            raise DuplicateMenu(f"menu {alternatives.menu_str(mask)} listed twice")
        seen.add(mask)
        row = {x: Fraction(0) for x in members(mask)}
        for label, value in dist.items():
            x = alternatives.index(label) if not isinstance(label, int) else label
            if not mask >> x & 1:
                raise UnknownAlternative(
                    f"{alternatives.names[x]!r} is not in menu {alternatives.menu_str(mask)}"
                )
            row[x] = to_rational(value)
        for x, v in row.items():
            if v < 0:
                raise NegativeProbability(
                    f"p({alternatives.names[x]}, {alternatives.menu_str(mask)}) = {v} < 0"
                )
        total = sum(row.values(), Fraction(0))
        if total != 1:
            raise SumNotOne(alternatives.menu_str(mask), total)
        for x, v in row.items():
            probs[(x, mask)] = v
    menus = tuple(sorted(seen, key=lattice_key))
    return RandomChoiceRule(alternatives, menus, probs)


def enumerate_orders(n: int) -> list[LinearOrder]:
    """All ``n!`` linear orders on ``range(n)``, best-first, lexicographic."""
    check_size(n, MAX_ORDER_N, "order enumeration")
    if n < 1:
        raise TooLarge(f"need at least one alternative, got {n}")
    return list(itertools.permutations(range(n)))


def maximal(order: Sequence[int], menu: int) -> int:
    if menu == 0:
        raise EmptyMenu("maximal element of the empty menu")
    for x in order:
        if menu >> x & 1:
            return x
    raise EmptyMenu(f"order {tuple(order)} ranks no member of menu {menu:#b}")


def induce_rcr(
    nu: PreferenceDistribution,
    menus: Iterable[int],
    alternatives: AlternativeSet,
) -> RandomChoiceRule:
    """The choice rule generated by drawing an order from ``nu`` and picking its top."""
    if any(w < 0 for w in nu.weights.values()) or nu.total() != 1:
        raise NotADistribution("weights must be nonnegative and sum to one")
    menus = tuple(sorted(set(menus), key=lattice_key))
    probs: dict[Pair, Fraction] = {(x, a): Fraction(0) for a in menus for x in members(a)}
    for order, w in nu.weights.items():
        if w == 0:
            continue
        for a in menus:
            probs[(maximal(order, a), a)] += w
    return RandomChoiceRule(alternatives, menus, probs)
