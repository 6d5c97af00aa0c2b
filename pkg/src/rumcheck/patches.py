"""Cut two-good linear budgets into patches at their crossing points.

Each budget ``price . g = wealth`` with ``g >= 0`` is a segment from its
point on the second-good axis to its point on the first-good axis.  Crossing
points with other budgets split it into open sub-segments (patches); the
crossing points themselves carry no choice.  Patch ``P`` dominates ``Q`` when
every point of the closure of ``Q`` is weakly below some point of the closure
of ``P``.  Only generic arrangements are handled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from rumcheck.core import to_rational
from rumcheck.errors import DegenerateArrangement, WrongDimension
from rumcheck.monotone import PartialOrder

Point = tuple[Fraction, Fraction]

ABOVE = "above"
ON = "on"
BELOW = "below"


@dataclass(frozen=True)
class Budget:
    price: tuple[Fraction, Fraction]
    wealth: Fraction
    patch_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.price) != 2:
            raise WrongDimension(f"only two goods are supported, got {len(self.price)} prices")
        price = tuple(to_rational(v) for v in self.price)
        wealth = to_rational(self.wealth)
        if min(price) <= 0 or wealth <= 0:
            raise ValueError("prices and wealth must be positive")
        object.__setattr__(self, "price", price)
        object.__setattr__(self, "wealth", wealth)

    def top(self) -> Point:
        return (Fraction(0), self.wealth / self.price[1])

    def bottom(self) -> Point:
        return (self.wealth / self.price[0], Fraction(0))

    def excess(self, g: Point) -> Fraction:
        return self.price[0] * g[0] + self.price[1] * g[1] - self.wealth


@dataclass(frozen=True)
class Patch:
    label: str
    budget: int
    start: Point  # closer to the second-good axis
    end: Point
    signs: tuple[tuple[int, str], ...]  # (other budget, above/below)

    def midpoint(self) -> Point:
        return ((self.start[0] + self.end[0]) / 2, (self.start[1] + self.end[1]) / 2)


@dataclass(frozen=True)
class PatchArrangement:
    patches: tuple[Patch, ...]
    dominance: PartialOrder

    @property
    def labels(self) -> list[str]:
        return [pt.label for pt in self.patches]

    def dominance_labels(self) -> list[tuple[str, str]]:
        names = self.labels
        return sorted((names[a], names[b]) for a, b in self.dominance.pairs)


def _crossing(b1: Budget, b2: Budget) -> Point | None:
    (p1, p2), w = b1.price, b1.wealth
    (q1, q2), v = b2.price, b2.wealth
    det = p1 * q2 - p2 * q1
    if det == 0:
        if p1 * v == q1 * w:
            raise DegenerateArrangement("two budgets coincide")
        return None
    g1 = (w * q2 - p2 * v) / det
    g2 = (p1 * v - w * q1) / det
    if g1 < 0 or g2 < 0:
        return None
    if g1 == 0 or g2 == 0:
        raise DegenerateArrangement(f"budgets cross on an axis at {(g1, g2)}")
    return (g1, g2)


def _weakly_below(z: Point, u: Point, v: Point) -> bool:
    """Is ``z <= lam*u + (1-lam)*v`` for some lam in [0, 1]?"""
    lo, hi = Fraction(0), Fraction(1)
    for k in range(2):
        slope = u[k] - v[k]
        need = z[k] - v[k]
        if slope == 0:
            if need > 0:
                return False
        elif slope > 0:
            lo = max(lo, need / slope)
        else:
            hi = min(hi, need / slope)
    return lo <= hi


def patch_dominates(p: Patch, q: Patch) -> bool:
    return p is not q and all(_weakly_below(z, p.start, p.end) for z in (q.start, q.end))


def build_patches_2goods(budgets: Sequence[Budget]) -> PatchArrangement:
    if not budgets:
        raise ValueError("need at least one budget")
    cuts: list[list[Point]] = [[] for _ in budgets]
    for i in range(len(budgets)):
        for j in range(i + 1, len(budgets)):
            pt = _crossing(budgets[i], budgets[j])
            if pt is None:
                continue
            for k in (i, j):
                if pt in cuts[k]:
                    raise DegenerateArrangement(f"three or more budgets meet at {pt}")
                cuts[k].append(pt)
    patches: list[Patch] = []
    for i, b in enumerate(budgets):
        points = [b.top()] + sorted(cuts[i]) + [b.bottom()]
        names = b.patch_names
        if names is not None and len(names) != len(points) - 1:
            raise ValueError(
                f"budget {i + 1} has {len(points) - 1} patches but {len(names)} names were given"
            )
        for k in range(len(points) - 1):
            label = names[k] if names is not None else f"B{i + 1}.{k + 1}"
            start, end = points[k], points[k + 1]
            mid = ((start[0] + end[0]) / 2, (start[1] + end[1]) / 2)
            signs = []
            for j, other in enumerate(budgets):
                if j == i:
                    continue
                e = other.excess(mid)
                signs.append((j, ABOVE if e > 0 else BELOW if e < 0 else ON))
            patches.append(Patch(label, i, start, end, tuple(signs)))
    labels = [pt.label for pt in patches]
    if len(set(labels)) != len(labels):
        raise ValueError(f"patch labels must be unique: {labels}")
    pairs = [
        (a, b)
        for a, pa in enumerate(patches)
        for b, pb in enumerate(patches)
        if a != b and patch_dominates(pa, pb)
    ]
    return PatchArrangement(tuple(patches), PartialOrder.from_pairs(len(patches), pairs))
