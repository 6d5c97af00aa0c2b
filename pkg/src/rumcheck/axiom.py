"""Assignment/capacity characterization of rationalizability.

An *assignment* puts a rational weight ``a(x, A)`` on each observed choice
event; a *capacity* is any set function with ``c(empty) = 0``.  The pair is
*feasible* for ``p`` when ``sum p(x,A) a(x,A) <= c(X)`` and *locally
feasible* when, for every ``x in A``, the assignment mass on ``x`` over
observed menus inside ``A`` is at most ``c(A) - c(A - x)``.  A rule is
rationalizable exactly when every locally feasible pair is feasible; when it
is not, an infeasibility certificate of the all-sets q-system converts into a
locally feasible pair that is infeasible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from rumcheck.core import RandomChoiceRule, check_size, lattice_pairs, members, popcount
from rumcheck.errors import DomainMismatch, InvalidCertificate
from rumcheck.hrep import CONSISTENCY, INFLOW, NORMALIZATION, build_general_system, hrep_feasible
from rumcheck.lp import FarkasCertificate, LinearSystem, solve_feasibility, verify_certificate

MAX_VERIFY_N = 5

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Capacity:
    n: int
    values: Mapping[int, Fraction]

    def __post_init__(self):
        if self.values.get(0, _ZERO) != 0:
            raise ValueError("a capacity must vanish on the empty set")

    def __call__(self, mask: int) -> Fraction:
        return self.values.get(mask, _ZERO)


@dataclass(frozen=True)
class Assignment:
    values: Mapping[tuple[int, int], Fraction]

    def __call__(self, x: int, menu: int) -> Fraction:
        return self.values[(x, menu)]

    def scaled(self, lam: Fraction) -> Assignment:
        return Assignment({k: lam * v for k, v in self.values.items()})


def scale_capacity(c: Capacity, lam: Fraction) -> Capacity:
    return Capacity(c.n, {k: lam * v for k, v in c.values.items()})


def is_feasible_pair(a: Assignment, c: Capacity, p: RandomChoiceRule) -> bool:
    if set(a.values) != set(p.pairs()):
        raise DomainMismatch("assignment and choice rule are defined on different pairs")
    lhs = sum((p.p(x, m) * v for (x, m), v in a.values.items()), _ZERO)
    return lhs <= c((1 << c.n) - 1)


def local_violations(a: Assignment, c: Capacity, n: int | None = None) -> list[tuple[int, int]]:
    """Lattice pairs (x, A) where the local inequality fails."""
    n = c.n if n is None else n
    by_alt: dict[int, list[tuple[int, Fraction]]] = {}
    for (x, m), v in a.values.items():
        by_alt.setdefault(x, []).append((m, v))
    bad = []
    for x, big in lattice_pairs(n):
        mass = sum((v for m, v in by_alt.get(x, ()) if m & ~big == 0), _ZERO)
        if mass > c(big) - c(big & ~(1 << x)):
            bad.append((x, big))
    return bad


def is_locally_feasible_pair(a: Assignment, c: Capacity, n: int | None = None) -> bool:
    return not local_violations(a, c, n)


def certificate_to_pair(r: FarkasCertificate, system: LinearSystem) -> tuple[Assignment, Capacity]:
    """Read an (assignment, capacity) pair off a certificate of the all-sets q-system.

    Consistency multipliers become the assignment, balance-row multipliers
    become capacities of proper menus, and the normalization multiplier,
    negated, becomes the capacity of the grand set.
    """
    if len(r.r) != system.num_rows or not verify_certificate(system, r):
        raise InvalidCertificate("certificate does not verify against the system")
    n = _ground_size(system)
    ground = (1 << n) - 1
    assignment: dict[tuple[int, int], Fraction] = {}
    capacity: dict[int, Fraction] = {0: _ZERO}
    have_norm = False
    for label, value in zip(system.row_labels, r.r):
        kind = label[0]
        if kind == CONSISTENCY:
            assignment[(label[1], label[2])] = value
        elif kind == INFLOW:
            capacity[label[1]] = value
        elif kind == NORMALIZATION:
            capacity[ground] = -value
            have_norm = True
        else:
            raise InvalidCertificate(f"unexpected row {label!r} in an all-sets system")
    if not have_norm or len(capacity) != (1 << n):
        raise InvalidCertificate("system lacks balance rows at some menus or the normalization row")
    return Assignment(assignment), Capacity(n, capacity)


def _ground_size(system: LinearSystem) -> int:
    # variables are the lattice pairs; n 2^(n-1) of them
    n = 1
    while n * (1 << (n - 1)) < system.num_vars:
        n += 1
    if n * (1 << (n - 1)) != system.num_vars:
        raise InvalidCertificate("system is not indexed by a full lattice")
    return n


def sample_pair(p: RandomChoiceRule, rng: random.Random) -> tuple[Assignment, Capacity]:
    """Random assignment on the half-integer grid in [-2, 2], with the
    smallest capacity that makes the pair locally feasible.

    Capacities are fixed menu by menu in increasing size, each set to the
    largest requirement ``c(A - x) + mass(x, A)`` over its members.
    """
    n = p.n
    grid = [Fraction(k, 2) for k in range(-4, 5)]
    a = {pair: rng.choice(grid) for pair in p.pairs()}
    by_alt: dict[int, list[tuple[int, Fraction]]] = {}
    for (x, m), v in a.items():
        by_alt.setdefault(x, []).append((m, v))
    c: dict[int, Fraction] = {0: _ZERO}
    for big in sorted(range(1, 1 << n), key=lambda m: (popcount(m), m)):
        need = None
        for x in members(big):
            mass = sum((v for m, v in by_alt.get(x, ()) if m & ~big == 0), _ZERO)
            req = c[big & ~(1 << x)] + mass
            need = req if need is None else max(need, req)
        c[big] = need
    return Assignment(a), Capacity(n, c)


@dataclass
class RummeReport:
    rationalizable: bool
    trials: int = 0
    feasible_trials: int = 0
    counterexamples: list = field(default_factory=list)
    witness: tuple[Assignment, Capacity] | None = None
    witness_locally_feasible: bool | None = None
    witness_feasible: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """Whether the outcome agrees with the characterization."""
        if self.rationalizable:
            return not self.counterexamples
        return bool(self.witness_locally_feasible) and self.witness_feasible is False


def verify_rumme(p: RandomChoiceRule, trials: int = 100, rng_seed: int = 0) -> RummeReport:
    """Exercise the characterization on ``p`` from whichever side applies."""
    check_size(p.n, MAX_VERIFY_N, "the assignment/capacity verifier")
    rationalizable = hrep_feasible(p).feasible
    report = RummeReport(rationalizable)
    if not p.menus:
        report.notes.append("no observed menus: the feasibility left-hand side is identically 0")
    if rationalizable:
        rng = random.Random(rng_seed)
        for _ in range(trials):
            a, c = sample_pair(p, rng)
            report.trials += 1
            if is_feasible_pair(a, c, p):
                report.feasible_trials += 1
            else:
                report.counterexamples.append((a, c))
        return report
    system = build_general_system(p)
    res = solve_feasibility(system)
    if res.feasible:
        raise RuntimeError("all-sets system feasible although the q-system is not")
    a, c = certificate_to_pair(res.certificate, system)
    report.witness = (a, c)
    report.witness_locally_feasible = is_locally_feasible_pair(a, c)
    report.witness_feasible = is_feasible_pair(a, c, p)
    return report
