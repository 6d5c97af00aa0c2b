"""Exact rational linear feasibility with Farkas certificates.

A :class:`LinearSystem` holds equality rows ``a.v = b``, inequality rows
``a.v >= b`` and a per-variable nonnegativity flag.  Rows are numbered
equalities first, then inequalities; certificates use that numbering.

Certificate convention: ``r`` proves infeasibility when

* ``r_i >= 0`` on every inequality row (equality multipliers are free),
* ``sum_i r_i a_ij <= 0`` for every nonnegative variable ``j``,
* ``sum_i r_i a_ij == 0`` for every free variable ``j``,
* ``sum_i r_i b_i > 0``.

Any feasible ``v`` would give ``0 >= r.(Av) >= r.b > 0``.

The engine is a two-phase primal simplex.  It enters the most negative
reduced cost, and after any degenerate pivot switches to Bland's
smallest-index rule until the objective moves again; every cycle consists
of degenerate pivots only, so the Bland stretch guarantees termination.
Arithmetic
runs on ``gmpy2.mpq`` internally and every value crossing the API is a
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from gmpy2 import mpq

from rumcheck.errors import DimensionMismatch

_ZERO = Fraction(0)


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _f(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


@dataclass
class LinearSystem:
    num_vars: int
    eq_rows: list = field(default_factory=list)
    ineq_rows: list = field(default_factory=list)
    nonneg: list = field(default_factory=list)
    row_labels: list = field(default_factory=list)
    var_labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.nonneg:
            self.nonneg = [True] * self.num_vars
        if not self.var_labels:
            self.var_labels = list(range(self.num_vars))
        self._eq_labels = []
        self._ineq_labels = []
        if self.row_labels:
            self._eq_labels = list(self.row_labels[: len(self.eq_rows)])
            self._ineq_labels = list(self.row_labels[len(self.eq_rows):])
        else:
            self._eq_labels = [("eq", i) for i in range(len(self.eq_rows))]
            self._ineq_labels = [("ineq", i) for i in range(len(self.ineq_rows))]
        self.row_labels = self._eq_labels + self._ineq_labels

    def add_eq(self, coeffs: Mapping[int, Fraction], rhs, label: Hashable = None) -> None:
        self.eq_rows.append((dict(coeffs), Fraction(rhs)))
        self._eq_labels.append(label if label is not None else ("eq", len(self.eq_rows) - 1))
        self.row_labels = self._eq_labels + self._ineq_labels

    def add_ineq(self, coeffs: Mapping[int, Fraction], rhs, label: Hashable = None) -> None:
        """Add the row ``coeffs . v >= rhs``."""
        self.ineq_rows.append((dict(coeffs), Fraction(rhs)))
        self._ineq_labels.append(label if label is not None else ("ineq", len(self.ineq_rows) - 1))
        self.row_labels = self._eq_labels + self._ineq_labels

    @property
    def num_rows(self) -> int:
        return len(self.eq_rows) + len(self.ineq_rows)

    def rows(self) -> list:
        return self.eq_rows + self.ineq_rows

    def validate(self) -> None:
        if len(self.nonneg) != self.num_vars or len(self.var_labels) != self.num_vars:
            raise DimensionMismatch("variable flags/labels do not match num_vars")
        if len(self.row_labels) != self.num_rows:
            raise DimensionMismatch("row labels do not match row count")
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ValueError("row labels must be unique")
        for coeffs, _ in self.rows():
            for j in coeffs:
                if not 0 <= j < self.num_vars:
                    raise DimensionMismatch(f"coefficient index {j} outside 0..{self.num_vars - 1}")

    def residuals(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [sum((c * v[j] for j, c in coeffs.items()), _ZERO) - rhs for coeffs, rhs in self.rows()]

    def is_solution(self, v: Sequence[Fraction]) -> bool:
        if len(v) != self.num_vars:
            raise DimensionMismatch(f"assignment has {len(v)} entries, system has {self.num_vars}")
        if any(nn and x < 0 for nn, x in zip(self.nonneg, v)):
            return False
        res = self.residuals(v)
        k = len(self.eq_rows)
        return all(r == 0 for r in res[:k]) and all(r >= 0 for r in res[k:])


@dataclass(frozen=True)
class FarkasCertificate:
    r: tuple[Fraction, ...]
    labels: tuple = ()

    def by_label(self) -> dict:
        return dict(zip(self.labels, self.r))


@dataclass(frozen=True)
class FeasibilityResult:
    solution: tuple[Fraction, ...] | None = None
    certificate: FarkasCertificate | None = None
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.solution is None) == (self.certificate is None):
            raise ValueError("exactly one of solution/certificate must be set")

    @property
    def feasible(self) -> bool:
        return self.solution is not None


@dataclass(frozen=True)
class OptimizationResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None
    certificate: FarkasCertificate | None = None


def verify_certificate(system: LinearSystem, r: FarkasCertificate | Sequence[Fraction]) -> bool:
    """Check ``r`` against the alternative system exactly (see module docstring)."""
    vec = r.r if isinstance(r, FarkasCertificate) else tuple(r)
    if len(vec) != system.num_rows:
        raise DimensionMismatch(f"certificate has {len(vec)} entries, system has {system.num_rows} rows")
    k = len(system.eq_rows)
    if any(x < 0 for x in vec[k:]):
        return False
    cols = [_ZERO] * system.num_vars
    rhs = _ZERO
    for ri, (coeffs, b) in zip(vec, system.rows()):
        if ri == 0:
            continue
        rhs += ri * b
        for j, c in coeffs.items():
            cols[j] += ri * c
    if rhs <= 0:
        return False
    for nn, c in zip(system.nonneg, cols):
        if (nn and c > 0) or (not nn and c != 0):
            return False
    return True


class _Tableau:
    """Dense simplex tableau over mpq.

    Columns ``0..n_struct-1`` are structural, ``n_struct..n_struct+m-1`` are
    phase-one artificials; the last entry of every row is the right-hand side.
    Inequality rows whose right-hand side is nonpositive start with their
    surplus basic, so their artificials begin (and usually stay) at zero.
    """

    def __init__(
        self,
        rows: list[dict[int, mpq]],
        rhs: list[mpq],
        n_struct: int,
        surplus: list[int | None] | None = None,
    ):
        m = len(rows)
        self.m = m
        self.n_struct = n_struct
        self.width = n_struct + m
        self.sign = [1] * m
        self.rows = []
        self.basis = []
        zero = mpq(0)
        surplus = surplus or [None] * m
        for i, (coeffs, b) in enumerate(zip(rows, rhs)):
            s = -1 if b < 0 else 1
            # a surplus row with b <= 0, negated, has its surplus as a unit column
            start = surplus[i] is not None and b <= 0
            if start:
                s = -1
            self.sign[i] = s
            row = [zero] * (self.width + 1)
            for j, c in coeffs.items():
                row[j] = c if s > 0 else -c
            row[n_struct + i] = mpq(1)
            row[-1] = b if s > 0 else -b
            self.rows.append(row)
            self.basis.append(surplus[i] if start else n_struct + i)
        self.pivots = 0

    def _pivot(self, i: int, j: int, obj: list[mpq]) -> None:
        prow = self.rows[i]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv if v else v for v in prow]
            self.rows[i] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for k, row in enumerate(self.rows):
            if k != i:
                f = row[j]
                if f:
                    for c in nz:
                        row[c] -= f * prow[c]
        f = obj[j]
        if f:
            for c in nz:
                obj[c] -= f * prow[c]
        self.basis[i] = j
        self.pivots += 1

    def _run(self, obj: list[mpq], allowed: int) -> str:
        """Minimize with reduced-cost row ``obj`` over columns ``< allowed``."""
        degenerate = False
        while True:
            enter = -1
            if degenerate:
                # Bland: smallest improving index, which cannot cycle
                for j in range(allowed):
                    if obj[j] < 0:
                        enter = j
                        break
            else:
                best_cost = 0
                for j in range(allowed):
                    if obj[j] < best_cost:
                        best_cost = obj[j]
                        enter = j
            if enter < 0:
                return "optimal"
            leave = -1
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            degenerate = best == 0
            self._pivot(leave, enter, obj)

    def phase_one(self) -> tuple[mpq, list[mpq]]:
        """Return (infeasibility, duals in the sign-normalized row space)."""
        obj = [mpq(0)] * (self.width + 1)
        for i, row in enumerate(self.rows):
            if self.basis[i] < self.n_struct:
                obj[self.n_struct + i] = mpq(1)
                continue
            for j in range(self.n_struct):
                if row[j]:
                    obj[j] -= row[j]
            obj[-1] -= row[-1]
        self._run(obj, self.width)
        duals = [1 - obj[self.n_struct + i] for i in range(self.m)]
        return -obj[-1], duals

    def drop_artificials(self) -> None:
        keep = []
        for i, b in enumerate(self.basis):
            if b < self.n_struct:
                keep.append(i)
                continue
            row = self.rows[i]
            j = next((j for j in range(self.n_struct) if row[j]), -1)
            if j < 0:
                continue  # redundant row
            self._pivot(i, j, [mpq(0)] * (self.width + 1))
            keep.append(i)
        self.rows = [self.rows[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]
        self.m = len(self.rows)

    def phase_two(self, cost: list[mpq]) -> str:
        obj = list(cost) + [mpq(0)] * (self.width + 1 - len(cost))
        for i, b in enumerate(self.basis):
            cb = obj[b]
            if cb:
                row = self.rows[i]
                for c, v in enumerate(row):
                    if v:
                        obj[c] -= cb * v
        self._obj = obj
        return self._run(obj, self.n_struct)

    def values(self) -> list[mpq]:
        x = [mpq(0)] * self.n_struct
        for i, b in enumerate(self.basis):
            if b < self.n_struct:
                x[b] = self.rows[i][-1]
        return x


class _Standardized:
    """The system rewritten as ``A x = b, x >= 0`` with split free variables."""

    def __init__(self, system: LinearSystem):
        system.validate()
        self.system = system
        col = 0
        self.plus: list[int] = []
        self.minus: list[int | None] = []
        for nn in system.nonneg:
            self.plus.append(col)
            col += 1
            if nn:
                self.minus.append(None)
            else:
                self.minus.append(col)
                col += 1
        k = len(system.eq_rows)
        self.rows: list[dict[int, mpq]] = []
        self.rhs: list[mpq] = []
        self.row_index: list[int] = []
        self.surplus: list[int | None] = []
        self.trivial: FarkasCertificate | None = None
        for idx, (coeffs, b) in enumerate(system.rows()):
            coeffs = {j: c for j, c in coeffs.items() if c != 0}
            if not coeffs:
                bad = (b != 0) if idx < k else (b > 0)
                if bad and self.trivial is None:
                    r = [_ZERO] * system.num_rows
                    r[idx] = Fraction(1) if b > 0 else Fraction(-1)
                    self.trivial = FarkasCertificate(tuple(r), tuple(system.row_labels))
                continue
            row: dict[int, mpq] = {}
            for j, c in coeffs.items():
                cq = _q(c)
                row[self.plus[j]] = cq
                if self.minus[j] is not None:
                    row[self.minus[j]] = -cq
            if idx >= k:
                row[col] = mpq(-1)
                self.surplus.append(col)
                col += 1
            else:
                self.surplus.append(None)
            self.rows.append(row)
            self.rhs.append(_q(b))
            self.row_index.append(idx)
        self.n_struct = col

    def certificate(self, duals: list[mpq], signs: list[int]) -> FarkasCertificate:
        r = [_ZERO] * self.system.num_rows
        for y, s, idx in zip(duals, signs, self.row_index):
            r[idx] = _f(y * s)
        return FarkasCertificate(tuple(r), tuple(self.system.row_labels))

    def solution(self, x: list[mpq]) -> tuple[Fraction, ...]:
        out = []
        for p, mi in zip(self.plus, self.minus):
            v = x[p] - (x[mi] if mi is not None else 0)
            out.append(_f(v))
        return tuple(out)


def _phase_one(std: _Standardized):
    tab = _Tableau(std.rows, std.rhs, std.n_struct, std.surplus)
    infeas, duals = tab.phase_one()
    return tab, infeas, duals


def solve_feasibility(system: LinearSystem) -> FeasibilityResult:
    """Return a feasible point or a Farkas certificate, both exact."""
    std = _Standardized(system)
    if std.trivial is not None:
        return FeasibilityResult(certificate=std.trivial, stats={"pivots": 0})
    tab, infeas, duals = _phase_one(std)
    stats = {"pivots": tab.pivots}
    if infeas > 0:
        return FeasibilityResult(certificate=std.certificate(duals, tab.sign), stats=stats)
    return FeasibilityResult(solution=std.solution(tab.values()), stats=stats)


def minimize(system: LinearSystem, objective: Mapping[int, Fraction]) -> OptimizationResult:
    """Minimize ``objective . v`` over the system's feasible set."""
    std = _Standardized(system)
    if std.trivial is not None:
        return OptimizationResult("infeasible", certificate=std.trivial)
    tab, infeas, duals = _phase_one(std)
    if infeas > 0:
        return OptimizationResult("infeasible", certificate=std.certificate(duals, tab.sign))
    tab.drop_artificials()
    cost = [mpq(0)] * std.n_struct
    for j, c in objective.items():
        cq = _q(c)
        cost[std.plus[j]] += cq
        if std.minus[j] is not None:
            cost[std.minus[j]] -= cq
    status = tab.phase_two(cost)
    if status == "unbounded":
        return OptimizationResult("unbounded")
    sol = std.solution(tab.values())
    value = sum((Fraction(c) * sol[j] for j, c in objective.items()), _ZERO)
    return OptimizationResult("optimal", value=value, solution=sol)
