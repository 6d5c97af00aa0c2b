"""Command-line entry point.

Exit codes: 0 rationalizable (or success), 1 not rationalizable,
2 input error, 3 internal disagreement between methods.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from rumcheck.axiom import verify_rumme
from rumcheck.core import AlternativeSet, RandomChoiceRule, enumerate_orders, to_rational
from rumcheck.datasets import (
    Dataset,
    generate,
    load_dataset,
    menus_from_json,
    order_str,
    parse_menu_spec,
)
from rumcheck.errors import MethodDisagreement, ParseError, RumError
from rumcheck.hrep import build_p_system, build_q_system, matrix_stats
from rumcheck.lp import FarkasCertificate, FeasibilityResult, LinearSystem, solve_feasibility, verify_certificate
from rumcheck.monotone import (
    PartialOrder,
    monotone_constraint_rows,
    monotone_orders,
    monotone_pslack_rows,
)
from rumcheck.patches import build_patches_2goods
from rumcheck.vrep import arsp_search, column_generation, linf_statistic, vrep_system

METHODS = ("hrep", "pslack", "vrep", "colgen")

EXIT_OK = 0
EXIT_NOT = 1
EXIT_INPUT = 2
EXIT_DISAGREE = 3


# -- labels -------------------------------------------------------------------------

def _pair_str(alts: AlternativeSet, x: int, a: int) -> str:
    return f"{alts.names[x]},{alts.menu_str(a)}"


def row_label_str(label, alts: AlternativeSet) -> str:
    kind, *rest = label
    if len(rest) == 2:
        return f"{kind}({_pair_str(alts, rest[0], rest[1])})"
    if kind in ("inflow", "sum") and rest:
        return f"{kind}({alts.menu_str(rest[0])})"
    if kind == "monotone":
        return f"monotone({alts.names[rest[0]]})"
    return kind


def var_label_str(label, alts: AlternativeSet, method: str) -> str:
    if method in ("vrep", "colgen"):
        return order_str(label, alts)
    prefix = "q" if method == "hrep" else "p"
    return f"{prefix}({_pair_str(alts, *label)})"


# -- method dispatch -------------------------------------------------------------------

def method_system(rule: RandomChoiceRule, method: str, order: PartialOrder | None = None) -> LinearSystem:
    """The linear system a method's witness or certificate refers to."""
    if method == "hrep":
        system = build_q_system(rule)
        if order is not None:
            for coeffs, rhs, label in monotone_constraint_rows(order, rule.n):
                system.add_eq(coeffs, rhs, label)
        return system
    if method == "pslack":
        system = build_p_system(rule)
        if order is not None:
            for coeffs, rhs, label in monotone_pslack_rows(rule, order):
                system.add_eq(coeffs, rhs, label)
        return system
    if method in ("vrep", "colgen"):
        orders = monotone_orders(order, rule.n) if order is not None else None
        return vrep_system(rule, orders)
    raise ValueError(f"unknown method {method!r}")


def run_method(rule: RandomChoiceRule, method: str, order: PartialOrder | None = None) -> tuple[FeasibilityResult, LinearSystem]:
    system = method_system(rule, method, order)
    if method == "colgen":
        universe = monotone_orders(order, rule.n) if order is not None else enumerate_orders(rule.n)
        res = column_generation(rule, [universe[0]], orders=universe)
    else:
        res = solve_feasibility(system)
    return res, system


def _vector(labels, values, alts, fmt) -> dict:
    return {"labels": [fmt(lab) for lab in labels], "values": [str(v) for v in values]}


def result_json(res: FeasibilityResult, system: LinearSystem, method: str, alts: AlternativeSet) -> dict:
    out: dict = {"feasible": res.feasible, "witness": None, "certificate": None}
    if res.feasible:
        out["witness"] = _vector(system.var_labels, res.solution, alts, lambda lab: var_label_str(lab, alts, method))
    else:
        out["certificate"] = _vector(system.row_labels, res.certificate.r, alts, lambda lab: row_label_str(lab, alts))
    if "iterations" in res.stats:
        out["iterations"] = res.stats["iterations"]
    return out


def verdict_name(feasible: bool, monotone: bool) -> str:
    if monotone:
        return "monotone-rationalizable" if feasible else "not-monotone"
    return "rationalizable" if feasible else "not"


# -- commands ------------------------------------------------------------------------------

def cmd_check(dataset: Dataset, method: str = "hrep", monotone: bool = False, arsp_len: int | None = None) -> dict:
    rule = dataset.rule
    if rule is None:
        raise ParseError("dataset has no observations")
    order = None
    if monotone:
        order = dataset.partial_order or PartialOrder.empty(rule.n)
    methods = METHODS if method == "all" else (method,)
    alts = rule.alternatives
    results: dict[str, dict] = {}
    timings: dict[str, float] = {}
    verdicts: dict[str, bool] = {}
    for m in methods:
        t0 = time.perf_counter()
        res, system = run_method(rule, m, order)
        timings[m] = time.perf_counter() - t0
        verdicts[m] = res.feasible
        results[m] = result_json(res, system, m, alts)
    if len(set(verdicts.values())) > 1:
        raise MethodDisagreement(f"methods disagree: {verdicts}")
    primary = methods[0]
    feasible = verdicts[primary]
    stats = matrix_stats(rule.n, rule.menus)
    report: dict = {
        "verdict": verdict_name(feasible, monotone),
        "method": method,
        "monotone": monotone,
        "alternatives": list(alts.names),
        "results": results,
        "witness": results[primary]["witness"],
        "certificate": results[primary]["certificate"],
        "matrix_stats": {
            "m_rows": stats.m_rows if order is None else len(monotone_orders(order, rule.n)),
            "n_rows": stats.n_rows,
            "predicted_n_rows": stats.predicted_n_rows,
        },
        "timings": timings,
    }
    if order is not None:
        report["partial_order"] = [[alts.names[a], alts.names[b]] for a, b in sorted(order.pairs)]
    if any(m in ("vrep", "colgen") for m in methods) and order is None:
        t0 = time.perf_counter()
        report["statistic"] = str(linf_statistic(rule))
        timings["linf"] = time.perf_counter() - t0
    if arsp_len:
        violation = arsp_search(rule, arsp_len)
        report["arsp"] = {"max_len": arsp_len, "violation": None}
        if violation is not None:
            report["arsp"]["violation"] = {
                "sequence": [_pair_str(alts, x, a) for x, a in violation.sequence],
                "lhs": str(violation.lhs),
                "rhs": violation.rhs,
            }
    return report


def reverify_report(report: dict, dataset: Dataset) -> bool:
    """Re-check every witness and certificate in a check report against the data."""
    rule = dataset.rule
    order = None
    if report.get("monotone"):
        alts = rule.alternatives
        pairs = [(alts.index(a), alts.index(b)) for a, b in report.get("partial_order", [])]
        order = PartialOrder.from_pairs(rule.n, pairs)
    for method, entry in report["results"].items():
        system = method_system(rule, method, order)
        alts = rule.alternatives
        if entry["feasible"]:
            w = entry["witness"]
            expected = [var_label_str(lab, alts, method) for lab in system.var_labels]
            if w["labels"] != expected:
                return False
            if not system.is_solution([to_rational(v) for v in w["values"]]):
                return False
        else:
            c = entry["certificate"]
            expected = [row_label_str(lab, alts) for lab in system.row_labels]
            if c["labels"] != expected:
                return False
            r = FarkasCertificate(tuple(to_rational(v) for v in c["values"]), tuple(system.row_labels))
            if not verify_certificate(system, r):
                return False
    return True


def cmd_matrix_stats(n: int, menus: Sequence[int] | None = None) -> dict:
    stats = matrix_stats(n, menus)
    return {
        "n": n,
        "full_domain": menus is None,
        "m_rows": stats.m_rows,
        "n_rows": stats.n_rows,
        "n_columns": stats.n_columns,
        "predicted_n_rows": stats.predicted_n_rows,
    }


def cmd_patches(dataset: Dataset) -> dict:
    if not dataset.budgets:
        raise ParseError("dataset has no budgets")
    arr = build_patches_2goods(dataset.budgets)
    return {
        "patches": [
            {
                "label": pt.label,
                "budget": pt.budget + 1,
                "start": [str(v) for v in pt.start],
                "end": [str(v) for v in pt.end],
                "signs": {f"B{j + 1}": s for j, s in pt.signs},
            }
            for pt in arr.patches
        ],
        "dominance": [list(pair) for pair in arr.dominance_labels()],
    }


def cmd_axiom_verify(dataset: Dataset, trials: int, seed: int) -> dict:
    rule = dataset.rule
    if rule is None:
        raise ParseError("dataset has no observations")
    rep = verify_rumme(rule, trials, seed)
    alts = rule.alternatives
    out: dict = {
        "rationalizable": rep.rationalizable,
        "consistent": rep.consistent,
        "trials": rep.trials,
        "feasible_trials": rep.feasible_trials,
        "counterexamples": len(rep.counterexamples),
        "notes": rep.notes,
        "witness": None,
    }
    if rep.witness is not None:
        a, c = rep.witness
        out["witness"] = {
            "assignment": {_pair_str(alts, x, m): str(v) for (x, m), v in a.values.items()},
            "capacity": {alts.menu_str(m) if m else "{}": str(v) for m, v in sorted(c.values.items())},
            "locally_feasible": rep.witness_locally_feasible,
            "feasible": rep.witness_feasible,
        }
    return out


# -- argument parsing ------------------------------------------------------------------------

def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rumcheck", description="Exact random utility rationalizability tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test a dataset for rationalizability")
    p.add_argument("--method", choices=METHODS + ("all",), default="hrep")
    p.add_argument("--monotone", action="store_true", help="require utilities monotone in the dataset's partial order")
    p.add_argument("--arsp-len", type=int, default=None, metavar="K")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("matrix-stats", help="row counts of both constraint matrices")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--menus", default=None, help="JSON file of menus, or a menu spec (binary, sizes:2,3, ...)")
    g.add_argument("--full", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("generate", help="sample a rationalizable dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--support", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--menus", default="full", help="menu spec: full, binary, grand, sizes:2,3, random:K")
    p.add_argument("--out", default=None)
    p.add_argument("--truth", default=None, help="where to write the generating distribution")

    p = sub.add_parser("patches", help="cut two-good budgets into patches")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("axiom-verify", help="exercise the assignment/capacity characterization")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    return parser


def _menus_arg(value: str | None, n: int):
    if value is None:
        return None
    path = Path(value)
    alts = AlternativeSet.of_size(n)
    if path.exists():
        return menus_from_json(json.loads(path.read_text()), alts)
    return parse_menu_spec(value, n)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            report = cmd_check(load_dataset(args.infile), args.method, args.monotone, args.arsp_len)
            _emit(report, args.out)
            return EXIT_OK if report["verdict"] in ("rationalizable", "monotone-rationalizable") else EXIT_NOT
        if args.command == "matrix-stats":
            menus = None if args.full else _menus_arg(args.menus, args.n)
            _emit(cmd_matrix_stats(args.n, menus), args.out)
            return EXIT_OK
        if args.command == "generate":
            data, truth = generate(args.n, args.menus, args.support, args.seed)
            _emit(data, args.out)
            truth_path = args.truth or (f"{args.out}.truth.json" if args.out else None)
            if truth_path:
                _emit(truth, truth_path)
            return EXIT_OK
        if args.command == "patches":
            _emit(cmd_patches(load_dataset(args.infile)), args.out)
            return EXIT_OK
        if args.command == "axiom-verify":
            rep = cmd_axiom_verify(load_dataset(args.infile), args.trials, args.seed)
            _emit(rep, args.out)
            if not rep["consistent"]:
                return EXIT_DISAGREE
            return EXIT_OK if rep["rationalizable"] else EXIT_NOT
    except MethodDisagreement as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (RumError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
