"""JSON datasets, synthetic generation, and report (de)serialization.

Rationals travel as strings (``"p/q"`` or integers) so nothing is rounded.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from rumcheck.core import (
    MAX_ORDER_N,
    AlternativeSet,
    LinearOrder,
    PreferenceDistribution,
    RandomChoiceRule,
    check_size,
    enumerate_orders,
    full_domain,
    induce_rcr,
    lattice_key,
    members,
    popcount,
    validate_rcr,
)
from rumcheck.errors import ParseError, RumError
from rumcheck.monotone import PartialOrder
from rumcheck.patches import Budget


@dataclass(frozen=True)
class Dataset:
    alternatives: AlternativeSet | None
    rule: RandomChoiceRule | None
    partial_order: PartialOrder | None = None
    budgets: tuple[Budget, ...] | None = None


def rational_str(v: Fraction) -> str:
    return str(v)


def parse_dataset(obj: dict) -> Dataset:
    """Build a validated dataset; any defect surfaces as :class:`ParseError`."""
    if not isinstance(obj, dict):
        raise ParseError("dataset must be a JSON object")
    try:
        alternatives = None
        rule = None
        order = None
        budgets = None
        if "alternatives" in obj:
            alternatives = AlternativeSet(tuple(obj["alternatives"]))
            raw: dict = {}
            for k, ob in enumerate(obj.get("observations", [])):
                menu = ob.get("menu")
                if not isinstance(menu, list):
                    raise ParseError(f"observation {k}: 'menu' must be a list of labels")
                if len(set(menu)) != len(menu):
                    raise ParseError(f"observation {k}: repeated label in menu {menu}")
                key = tuple(menu)
                if any(set(key) == set(prev) for prev in raw):
                    raise ParseError(f"observation {k}: menu {menu} listed twice")
                probs = ob.get("choice_probabilities", {})
                for label, value in probs.items():
                    if isinstance(value, float):
                        raise ParseError(f"observation {k}: float probability {value!r}; use 'p/q'")
                raw[key] = probs
            rule = validate_rcr(raw, alternatives)
            if obj.get("partial_order"):
                pairs = [(alternatives.index(a), alternatives.index(b)) for a, b in obj["partial_order"]]
                order = PartialOrder.from_pairs(alternatives.n, pairs)
        elif "observations" in obj:
            raise ParseError("observations given without an 'alternatives' list")
        if obj.get("budgets"):
            budgets = tuple(
                Budget(
                    tuple(b["price"]),
                    b["wealth"],
                    tuple(b["patch_names"]) if b.get("patch_names") else None,
                )
                for b in obj["budgets"]
            )
    except ParseError:
        raise
    except (RumError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{type(exc).__name__}: {exc}") from exc
    return Dataset(alternatives, rule, order, budgets)


def load_dataset(path: str | Path) -> Dataset:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return parse_dataset(obj)


def dataset_to_json(rule: RandomChoiceRule, partial_order: PartialOrder | None = None) -> dict:
    alts = rule.alternatives
    out: dict[str, Any] = {
        "alternatives": list(alts.names),
        "observations": [
            {
                "menu": alts.labels(a),
                "choice_probabilities": {alts.names[x]: rational_str(rule.p(x, a)) for x in members(a)},
            }
            for a in rule.menus
        ],
    }
    if partial_order is not None and partial_order.pairs:
        out["partial_order"] = [[alts.names[a], alts.names[b]] for a, b in sorted(partial_order.pairs)]
    return out


# -- menu specs -------------------------------------------------------------------

def parse_menu_spec(spec: str, n: int, rng: random.Random | None = None) -> tuple[int, ...]:
    """Menu collections by name.

    ``full`` every nonempty menu; ``binary`` all pairs; ``grand`` the whole
    set; ``sizes:2,3`` all menus of the listed sizes; ``random:K`` K distinct
    random menus of size at least two (needs ``rng``).
    """
    spec = spec.strip()
    if spec == "full":
        menus = full_domain(n)
    elif spec == "binary":
        menus = tuple(a for a in full_domain(n) if popcount(a) == 2)
    elif spec == "grand":
        menus = ((1 << n) - 1,)
    elif spec.startswith("sizes:"):
        sizes = {int(s) for s in spec[6:].split(",") if s}
        menus = tuple(a for a in full_domain(n) if popcount(a) in sizes)
    elif spec.startswith("random:"):
        k = int(spec[7:])
        pool = [a for a in full_domain(n) if popcount(a) >= 2]
        if rng is None:
            raise ValueError("random menu spec needs a random generator")
        menus = tuple(sorted(rng.sample(pool, min(k, len(pool))), key=lattice_key))
    else:
        raise ParseError(f"unknown menu spec {spec!r}")
    return menus


def menus_from_json(obj, alternatives: AlternativeSet) -> tuple[int, ...]:
    if isinstance(obj, dict):
        if "observations" in obj:
            obj = [ob["menu"] for ob in obj["observations"]]
        else:
            obj = obj["menus"]
    menus = set()
    for m in obj:
        mask = 0
        for e in m:
            mask |= 1 << (e if isinstance(e, int) else alternatives.index(e))
        if mask == 0:
            raise ParseError("empty menu in menu list")
        menus.add(mask)
    return tuple(sorted(menus, key=lattice_key))


# -- generation -------------------------------------------------------------------

def random_distribution(n: int, support: int, rng: random.Random) -> PreferenceDistribution:
    """``support`` distinct orders with integer weights 1..9, normalized."""
    orders = enumerate_orders(n)
    if not 1 <= support <= len(orders):
        raise ValueError(f"support size must be in 1..{len(orders)}")
    chosen = sorted(rng.sample(orders, support))
    raw = [rng.randint(1, 9) for _ in chosen]
    total = sum(raw)
    return PreferenceDistribution({o: Fraction(w, total) for o, w in zip(chosen, raw)})


def generate(n: int, menu_spec: str, support: int, seed: int) -> tuple[dict, dict]:
    """A rationalizable dataset and its ground-truth distribution."""
    check_size(n, MAX_ORDER_N, "dataset generation")
    rng = random.Random(seed)
    alternatives = AlternativeSet.of_size(n)
    menus = parse_menu_spec(menu_spec, n, rng)
    nu = random_distribution(n, support, rng)
    rule = induce_rcr(nu, menus, alternatives)
    truth = {
        "alternatives": list(alternatives.names),
        "distribution": [
            {"order": [alternatives.names[i] for i in o], "weight": rational_str(w)}
            for o, w in sorted(nu.weights.items())
        ],
    }
    return dataset_to_json(rule), truth


def random_rule(alternatives: AlternativeSet, menus: Sequence[int], rng: random.Random, max_den: int = 6) -> RandomChoiceRule:
    """Uniformly random integer weights per menu, normalized; zeros allowed."""
    raw = {}
    for a in menus:
        xs = members(a)
        w = [rng.randint(0, max_den) for _ in xs]
        if sum(w) == 0:
            w[rng.randrange(len(w))] = 1
        t = sum(w)
        raw[a] = {x: Fraction(v, t) for x, v in zip(xs, w)}
    return validate_rcr(raw, alternatives)


def order_str(order: LinearOrder, alternatives: AlternativeSet) -> str:
    return ">".join(alternatives.names[i] for i in order)


def parse_order(text: str, alternatives: AlternativeSet) -> LinearOrder:
    return tuple(alternatives.index(s) for s in text.split(">"))
