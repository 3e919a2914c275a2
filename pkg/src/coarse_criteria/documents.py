"""JSON documents for criteria sets and choice functions.

Criteria document (``schema_version`` 1)::

    {"schema_version": 1,
     "domain": ["a", "b", "c"],
     "criteria": [
        {"name": "speed", "categories": [["a"], ["b", "c"]], "order": [[0, 1]]},
        {"name": "price", "pairs": [["b", "a"]]}
     ]}

Each criterion is either a category list with an order on category indices
(the canonical form) or a list of ``[superior, inferior]`` label pairs.

Choice document::

    {"schema_version": 1, "kind": "choice", "domain": [...],
     "choices": [{"menu": [...], "chosen": [...]}, ...]}

or, for domains above ``EXPLICIT_LIMIT`` labels, a generated form
``{"generator": {"type": "weak-order", "levels": [[best...], ...]}}``.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from .choice import ChoiceFunction, WeakOrder, from_mapping, from_weak_order
from .criteria import CriteriaSet
from .relations import Domain, InputError, Relation, asymmetry_witness, categories

SCHEMA_VERSION = 1
EXPLICIT_LIMIT = 12


class DocumentError(InputError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DocumentError(str(path), f"cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", f"invalid JSON: {exc.msg}") from None


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _check_version(doc: Mapping, where: str) -> None:
    if not isinstance(doc, Mapping):
        raise DocumentError(where, "document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"{where}.schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")


def _domain(doc: Mapping, where: str) -> Domain:
    labels = doc.get("domain")
    if not isinstance(labels, list):
        raise DocumentError(f"{where}.domain", "must be a list of labels")
    try:
        return Domain(tuple(labels))
    except InputError as exc:
        raise DocumentError(f"{where}.domain", str(exc)) from None


def _label_pair(item: Any, domain: Domain, where: str) -> tuple[str, str]:
    if not (isinstance(item, list) and len(item) == 2):
        raise DocumentError(where, "pairs are [superior, inferior] lists")
    for x in item:
        if x not in domain:
            raise DocumentError(where, f"unknown label {x!r}")
    return item[0], item[1]


def _criterion(spec: Any, domain: Domain, where: str) -> Relation:
    if not isinstance(spec, Mapping):
        raise DocumentError(where, "criterion must be an object")
    if ("pairs" in spec) == ("categories" in spec):
        raise DocumentError(where, "give exactly one of 'pairs' or 'categories'")
    if "pairs" in spec:
        raw = spec["pairs"]
        if not isinstance(raw, list):
            raise DocumentError(f"{where}.pairs", "must be a list")
        pairs = [_label_pair(p, domain, f"{where}.pairs[{k}]") for k, p in enumerate(raw)]
        rel = Relation(domain, frozenset(pairs))
        bad = asymmetry_witness(rel)
        if bad is not None:
            kind = "reflexive" if bad[0] == bad[1] else "symmetric"
            raise DocumentError(f"{where}.pairs", f"{kind} pair {list(bad)} violates asymmetry")
        return rel
    cells = spec["categories"]
    if not isinstance(cells, list) or not cells:
        raise DocumentError(f"{where}.categories", "must be a nonempty list of label lists")
    seen: dict[str, int] = {}
    for j, cell in enumerate(cells):
        if not isinstance(cell, list) or not cell:
            raise DocumentError(f"{where}.categories[{j}]", "categories are nonempty label lists")
        for x in cell:
            if x not in domain:
                raise DocumentError(f"{where}.categories[{j}]", f"unknown label {x!r}")
            if x in seen:
                raise DocumentError(f"{where}.categories[{j}]", f"label {x!r} already in category {seen[x]}")
            seen[x] = j
    missing = [x for x in domain if x not in seen]
    if missing:
        raise DocumentError(f"{where}.categories", f"labels not covered: {missing}")
    order_raw = spec.get("order", [])
    if not isinstance(order_raw, list):
        raise DocumentError(f"{where}.order", "must be a list of [i, j] index pairs")
    order = set()
    for k, item in enumerate(order_raw):
        loc = f"{where}.order[{k}]"
        if not (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise DocumentError(loc, "order entries are [i, j] category indices")
        a, b = item
        if not (0 <= a < len(cells) and 0 <= b < len(cells)):
            raise DocumentError(loc, f"category index out of range 0..{len(cells) - 1}")
        if a == b:
            raise DocumentError(loc, "reflexive pair violates asymmetry")
        if (b, a) in order:
            raise DocumentError(loc, f"symmetric pair with [{b}, {a}] violates asymmetry")
        order.add((a, b))
    return Relation.from_category_order(domain, cells, order)


def criteria_from_document(doc: Any, where: str = "document") -> CriteriaSet:
    _check_version(doc, where)
    domain = _domain(doc, where)
    specs = doc.get("criteria")
    if not isinstance(specs, list) or not specs:
        raise DocumentError(f"{where}.criteria", "must be a nonempty list")
    rels = []
    names = []
    for i, spec in enumerate(specs):
        loc = f"{where}.criteria[{i}]"
        rels.append(_criterion(spec, domain, loc))
        name = spec.get("name", f"C{i + 1}")
        if not isinstance(name, str) or not name:
            raise DocumentError(f"{loc}.name", "must be a nonempty string")
        names.append(name)
    if len(set(names)) != len(names):
        raise DocumentError(f"{where}.criteria", "criterion names must be unique")
    return CriteriaSet(domain, tuple(rels), tuple(names))


def load_criteria(path: str | Path) -> CriteriaSet:
    return criteria_from_document(load_json(path), where=str(path))


def criteria_to_document(cs: CriteriaSet) -> dict:
    """Canonical form: derived categories (first-appearance order) and sorted order pairs."""
    crit = []
    for name, rel in zip(cs.names, cs.criteria):
        s = categories(rel)
        crit.append(
            {
                "name": name,
                "categories": [list(c) for c in s.partition],
                "order": [list(p) for p in sorted(s.order)],
            }
        )
    return {"schema_version": SCHEMA_VERSION, "domain": list(cs.domain), "criteria": crit}


# ---------------------------------------------------------------------------
# choice documents
# ---------------------------------------------------------------------------


def choice_to_document(c: ChoiceFunction, order: WeakOrder | None = None) -> dict:
    """Explicit menu listing up to ``EXPLICIT_LIMIT`` labels; above that the
    weak order ``order`` that generates ``c`` is stored instead."""
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "choice",
        "domain": list(c.domain),
    }
    n = len(c.domain)
    if n > EXPLICIT_LIMIT:
        if order is None:
            raise InputError(
                f"choice functions on more than {EXPLICIT_LIMIT} labels are stored as generators; "
                "a generating weak order is required"
            )
        doc["generator"] = {"type": "weak-order", "levels": [list(level) for level in order.levels]}
        return doc
    labels = c.domain.elements
    menus = sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), [-(m >> i & 1) for i in range(n)]))
    doc["choices"] = [
        {
            "menu": [labels[i] for i in range(n) if (m >> i) & 1],
            "chosen": [x for x in labels if x in c.labels_of(int(c.table[m]))],
        }
        for m in menus
    ]
    return doc


def choice_from_document(doc: Any, where: str = "document") -> ChoiceFunction:
    _check_version(doc, where)
    if doc.get("kind") != "choice":
        raise DocumentError(f"{where}.kind", "expected 'choice'")
    domain = _domain(doc, where)
    if "generator" in doc:
        gen = doc["generator"]
        if not isinstance(gen, Mapping) or gen.get("type") != "weak-order":
            raise DocumentError(f"{where}.generator", "only {'type': 'weak-order', 'levels': ...} is supported")
        levels = gen.get("levels")
        if not isinstance(levels, list) or not all(isinstance(lv, list) and lv for lv in levels):
            raise DocumentError(f"{where}.generator.levels", "must be a list of nonempty label lists")
        flat = [x for lv in levels for x in lv]
        if sorted(flat) != sorted(domain) or len(flat) != len(set(flat)):
            raise DocumentError(f"{where}.generator.levels", "must rank every domain label exactly once")
        return from_weak_order(domain, WeakOrder(tuple(tuple(lv) for lv in levels)))
    entries = doc.get("choices")
    if not isinstance(entries, list) or not entries:
        raise DocumentError(f"{where}.choices", "must be a nonempty list of {menu, chosen} objects")
    mapping: dict[frozenset, frozenset] = {}
    for k, item in enumerate(entries):
        loc = f"{where}.choices[{k}]"
        if not isinstance(item, Mapping) or "menu" not in item or "chosen" not in item:
            raise DocumentError(loc, "entries need 'menu' and 'chosen'")
        menu, chosen = item["menu"], item["chosen"]
        for x in list(menu) + list(chosen):
            if x not in domain:
                raise DocumentError(loc, f"unknown label {x!r}")
        menu_set, chosen_set = frozenset(menu), frozenset(chosen)
        if not menu_set:
            raise DocumentError(loc, "menus must be nonempty")
        if not chosen_set or not chosen_set <= menu_set:
            raise DocumentError(loc, "chosen must be a nonempty subset of menu")
        if menu_set in mapping:
            raise DocumentError(loc, f"menu {sorted(menu_set)} listed twice")
        mapping[menu_set] = chosen_set
    return from_mapping(domain, mapping)


def load_choice(path: str | Path) -> ChoiceFunction:
    return choice_from_document(load_json(path), where=str(path))
