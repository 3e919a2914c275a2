"""Exhaustive enumerators and random generators for criteria, orders and cost tables."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from itertools import product

import numpy as np

from .criteria import CriteriaSet, from_product
from .efficiency import CostModel
from .relations import CategoryStructure, Domain, Relation, categories


def set_partitions(n: int, max_blocks: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings: ``rgs[x]`` is the block of element ``x``."""
    if n == 0:
        yield ()
        return

    def rec(prefix: list[int], used: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(min(used + 1, max_blocks)):
            prefix.append(b)
            yield from rec(prefix, max(used, b + 1))
            prefix.pop()

    yield from rec([], 0)


def asymmetric_orders(e: int) -> Iterator[frozenset[tuple[int, int]]]:
    """Every asymmetric relation on ``range(e)``."""
    pairs = [(a, b) for a in range(e) for b in range(a + 1, e)]
    for choice in product((0, 1, 2), repeat=len(pairs)):
        rel = set()
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                rel.add((a, b))
            elif c == 2:
                rel.add((b, a))
        yield frozenset(rel)


def enumerate_criteria(domain: Domain, max_categories: int) -> list[tuple[Relation, CategoryStructure]]:
    """Distinct relations obtained from every partition into at most
    ``max_categories`` blocks combined with every asymmetric block order."""
    labels = domain.elements
    seen: dict[frozenset, tuple[Relation, CategoryStructure]] = {}
    for rgs in set_partitions(len(labels), max_categories):
        e = max(rgs) + 1
        cells = [[x for x, b in zip(labels, rgs) if b == j] for j in range(e)]
        for order in asymmetric_orders(e):
            rel = Relation.from_category_order(domain, cells, order)
            if rel.pairs not in seen:
                seen[rel.pairs] = (rel, categories(rel))
    return [seen[k] for k in sorted(seen, key=lambda p: sorted(p))]


def labels_for(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


def random_criterion(rng: np.random.Generator, domain: Domain, max_categories: int) -> Relation:
    n = len(domain)
    e = int(rng.integers(1, min(max_categories, n) + 1))
    blocks = rng.integers(0, e, size=n)
    # make sure every block index below e is used
    blocks[rng.permutation(n)[:e]] = np.arange(e)
    cells = [[x for x, b in zip(domain.elements, blocks) if b == j] for j in range(e)]
    order = set()
    for a in range(e):
        for b in range(a + 1, e):
            c = int(rng.integers(0, 3))
            if c == 1:
                order.add((a, b))
            elif c == 2:
                order.add((b, a))
    return Relation.from_category_order(domain, cells, order)


def random_criteria_set(
    rng: np.random.Generator,
    n_labels: int,
    n_criteria: int,
    max_categories: int = 3,
    product_bias: float = 0.5,
) -> CriteriaSet:
    """Random criteria set; with probability ``product_bias`` it starts from a
    product of attributes (random category sizes, random orders) and keeps a
    random subset of points, so maximally categorizing sets are well represented."""
    if rng.random() < product_bias:
        cs = _random_product_like(rng, n_labels, n_criteria, max_categories)
        if cs is not None:
            return cs
    domain = Domain(labels_for(n_labels))
    rels = tuple(random_criterion(rng, domain, max_categories) for _ in range(n_criteria))
    return CriteriaSet(domain, rels)


def _random_product_like(
    rng: np.random.Generator, n_labels: int, n_criteria: int, max_categories: int
) -> CriteriaSet | None:
    sizes = [int(rng.integers(1, max_categories + 1)) for _ in range(n_criteria)]
    attributes = []
    orders = []
    for e in sizes:
        attributes.append(tuple(range(e)))
        order = set()
        for a in range(e):
            for b in range(a + 1, e):
                c = int(rng.integers(0, 3))
                if c == 1:
                    order.add((a, b))
                elif c == 2:
                    order.add((b, a))
        orders.append(order)
    points = list(product(*(range(e) for e in sizes)))
    if len(points) > n_labels:
        idx = rng.choice(len(points), size=n_labels, replace=False)
        keep = [points[i] for i in sorted(idx)]
    else:
        keep = points
    cs = from_product(attributes, orders, keep=keep)
    # relabel to neutral names so labels do not leak the construction
    dom = Domain(labels_for(len(cs.domain)))
    rename = dict(zip(cs.domain.elements, dom.elements))
    rels = tuple(
        Relation(dom, frozenset((rename[x], rename[y]) for x, y in r.pairs)) for r in cs.criteria
    )
    return CriteriaSet(dom, rels)


def random_binary_criteria_set(rng: np.random.Generator, n_labels: int, n_criteria: int) -> CriteriaSet:
    """Criteria each splitting the domain into two nonempty, strictly ordered halves."""
    if n_labels < 2:
        raise ValueError("binary criteria need at least two labels")
    domain = Domain(labels_for(n_labels))
    rels = []
    for _ in range(n_criteria):
        while True:
            bits = rng.integers(0, 2, size=n_labels)
            if 0 < bits.sum() < n_labels:
                break
        top = [x for x, b in zip(domain.elements, bits) if b]
        bottom = [x for x, b in zip(domain.elements, bits) if not b]
        rels.append(Relation.from_category_order(domain, [top, bottom], [(0, 1)]))
    return CriteriaSet(domain, tuple(rels))


def random_weak_order_ranks(rng: np.random.Generator, n: int, levels: int | None = None) -> list[int]:
    levels = n if levels is None else levels
    return [int(r) for r in rng.integers(0, max(levels, 1), size=n)]


def monotone_table(rng: np.random.Generator, e_max: int, low: int = 1, high: int = 10) -> CostModel:
    """Random nondecreasing integer table with ``kappa(1) = 0`` and ``kappa(2) >= low``."""
    values = {1: 0}
    total = 0
    for e in range(2, e_max + 1):
        total += int(rng.integers(low if e == 2 else 0, high + 1))
        values[e] = total
    return CostModel.table(values, label="table:random")


def convex_table(rng: np.random.Generator, e_max: int, step_max: int = 5) -> CostModel:
    """Random integer table whose increments strictly increase."""
    values = {1: 0}
    inc = int(rng.integers(1, step_max + 1))
    total = 0
    for e in range(2, e_max + 1):
        total += inc
        values[e] = total
        inc += int(rng.integers(1, step_max + 1))
    return CostModel.table(values, label="table:convex")


def random_vector_with_budget(rng: np.random.Generator, total: int) -> tuple[int, ...]:
    """Random composition of ``total`` costly categories into criteria (entries >= 2)."""
    parts = []
    left = total
    while left > 0:
        step = int(rng.integers(1, left + 1))
        parts.append(step + 1)
        left -= step
    return tuple(sorted(parts))


def pairs_of(seq: Sequence) -> Iterator[tuple]:
    for i, a in enumerate(seq):
        for b in seq[i:]:
            yield a, b
