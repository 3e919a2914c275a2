"""Weighted voting over criteria.

Each criterion votes on a pair ``(x, y)`` with ``+1``, ``-1`` or ``0`` according
to how it orders their categories; the tournament margin is the weighted sum.
With binary criteria, scoring each alternative by the total weight of the
criteria placing it in their top category gives a choice function whose
pairwise verdicts follow the margins.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .choice import ChoiceFunction, from_ranks
from .criteria import CriteriaSet
from .efficiency import as_number
from .relations import Domain, InputError, Relation


class NotBinaryError(InputError):
    pass


@dataclass(frozen=True)
class WeightProfile:
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = []
        for w in self.weights:
            w = as_number(w)
            if not isinstance(w, Fraction):
                w = Fraction(w).limit_denominator(10**12)
            if w <= 0:
                raise InputError(f"weights must be positive, got {w}")
            ws.append(w)
        object.__setattr__(self, "weights", tuple(ws))

    @classmethod
    def parse(cls, text: str) -> WeightProfile:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise InputError("no weights given")
        return cls(tuple(as_number(p) for p in parts))

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class Tournament:
    """Antisymmetric margins on ordered label pairs."""

    labels: tuple[str, ...]
    margins: dict[tuple[str, str], Fraction]

    def margin(self, x: str, y: str) -> Fraction:
        if x == y:
            return Fraction(0)
        return self.margins[(x, y)]


def _vote(cs: CriteriaSet, i: int, x: str, y: str) -> int:
    idx = cs.domain.index
    cat = cs.category_index(i)
    a, b = cat[idx(x)], cat[idx(y)]
    if a == b:
        return 0
    order = cs.structures[i].order
    if (a, b) in order:
        return 1
    if (b, a) in order:
        return -1
    return 0


def _check_weights(cs: CriteriaSet, w: WeightProfile) -> None:
    if len(w) != cs.N:
        raise InputError(f"{len(w)} weights given for {cs.N} criteria")


def weighted_tournament(cs: CriteriaSet, w: WeightProfile) -> Tournament:
    _check_weights(cs, w)
    labels = cs.domain.elements
    margins = {}
    for a, x in enumerate(labels):
        for y in labels[a + 1 :]:
            m = sum((wi * _vote(cs, i, x, y) for i, wi in enumerate(w.weights)), Fraction(0))
            margins[(x, y)] = m
            margins[(y, x)] = -m
    return Tournament(labels, margins)


def top_categories(cs: CriteriaSet) -> tuple[int, ...]:
    """Index of the superior category of each binary criterion.

    Raises :class:`NotBinaryError` naming the first criterion that does not
    have exactly two strictly ordered categories.
    """
    tops = []
    for name, s in zip(cs.names, cs.structures):
        if s.e != 2:
            raise NotBinaryError(f"criterion {name!r} has {s.e} categories; weighted scoring needs 2")
        if (0, 1) in s.order:
            tops.append(0)
        elif (1, 0) in s.order:
            tops.append(1)
        else:
            raise NotBinaryError(f"criterion {name!r} leaves its two categories unranked")
    return tuple(tops)


def scores(cs: CriteriaSet, w: WeightProfile) -> dict[str, Fraction]:
    """Total weight of the criteria ranking each label in their top category."""
    _check_weights(cs, w)
    tops = top_categories(cs)
    idx = cs.domain.index
    return {
        x: sum(
            (wi for i, wi in enumerate(w.weights) if cs.category_index(i)[idx(x)] == tops[i]),
            Fraction(0),
        )
        for x in cs.domain
    }


def aggregate_choice(cs: CriteriaSet, w: WeightProfile) -> ChoiceFunction:
    """Choose the score maximizers of each menu; all tied maximizers are kept."""
    s = scores(cs, w)
    distinct = sorted(set(s.values()))
    rank = {v: r for r, v in enumerate(distinct)}
    return from_ranks(cs.domain, [rank[s[x]] for x in cs.domain])


def majority_choice(t: Tournament) -> ChoiceFunction:
    """Alternatives no member of the menu beats on margin; the whole menu when
    every member is beaten (a cycle)."""
    labels = t.labels
    n = len(labels)
    beats = [0] * n
    for a, x in enumerate(labels):
        for b, y in enumerate(labels):
            if a != b and t.margin(x, y) > 0:
                beats[a] |= 1 << b
    table = np.zeros(1 << n, dtype=np.int64)
    for menu in range(1, 1 << n):
        unbeaten = 0
        for a in range(n):
            if (menu >> a) & 1 and not any((beats[b] >> a) & 1 for b in range(n) if (menu >> b) & 1):
                unbeaten |= 1 << a
        table[menu] = unbeaten or menu
    return ChoiceFunction(Domain(labels), table=table)


def find_condorcet_cycle(t: Tournament) -> tuple[str, ...] | None:
    """Shortest cycle ``x1 -> ... -> xm -> x1`` of strictly positive margins, if any.

    Breadth-first search from every start; ties between equally short cycles go
    to the earliest start label, then to label order along the path.
    """
    labels = t.labels
    n = len(labels)
    succ = [[b for b in range(n) if b != a and t.margin(labels[a], labels[b]) > 0] for a in range(n)]
    best: list[int] | None = None
    for start in range(n):
        parent = {start: -1}
        queue = deque([start])
        found = None
        while queue and found is None:
            a = queue.popleft()
            for b in succ[a]:
                if b == start:
                    found = a
                    break
                if b not in parent:
                    parent[b] = a
                    queue.append(b)
        if found is None:
            continue
        path = []
        a = found
        while a != -1:
            path.append(a)
            a = parent[a]
        path.reverse()
        if best is None or len(path) < len(best):
            best = path
    return None if best is None else tuple(labels[a] for a in best)


def condorcet_profile() -> CriteriaSet:
    """Three ternary criteria on ``{a, b, c}`` ranking them a>b>c, b>c>a and c>a>b."""
    dom = Domain(("a", "b", "c"))

    def chain(order: Sequence[str]) -> Relation:
        return Relation(
            dom,
            frozenset((order[i], order[j]) for i in range(3) for j in range(i + 1, 3)),
        )

    return CriteriaSet(
        dom,
        (chain("abc"), chain("bca"), chain("cab")),
        ("abc", "bca", "cab"),
    )


def equal_weights(n: int) -> WeightProfile:
    return WeightProfile(tuple(Fraction(1) for _ in range(n)))


def weights_from(values: Iterable) -> WeightProfile:
    return WeightProfile(tuple(values))
