"""Finite binary relations, category extraction and category-order isomorphism.

A criterion is an asymmetric relation on a finite labelled domain.  Two
alternatives belong to the same category when they have the same superior set
and the same inferior set; the relation then lifts to a well-defined order on
categories.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import permutations


class InputError(ValueError):
    """Malformed input: unknown labels, asymmetry violations, bad arguments."""


@dataclass(frozen=True)
class Domain:
    """Ordered, duplicate-free tuple of nonempty string labels."""

    elements: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise InputError("domain must contain at least one label")
        for label in elements:
            if not isinstance(label, str) or not label:
                raise InputError(f"domain labels must be nonempty strings, got {label!r}")
        if len(set(elements)) != len(elements):
            seen: set[str] = set()
            dup = next(x for x in elements if x in seen or seen.add(x))
            raise InputError(f"duplicate domain label {dup!r}")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown label {label!r}") from None


@dataclass(frozen=True)
class Relation:
    """A binary relation given by explicit ``(superior, inferior)`` label pairs.

    Construction checks label membership only; asymmetry is checked by
    :func:`validate_asymmetric` and enforced by :func:`categories`.
    """

    domain: Domain
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        pairs = frozenset((str(x), str(y)) for x, y in self.pairs)
        for x, y in pairs:
            self.domain.index(x)
            self.domain.index(y)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_pairs(cls, labels: Iterable[str] | Domain, pairs: Iterable[tuple[str, str]]) -> Relation:
        domain = labels if isinstance(labels, Domain) else Domain(tuple(labels))
        return cls(domain, frozenset(tuple(p) for p in pairs))

    @classmethod
    def from_category_order(
        cls,
        domain: Domain,
        cells: Sequence[Iterable[str]],
        order: Iterable[tuple[int, int]],
    ) -> Relation:
        """Relation in which every member of ``cells[i]`` beats every member of ``cells[j]``
        for each ``(i, j)`` in ``order``."""
        cells = [tuple(c) for c in cells]
        pairs = set()
        for i, j in order:
            for x in cells[i]:
                for y in cells[j]:
                    pairs.add((x, y))
        return cls(domain, frozenset(pairs))

    def holds(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs

    def index_pairs(self) -> frozenset[tuple[int, int]]:
        idx = self.domain.index
        return frozenset((idx(x), idx(y)) for x, y in self.pairs)

    def restrict(self, labels: Iterable[str]) -> Relation:
        wanted = set(labels)
        keep = tuple(x for x in self.domain if x in wanted)
        sub = Domain(keep)
        return Relation(sub, frozenset((x, y) for x, y in self.pairs if x in sub and y in sub))


@dataclass(frozen=True)
class CategoryStructure:
    """Categories of a criterion and the order lifted onto them.

    ``partition[j]`` is the label tuple of category ``j``; ``order`` holds the
    index pairs ``(j, j')`` with category ``j`` superior to category ``j'``.
    """

    partition: tuple[tuple[str, ...], ...]
    order: frozenset[tuple[int, int]]

    @property
    def e(self) -> int:
        return len(self.partition)

    def category_of(self) -> dict[str, int]:
        return {x: j for j, cell in enumerate(self.partition) for x in cell}

    def superior(self, i: int, j: int) -> bool:
        return (i, j) in self.order


def validate_asymmetric(rel: Relation) -> bool:
    """True iff no self-pair occurs and no pair occurs together with its reverse."""
    for x, y in rel.pairs:
        if x == y or (y, x) in rel.pairs:
            return False
    return True


def asymmetry_witness(rel: Relation) -> tuple[str, str] | None:
    for x, y in sorted(rel.pairs):
        if x == y or (y, x) in rel.pairs:
            return (x, y)
    return None


def categories(rel: Relation) -> CategoryStructure:
    """Group labels by identical (superior set, inferior set) and lift the relation.

    Categories are numbered by first appearance in the domain's label order.
    """
    witness = asymmetry_witness(rel)
    if witness is not None:
        raise InputError(f"relation is not asymmetric: offending pair {witness}")
    n = len(rel.domain)
    sup: list[int] = [0] * n
    inf: list[int] = [0] * n
    for x, y in rel.index_pairs():
        inf[x] |= 1 << y
        sup[y] |= 1 << x
    key_to_cell: dict[tuple[int, int], int] = {}
    cell_of = [0] * n
    cells: list[list[str]] = []
    for i, label in enumerate(rel.domain):
        key = (sup[i], inf[i])
        j = key_to_cell.get(key)
        if j is None:
            j = key_to_cell[key] = len(cells)
            cells.append([])
        cells[j].append(label)
        cell_of[i] = j
    order = frozenset((cell_of[x], cell_of[y]) for x, y in rel.index_pairs())
    return CategoryStructure(tuple(tuple(c) for c in cells), order)


def quotient(rel: Relation) -> Relation:
    """The lifted relation on categories, with category ``j`` labelled ``str(j)``."""
    cs = categories(rel)
    dom = Domain(tuple(str(j) for j in range(cs.e)))
    return Relation(dom, frozenset((str(a), str(b)) for a, b in cs.order))


def _signature(e: int, order: frozenset[tuple[int, int]]) -> list[tuple[int, int]]:
    out_deg = [0] * e
    in_deg = [0] * e
    for a, b in order:
        out_deg[a] += 1
        in_deg[b] += 1
    return list(zip(out_deg, in_deg))


def find_isomorphism(s1: CategoryStructure, s2: CategoryStructure) -> tuple[int, ...] | None:
    """Bijection ``f`` (as a tuple, ``f[j]`` is the image of cell ``j``) preserving the
    category order in both directions, or ``None``.

    Backtracking search pruned by (out-degree, in-degree) signatures.
    """
    e = s1.e
    if e != s2.e or len(s1.order) != len(s2.order):
        return None
    sig1 = _signature(e, s1.order)
    sig2 = _signature(e, s2.order)
    if sorted(sig1) != sorted(sig2):
        return None
    o1, o2 = s1.order, s2.order
    candidates = [[b for b in range(e) if sig2[b] == sig1[a]] for a in range(e)]
    image = [-1] * e
    used = [False] * e

    def extend(a: int) -> bool:
        if a == e:
            return True
        for b in candidates[a]:
            if used[b]:
                continue
            if ((a, a) in o1) != ((b, b) in o2):
                continue
            ok = True
            for p in range(a):
                q = image[p]
                if ((a, p) in o1) != ((b, q) in o2) or ((p, a) in o1) != ((q, b) in o2):
                    ok = False
                    break
            if not ok:
                continue
            image[a] = b
            used[b] = True
            if extend(a + 1):
                return True
            used[b] = False
            image[a] = -1
        return False

    return tuple(image) if extend(0) else None


def order_isomorphic(s1: CategoryStructure, s2: CategoryStructure) -> bool:
    """True iff the two category orders are isomorphic as digraphs on their cells."""
    return find_isomorphism(s1, s2) is not None


def order_isomorphic_bruteforce(s1: CategoryStructure, s2: CategoryStructure) -> bool:
    """Unpruned search over all bijections; used as an oracle in tests."""
    if s1.e != s2.e:
        return False
    for perm in permutations(range(s1.e)):
        mapped = frozenset((perm[a], perm[b]) for a, b in s1.order)
        if mapped == s2.order:
            return True
    return False
