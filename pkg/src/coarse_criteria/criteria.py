"""Sets of criteria on a shared domain.

Covers discrimination vectors and partitions, maximal categorization, the
order-isomorphism property, and the product representation.  The three
properties are equivalent; :func:`theorem_check` evaluates each of them by a
separate route and reports any disagreement.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations, product

from .relations import (
    CategoryStructure,
    Domain,
    InputError,
    Relation,
    categories,
    order_isomorphic,
)

Signature = tuple[int, ...]

SELECTOR_MODES = ("meet", "union")

# Exhaustive selector enumeration is 2**cells; refuse beyond this many cells.
EXHAUSTIVE_SELECTOR_CAP = 16


@dataclass(frozen=True)
class CriteriaSet:
    """Ordered criteria ``C_1..C_N`` over one domain, with their category structures."""

    domain: Domain
    criteria: tuple[Relation, ...]
    names: tuple[str, ...] = ()
    structures: tuple[CategoryStructure, ...] = field(default=(), compare=False)
    _cat_index: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        criteria = tuple(self.criteria)
        object.__setattr__(self, "criteria", criteria)
        if not criteria:
            raise InputError("a criteria set needs at least one criterion")
        for i, rel in enumerate(criteria):
            if rel.domain != self.domain:
                raise InputError(f"criterion {i} is defined on a different domain")
        names = tuple(self.names) or tuple(f"C{i + 1}" for i in range(len(criteria)))
        if len(names) != len(criteria):
            raise InputError("names must match the number of criteria")
        object.__setattr__(self, "names", names)
        structures = tuple(self.structures) or tuple(categories(r) for r in criteria)
        if len(structures) != len(criteria):
            raise InputError("structures must match the number of criteria")
        object.__setattr__(self, "structures", structures)
        idx = self.domain.index
        cat_index = []
        for s in structures:
            row = [0] * len(self.domain)
            for j, cell in enumerate(s.partition):
                for x in cell:
                    row[idx(x)] = j
            cat_index.append(tuple(row))
        object.__setattr__(self, "_cat_index", tuple(cat_index))

    @property
    def N(self) -> int:
        return len(self.criteria)

    def label_signature(self, label: str, skip: int | None = None) -> Signature:
        """Category indices of ``label`` under every criterion (optionally omitting one)."""
        x = self.domain.index(label)
        return tuple(row[x] for i, row in enumerate(self._cat_index) if i != skip)

    def signatures(self, skip: int | None = None) -> list[Signature]:
        """Per-label signatures in domain order."""
        rows = [row for i, row in enumerate(self._cat_index) if i != skip]
        return list(zip(*rows)) if rows else [()] * len(self.domain)

    def category_index(self, i: int) -> tuple[int, ...]:
        return self._cat_index[i]


@dataclass(frozen=True)
class DiscriminationPartition:
    """Meet of the criteria's category partitions.

    ``cells[k]`` has signature ``signatures[k]`` (its category index under each
    criterion).  Cells appear in first-appearance order over the domain.
    """

    cells: tuple[tuple[str, ...], ...]
    signatures: tuple[Signature, ...]

    def __len__(self) -> int:
        return len(self.cells)

    def cell_signature(self) -> dict[tuple[str, ...], Signature]:
        return dict(zip(self.cells, self.signatures))


@dataclass(frozen=True)
class ProductRepresentation:
    """Relabelling of a criteria set as criteria on a product of attributes.

    Attribute ``i`` is ``Y_i = {0, ..., e_i - 1}`` split into singleton ranges;
    ``bijections[i][j]`` is the mirrored category matched with category ``j`` of
    criterion ``i``; ``relabeling`` maps each label to its attribute vector.
    """

    attribute_sets: tuple[tuple[int, ...], ...]
    attribute_partitions: tuple[tuple[frozenset[int], ...], ...]
    mirrored_orders: tuple[frozenset[tuple[int, int]], ...]
    bijections: tuple[tuple[int, ...], ...]
    relabeling: dict[str, Signature]

    def points(self) -> list[Signature]:
        return list(product(*self.attribute_sets))

    def mirrored_relation(self, i: int) -> Relation:
        """Criterion ``i`` rebuilt on ``Y = prod Y_k``; category ``j`` is the slab ``Y_i^j x rest``."""
        pts = self.points()
        labels = tuple(_point_label(p) for p in pts)
        block = {}
        for j, part in enumerate(self.attribute_partitions[i]):
            for v in part:
                block[v] = j
        order = self.mirrored_orders[i]
        pairs = frozenset(
            (labels[a], labels[b])
            for a, p in enumerate(pts)
            for b, q in enumerate(pts)
            if (block[p[i]], block[q[i]]) in order
        )
        return Relation(Domain(labels), pairs)


@dataclass(frozen=True)
class TheoremReport:
    maximally_categorizes: bool
    order_isomorphism_property: bool
    product_representation: bool

    @property
    def agree(self) -> bool:
        return (
            self.maximally_categorizes
            == self.order_isomorphism_property
            == self.product_representation
        )

    @property
    def violation(self) -> bool:
        return not self.agree

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (
            self.maximally_categorizes,
            self.order_isomorphism_property,
            self.product_representation,
        )


def _point_label(p: Sequence[int]) -> str:
    if all(v < 10 for v in p):
        return "".join(str(v) for v in p)
    return ",".join(str(v) for v in p)


def discrimination_vector(cs: CriteriaSet) -> tuple[int, ...]:
    return tuple(s.e for s in cs.structures)


def discrimination_partition(cs: CriteriaSet, skip: int | None = None) -> DiscriminationPartition:
    """Meet of the category partitions, optionally leaving out criterion ``skip``."""
    groups: dict[Signature, list[str]] = {}
    for label, sig in zip(cs.domain, cs.signatures(skip)):
        groups.setdefault(sig, []).append(label)
    sigs = tuple(groups)
    return DiscriminationPartition(tuple(tuple(groups[s]) for s in sigs), sigs)


def maximally_categorizes(cs: CriteriaSet) -> bool:
    """True iff the discrimination partition has exactly ``prod e(C_i)`` cells."""
    return len(set(cs.signatures())) == math.prod(discrimination_vector(cs))


def restricted_order(
    cs: CriteriaSet,
    i: int,
    selector: Iterable,
    mode: str = "meet",
) -> CategoryStructure:
    """Order of criterion ``i`` on the pieces ``E_i^j`` of a selected subset of the domain.

    In ``"meet"`` mode the selector lists cells of the meet partition of the other
    criteria, each given by its signature (category indices of the criteria other
    than ``i``, in criterion order).  In ``"union"`` mode it lists raw categories
    ``(k, j)`` of other criteria.  Empty pieces are dropped.
    """
    if not 0 <= i < cs.N:
        raise InputError(f"criterion index {i} out of range")
    selected = _selected_labels(cs, i, selector, mode)
    if not selected:
        raise InputError("selector picks out an empty set")
    base = cs.structures[i]
    cat = cs.category_index(i)
    idx = cs.domain.index
    pieces: dict[int, list[str]] = {}
    for x in cs.domain:
        if x in selected:
            pieces.setdefault(cat[idx(x)], []).append(x)
    kept = sorted(pieces)
    renumber = {j: t for t, j in enumerate(kept)}
    order = frozenset(
        (renumber[a], renumber[b]) for a, b in base.order if a in renumber and b in renumber
    )
    return CategoryStructure(tuple(tuple(pieces[j]) for j in kept), order)


def _selected_labels(cs: CriteriaSet, i: int, selector: Iterable, mode: str) -> set[str]:
    if mode == "meet":
        wanted = {tuple(s) for s in selector}
        return {x for x, sig in zip(cs.domain, cs.signatures(skip=i)) if sig in wanted}
    if mode == "union":
        out: set[str] = set()
        for k, j in selector:
            if k == i:
                raise InputError("union selectors may not use categories of the restricted criterion")
            out.update(cs.structures[k].partition[j])
        return out
    raise InputError(f"unknown selector mode {mode!r}; expected one of {SELECTOR_MODES}")


def _minimal_selectors(cs: CriteriaSet, i: int, mode: str) -> list[set[str]]:
    if mode == "meet":
        return [set(c) for c in discrimination_partition(cs, skip=i).cells]
    if mode == "union":
        return [set(cell) for k, s in enumerate(cs.structures) if k != i for cell in s.partition]
    raise InputError(f"unknown selector mode {mode!r}; expected one of {SELECTOR_MODES}")


def _all_selectors(cs: CriteriaSet, i: int, mode: str) -> list:
    if mode == "meet":
        atoms = list(discrimination_partition(cs, skip=i).signatures)
    else:
        atoms = [(k, j) for k, s in enumerate(cs.structures) if k != i for j in range(s.e)]
    if len(atoms) > EXHAUSTIVE_SELECTOR_CAP:
        raise InputError(
            f"exhaustive selector check needs 2^{len(atoms)} unions; cap is 2^{EXHAUSTIVE_SELECTOR_CAP}"
        )
    return atoms


def order_isomorphism_property(
    cs: CriteriaSet, exhaustive: bool = False, mode: str = "meet"
) -> bool:
    """Does every criterion look the same on every selected part of the domain?

    The default test only examines minimal selectors: each must meet every
    category of the restricted criterion, since larger unions only enlarge the
    intersections.  ``exhaustive=True`` instead builds :func:`restricted_order`
    for every nonempty union of selector atoms and compares it with the
    unrestricted structure by isomorphism search.
    """
    for i in range(cs.N):
        if exhaustive:
            if not _exhaustive_ok(cs, i, mode):
                return False
            continue
        cat = cs.category_index(i)
        e = cs.structures[i].e
        idx = cs.domain.index
        for sel in _minimal_selectors(cs, i, mode):
            if len({cat[idx(x)] for x in sel}) != e:
                return False
    return True


def _exhaustive_ok(cs: CriteriaSet, i: int, mode: str) -> bool:
    atoms = _all_selectors(cs, i, mode)
    if mode == "union" and not atoms:
        # no other criteria: the only union of C_{-i} categories is the empty one
        return True
    full = cs.structures[i]
    for r in range(1, len(atoms) + 1):
        for chosen in combinations(atoms, r):
            if not order_isomorphic(restricted_order(cs, i, chosen, mode), full):
                return False
    return True


def product_representation(cs: CriteriaSet) -> ProductRepresentation | None:
    """Build the product representation, or ``None`` when some attribute vector has no label.

    Attribute values are category indices, so the category bijections are the
    identity and every label is relabelled by its signature.
    """
    vec = discrimination_vector(cs)
    relabeling = dict(zip(cs.domain, cs.signatures()))
    attribute_sets = tuple(tuple(range(e)) for e in vec)
    images = set(relabeling.values())
    for point in product(*attribute_sets):
        if point not in images:
            return None
    return ProductRepresentation(
        attribute_sets=attribute_sets,
        attribute_partitions=tuple(tuple(frozenset({j}) for j in range(e)) for e in vec),
        mirrored_orders=tuple(s.order for s in cs.structures),
        bijections=tuple(tuple(range(e)) for e in vec),
        relabeling=relabeling,
    )


def verify_product_representation(cs: CriteriaSet, rep: ProductRepresentation) -> bool:
    """Independent audit of a representation.

    Re-derives each mirrored criterion's categories on ``Y``, checks they are the
    slabs, checks the bijections preserve order both ways, and checks the
    relabelling is onto ``Y`` and respects each label's categories.
    """
    pts = rep.points()
    labels = [_point_label(p) for p in pts]
    for i, s in enumerate(cs.structures):
        mirrored = categories(rep.mirrored_relation(i))
        if mirrored.e != s.e:
            return False
        slab_of = {}
        for j, part in enumerate(rep.attribute_partitions[i]):
            for v in part:
                slab_of[v] = j
        # mirrored category m must be exactly one slab
        mirrored_to_slab = {}
        for m, cell in enumerate(mirrored.partition):
            slabs = {slab_of[pts[labels.index(y)][i]] for y in cell}
            expected = sum(1 for p in pts if slab_of[p[i]] in slabs)
            if len(slabs) != 1 or expected != len(cell):
                return False
            mirrored_to_slab[m] = slabs.pop()
        slab_to_mirrored = {v: m for m, v in mirrored_to_slab.items()}
        f = [slab_to_mirrored[rep.bijections[i][j]] for j in range(s.e)]
        for a in range(s.e):
            for b in range(s.e):
                if ((a, b) in s.order) != ((f[a], f[b]) in mirrored.order):
                    return False
    if set(rep.relabeling.values()) != set(pts):
        return False
    for x, vec in rep.relabeling.items():
        for i in range(cs.N):
            j = cs.category_index(i)[cs.domain.index(x)]
            if vec[i] not in rep.attribute_partitions[i][rep.bijections[i][j]]:
                return False
    return True


def relabeled_criteria(cs: CriteriaSet, rep: ProductRepresentation) -> CriteriaSet:
    """Criteria re-derived on the original labels from their attribute vectors alone."""
    block = []
    for parts in rep.attribute_partitions:
        m = {}
        for j, part in enumerate(parts):
            for v in part:
                m[v] = j
        block.append(m)
    rels = []
    for i in range(cs.N):
        order = rep.mirrored_orders[i]
        pairs = frozenset(
            (x, y)
            for x, vx in rep.relabeling.items()
            for y, vy in rep.relabeling.items()
            if (block[i][vx[i]], block[i][vy[i]]) in order
        )
        rels.append(Relation(cs.domain, pairs))
    return CriteriaSet(cs.domain, tuple(rels), cs.names)


def theorem_check(cs: CriteriaSet, exhaustive_selectors: bool = False, mode: str = "meet") -> TheoremReport:
    """Evaluate maximal categorization, the order-isomorphism property and the
    existence of a product representation, each by its own route."""
    return TheoremReport(
        maximally_categorizes(cs),
        order_isomorphism_property(cs, exhaustive=exhaustive_selectors, mode=mode),
        product_representation(cs) is not None,
    )


def from_product(
    attributes: Sequence[Sequence[int]],
    orders: Sequence[Iterable[tuple[int, int]]],
    keep: Iterable[Signature] | None = None,
    names: Sequence[str] = (),
) -> CriteriaSet:
    """Criteria based on a product of attributes.

    ``attributes[i][v]`` is the category (range) of value ``v`` of attribute ``i``,
    and ``orders[i]`` orders those categories.  The domain is the full product,
    or the value vectors in ``keep``.  Labels concatenate the value indices.
    """
    if len(attributes) != len(orders):
        raise InputError("need one order per attribute")
    points = list(product(*(range(len(a)) for a in attributes)))
    if keep is not None:
        wanted = {tuple(k) for k in keep}
        points = [p for p in points if p in wanted]
    labels = tuple(_point_label(p) for p in points)
    domain = Domain(labels)
    rels = []
    for i, (attr, order) in enumerate(zip(attributes, orders)):
        order = set(order)
        pairs = frozenset(
            (labels[a], labels[b])
            for a, p in enumerate(points)
            for b, q in enumerate(points)
            if (attr[p[i]], attr[q[i]]) in order
        )
        rels.append(Relation(domain, pairs))
    return CriteriaSet(domain, tuple(rels), tuple(names))


def bit_cube(dim: int = 3, keep: Iterable[str] | None = None) -> CriteriaSet:
    """Coordinate criteria on binary strings of length ``dim`` (1 beats 0)."""
    keep_vecs = None if keep is None else [tuple(int(ch) for ch in s) for s in keep]
    return from_product([(0, 1)] * dim, [{(1, 0)}] * dim, keep=keep_vecs)


def isomorphism_table(cs: CriteriaSet, rep: ProductRepresentation) -> list[tuple[str, int, int]]:
    """Rows ``(criterion name, category index, mirrored category)`` for reporting."""
    return [
        (name, j, rep.bijections[i][j])
        for i, name in enumerate(cs.names)
        for j in range(cs.structures[i].e)
    ]
