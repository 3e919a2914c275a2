"""Choice functions, choice classes, and rationality checks.

A choice function on the full subset lattice of a domain with ``n <= 20``
labels is held as an ``int64`` table indexed by menu bitmask (bit ``i`` is the
``i``-th domain label).  Choice functions on an explicit list of menus are
held as a mapping and support only pointwise queries.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from ._accel import kernels
from .criteria import CriteriaSet, discrimination_partition, discrimination_vector
from .relations import Domain, InputError

MAX_ALL_DOMAIN = 20


class UnsupportedDomainError(InputError):
    """An operation needs every nonempty menu but the choice function lists only some."""


class ChoiceClassError(ValueError):
    """Interchangeability is not an equivalence, so choice classes are undefined."""

    def __init__(self, message: str, witness: tuple[str, ...]):
        super().__init__(message)
        self.witness = witness


class NotUsingError(ValueError):
    """The choice function distinguishes alternatives the criteria do not."""


@dataclass(frozen=True)
class ChoiceFunction:
    """Map from menus to nonempty chosen subsets.

    Exactly one of ``table`` (all nonempty menus) or ``explicit`` (listed menus)
    is set.
    """

    domain: Domain
    table: np.ndarray | None = field(default=None, repr=False, compare=False)
    explicit: Mapping[frozenset[str], frozenset[str]] | None = None

    def __post_init__(self) -> None:
        if (self.table is None) == (self.explicit is None):
            raise InputError("give either a full table or an explicit menu mapping")
        n = len(self.domain)
        if self.table is not None:
            if n > MAX_ALL_DOMAIN:
                raise InputError(f"full-lattice choice functions are capped at {MAX_ALL_DOMAIN} labels")
            table = np.ascontiguousarray(self.table, dtype=np.int64)
            if table.shape != (1 << n,):
                raise InputError(f"table must have 2^{n} entries")
            masks = np.arange(1 << n, dtype=np.int64)
            if np.any(table[1:] & ~masks[1:]) or np.any(table[1:] == 0):
                bad = int(np.nonzero((table[1:] & ~masks[1:]) | (table[1:] == 0))[0][0]) + 1
                raise InputError(
                    f"c(A) must be a nonempty subset of A; fails at A={sorted(self.labels_of(bad))}"
                )
            table.setflags(write=False)
            object.__setattr__(self, "table", table)
        else:
            explicit = {}
            for menu, chosen in self.explicit.items():
                menu, chosen = frozenset(menu), frozenset(chosen)
                for x in menu:
                    self.domain.index(x)
                if not menu or not chosen or not chosen <= menu:
                    raise InputError(f"c(A) must be a nonempty subset of A; fails at A={sorted(menu)}")
                explicit[menu] = chosen
            object.__setattr__(self, "explicit", explicit)

    @property
    def is_all(self) -> bool:
        return self.table is not None

    @property
    def n_labels(self) -> int:
        return len(self.domain)

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.domain.index(x)
        return m

    def labels_of(self, mask: int) -> frozenset[str]:
        return frozenset(x for i, x in enumerate(self.domain) if (mask >> i) & 1)

    def __call__(self, menu: Iterable[str]) -> frozenset[str]:
        menu = frozenset(menu)
        if not menu:
            raise InputError("menus must be nonempty")
        if self.table is not None:
            return self.labels_of(int(self.table[self.mask_of(menu)]))
        try:
            return self.explicit[menu]
        except KeyError:
            raise InputError(f"menu {sorted(menu)} is outside this choice function's domain") from None

    def menus(self) -> list[frozenset[str]]:
        if self.table is not None:
            return [self.labels_of(m) for m in range(1, 1 << self.n_labels)]
        return sorted(self.explicit, key=lambda a: (len(a), sorted(a)))

    def require_all(self, what: str) -> np.ndarray:
        if self.table is None:
            raise UnsupportedDomainError(f"{what} needs the choice function on every nonempty menu")
        return self.table


@dataclass(frozen=True)
class ChoiceClassPartition:
    classes: tuple[tuple[str, ...], ...]
    well_defined: bool
    witness: tuple[str, ...] = ()


@dataclass(frozen=True)
class WeakOrder:
    """Complete transitive relation given as indifference levels, best first."""

    levels: tuple[tuple[str, ...], ...]

    def rank(self) -> dict[str, int]:
        return {x: r for r, level in enumerate(self.levels) for x in level}

    def holds(self, x: str, y: str) -> bool:
        """``x`` is at least as good as ``y``."""
        r = self.rank()
        return r[x] <= r[y]

    def pairs(self) -> frozenset[tuple[str, str]]:
        r = self.rank()
        return frozenset((x, y) for x in r for y in r if r[x] <= r[y])


def from_table(domain: Domain, table: np.ndarray) -> ChoiceFunction:
    return ChoiceFunction(domain, table=table)


def from_ranks(domain: Domain, ranks: Sequence[int]) -> ChoiceFunction:
    """Choose the highest-ranked members of each menu (larger rank is better)."""
    if len(ranks) != len(domain):
        raise InputError("need one rank per label")
    _check_all_size(domain)
    table = kernels.choice_from_ranks(np.asarray(ranks, dtype=np.int64))
    return ChoiceFunction(domain, table=table)


def from_weak_order(domain: Domain, order: WeakOrder) -> ChoiceFunction:
    r = order.rank()
    if set(r) != set(domain):
        raise InputError("weak order must rank every label exactly once")
    return from_ranks(domain, [-r[x] for x in domain])


def from_mapping(domain: Domain, mapping: Mapping[Iterable[str], Iterable[str]]) -> ChoiceFunction:
    """Build from an explicit menu mapping; promoted to a full table when every menu is listed."""
    explicit = {frozenset(a): frozenset(c) for a, c in mapping.items()}
    n = len(domain)
    if n <= MAX_ALL_DOMAIN and len(explicit) == (1 << n) - 1:
        idx = domain.index
        table = np.zeros(1 << n, dtype=np.int64)
        for menu, chosen in explicit.items():
            m = sum(1 << idx(x) for x in menu)
            table[m] = sum(1 << idx(x) for x in chosen)
        return ChoiceFunction(domain, table=table)
    return ChoiceFunction(domain, explicit=explicit)


def _check_all_size(domain: Domain) -> None:
    if len(domain) > MAX_ALL_DOMAIN:
        raise InputError(f"full-lattice choice functions are capped at {MAX_ALL_DOMAIN} labels")


def interchangeable(c: ChoiceFunction) -> np.ndarray:
    """Symmetric boolean matrix of interchangeable label pairs.

    ``x`` and ``y`` are interchangeable when, in both directions, choosing one
    from a menu containing the other means choosing the other too, and one is
    chosen from ``A`` exactly when the other is chosen from the mirrored menu
    ``A - {x} + {y}``.
    """
    table = c.require_all("choice classes")
    one_way = np.asarray(kernels.interchange_matrix(table, c.n_labels))
    return one_way & one_way.T


def choice_classes(c: ChoiceFunction) -> ChoiceClassPartition:
    """Choice classes in first-appearance order, with a witness if ill-defined."""
    m = interchangeable(c)
    labels = c.domain.elements
    n = len(labels)
    for x in range(n):
        for y in range(n):
            if not m[x, y]:
                continue
            for z in range(n):
                if m[y, z] and not m[x, z]:
                    return ChoiceClassPartition((), False, (labels[x], labels[y], labels[z]))
    seen = [False] * n
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        members = [y for y in range(n) if m[x, y]]
        for y in members:
            seen[y] = True
        classes.append(tuple(labels[y] for y in members))
    return ChoiceClassPartition(tuple(classes), True)


def n_classes(c: ChoiceFunction) -> int:
    part = choice_classes(c)
    if not part.well_defined:
        raise ChoiceClassError(
            f"interchangeability is not an equivalence; witness {part.witness}", part.witness
        )
    return len(part.classes)


def uses(cs: CriteriaSet, c: ChoiceFunction) -> bool:
    """True iff every cell of the discrimination partition lies inside one choice class."""
    if cs.domain != c.domain:
        raise InputError("criteria and choice function have different domains")
    part = choice_classes(c)
    if not part.well_defined:
        raise ChoiceClassError(
            f"interchangeability is not an equivalence; witness {part.witness}", part.witness
        )
    class_of = {x: k for k, cls in enumerate(part.classes) for x in cls}
    return all(
        len({class_of[x] for x in cell}) == 1 for cell in discrimination_partition(cs).cells
    )


def maximally_discriminates(cs: CriteriaSet, c: ChoiceFunction) -> bool:
    """``n(c) == min(prod e_i, |X|)``; only defined for pairs where ``c`` uses ``cs``."""
    if not uses(cs, c):
        raise NotUsingError("the choice function does not use these criteria")
    return n_classes(c) == min(math.prod(discrimination_vector(cs)), len(cs.domain))


def build_max_choice(cs: CriteriaSet) -> ChoiceFunction:
    """Choose from each menu the members of its best discrimination cell.

    Cells are ranked lexicographically by signature, smaller signature first, so
    the choice classes are exactly the cells.
    """
    _check_all_size(cs.domain)
    part = discrimination_partition(cs)
    ordered = sorted(part.signatures)
    rank_of_sig = {s: len(ordered) - k for k, s in enumerate(ordered)}
    ranks = [rank_of_sig[s] for s in cs.signatures()]
    return from_ranks(cs.domain, ranks)


def _pairwise_beats(c: ChoiceFunction) -> np.ndarray:
    """``beats[x]``: mask of ``y`` with ``x`` chosen from ``{x, y}`` (``x`` itself included)."""
    table = c.table
    n = c.n_labels
    beats = np.zeros(n, dtype=np.int64)
    for x in range(n):
        beats[x] |= 1 << x
        for y in range(n):
            if x != y and (int(table[(1 << x) | (1 << y)]) >> x) & 1:
                beats[x] |= 1 << y
    return beats


def rationalizable(c: ChoiceFunction) -> WeakOrder | None:
    """Weak order whose maximizers reproduce ``c`` on every menu, or ``None``.

    The only candidate is the revealed pairwise relation ``x R y iff x in c({x, y})``;
    it is checked for transitivity and then against every menu.
    """
    c.require_all("rationalizability")
    n = c.n_labels
    beats = _pairwise_beats(c)
    for x in range(n):
        for y in range(n):
            if not (beats[x] >> y) & 1:
                continue
            # x R y and y R z must give x R z
            if int(beats[y]) & ~int(beats[x]):
                return None
    if not np.array_equal(kernels.maximal_sets(beats), c.table):
        return None
    score = [int(bin(int(b)).count("1")) for b in beats]
    labels = c.domain.elements
    levels: dict[int, list[str]] = {}
    for x in range(n):
        levels.setdefault(score[x], []).append(labels[x])
    return WeakOrder(tuple(tuple(levels[s]) for s in sorted(levels, reverse=True)))


def condorcet_violation(c: ChoiceFunction) -> tuple[frozenset[str], str] | None:
    """A menu and a pairwise winner in it that ``c`` fails to choose, if any."""
    table = c.require_all("the Condorcet rule")
    beats = _pairwise_beats(c)
    winners = kernels.maximal_sets(beats)
    a = int(kernels.first_violation(table, winners))
    if a < 0:
        return None
    missing = int(winners[a]) & ~int(table[a])
    x = c.domain.elements[(missing & -missing).bit_length() - 1]
    return c.labels_of(a), x


def condorcet_consistent(c: ChoiceFunction) -> bool:
    """Every alternative chosen from each pair in a menu is chosen from the menu."""
    return condorcet_violation(c) is None
