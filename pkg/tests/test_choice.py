from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_criteria.choice import (
    ChoiceClassError,
    NotUsingError,
    UnsupportedDomainError,
    WeakOrder,
    build_max_choice,
    choice_classes,
    condorcet_consistent,
    condorcet_violation,
    from_mapping,
    from_ranks,
    from_table,
    from_weak_order,
    interchangeable,
    maximally_discriminates,
    n_classes,
    rationalizable,
    uses,
)
from coarse_criteria.criteria import CriteriaSet, discrimination_partition, from_product
from coarse_criteria.relations import Domain, InputError, Relation
from coarse_criteria.sampling import labels_for, random_criteria_set

seeds = st.integers(0, 2**32 - 1)


def subsets(labels):
    for r in range(1, len(labels) + 1):
        yield from (frozenset(c) for c in itertools.combinations(labels, r))


def brute_interchangeable(c, x, y) -> bool:
    """Both directions of: x chosen with y present forces y chosen; x chosen from A iff y chosen from the mirror."""
    labels = c.domain.elements
    for a, b in ((x, y), (y, x)):
        for menu in subsets(labels):
            if a in menu and b in menu and a in c(menu) and b not in c(menu):
                return False
            if a in menu and b not in menu:
                mirror = (menu - {a}) | {b}
                if (a in c(menu)) != (b in c(mirror)):
                    return False
    return True


def brute_rationalizable(c) -> bool:
    """Search all weak orders given as rank vectors."""
    labels = c.domain.elements
    n = len(labels)
    for ranks in itertools.product(range(n), repeat=n):
        ok = True
        for menu in subsets(labels):
            top = max(ranks[labels.index(x)] for x in menu)
            if c(menu) != frozenset(x for x in menu if ranks[labels.index(x)] == top):
                ok = False
                break
        if ok:
            return True
    return False


def brute_condorcet(c) -> bool:
    labels = c.domain.elements
    for menu in subsets(labels):
        for x in menu:
            if all(x in c({x, y}) for y in menu if y != x) and x not in c(menu):
                return False
    return True


@st.composite
def random_tables(draw, max_labels: int = 4):
    n = draw(st.integers(1, max_labels))
    table = np.zeros(1 << n, dtype=np.int64)
    for m in range(1, 1 << n):
        # a random nonempty submask of m
        while True:
            sub = draw(st.integers(1, m)) & m
            if sub:
                break
        table[m] = sub
    return from_table(Domain(labels_for(n)), table)


class TestChoiceFunction:
    def test_rejects_choice_outside_menu(self):
        table = np.array([0, 1, 1, 1], dtype=np.int64)
        with pytest.raises(InputError):
            from_table(Domain(("a", "b")), table)

    def test_rejects_empty_choice(self):
        with pytest.raises(InputError):
            from_table(Domain(("a", "b")), np.array([0, 1, 2, 0], dtype=np.int64))

    def test_table_read_only(self):
        c = from_ranks(Domain(("a", "b")), [0, 1])
        with pytest.raises(ValueError):
            c.table[3] = 1

    def test_partial_mapping_unsupported(self):
        c = from_mapping(Domain(("a", "b", "c")), {("a", "b"): ("a",)})
        assert c({"a", "b"}) == {"a"}
        with pytest.raises(UnsupportedDomainError):
            choice_classes(c)

    def test_full_mapping_promoted(self):
        dom = Domain(("a", "b"))
        c = from_mapping(dom, {("a",): ("a",), ("b",): ("b",), ("a", "b"): ("b",)})
        assert c.is_all


class TestChoiceClasses:
    def test_total_indifference(self):
        c = from_ranks(Domain(("a", "b", "c")), [0, 0, 0])
        assert choice_classes(c).classes == (("a", "b", "c"),)
        assert n_classes(c) == 1

    def test_strict_order(self):
        c = from_ranks(Domain(("a", "b", "c")), [3, 2, 1])
        assert len(choice_classes(c).classes) == 3

    def test_strict_order_five(self):
        assert n_classes(from_ranks(Domain(labels_for(5)), [5, 4, 3, 2, 1])) == 5

    def test_bit_cube_classes_are_cells(self, cube):
        c = build_max_choice(cube)
        assert {frozenset(k) for k in choice_classes(c).classes} == {
            frozenset(k) for k in discrimination_partition(cube).cells
        }
        assert n_classes(c) == 8

    def test_intransitive_witness(self):
        table = np.array([0, 1, 2, 3, 4, 5, 6, 3, 8, 9, 10, 2, 12, 13, 14, 15], dtype=np.int64)
        c = from_table(Domain(("a", "b", "c", "d")), table)
        part = choice_classes(c)
        assert not part.well_defined
        x, y, z = part.witness
        assert brute_interchangeable(c, x, y) and brute_interchangeable(c, y, z)
        assert not brute_interchangeable(c, x, z)
        with pytest.raises(ChoiceClassError):
            n_classes(c)

    @given(random_tables())
    @settings(max_examples=150, deadline=None)
    def test_interchangeability_matches_definition(self, c):
        m = interchangeable(c)
        labels = c.domain.elements
        for a, x in enumerate(labels):
            for b, y in enumerate(labels):
                assert bool(m[a, b]) == brute_interchangeable(c, x, y)

    @given(random_tables())
    @settings(max_examples=150, deadline=None)
    def test_partition_or_witness(self, c):
        part = choice_classes(c)
        m = interchangeable(c)
        idx = c.domain.index
        if part.well_defined:
            flat = [x for k in part.classes for x in k]
            assert sorted(flat) == sorted(c.domain)
            for k in part.classes:
                for x, y in itertools.product(k, repeat=2):
                    assert m[idx(x), idx(y)]
        else:
            x, y, z = part.witness
            assert m[idx(x), idx(y)] and m[idx(y), idx(z)] and not m[idx(x), idx(z)]
            with pytest.raises(ChoiceClassError):
                n_classes(c)

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
    @settings(max_examples=100, deadline=None)
    def test_weak_order_classes_are_indifference_classes(self, ranks):
        dom = Domain(labels_for(len(ranks)))
        c = from_ranks(dom, ranks)
        expected = {frozenset(x for x, r in zip(dom, ranks) if r == v) for v in set(ranks)}
        assert {frozenset(k) for k in choice_classes(c).classes} == expected


class TestUses:
    def test_one_category_total_indifference(self):
        dom = Domain(("a", "b", "c"))
        cs = CriteriaSet(dom, (Relation(dom, frozenset()),))
        assert uses(cs, from_ranks(dom, [0, 0, 0]))

    def test_split_cell(self):
        dom = Domain(("a", "b", "c"))
        cs = CriteriaSet(dom, (Relation(dom, frozenset()),))
        assert not uses(cs, from_ranks(dom, [1, 0, 0]))

    def test_build_max_choice(self, cube):
        assert uses(cube, build_max_choice(cube))

    def test_maximally_discriminates_requires_uses(self):
        dom = Domain(("a", "b"))
        cs = CriteriaSet(dom, (Relation(dom, frozenset()),))
        with pytest.raises(NotUsingError):
            maximally_discriminates(cs, from_ranks(dom, [1, 0]))


class TestMaximalDiscrimination:
    def test_bit_cube(self, cube):
        assert maximally_discriminates(cube, build_max_choice(cube))

    def test_four_point_min_binds(self, four_point):
        assert maximally_discriminates(four_point, build_max_choice(four_point))

    def test_two_criteria_on_eight(self):
        # three attributes, only two of which are criteria: (2,2) on |X| = 8
        cs = from_product([(0, 1), (0, 1), (0, 0)], [{(1, 0)}, {(1, 0)}, set()])
        cs = CriteriaSet(cs.domain, cs.criteria[:2])
        c = build_max_choice(cs)
        assert n_classes(c) == 4
        assert maximally_discriminates(cs, c)

    def test_coarser_choice_not_maximal(self, cube):
        c = from_ranks(cube.domain, [0] * 8)
        assert uses(cube, c)
        assert not maximally_discriminates(cube, c)


class TestBuildMaxChoice:
    def test_single_one_category(self):
        dom = Domain(("a", "b"))
        c = build_max_choice(CriteriaSet(dom, (Relation(dom, frozenset()),)))
        assert all(c(m) == m for m in c.menus())

    def test_bit_cube_pair(self, cube):
        c = build_max_choice(cube)
        sig = {x: s for x, s in zip(cube.domain, cube.signatures())}
        winner = min(("001", "110"), key=sig.get)
        assert c({"001", "110"}) == {winner}

    @given(seeds)
    @settings(max_examples=60, deadline=None)
    def test_random_uses_and_rationalizable(self, seed):
        rng = np.random.default_rng(seed)
        cs = random_criteria_set(rng, int(rng.integers(1, 9)), int(rng.integers(1, 4)))
        c = build_max_choice(cs)
        assert uses(cs, c)
        assert rationalizable(c) is not None
        assert condorcet_consistent(c)


class TestRationalizable:
    def test_weak_order_round_trip(self):
        dom = Domain(("a", "b", "c", "d"))
        order = WeakOrder((("b",), ("a", "d"), ("c",)))
        got = rationalizable(from_weak_order(dom, order))
        assert got is not None
        assert got.pairs() == order.pairs()

    def test_pairwise_cycle(self):
        dom = Domain(("a", "b", "c"))
        c = from_mapping(
            dom,
            {
                ("a",): ("a",), ("b",): ("b",), ("c",): ("c",),
                ("a", "b"): ("a",), ("b", "c"): ("b",), ("a", "c"): ("c",),
                ("a", "b", "c"): ("a", "b", "c"),
            },
        )
        assert rationalizable(c) is None

    @given(random_tables(max_labels=3))
    @settings(max_examples=200, deadline=None)
    def test_matches_bruteforce(self, c):
        order = rationalizable(c)
        assert (order is not None) == brute_rationalizable(c)
        if order is not None:
            assert from_weak_order(c.domain, order).table.tolist() == c.table.tolist()


class TestCondorcet:
    def test_weak_order_consistent(self):
        assert condorcet_consistent(from_ranks(Domain(labels_for(4)), [1, 3, 3, 0]))

    def test_dropped_pairwise_winner(self):
        dom = Domain(("a", "b", "c"))
        c = from_mapping(
            dom,
            {
                ("a",): ("a",), ("b",): ("b",), ("c",): ("c",),
                ("a", "b"): ("a",), ("b", "c"): ("b",), ("a", "c"): ("a",),
                ("a", "b", "c"): ("b",),
            },
        )
        assert not condorcet_consistent(c)
        menu, x = condorcet_violation(c)
        assert menu == {"a", "b", "c"} and x == "a"

    def test_build_max_choice(self, cube):
        assert condorcet_consistent(build_max_choice(cube))

    @given(random_tables(max_labels=4))
    @settings(max_examples=200, deadline=None)
    def test_matches_bruteforce(self, c):
        assert condorcet_consistent(c) == brute_condorcet(c)
