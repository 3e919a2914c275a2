from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_criteria.aggregation import (
    NotBinaryError,
    WeightProfile,
    aggregate_choice,
    condorcet_profile,
    equal_weights,
    find_condorcet_cycle,
    majority_choice,
    scores,
    top_categories,
    weighted_tournament,
)
from coarse_criteria.choice import condorcet_consistent, rationalizable
from coarse_criteria.criteria import CriteriaSet, bit_cube
from coarse_criteria.relations import Domain, InputError, Relation
from coarse_criteria.sampling import random_binary_criteria_set, random_criteria_set

seeds = st.integers(0, 2**32 - 1)


def split(domain: Domain, top: set[str]) -> Relation:
    return Relation.from_pairs(domain, [(x, y) for x in top for y in domain if y not in top])


def has_cycle_bruteforce(t) -> bool:
    labels = t.labels
    for r in range(3, len(labels) + 1):
        for perm in itertools.permutations(labels, r):
            if all(t.margin(perm[i], perm[(i + 1) % r]) > 0 for i in range(r)):
                return True
    return False


class TestWeights:
    def test_parse(self):
        assert WeightProfile.parse("1, 1/2, 2").weights == (1, Fraction(1, 2), 2)

    @pytest.mark.parametrize("text", ["0", "1,-1", ""])
    def test_rejects_nonpositive(self, text):
        with pytest.raises(InputError):
            WeightProfile.parse(text)

    def test_count_mismatch(self):
        with pytest.raises(InputError):
            weighted_tournament(bit_cube(3), equal_weights(2))


class TestTournament:
    def test_two_binary_disagreeing(self):
        dom = Domain(("x", "y"))
        cs = CriteriaSet(dom, (split(dom, {"x"}), split(dom, {"y"})))
        t = weighted_tournament(cs, WeightProfile((2, 1)))
        assert t.margin("x", "y") == 1 and t.margin("y", "x") == -1

    def test_condorcet_profile_cycle(self):
        t = weighted_tournament(condorcet_profile(), equal_weights(3))
        assert t.margin("a", "b") > 0 and t.margin("b", "c") > 0 and t.margin("c", "a") > 0
        assert find_condorcet_cycle(t) == ("a", "b", "c")
        assert rationalizable(majority_choice(t)) is None

    def test_single_criterion_acyclic(self):
        dom = Domain(("a", "b", "c"))
        cs = CriteriaSet(dom, (Relation.from_pairs(dom, [("a", "b"), ("b", "c"), ("a", "c")]),))
        assert find_condorcet_cycle(weighted_tournament(cs, equal_weights(1))) is None

    @given(seeds)
    @settings(max_examples=60, deadline=None)
    def test_binary_margins_are_score_differences(self, seed):
        rng = np.random.default_rng(seed)
        cs = random_binary_criteria_set(rng, int(rng.integers(2, 7)), int(rng.integers(1, 5)))
        w = WeightProfile(tuple(int(v) for v in rng.integers(1, 6, size=cs.N)))
        t = weighted_tournament(cs, w)
        s = scores(cs, w)
        for x, y in itertools.permutations(cs.domain, 2):
            assert t.margin(x, y) == s[x] - s[y]
        assert find_condorcet_cycle(t) is None

    @given(seeds)
    @settings(max_examples=60, deadline=None)
    def test_cycle_search_matches_bruteforce(self, seed):
        rng = np.random.default_rng(seed)
        cs = random_criteria_set(rng, int(rng.integers(2, 6)), int(rng.integers(1, 4)), product_bias=0.0)
        t = weighted_tournament(cs, equal_weights(cs.N))
        cyc = find_condorcet_cycle(t)
        assert (cyc is not None) == has_cycle_bruteforce(t)
        if cyc is not None:
            m = len(cyc)
            assert all(t.margin(cyc[i], cyc[(i + 1) % m]) > 0 for i in range(m))


class TestAggregateChoice:
    def test_top_category_single(self):
        dom = Domain(("a", "b", "c"))
        cs = CriteriaSet(dom, (split(dom, {"b"}),))
        c = aggregate_choice(cs, equal_weights(1))
        assert c({"a", "b"}) == {"b"}
        assert c({"a", "c"}) == {"a", "c"}

    def test_bit_cube_binary_value(self):
        cs = bit_cube(3)
        w = WeightProfile((4, 2, 1))
        s = scores(cs, w)
        assert all(s[x] == int(x, 2) for x in cs.domain)
        c = aggregate_choice(cs, w)
        assert c({"011", "101", "001"}) == {"101"}
        order = rationalizable(c)
        assert order is not None
        assert [lv[0] for lv in order.levels] == sorted(cs.domain, reverse=True)

    def test_ties_kept(self):
        cs = bit_cube(2)
        c = aggregate_choice(cs, equal_weights(2))
        assert c({"01", "10"}) == {"01", "10"}

    def test_non_binary_names_criterion(self):
        prof = condorcet_profile()
        named = CriteriaSet(prof.domain, prof.criteria, ("first", "second", "third"))
        with pytest.raises(NotBinaryError, match="'first'"):
            top_categories(named)

    @given(seeds)
    @settings(max_examples=80, deadline=None)
    def test_binary_rational(self, seed):
        rng = np.random.default_rng(seed)
        cs = random_binary_criteria_set(rng, int(rng.integers(2, 8)), int(rng.integers(1, 7)))
        w = WeightProfile(tuple(Fraction(int(a), int(b)) for a, b in rng.integers(1, 9, size=(cs.N, 2))))
        c = aggregate_choice(cs, w)
        assert rationalizable(c) is not None
        assert condorcet_consistent(c)
