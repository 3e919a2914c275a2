from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_criteria.criteria import CriteriaSet, bit_cube
from coarse_criteria.efficiency import (
    CostModel,
    CostModelError,
    Efficiency,
    EfficiencyPoint,
    EnumerationLimitError,
    binary_condition,
    budget,
    budget_vectors,
    ceil_log2,
    cheapest_vectors,
    coarseness_dominates,
    efficiency_point,
    frontier,
    marginal_profile,
    more_efficient,
    parse_vector,
    set_cost,
    vector_cost,
    verify_result1,
)
from coarse_criteria.relations import Domain, Relation
from coarse_criteria.sampling import convex_table, monotone_table, random_vector_with_budget

seeds = st.integers(0, 2**32 - 1)


def pt(n: int, cost) -> EfficiencyPoint:
    return EfficiencyPoint((), Fraction(cost), n)


def brute_frontier(kappa, domain_size, budget_max):
    pts = [efficiency_point(v, kappa, domain_size) for v in budget_vectors(budget_max)]
    out = []
    for p in pts:
        dominated = any(
            (q.max_distinctions >= p.max_distinctions and q.cost <= p.cost)
            and (q.max_distinctions > p.max_distinctions or q.cost < p.cost)
            for q in pts
        )
        if not dominated:
            out.append(p.vector)
    return sorted(out)


def multisets(budget_max):
    """Independent enumerator: integer partitions of each budget, shifted by one."""
    out = set()

    def parts(n, largest):
        if n == 0:
            yield ()
            return
        for k in range(min(n, largest), 0, -1):
            for rest in parts(n - k, k):
                yield (k,) + rest

    for b in range(1, budget_max + 1):
        for p in parts(b, b):
            out.add(tuple(sorted(k + 1 for k in p)))
    return out


class TestCostModels:
    def test_kappa_one_is_zero(self):
        for k in (CostModel.power(2), CostModel.linear(3), CostModel.ceillog2(1), CostModel.expression("e^2+1")):
            assert k(1) == 0

    def test_power(self):
        assert CostModel.power(2)(3) == 9

    def test_linear(self):
        assert CostModel.linear(1)(3) == 3

    def test_ceillog2(self):
        k = CostModel.ceillog2(2)
        assert [k(e) for e in (2, 3, 4, 5, 8, 9)] == [2, 4, 4, 6, 6, 8]

    def test_ceil_log2(self):
        assert [ceil_log2(e) for e in range(1, 10)] == [math.ceil(math.log2(e)) for e in range(1, 10)]

    def test_table_requires_kappa2(self):
        with pytest.raises(CostModelError):
            CostModel.table({3: 5})

    def test_table_missing_entry(self):
        with pytest.raises(CostModelError):
            CostModel.table({2: 1})(3)

    def test_negative_cost(self):
        with pytest.raises(CostModelError):
            CostModel.expression("0-e")(2)

    def test_expression_functions(self):
        k = CostModel.expression("clog2(e) + max(e, 3) / 2")
        assert k(5) == 3 + Fraction(5, 2)

    def test_expression_rejects_names(self):
        with pytest.raises(CostModelError):
            CostModel.expression("__import__('os')")

    def test_expression_rejects_other_variables(self):
        with pytest.raises(CostModelError):
            CostModel.expression("x + 1")

    def test_marginal_profile(self):
        prof = marginal_profile(CostModel.power(2), 5)
        assert prof.strictly_increasing
        assert not marginal_profile(CostModel.linear(1), 5).strictly_increasing


class TestCosts:
    def test_one_category_costless(self):
        dom = Domain(("a", "b"))
        cs = CriteriaSet(dom, (Relation(dom, frozenset()), Relation(dom, frozenset())))
        assert set_cost(cs, CostModel.power(2)) == 0

    def test_bit_cube_squares(self):
        k = CostModel.table({1: 0, 2: 4, 3: 9})
        assert set_cost(bit_cube(3), k) == 12

    def test_mixed(self):
        assert vector_cost((3, 2), CostModel.power(2)) == 13


class TestMoreEfficient:
    def test_dominance(self):
        assert more_efficient(pt(8, 12), pt(4, 12)) is Efficiency.MORE

    def test_equal(self):
        assert more_efficient(pt(8, 12), pt(8, 12)) is Efficiency.EQUAL

    def test_less(self):
        assert more_efficient(pt(8, 12), pt(9, 10)) is Efficiency.LESS

    def test_incomparable(self):
        assert more_efficient(pt(8, 10), pt(9, 12)) is Efficiency.INCOMPARABLE

    @given(st.integers(1, 20), st.integers(0, 20), st.integers(1, 20), st.integers(0, 20))
    def test_antisymmetry(self, n1, c1, n2, c2):
        a, b = more_efficient(pt(n1, c1), pt(n2, c2)), more_efficient(pt(n2, c2), pt(n1, c1))
        flip = {Efficiency.MORE: Efficiency.LESS, Efficiency.LESS: Efficiency.MORE}
        assert b is flip.get(a, a)


class TestBinaryCondition:
    def test_power2_holds(self):
        rep = binary_condition(CostModel.power(2), 10)
        assert rep.holds
        assert rep.rows[0].cost == 9 and rep.rows[0].bound == 8

    def test_linear_fails_at_three(self):
        rep = binary_condition(CostModel.linear(1), 10)
        assert not rep.holds
        assert rep.failing[0] == 3

    def test_boundary_equality_fails_everywhere(self):
        rep = binary_condition(CostModel.ceillog2(1), 12)
        assert rep.failing == tuple(range(3, 13))

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_against_direct_arithmetic(self, seed):
        k = monotone_table(np.random.default_rng(seed), 12)
        expected = all(k(e) > k(2) * math.ceil(math.log2(e)) for e in range(3, 13))
        assert binary_condition(k, 12).holds == expected


class TestCoarseness:
    def test_binary_vs_quaternary(self):
        assert coarseness_dominates((2, 2, 2), (4,))

    def test_mirror(self):
        assert not coarseness_dominates((4,), (2, 2, 2))

    @given(st.lists(st.integers(2, 6), min_size=1, max_size=5))
    def test_irreflexive(self, v):
        assert not coarseness_dominates(v, v)

    @given(st.lists(st.integers(2, 6), min_size=1, max_size=4), st.lists(st.integers(2, 6), min_size=1, max_size=4))
    def test_asymmetric(self, v, w):
        assert not (coarseness_dominates(v, w) and coarseness_dominates(w, v))


class TestResult1:
    def test_binary_vs_quaternary(self):
        r = verify_result1((2, 2, 2), (4,), CostModel.power(2), 100)
        assert r.status == "PASS" and r.relation is Efficiency.MORE
        assert (r.point_v.max_distinctions, r.point_v.cost) == (8, 12)
        assert (r.point_w.max_distinctions, r.point_w.cost) == (4, 16)

    def test_mixed(self):
        r = verify_result1((2, 3), (4,), CostModel.power(2), 100)
        assert r.status == "PASS"
        assert (r.point_v.max_distinctions, r.point_v.cost) == (6, 13)

    def test_precondition_gate(self):
        k = CostModel.table({1: 0, 2: 1, 3: 2})
        r = verify_result1((2, 2), (3,), k, 3)
        assert r.status == "NOT_APPLICABLE"

    def test_budget_mismatch(self):
        assert verify_result1((2, 2), (4,), CostModel.power(2), 100).status == "NOT_APPLICABLE"

    @given(seeds, st.integers(1, 12), st.integers(1, 12))
    @settings(max_examples=100, deadline=None)
    def test_convex_models_never_fail(self, seed, a, b):
        rng = np.random.default_rng(seed)
        k = convex_table(rng, 13)
        total = max(a, b)
        v, w = random_vector_with_budget(rng, total), random_vector_with_budget(rng, total)
        r = verify_result1(v, w, k, int(rng.integers(2, 5000)))
        assert r.status != "FAIL"


class TestFrontier:
    def test_power2_64(self):
        pts = frontier(CostModel.power(2), 64, 6)
        vecs = {p.vector: p for p in pts}
        assert (2,) * 6 in vecs and vecs[(2,) * 6].cost == 24 and vecs[(2,) * 6].max_distinctions == 64
        assert (4, 4, 4) not in vecs

    def test_budget_one(self):
        assert [p.vector for p in frontier(CostModel.power(2), 64, 1)] == [(2,)]

    def test_budget_cap(self):
        with pytest.raises(EnumerationLimitError):
            frontier(CostModel.power(2), 64, 25)

    def test_cheapest_64(self):
        cost, vecs = cheapest_vectors(CostModel.power(2), 64, 6)
        assert cost == 24 and vecs == [(2,) * 6]

    def test_enumerator_matches_partitions(self):
        assert set(budget_vectors(9)) == multisets(9)
        assert all(budget(v) <= 9 for v in budget_vectors(9))

    @given(seeds, st.integers(1, 7), st.integers(1, 200))
    @settings(max_examples=60, deadline=None)
    def test_matches_bruteforce(self, seed, b, m):
        k = monotone_table(np.random.default_rng(seed), b + 1)
        assert sorted(p.vector for p in frontier(k, m, b)) == brute_frontier(k, m, b)

    @given(seeds, st.integers(1, 7))
    @settings(max_examples=40, deadline=None)
    def test_no_pair_dominates(self, seed, b):
        k = monotone_table(np.random.default_rng(seed), b + 1)
        pts = frontier(k, 50, b)
        for p in pts:
            for q in pts:
                assert more_efficient(p, q) in (Efficiency.EQUAL, Efficiency.INCOMPARABLE)

    @given(seeds, st.integers(2, 7))
    @settings(max_examples=40, deadline=None)
    def test_binary_condition_gives_binary_frontier(self, seed, b):
        k = convex_table(np.random.default_rng(seed), b + 1)
        if not binary_condition(k, b + 1).holds:
            return
        for p in frontier(k, 64, b):
            if p.max_distinctions < 64:
                assert set(p.vector) == {2}


class TestParseVector:
    def test_parse(self):
        assert parse_vector("(2,3,2)") == (2, 3, 2)
