from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_criteria.efficiency import CostModel, binary_condition
from coarse_criteria.relations import InputError
from coarse_criteria.sampling import monotone_table
from coarse_criteria.storage import (
    binary_always_optimal,
    decode,
    digit_count,
    encode,
    optimal_bases,
    storage_cost,
    sweep,
)

seeds = st.integers(0, 2**32 - 1)


def digits_by_repeated_multiplication(n: int, k: int) -> int:
    d, cap = 0, 1
    while cap < n:
        cap *= k
        d += 1
    return d


class TestDigitCount:
    @given(st.integers(1, 10**12), st.integers(2, 40))
    def test_matches_loop(self, n, k):
        assert digit_count(n, k) == digits_by_repeated_multiplication(n, k)

    def test_exact_powers(self):
        assert digit_count(3**20, 3) == 20
        assert digit_count(3**20 + 1, 3) == 21

    def test_one(self):
        assert all(digit_count(1, k) == 0 for k in range(2, 10))


class TestStorageCost:
    def test_n_one(self):
        plan = storage_cost(1, 7, CostModel.linear(1))
        assert plan.digits == 0 and plan.cost == 0

    def test_729_base3(self):
        plan = storage_cost(729, 3, CostModel.linear(1))
        assert plan.digits == 6 and plan.cost == 18

    def test_729_base2(self):
        plan = storage_cost(729, 2, CostModel.linear(1))
        assert plan.digits == 10 and plan.cost == 20

    def test_bad_base(self):
        with pytest.raises(InputError):
            storage_cost(10, 1, CostModel.linear(1))


class TestOptimalBases:
    def test_linear(self):
        res = optimal_bases(729, CostModel.linear(1), 10)
        assert res.bases == (3,) and res.cost == 18

    def test_power2(self):
        res = optimal_bases(729, CostModel.power(2), 10)
        assert res.bases == (2,) and res.cost == 40
        assert res.plans[1].cost == 54

    def test_n_one_all_tie(self):
        assert optimal_bases(1, CostModel.linear(1), 6).bases == (2, 3, 4, 5, 6)


class TestSweep:
    @given(seeds)
    @settings(max_examples=30, deadline=None)
    def test_matches_pointwise(self, seed):
        rng = np.random.default_rng(seed)
        k = monotone_table(rng, 9)
        res = sweep(k, 9, 300)
        for n in range(1, 301):
            ob = optimal_bases(n, k, 9)
            assert res.bases(n) == ob.bases
            assert res.cost(n) == ob.cost

    def test_float_models(self):
        k = CostModel.expression("ln(e) * e")
        res = sweep(k, 8, 500)
        assert not res.exact
        for n in (2, 10, 100, 500):
            ob = optimal_bases(n, k, 8)
            assert abs(res.cost(n) - float(ob.cost)) < 1e-9
            assert res.bases(n) == ob.bases


class TestBinaryAlwaysOptimal:
    def test_power2(self):
        rep = binary_always_optimal(CostModel.power(2), 12, 10_000)
        assert rep.binary_optimal and rep.condition_holds and rep.agree
        assert rep.witness is None

    def test_linear(self):
        rep = binary_always_optimal(CostModel.linear(1), 12, 10_000)
        assert not rep.binary_optimal and rep.agree
        w = rep.witness
        assert (w.n, w.k, w.cost_k, w.cost_binary) == (3, 3, 3, 4)

    def test_boundary_ties(self):
        rep = binary_always_optimal(CostModel.ceillog2(1), 12, 10_000)
        assert not rep.binary_optimal and rep.agree
        assert all(w.tie for w in rep.witnesses)
        assert (4, 4) in {(w.n, w.k) for w in rep.witnesses}

    @given(seeds)
    @settings(max_examples=20, deadline=None)
    def test_agrees_with_condition(self, seed):
        k = monotone_table(np.random.default_rng(seed), 8)
        rep = binary_always_optimal(k, 8, 2000)
        assert rep.binary_optimal == binary_condition(k, 8).holds
        for w in rep.witnesses:
            assert w.cost_k <= w.cost_binary


class TestCodec:
    def test_value_one(self):
        plan = storage_cost(729, 3, CostModel.linear(1))
        assert encode(1, plan) == (0,) * 6

    def test_top_value(self):
        plan = storage_cost(729, 3, CostModel.linear(1))
        assert encode(729, plan) == (2,) * 6

    @pytest.mark.parametrize("k", [2, 3, 7, 10])
    def test_round_trip_exhaustive(self, k):
        plan = storage_cost(10_000, k, CostModel.linear(1))
        for v in range(1, 10_001):
            assert decode(encode(v, plan), plan) == v

    def test_out_of_range(self):
        plan = storage_cost(10, 3, CostModel.linear(1))
        with pytest.raises(InputError):
            encode(11, plan)
        with pytest.raises(InputError):
            decode((0, 3, 0), plan)
        with pytest.raises(InputError):
            decode((2, 2, 2), plan)
