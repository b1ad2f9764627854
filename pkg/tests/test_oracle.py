import random
import time

import pytest
from hypothesis import given, settings

from callauction.core import Side, Transaction, ask, bid, volume, volumes_by_order
from callauction.oracle import (
    DEFAULT_BUDGET,
    HARD_CAP,
    BudgetExceeded,
    InstanceBudget,
    count_matchings,
    enumerate_fair_optimal,
    enumerate_matchings,
    exhaustive_max_volume,
    max_flow_volume,
    max_volume_oracle,
    optimal_uniform_volume,
    random_instance,
)
from callauction.properties import is_ir, is_uniform

from .strategies import books


class TestEnumerate:
    def test_unmatchable_pair_gives_only_empty(self):
        assert list(enumerate_matchings((bid(1, 1, 1, 5),), (ask(1, 1, 1, 6),))) == [()]

    def test_single_pair(self):
        out = list(enumerate_matchings((bid(1, 1, 1, 100),), (ask(1, 1, 1, 70),)))
        assert out == [(), (Transaction(1, 1, 1, 70),)]

    def test_unit_pairs_maximum_is_two(self, unit_pairs):
        assert max(volume(m) for m in enumerate_matchings(*unit_pairs)) == 2

    def test_count_matches_enumeration(self, unit_pairs):
        assert count_matchings(*unit_pairs) == sum(1 for _ in enumerate_matchings(*unit_pairs))

    def test_uniform_pricing_is_ir_and_uniform(self, unit_pairs):
        for m in enumerate_matchings(*unit_pairs, pricing="uniform"):
            assert is_ir(m, *unit_pairs) and is_uniform(m)

    def test_budget_refusals(self):
        many = tuple(bid(i, 1, 1, 5) for i in range(5))
        with pytest.raises(BudgetExceeded):
            list(enumerate_matchings(many, ()))
        with pytest.raises(BudgetExceeded):
            list(enumerate_matchings((bid(1, 1, 4, 5),), ()))
        dense_b = tuple(bid(i, 1, 3, 5) for i in range(4))
        dense_a = tuple(ask(i, 1, 3, 0) for i in range(4))
        with pytest.raises(BudgetExceeded):
            list(enumerate_matchings(dense_b, dense_a))
        with pytest.raises(ValueError):
            list(enumerate_matchings((), (), pricing="mid"))

    def test_worst_default_budget_call_is_fast(self):
        # densest instance the default cap admits
        b = tuple(bid(i, 1, 3, 5) for i in range(3))
        a = tuple(ask(i, 1, 3, 0) for i in range(3))
        assert count_matchings(b, a) <= DEFAULT_BUDGET.max_matchings
        start = time.perf_counter()
        max_volume_oracle(b, a)
        list(enumerate_fair_optimal(b, a))
        assert time.perf_counter() - start < 1.0


class TestMaxVolume:
    def test_unit_pairs(self, unit_pairs):
        assert max_volume_oracle(*unit_pairs) == 2

    def test_empty_side(self, unit_pairs):
        assert max_volume_oracle((), unit_pairs[1]) == 0

    def test_one_bid_two_asks(self):
        b = (bid(1, 1, 2, 100),)
        a = (ask(1, 1, 1, 60), ask(2, 1, 1, 80))
        assert max_flow_volume(b, a) == 2 == exhaustive_max_volume(b, a)


class TestOptimalUniform:
    def test_unit_pairs(self, unit_pairs):
        bids, asks = unit_pairs
        assert optimal_uniform_volume(bids, asks) == 1

    def test_empty_side(self, unit_pairs):
        assert optimal_uniform_volume(unit_pairs[0], ()) == 0

    def test_one_bid_two_asks(self):
        assert optimal_uniform_volume((bid(1, 1, 3, 110),), (ask(1, 1, 2, 100), ask(2, 1, 5, 105))) == 3


def test_two_by_two_fair_optimal_contains_both_pairings(two_by_two):
    bids, asks, p = two_by_two
    found = {frozenset(m) for m in enumerate_fair_optimal(bids, asks)}
    m1 = frozenset({Transaction(1, 1, 1, p), Transaction(2, 2, 2, p)})
    m2 = frozenset({Transaction(1, 2, 1, p), Transaction(2, 2, 1, p), Transaction(2, 1, 1, p)})
    assert m1 in found and m2 in found


def test_no_matchable_pair_fair_optimal_is_empty():
    assert list(enumerate_fair_optimal((bid(1, 1, 1, 1),), (ask(1, 1, 1, 4),))) == [()]


@settings(max_examples=300, deadline=None)
@given(books())
def test_oracles_agree(instance):
    bids, asks = instance
    budget = InstanceBudget(max_matchings=3000)
    assert max_flow_volume(bids, asks) == exhaustive_max_volume(bids, asks, budget)
    best_uniform = max(
        (volume(m) for m in enumerate_matchings(bids, asks, budget, pricing="uniform")), default=0
    )
    assert best_uniform == optimal_uniform_volume(bids, asks)


@settings(max_examples=200, deadline=None)
@given(books())
def test_fair_optimal_members_share_per_order_volumes(instance):
    bids, asks = instance
    vectors = {
        (tuple(sorted(volumes_by_order(m, Side.BID).items())), tuple(sorted(volumes_by_order(m, Side.ASK).items())))
        for m in enumerate_fair_optimal(bids, asks, InstanceBudget(max_matchings=3000))
    }
    assert len(vectors) == 1


def test_random_instances_respect_budget():
    rng = random.Random(3)
    for _ in range(200):
        b, a = random_instance(rng)
        assert len(b) <= 4 and len(a) <= 4
        assert all(1 <= o.quantity <= 3 and 0 <= o.price <= 5 for o in (*b, *a))
        assert count_matchings(b, a) <= DEFAULT_BUDGET.max_matchings


def test_budget_within_hard_cap():
    assert DEFAULT_BUDGET.within(HARD_CAP)
    assert not InstanceBudget(max_orders=7).within(HARD_CAP)
