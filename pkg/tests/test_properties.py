import pytest
from hypothesis import given, settings

from callauction.core import Side, Transaction, ask, bid, volume, volumes_by_order
from callauction.maximum import maximum_match
from callauction.oracle import InstanceBudget, enumerate_matchings
from callauction.properties import (
    PropertyReport,
    candidate_prices,
    check_volume_bound,
    is_fair,
    is_fair_on_asks,
    is_fair_on_bids,
    is_ir,
    is_matching,
    is_uniform,
)
from callauction.uniform import uniform_match

from .strategies import books


def test_report_requires_witness_iff_failing():
    with pytest.raises(ValueError):
        PropertyReport("x", False)
    with pytest.raises(ValueError):
        PropertyReport("x", True, "oops")


class TestIsMatching:
    def test_empty(self, unit_pairs):
        assert is_matching((), *unit_pairs)

    def test_um_output_of_unit_pairs(self, unit_pairs):
        assert is_matching((Transaction(1, 1, 1, 70),), *unit_pairs)

    def test_unmatchable_pair(self, unit_pairs):
        rep = is_matching((Transaction(2, 2, 1, 87),), *unit_pairs)
        assert not rep and "not matchable" in rep.witness

    def test_unknown_ids_are_witnessed(self, unit_pairs):
        rep = is_matching((Transaction(9, 1, 1, 70),), *unit_pairs)
        assert not rep and "bid 9" in rep.witness
        rep = is_matching((Transaction(1, 9, 1, 70),), *unit_pairs)
        assert not rep and "ask 9" in rep.witness

    def test_capacity(self, unit_pairs):
        rep = is_matching((Transaction(1, 1, 1, 70), Transaction(1, 2, 1, 90)), *unit_pairs)
        assert not rep and "trades 2 > quantity 1" in rep.witness


class TestIsIr:
    def test_empty(self, unit_pairs):
        assert is_ir((), *unit_pairs)

    def test_prices_inside_limits(self, unit_pairs):
        assert is_ir((Transaction(1, 1, 1, 80), Transaction(2, 1, 1, 70)), *unit_pairs)

    def test_unmatchable_pair_cannot_be_ir(self, unit_pairs):
        assert not is_ir((Transaction(2, 2, 1, 88),), *unit_pairs)

    def test_price_below_ask_limit(self, unit_pairs):
        rep = is_ir((Transaction(1, 2, 1, 89),), *unit_pairs)
        assert not rep and "89" in rep.witness


class TestIsUniform:
    def test_empty(self):
        assert is_uniform(())

    def test_mm_on_unit_pairs_is_not_uniform(self, unit_pairs):
        m = maximum_match(*unit_pairs)
        assert sorted(t.price for t in m) == [70, 90]
        assert not is_uniform(m)


class TestFairness:
    def test_empty(self, unit_pairs):
        assert is_fair((), *unit_pairs)

    def test_two_by_two_pairing(self, two_by_two):
        bids, asks, p = two_by_two
        m2 = (Transaction(1, 2, 1, p), Transaction(2, 2, 1, p), Transaction(2, 1, 1, p))
        assert is_fair(m2, bids, asks)

    def test_less_competitive_bid_trades_first(self):
        bids = (bid(1, 1, 2, 100), bid(2, 1, 1, 90))
        m = (Transaction(2, 1, 1, 80),)
        rep = is_fair_on_bids(m, bids)
        assert not rep and "bid 2" in rep.witness and "bid 1" in rep.witness

    def test_asks_mirror(self):
        asks = (ask(1, 1, 2, 70), ask(2, 1, 1, 80))
        rep = is_fair_on_asks((Transaction(1, 2, 1, 90),), asks)
        assert not rep and "ask 2" in rep.witness


class TestVolumeBound:
    def test_unit_pairs_at_100(self, unit_pairs):
        bids, asks = unit_pairs
        for m in enumerate_matchings(bids, asks):
            assert check_volume_bound(m, bids, asks, 100)

    def test_mm_unit_pairs_tight_at_88(self, unit_pairs):
        bids, asks = unit_pairs
        m = maximum_match(bids, asks)
        assert volume(m) == 2
        assert check_volume_bound(m, bids, asks, 88)
        assert not check_volume_bound(m + (Transaction(1, 1, 1, 70),), bids, asks, 88)

    def test_empty_holds_everywhere(self, unit_pairs):
        for p in candidate_prices(*unit_pairs, 10**6):
            assert check_volume_bound((), *unit_pairs, p)


@settings(max_examples=200, deadline=None)
@given(books())
def test_volume_sums_and_ir_uniform_consequence(instance):
    bids, asks = instance
    for m in list(enumerate_matchings(bids, asks, InstanceBudget(max_matchings=3000)))[:50]:
        assert volume(m) == sum(volumes_by_order(m, Side.BID).values()) == sum(volumes_by_order(m, Side.ASK).values())
    u = uniform_match(bids, asks)
    if u:
        price = u[0].price
        bid_index = {b.id: b for b in bids}
        ask_index = {a.id: a for a in asks}
        assert all(bid_index[t.bid_id].price >= price >= ask_index[t.ask_id].price for t in u)
