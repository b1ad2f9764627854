"""Uniform-price matching.

Pairs the best remaining bid with the best remaining ask while they are
matchable, trading the smaller remaining quantity at the ask's limit, then
reprices every trade at the last trade's price.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .core import Matching, Order, Side, Transaction, check_book, competitiveness_key


@dataclass(frozen=True)
class UniformTrace:
    provisional: Matching
    price: int | None

    def __post_init__(self) -> None:
        expected = self.provisional[-1].price if self.provisional else None
        if self.price != expected:
            raise ValueError("uniform price must be the last provisional trade price")


def _check_used(orders: Sequence[Order], used: int, what: str) -> None:
    if orders and not 0 <= used < orders[0].quantity:
        raise ValueError(f"{what} used quantity {used} must lie in [0, {orders[0].quantity})")


def uniform_pass(
    bids: Sequence[Order], asks: Sequence[Order], bid_used: int = 0, ask_used: int = 0
) -> UniformTrace:
    """Greedy pass over books sorted most competitive first.

    ``bid_used``/``ask_used`` are the quantities of the head bid and head ask
    already consumed.
    """
    _check_used(bids, bid_used, "bid")
    _check_used(asks, ask_used, "ask")
    out: list[Transaction] = []
    i = j = 0
    while i < len(bids) and j < len(asks):
        b, a = bids[i], asks[j]
        if b.price < a.price:
            break
        left_b, left_a = b.quantity - bid_used, a.quantity - ask_used
        if left_a == left_b:
            out.append(Transaction(b.id, a.id, left_b, a.price))
            i += 1
            j += 1
            bid_used = ask_used = 0
        elif left_a > left_b:
            out.append(Transaction(b.id, a.id, left_b, a.price))
            i += 1
            bid_used, ask_used = 0, ask_used + left_b
        else:
            out.append(Transaction(b.id, a.id, left_a, a.price))
            j += 1
            bid_used, ask_used = bid_used + left_a, 0
    provisional = tuple(out)
    return UniformTrace(provisional, provisional[-1].price if provisional else None)


def replace_prices(matching: Sequence[Transaction], price: int) -> Matching:
    return tuple(Transaction(m.bid_id, m.ask_id, m.quantity, price) for m in matching)


def uniform_match(bids: Sequence[Order], asks: Sequence[Order]) -> Matching:
    """Fair, individual-rational matching of maximum volume among uniform-price ones."""
    check_book(bids, Side.BID)
    check_book(asks, Side.ASK)
    trace = uniform_pass(sorted(bids, key=competitiveness_key), sorted(asks, key=competitiveness_key))
    if trace.price is None:
        return ()
    return replace_prices(trace.provisional, trace.price)


um = uniform_match
