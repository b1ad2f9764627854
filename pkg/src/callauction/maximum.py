"""Maximum-volume matching.

The best remaining bid is paired with the *least* competitive ask it can
still trade with; asks no remaining bid can reach are discarded. The result
is then made fair on asks.
"""

from __future__ import annotations

from collections.abc import Sequence

from .core import Matching, Order, Side, Transaction, check_book, competitiveness_key
from .fairness import fair_on_asks, sort_transactions


def maximum_pass(
    bids: Sequence[Order], asks: Sequence[Order], bid_used: int = 0, ask_used: int = 0
) -> Matching:
    """Greedy pass; bids most competitive first, asks least competitive first."""
    if bids and not 0 <= bid_used < bids[0].quantity:
        raise ValueError(f"bid used quantity {bid_used} must lie in [0, {bids[0].quantity})")
    if asks and not 0 <= ask_used < asks[0].quantity:
        raise ValueError(f"ask used quantity {ask_used} must lie in [0, {asks[0].quantity})")
    out: list[Transaction] = []
    i = j = 0
    while i < len(bids) and j < len(asks):
        b, a = bids[i], asks[j]
        if b.price < a.price:
            j += 1
            ask_used = 0
            continue
        left_b, left_a = b.quantity - bid_used, a.quantity - ask_used
        if left_a == left_b:
            out.append(Transaction(b.id, a.id, left_a, a.price))
            i += 1
            j += 1
            bid_used = ask_used = 0
        elif left_a < left_b:
            out.append(Transaction(b.id, a.id, left_a, a.price))
            j += 1
            bid_used, ask_used = bid_used + left_a, 0
        else:
            out.append(Transaction(b.id, a.id, left_b, a.price))
            i += 1
            bid_used, ask_used = 0, ask_used + left_b
    return tuple(out)


def maximum_match(bids: Sequence[Order], asks: Sequence[Order]) -> Matching:
    """Fair, individual-rational matching of maximum total volume."""
    check_book(bids, Side.BID)
    check_book(asks, Side.ASK)
    sorted_bids = sorted(bids, key=competitiveness_key)
    best_asks_first = tuple(sorted(asks, key=competitiveness_key))
    raw = maximum_pass(sorted_bids, best_asks_first[::-1])
    return fair_on_asks(sort_transactions(raw, best_asks_first, Side.ASK), best_asks_first)


mm = maximum_match
