"""Fairness transformation.

:func:`fair_on_bids` walks the transactions (sorted by bid competitiveness)
and the bids (same order) in lockstep, handing each transaction's quantity to
the best bid that still has room. The ask and price of every transaction are
kept, so per-ask volumes and total volume are unchanged and the result is fair
on bids. :func:`fair_on_asks` is the same walk with the roles swapped, and
:func:`make_fair` composes the two.

The walk is written as a loop, but each iteration corresponds to one case of
the recursive definition ``f(M, B, t)``, checked in this order:

* transaction quantity equals the head order's remaining room: emit it, drop
  both heads, reset the consumed count;
* transaction quantity is smaller: emit it, drop the transaction, add its
  quantity to the head order's consumed count;
* transaction quantity is larger: emit the remaining room, shrink the
  transaction in place, drop the head order.
"""

from __future__ import annotations

from collections.abc import Sequence

from .core import Matching, Order, Side, Transaction, check_book, competitiveness_key
from .properties import PropertyReport, is_matching


class InvalidMatchingError(ValueError):
    def __init__(self, report: PropertyReport):
        super().__init__(f"input is not a matching: {report.witness}")
        self.report = report


def _reassign(m: Transaction, side: Side, order_id: int, quantity: int) -> Transaction:
    if side is Side.BID:
        return Transaction(order_id, m.ask_id, quantity, m.price)
    return Transaction(m.bid_id, order_id, quantity, m.price)


def _check_sorted(matching: Sequence[Transaction], orders: Sequence[Order], side: Side) -> None:
    keys = [competitiveness_key(o) for o in orders]
    assert keys == sorted(keys), f"{side.value}s are not sorted most competitive first"
    index = {o.id: k for o, k in zip(orders, keys)}
    mkeys = [index[m.order_id(side)] for m in matching if m.order_id(side) in index]
    assert mkeys == sorted(mkeys), f"transactions are not sorted by {side.value} competitiveness"


def _fair_on(
    matching: Sequence[Transaction], orders: Sequence[Order], side: Side, consumed: int
) -> Matching:
    if __debug__:
        _check_sorted(matching, orders, side)
    if orders and not 0 <= consumed < orders[0].quantity:
        raise ValueError(
            f"consumed quantity {consumed} must lie in [0, {orders[0].quantity}) for the head order"
        )
    out: list[Transaction] = []
    i = j = 0
    current = matching[0] if matching else None
    while current is not None and j < len(orders):
        head = orders[j]
        room = head.quantity - consumed
        if current.quantity == room:
            out.append(_reassign(current, side, head.id, current.quantity))
            i += 1
            j += 1
            consumed = 0
            current = matching[i] if i < len(matching) else None
        elif current.quantity < room:
            out.append(_reassign(current, side, head.id, current.quantity))
            consumed += current.quantity
            i += 1
            current = matching[i] if i < len(matching) else None
        else:
            out.append(_reassign(current, side, head.id, room))
            current = Transaction(current.bid_id, current.ask_id, current.quantity - room, current.price)
            j += 1
            consumed = 0
    return tuple(out)


def fair_on_bids(matching: Sequence[Transaction], bids: Sequence[Order], consumed: int = 0) -> Matching:
    """Reassign bids greedily; both inputs sorted most competitive bid first.

    ``consumed`` is the quantity of the head bid already used up; the public
    entry point is ``consumed=0``, other values exist for testing the
    recursion's intermediate states.
    """
    return _fair_on(matching, bids, Side.BID, consumed)


def fair_on_asks(matching: Sequence[Transaction], asks: Sequence[Order], consumed: int = 0) -> Matching:
    """Mirror of :func:`fair_on_bids`; trade prices are inherited unchanged."""
    return _fair_on(matching, asks, Side.ASK, consumed)


def sort_transactions(matching: Sequence[Transaction], orders: Sequence[Order], side: Side) -> Matching:
    """Stable sort of transactions by the competitiveness of their ``side`` order."""
    index = {o.id: competitiveness_key(o) for o in orders}
    return tuple(sorted(matching, key=lambda m: index[m.order_id(side)]))


def make_fair(matching: Sequence[Transaction], bids: Sequence[Order], asks: Sequence[Order]) -> Matching:
    """Turn a matching into a fair one of the same volume.

    Raises :class:`InvalidMatchingError` if ``matching`` is not a matching
    over ``bids`` and ``asks``.
    """
    check_book(bids, Side.BID)
    check_book(asks, Side.ASK)
    report = is_matching(matching, bids, asks)
    if not report:
        raise InvalidMatchingError(report)
    sorted_asks = tuple(sorted(asks, key=competitiveness_key))
    sorted_bids = tuple(sorted(bids, key=competitiveness_key))
    step = fair_on_asks(sort_transactions(matching, sorted_asks, Side.ASK), sorted_asks)
    return fair_on_bids(sort_transactions(step, sorted_bids, Side.BID), sorted_bids)
