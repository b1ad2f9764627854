"""Domain types, competitiveness orderings and quantity aggregates.

Orders and transactions are immutable. A matching is a plain tuple of
transactions; whether it is valid for a given pair of books is decided by
:func:`callauction.properties.is_matching`, never by the type itself.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

MAX_PRICE = 2**62  # limit price given to market bids


class Side(enum.Enum):
    BID = "bid"
    ASK = "ask"

    @property
    def other(self) -> Side:
        return Side.ASK if self is Side.BID else Side.BID


class Ordering(enum.Enum):
    MORE_COMPETITIVE = -1
    EQUAL = 0
    LESS_COMPETITIVE = 1


class DuplicateOrderError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Order:
    """A bid or an ask.

    ``market`` records that the limit price was substituted for a market
    order during ingestion; it does not take part in any ordering.
    """

    id: int
    timestamp: int
    quantity: int
    price: int
    side: Side
    market: bool = False

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"order id must be non-negative, got {self.id}")
        if self.timestamp < 0:
            raise ValueError(f"order {self.id}: negative timestamp {self.timestamp}")
        if self.quantity < 1:
            raise ValueError(f"order {self.id}: quantity must be >= 1, got {self.quantity}")
        if self.price < 0:
            raise ValueError(f"order {self.id}: negative price {self.price}")


def bid(id: int, timestamp: int, quantity: int, price: int) -> Order:
    return Order(id, timestamp, quantity, price, Side.BID)


def ask(id: int, timestamp: int, quantity: int, price: int) -> Order:
    return Order(id, timestamp, quantity, price, Side.ASK)


@dataclass(frozen=True, slots=True)
class Transaction:
    bid_id: int
    ask_id: int
    quantity: int
    price: int

    def __post_init__(self) -> None:
        if self.quantity < 1:
            raise ValueError(f"transaction quantity must be >= 1, got {self.quantity}")
        if self.price < 0:
            raise ValueError(f"negative trade price {self.price}")

    def order_id(self, side: Side) -> int:
        return self.bid_id if side is Side.BID else self.ask_id


Matching = tuple[Transaction, ...]


def bid_key(order: Order) -> tuple[int, int, int]:
    # Higher price first, then earlier arrival, then lower id.
    return (-order.price, order.timestamp, order.id)


def ask_key(order: Order) -> tuple[int, int, int]:
    return (order.price, order.timestamp, order.id)


def competitiveness_key(order: Order) -> tuple[int, int, int]:
    """Sort key: smaller means more competitive on the order's own side."""
    return bid_key(order) if order.side is Side.BID else ask_key(order)


def _compare(k1: tuple, k2: tuple) -> Ordering:
    if k1 < k2:
        return Ordering.MORE_COMPETITIVE
    if k1 > k2:
        return Ordering.LESS_COMPETITIVE
    return Ordering.EQUAL


def compare_bids(b1: Order, b2: Order) -> Ordering:
    return _compare(bid_key(b1), bid_key(b2))


def compare_asks(a1: Order, a2: Order) -> Ordering:
    return _compare(ask_key(a1), ask_key(a2))


def more_competitive(o1: Order, o2: Order) -> bool:
    return competitiveness_key(o1) < competitiveness_key(o2)


def book_side(orders: Iterable[Order]) -> Side | None:
    sides = {o.side for o in orders}
    if len(sides) > 1:
        raise ValueError("book mixes bids and asks")
    return sides.pop() if sides else None


def sort_by_competitiveness(
    orders: Iterable[Order], most_competitive_first: bool = True
) -> tuple[Order, ...]:
    orders = tuple(orders)
    book_side(orders)
    return tuple(sorted(orders, key=competitiveness_key, reverse=not most_competitive_first))


def check_book(orders: Iterable[Order], side: Side | None = None) -> dict[int, Order]:
    """Index a book side by id, rejecting duplicate ids and foreign sides."""
    index: dict[int, Order] = {}
    for o in orders:
        if side is not None and o.side is not side:
            raise ValueError(f"order {o.id} is a {o.side.value}, expected {side.value}")
        if o.id in index:
            raise DuplicateOrderError(f"duplicate {o.side.value} id {o.id}")
        index[o.id] = o
    return index


def volume(matching: Iterable[Transaction]) -> int:
    return sum(m.quantity for m in matching)


def order_volume(order_id: int, matching: Iterable[Transaction], side: Side = Side.BID) -> int:
    """Total quantity traded by the order ``order_id`` on ``side``."""
    return sum(m.quantity for m in matching if m.order_id(side) == order_id)


def pair_volume(bid_id: int, ask_id: int, matching: Iterable[Transaction]) -> int:
    return sum(m.quantity for m in matching if m.bid_id == bid_id and m.ask_id == ask_id)


def volumes_by_order(matching: Iterable[Transaction], side: Side) -> dict[int, int]:
    """Per-order traded quantity on one side; orders that never trade are absent."""
    out: dict[int, int] = {}
    for m in matching:
        k = m.order_id(side)
        out[k] = out.get(k, 0) + m.quantity
    return out


def demand_at(bids: Iterable[Order], price: int) -> int:
    return sum(b.quantity for b in bids if b.price >= price)


def supply_at(asks: Iterable[Order], price: int) -> int:
    return sum(a.quantity for a in asks if a.price <= price)


def total_quantity(orders: Sequence[Order]) -> int:
    return sum(o.quantity for o in orders)


def has_tie_groups(orders: Iterable[Order]) -> bool:
    """True when two orders share both limit price and timestamp."""
    seen: set[tuple[int, int]] = set()
    for o in orders:
        key = (o.price, o.timestamp)
        if key in seen:
            return True
        seen.add(key)
    return False
