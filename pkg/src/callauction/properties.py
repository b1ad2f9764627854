"""Executable predicates over matchings.

Every predicate returns a :class:`PropertyReport`; a failing report carries a
witness naming the offending orders or transactions so callers can print a
minimal counterexample. Empty matchings satisfy everything.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .core import (
    Order,
    Side,
    Transaction,
    competitiveness_key,
    demand_at,
    supply_at,
    volume,
    volumes_by_order,
)


@dataclass(frozen=True)
class PropertyReport:
    name: str
    holds: bool
    witness: str | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.witness is None):
            raise ValueError("a witness is required exactly when the property fails")

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if self.holds:
            return f"{self.name}: holds"
        return f"{self.name}: FAILS ({self.witness})"


def _ok(name: str) -> PropertyReport:
    return PropertyReport(name, True)


def _fail(name: str, witness: str) -> PropertyReport:
    return PropertyReport(name, False, witness)


def _index(orders: Iterable[Order]) -> dict[int, Order]:
    return {o.id: o for o in orders}


def is_matching(
    matching: Sequence[Transaction], bids: Iterable[Order], asks: Iterable[Order]
) -> PropertyReport:
    name = "matching"
    bid_index, ask_index = _index(bids), _index(asks)
    for m in matching:
        b, a = bid_index.get(m.bid_id), ask_index.get(m.ask_id)
        if b is None:
            return _fail(name, f"bid {m.bid_id} of transaction {m} is not in the bid book")
        if a is None:
            return _fail(name, f"ask {m.ask_id} of transaction {m} is not in the ask book")
        if b.price < a.price:
            return _fail(name, f"bid {b.id} (limit {b.price}) is not matchable with ask {a.id} (limit {a.price})")
    for side, index in ((Side.BID, bid_index), (Side.ASK, ask_index)):
        for oid, q in volumes_by_order(matching, side).items():
            if q > index[oid].quantity:
                return _fail(name, f"{side.value} {oid} trades {q} > quantity {index[oid].quantity}")
    return _ok(name)


def is_ir(
    matching: Sequence[Transaction], bids: Iterable[Order], asks: Iterable[Order]
) -> PropertyReport:
    name = "individual-rational"
    bid_index, ask_index = _index(bids), _index(asks)
    for m in matching:
        b, a = bid_index.get(m.bid_id), ask_index.get(m.ask_id)
        if b is None or a is None:
            return _fail(name, f"transaction {m} references an order outside the books")
        if not a.price <= m.price <= b.price:
            return _fail(name, f"price {m.price} of {m} outside [ask limit {a.price}, bid limit {b.price}]")
    return _ok(name)


def is_uniform(matching: Sequence[Transaction]) -> PropertyReport:
    name = "uniform"
    if not matching:
        return _ok(name)
    first = matching[0]
    for m in matching:
        if m.price != first.price:
            return _fail(name, f"{first} trades at {first.price} but {m} at {m.price}")
    return _ok(name)


def _fair_on(matching: Sequence[Transaction], orders: Iterable[Order], side: Side) -> PropertyReport:
    # Scan in competitiveness order: once an order is left unfilled, no later
    # order may trade.
    name = f"fair on {side.value}s"
    traded = volumes_by_order(matching, side)
    unfilled: Order | None = None
    for o in sorted(orders, key=competitiveness_key):
        q = traded.get(o.id, 0)
        if unfilled is not None and q >= 1:
            return _fail(
                name,
                f"{side.value} {o.id} trades {q} while more competitive {side.value} "
                f"{unfilled.id} trades {traded.get(unfilled.id, 0)} of {unfilled.quantity}",
            )
        if unfilled is None and q != o.quantity:
            unfilled = o
    return _ok(name)


def is_fair_on_bids(matching: Sequence[Transaction], bids: Iterable[Order]) -> PropertyReport:
    return _fair_on(matching, bids, Side.BID)


def is_fair_on_asks(matching: Sequence[Transaction], asks: Iterable[Order]) -> PropertyReport:
    return _fair_on(matching, asks, Side.ASK)


def is_fair(
    matching: Sequence[Transaction], bids: Iterable[Order], asks: Iterable[Order]
) -> PropertyReport:
    for report in (is_fair_on_bids(matching, bids), is_fair_on_asks(matching, asks)):
        if not report:
            return _fail("fair", report.witness)
    return _ok("fair")


def check_volume_bound(
    matching: Sequence[Transaction], bids: Sequence[Order], asks: Sequence[Order], price: int
) -> PropertyReport:
    """No matching trades more than demand plus supply at any price."""
    q = volume(matching)
    demand, supply = demand_at(bids, price), supply_at(asks, price)
    if q <= demand + supply:
        return _ok("volume bound")
    return _fail("volume bound", f"volume {q} > demand {demand} + supply {supply} at price {price}")


def candidate_prices(bids: Iterable[Order], asks: Iterable[Order], max_price: int) -> list[int]:
    """Prices at which the demand+supply bound can change, plus both extremes."""
    return sorted({0, max_price, *(o.price for o in bids), *(o.price for o in asks)})
