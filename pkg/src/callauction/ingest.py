"""Order-book and trade-book files.

All files are comma-separated UTF-8 with a header line and LF endings; no
quoting, ASCII digits only. Formats::

    bids / asks:  id,timestamp,quantity,price      (price may be M = market)
    trades:       bid_id,ask_id,quantity,price
    raw events:   id,timestamp,side,action,quantity,price
                  side in {bid, ask}, action in {new, update, delete};
                  delete rows leave quantity and price empty

Trailing whitespace on a line is ignored. Anything else that does not match
the format is a :class:`ParseError` carrying the line and column.
"""

from __future__ import annotations

import enum
import io
import logging
import os
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from typing import IO, Union

from .core import MAX_PRICE, Order, Side, Transaction

log = logging.getLogger(__name__)

ORDER_HEADER = "id,timestamp,quantity,price"
TRADE_HEADER = "bid_id,ask_id,quantity,price"
EVENT_HEADER = "id,timestamp,side,action,quantity,price"

_DIGITS = re.compile(r"[0-9]+")

Source = Union[str, "os.PathLike[str]", IO[str], IO[bytes]]

TradeRecord = Transaction


class _Market:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MARKET"


MARKET = _Market()


class Action(enum.Enum):
    NEW = "new"
    UPDATE = "update"
    DELETE = "delete"


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}" + (f":{column}" if column is not None else "")
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column
        self.source = source


@dataclass(frozen=True)
class BookRow:
    """An order as it appears in a book file, before market substitution."""

    id: int
    timestamp: int
    quantity: int
    price: int | _Market

    @property
    def is_market(self) -> bool:
        return self.price is MARKET


@dataclass(frozen=True)
class RawOrderEvent:
    id: int
    timestamp: int
    side: Side
    action: Action
    quantity: int | None = None
    price: int | _Market | None = None

    def __post_init__(self) -> None:
        if self.action is Action.DELETE:
            if self.quantity is not None or self.price is not None:
                raise ValueError(f"delete event for order {self.id} carries quantity or price")
        elif self.quantity is None or self.quantity < 1 or self.price is None:
            raise ValueError(f"{self.action.value} event for order {self.id} needs quantity >= 1 and a price")


@dataclass
class ResolvedBook:
    bids: list[BookRow]
    asks: list[BookRow]
    warnings: list[str] = field(default_factory=list)
    update_requeues_time: bool = False


def _read_text(source: Source) -> tuple[str, str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            return fh.read(), os.fspath(source)
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data, getattr(source, "name", "<stream>")


def _rows(source: Source, header: str) -> Iterable[tuple[int, list[str], str]]:
    text, name = _read_text(source)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip() != header:
        raise ParseError(f"expected header {header!r}", 1, source=name)
    width = header.count(",") + 1
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip()
        if line == header:
            raise ParseError("duplicate header", lineno, source=name)
        fields = line.split(",")
        if len(fields) != width:
            raise ParseError(f"expected {width} columns, got {len(fields)}", lineno, source=name)
        yield lineno, fields, name


def _int(value: str, lineno: int, col: int, name: str) -> int:
    if not _DIGITS.fullmatch(value):
        raise ParseError(f"not a non-negative integer: {value!r}", lineno, col, name)
    return int(value)


def _price(value: str, lineno: int, col: int, name: str) -> int | _Market:
    return MARKET if value == "M" else _int(value, lineno, col, name)


def _positive(value: str, lineno: int, col: int, name: str) -> int:
    q = _int(value, lineno, col, name)
    if q < 1:
        raise ParseError("quantity must be at least 1", lineno, col, name)
    return q


def parse_orders(source: Source) -> list[BookRow]:
    """Parse a bids or asks file; duplicate ids are rejected."""
    out: list[BookRow] = []
    seen: set[int] = set()
    for lineno, f, name in _rows(source, ORDER_HEADER):
        row = BookRow(
            _int(f[0], lineno, 1, name),
            _int(f[1], lineno, 2, name),
            _positive(f[2], lineno, 3, name),
            _price(f[3], lineno, 4, name),
        )
        if row.id in seen:
            raise ParseError(f"duplicate order id {row.id}", lineno, 1, name)
        seen.add(row.id)
        out.append(row)
    return out


parse_bids = parse_orders
parse_asks = parse_orders


def parse_trades(source: Source) -> list[TradeRecord]:
    out = []
    for lineno, f, name in _rows(source, TRADE_HEADER):
        out.append(
            Transaction(
                _int(f[0], lineno, 1, name),
                _int(f[1], lineno, 2, name),
                _positive(f[2], lineno, 3, name),
                _int(f[3], lineno, 4, name),
            )
        )
    return out


def parse_events(source: Source) -> list[RawOrderEvent]:
    out = []
    for lineno, f, name in _rows(source, EVENT_HEADER):
        try:
            side = Side(f[2])
        except ValueError:
            raise ParseError(f"side must be 'bid' or 'ask', got {f[2]!r}", lineno, 3, name) from None
        try:
            action = Action(f[3])
        except ValueError:
            raise ParseError(f"unknown action {f[3]!r}", lineno, 4, name) from None
        oid, ts = _int(f[0], lineno, 1, name), _int(f[1], lineno, 2, name)
        if action is Action.DELETE:
            if f[4] or f[5]:
                raise ParseError("delete rows must leave quantity and price empty", lineno, 5, name)
            out.append(RawOrderEvent(oid, ts, side, action))
        else:
            out.append(
                RawOrderEvent(
                    oid, ts, side, action, _positive(f[4], lineno, 5, name), _price(f[5], lineno, 6, name)
                )
            )
    return out


def resolve_book(events: Sequence[RawOrderEvent], update_requeues_time: bool = False) -> ResolvedBook:
    """Replay events in (timestamp, file order) and keep the surviving orders.

    An update replaces quantity and price. It keeps the order's original
    timestamp unless ``update_requeues_time`` is set, in which case the order
    takes the update's timestamp and loses its place in the time queue.
    Updates and deletes of unknown orders are skipped with a warning.
    """
    live: dict[tuple[Side, int], BookRow] = {}
    warnings: list[str] = []
    for ev in sorted(events, key=lambda e: e.timestamp):
        key = (ev.side, ev.id)
        if ev.action is Action.NEW:
            if key in live:
                warnings.append(f"new {ev.side.value} {ev.id} at {ev.timestamp} replaces a live order")
                del live[key]
            live[key] = BookRow(ev.id, ev.timestamp, ev.quantity, ev.price)
        elif key not in live:
            warnings.append(f"{ev.action.value} of unknown {ev.side.value} {ev.id} at {ev.timestamp} skipped")
        elif ev.action is Action.DELETE:
            del live[key]
        else:
            ts = ev.timestamp if update_requeues_time else live[key].timestamp
            live[key] = replace(live[key], timestamp=ts, quantity=ev.quantity, price=ev.price)
    for w in warnings:
        log.warning(w)
    bids = [row for (side, _), row in live.items() if side is Side.BID]
    asks = [row for (side, _), row in live.items() if side is Side.ASK]
    return ResolvedBook(bids, asks, warnings, update_requeues_time)


def _to_orders(rows: Iterable[BookRow], side: Side, market_price: int) -> tuple[Order, ...]:
    return tuple(
        Order(
            r.id,
            r.timestamp,
            r.quantity,
            market_price if r.is_market else r.price,
            side,
            market=r.is_market,
        )
        for r in rows
    )


def substitute_market_prices(
    bids: Iterable[BookRow], asks: Iterable[BookRow], max_price: int = MAX_PRICE
) -> tuple[tuple[Order, ...], tuple[Order, ...]]:
    """Market bids get ``max_price``, market asks get 0."""
    return _to_orders(bids, Side.BID, max_price), _to_orders(asks, Side.ASK, 0)


def drop_market_orders(orders: Iterable[Order]) -> tuple[Order, ...]:
    return tuple(o for o in orders if not o.market)


def _write(lines: list[str], target: Source | None) -> str:
    text = "\n".join(lines) + "\n"
    if target is None:
        return text
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        target.write(text)
    return text


def _fmt_price(price: int | _Market | None) -> str:
    if price is None:
        return ""
    return "M" if price is MARKET else str(price)


def format_orders(rows: Iterable[BookRow | Order], target: Source | None = None) -> str:
    lines = [ORDER_HEADER]
    for r in rows:
        price = MARKET if isinstance(r, Order) and r.market else r.price
        lines.append(f"{r.id},{r.timestamp},{r.quantity},{_fmt_price(price)}")
    return _write(lines, target)


def format_trades(trades: Iterable[Transaction], target: Source | None = None) -> str:
    lines = [TRADE_HEADER] + [f"{t.bid_id},{t.ask_id},{t.quantity},{t.price}" for t in trades]
    return _write(lines, target)


def format_events(events: Iterable[RawOrderEvent], target: Source | None = None) -> str:
    lines = [EVENT_HEADER]
    for e in events:
        q = "" if e.quantity is None else str(e.quantity)
        lines.append(f"{e.id},{e.timestamp},{e.side.value},{e.action.value},{q},{_fmt_price(e.price)}")
    return _write(lines, target)


def read_books(
    bids_source: Source, asks_source: Source, max_price: int = MAX_PRICE
) -> tuple[tuple[Order, ...], tuple[Order, ...]]:
    return substitute_market_prices(parse_bids(bids_source), parse_asks(asks_source), max_price)


def text_source(text: str) -> IO[str]:
    return io.StringIO(text)
