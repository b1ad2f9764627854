"""Violation detection for published call-auction trades.

Fair matchings of equal volume trade exactly the same quantity for every
order, even when their bid/ask pairings differ. So an exchange's trades are
checked against the reference uniform matching order by order, on
quantities only; pairings and the clearing price itself are never compared.
The exchange's own prices are checked for individual rationality and
uniformity directly.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import Matching, Order, Side, Transaction, competitiveness_key, volumes_by_order
from .properties import PropertyReport, is_ir, is_matching, is_uniform
from .uniform import uniform_match

OK_MESSAGE = "Matching does not violate the guidelines"
VIOLATION_MESSAGE = "Violation detected!"
CSV_HEADER = "order_id,side,exchange_qty,reference_qty,equal"


class Verdict(enum.Enum):
    NO_VIOLATION = "NoViolation"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class AuditRow:
    order_id: int
    side: Side
    exchange_qty: int
    reference_qty: int
    known: bool = True

    @property
    def equal(self) -> bool:
        return self.exchange_qty == self.reference_qty


@dataclass
class AuditReport:
    rows: list[AuditRow]
    matching_verdict: PropertyReport
    ir_verdict: PropertyReport
    uniform_verdict: PropertyReport
    tie_break_exercised: bool
    reference: Matching
    notes: list[str] = field(default_factory=list)
    # Set when every diverging order sits in a group of same-side orders with
    # equal price and timestamp, and each such group trades the same total.
    tie_only_divergence: bool = False

    @property
    def diverging(self) -> list[AuditRow]:
        return [r for r in self.rows if not r.equal]

    @property
    def verdict(self) -> Verdict:
        clean = not self.diverging and self.matching_verdict and self.ir_verdict and self.uniform_verdict
        return Verdict.NO_VIOLATION if clean else Verdict.VIOLATION

    @property
    def verdict_message(self) -> str:
        return OK_MESSAGE if self.verdict is Verdict.NO_VIOLATION else VIOLATION_MESSAGE

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(f"{r.order_id},{r.side.value},{r.exchange_qty},{r.reference_qty},{str(r.equal).lower()}")
        return "\n".join(lines) + "\n"

    def to_table(self, all_rows: bool = False) -> str:
        shown = self.rows if all_rows else self.diverging
        out = [f"{'order':>10} {'side':<4} {'exchange':>10} {'reference':>10}  equal"]
        for r in shown:
            flag = "yes" if r.equal else "NO" + ("" if r.known else " (unknown order)")
            out.append(f"{r.order_id:>10} {r.side.value:<4} {r.exchange_qty:>10} {r.reference_qty:>10}  {flag}")
        if not all_rows:
            out.append(f"({len(self.rows) - len(shown)} orders with equal quantities not shown)")
        for v in (self.matching_verdict, self.ir_verdict, self.uniform_verdict):
            out.append(str(v))
        if self.tie_break_exercised:
            out.append("note: orders with equal price and timestamp exist; their priority follows ascending id")
        if self.tie_only_divergence:
            out.append("warning: divergence is confined to equal price/timestamp groups and may be a tie-break artefact")
        out.extend(f"note: {n}" for n in self.notes)
        return "\n".join(out)


def _tie_groups(orders: Iterable[Order]) -> dict[int, tuple[int, int]]:
    """Map id -> (price, timestamp) for orders sharing both with another order."""
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for o in orders:
        groups[(o.price, o.timestamp)].append(o.id)
    return {oid: key for key, ids in groups.items() if len(ids) > 1 for oid in ids}


def _rows(
    orders: Sequence[Order], side: Side, exchange: Matching, reference: Matching
) -> list[AuditRow]:
    ex, ref = volumes_by_order(exchange, side), volumes_by_order(reference, side)
    rows = [AuditRow(o.id, side, ex.get(o.id, 0), ref.get(o.id, 0)) for o in sorted(orders, key=competitiveness_key)]
    known = {o.id for o in orders}
    rows.extend(AuditRow(oid, side, q, 0, known=False) for oid, q in sorted(ex.items()) if oid not in known)
    return rows


def _tie_only(rows: list[AuditRow], bids: Sequence[Order], asks: Sequence[Order]) -> bool:
    diverging = [r for r in rows if not r.equal]
    if not diverging:
        return False
    ties = {Side.BID: _tie_groups(bids), Side.ASK: _tie_groups(asks)}
    if any(r.order_id not in ties[r.side] or not r.known for r in diverging):
        return False
    delta: dict[tuple[Side, tuple[int, int]], int] = defaultdict(int)
    for r in rows:
        group = ties[r.side].get(r.order_id)
        if group is not None:
            delta[(r.side, group)] += r.exchange_qty - r.reference_qty
    return all(d == 0 for d in delta.values())


def audit(
    bids: Sequence[Order],
    asks: Sequence[Order],
    exchange_trades: Sequence[Transaction],
    notes: Iterable[str] = (),
) -> AuditReport:
    """Compare exchange trades with the reference uniform matching."""
    exchange = tuple(exchange_trades)
    reference = uniform_match(bids, asks)
    rows = _rows(bids, Side.BID, exchange, reference) + _rows(asks, Side.ASK, exchange, reference)
    ir = is_ir(exchange, bids, asks)
    uniform = is_uniform(exchange)
    matching = is_matching(exchange, bids, asks)
    tie_break = bool(_tie_groups(bids) or _tie_groups(asks))
    report = AuditReport(
        rows=rows,
        matching_verdict=matching,
        ir_verdict=ir,
        uniform_verdict=uniform,
        tie_break_exercised=tie_break,
        reference=reference,
        notes=list(notes),
    )
    report.tie_only_divergence = bool(matching and ir and uniform) and _tie_only(rows, bids, asks)
    return report


def uniqueness_check(
    m1: Sequence[Transaction], m2: Sequence[Transaction], bids: Sequence[Order], asks: Sequence[Order]
) -> PropertyReport:
    """Holds iff every order trades the same total quantity in both matchings."""
    for side, orders in ((Side.BID, bids), (Side.ASK, asks)):
        v1, v2 = volumes_by_order(m1, side), volumes_by_order(m2, side)
        for oid in sorted({o.id for o in orders} | v1.keys() | v2.keys()):
            if v1.get(oid, 0) != v2.get(oid, 0):
                return PropertyReport(
                    "equal per-order volumes",
                    False,
                    f"{side.value} {oid} trades {v1.get(oid, 0)} vs {v2.get(oid, 0)}",
                )
    return PropertyReport("equal per-order volumes", True)
