"""Deterministic multi-unit call-auction matching and trade auditing."""

from .audit import AuditReport, Verdict, audit, uniqueness_check
from .core import (
    MAX_PRICE,
    Matching,
    Order,
    Ordering,
    Side,
    Transaction,
    ask,
    bid,
    compare_asks,
    compare_bids,
    demand_at,
    order_volume,
    pair_volume,
    sort_by_competitiveness,
    supply_at,
    volume,
)
from .fairness import fair_on_asks, fair_on_bids, make_fair
from .maximum import maximum_match, mm
from .properties import PropertyReport, is_fair, is_fair_on_asks, is_fair_on_bids, is_ir, is_matching, is_uniform
from .uniform import uniform_match, um

__version__ = "0.1.0"

__all__ = [
    "MAX_PRICE", "AuditReport", "Matching", "Order", "Ordering", "PropertyReport", "Side", "Transaction", "Verdict",
    "ask", "audit", "bid", "compare_asks", "compare_bids", "demand_at", "fair_on_asks", "fair_on_bids",
    "is_fair", "is_fair_on_asks", "is_fair_on_bids", "is_ir", "is_matching", "is_uniform", "make_fair",
    "maximum_match", "mm", "order_volume", "pair_volume", "sort_by_competitiveness", "supply_at",
    "uniform_match", "um", "uniqueness_check", "volume",
]
