"""Brute-force references for small instances.

Nothing here shares code with the mechanisms. Enumeration distributes each
bid's quantity over the asks it can trade with, in every possible way that
respects ask capacities. The maximum volume is found twice: as the largest
enumerated volume, and as an integer max-flow on the network
source -> bids -> matchable asks -> sink.

The optimal uniform volume is ``max_p min(demand(p), supply(p))``. Any bid
with limit >= p can trade with any ask with limit <= p at price p, so that
volume is achievable by filling the two sides in any order; the tests verify
this against enumeration.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from .core import Matching, Order, Transaction, ask, bid, volume
from .properties import is_fair, is_ir, is_matching, is_uniform


class BudgetExceeded(ValueError):
    pass


class OracleDisagreement(AssertionError):
    pass


@dataclass(frozen=True)
class InstanceBudget:
    max_orders: int = 4
    max_quantity: int = 3
    max_price: int = 5
    # Caps enumeration so one oracle call stays well under a second.
    max_matchings: int = 20_000

    @property
    def price_universe(self) -> range:
        return range(self.max_price + 1)

    def within(self, other: InstanceBudget) -> bool:
        return (
            self.max_orders <= other.max_orders
            and self.max_quantity <= other.max_quantity
            and self.max_price <= other.max_price
            and self.max_matchings <= other.max_matchings
        )


DEFAULT_BUDGET = InstanceBudget()
HARD_CAP = InstanceBudget(max_orders=6, max_quantity=5, max_price=50, max_matchings=200_000)


def _pairs(bids: Sequence[Order], asks: Sequence[Order]) -> list[list[int]]:
    """For each bid, indices of the asks it can trade with."""
    return [[j for j, a in enumerate(asks) if b.price >= a.price] for b in bids]


def _distributions(quantity: int, targets: list[int], caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Every way to send at most ``quantity`` units to ``targets`` within ``caps``."""
    if not targets:
        yield ()
        return
    head, rest = targets[0], targets[1:]
    for x in range(min(quantity, caps[head]) + 1):
        for tail in _distributions(quantity - x, rest, caps):
            yield (x, *tail)


def count_matchings(bids: Sequence[Order], asks: Sequence[Order]) -> int:
    """Number of quantity assignments enumerate_matchings walks through."""
    reach = _pairs(bids, asks)

    @lru_cache(maxsize=None)
    def go(i: int, caps: tuple[int, ...]) -> int:
        if i == len(bids):
            return 1
        total = 0
        for dist in _distributions(bids[i].quantity, reach[i], caps):
            c = list(caps)
            for j, x in zip(reach[i], dist):
                c[j] -= x
            total += go(i + 1, tuple(c))
        return total

    return go(0, tuple(a.quantity for a in asks))


def check_budget(bids: Sequence[Order], asks: Sequence[Order], budget: InstanceBudget = DEFAULT_BUDGET) -> None:
    if len(bids) > budget.max_orders or len(asks) > budget.max_orders:
        raise BudgetExceeded(
            f"{len(bids)} bids / {len(asks)} asks exceed {budget.max_orders} orders per side"
        )
    big = [o for o in (*bids, *asks) if o.quantity > budget.max_quantity]
    if big:
        raise BudgetExceeded(f"order {big[0].id} has quantity {big[0].quantity} > {budget.max_quantity}")
    n = count_matchings(bids, asks)
    if n > budget.max_matchings:
        raise BudgetExceeded(f"{n} matchings to enumerate > {budget.max_matchings}")


def _assignments(bids: Sequence[Order], asks: Sequence[Order]) -> Iterator[list[tuple[int, int, int]]]:
    reach = _pairs(bids, asks)

    def go(i: int, caps: tuple[int, ...], acc: list[tuple[int, int, int]]):
        if i == len(bids):
            yield acc
            return
        for dist in _distributions(bids[i].quantity, reach[i], caps):
            c = list(caps)
            added = []
            for j, x in zip(reach[i], dist):
                if x:
                    c[j] -= x
                    added.append((i, j, x))
            yield from go(i + 1, tuple(c), acc + added)

    yield from go(0, tuple(a.quantity for a in asks), [])


def enumerate_matchings(
    bids: Sequence[Order],
    asks: Sequence[Order],
    budget: InstanceBudget = DEFAULT_BUDGET,
    pricing: str = "ask",
) -> Iterator[Matching]:
    """Yield every matching between the books.

    ``pricing="ask"`` prices each transaction at its ask's limit, giving one
    individual-rational matching per quantity assignment. ``pricing="uniform"``
    yields, per assignment, one copy for every price in the budget's universe
    or among the limit prices that keeps all its trades individual-rational;
    assignments with no such price are skipped.
    """
    if pricing not in ("ask", "uniform"):
        raise ValueError(f"unknown pricing {pricing!r}")
    check_budget(bids, asks, budget)
    prices = sorted({*budget.price_universe, *(o.price for o in (*bids, *asks))})
    for acc in _assignments(bids, asks):
        if pricing == "ask":
            yield tuple(Transaction(bids[i].id, asks[j].id, x, asks[j].price) for i, j, x in acc)
            continue
        if not acc:
            yield ()
            continue
        lo = max(asks[j].price for _, j, _ in acc)
        hi = min(bids[i].price for i, _, _ in acc)
        for p in prices:
            if lo <= p <= hi:
                yield tuple(Transaction(bids[i].id, asks[j].id, x, p) for i, j, x in acc)


def exhaustive_max_volume(
    bids: Sequence[Order], asks: Sequence[Order], budget: InstanceBudget = DEFAULT_BUDGET
) -> int:
    """Largest volume among all enumerated matchings."""
    return max(volume(m) for m in enumerate_matchings(bids, asks, budget))


def max_flow_volume(bids: Sequence[Order], asks: Sequence[Order]) -> int:
    g = nx.DiGraph()
    g.add_node("source")
    g.add_node("sink")
    for b in bids:
        g.add_edge("source", ("bid", b.id), capacity=b.quantity)
    for a in asks:
        g.add_edge(("ask", a.id), "sink", capacity=a.quantity)
    for b in bids:
        for a in asks:
            if b.price >= a.price:
                g.add_edge(("bid", b.id), ("ask", a.id), capacity=min(b.quantity, a.quantity))
    return int(nx.maximum_flow_value(g, "source", "sink"))


def max_volume_oracle(
    bids: Sequence[Order], asks: Sequence[Order], budget: InstanceBudget = DEFAULT_BUDGET
) -> int:
    exhaustive = exhaustive_max_volume(bids, asks, budget)
    flow = max_flow_volume(bids, asks)
    if exhaustive != flow:
        raise OracleDisagreement(f"exhaustive maximum {exhaustive} != max-flow {flow}")
    return exhaustive


def optimal_uniform_volume(bids: Sequence[Order], asks: Sequence[Order]) -> int:
    """max over limit prices p of min(demand at p, supply at p)."""
    best = 0
    for p in {o.price for o in (*bids, *asks)}:
        demand = sum(b.quantity for b in bids if b.price >= p)
        supply = sum(a.quantity for a in asks if a.price <= p)
        best = max(best, min(demand, supply))
    return best


def enumerate_fair_optimal(
    bids: Sequence[Order], asks: Sequence[Order], budget: InstanceBudget = DEFAULT_BUDGET
) -> Iterator[Matching]:
    """Every fair, individual-rational, uniform matching of optimal uniform volume."""
    target = optimal_uniform_volume(bids, asks)
    for m in enumerate_matchings(bids, asks, budget, pricing="uniform"):
        if volume(m) != target:
            continue
        if is_matching(m, bids, asks) and is_ir(m, bids, asks) and is_uniform(m) and is_fair(m, bids, asks):
            yield m


def random_instance(
    rng: random.Random, budget: InstanceBudget = DEFAULT_BUDGET
) -> tuple[tuple[Order, ...], tuple[Order, ...]]:
    """Draw books within ``budget``, redrawing any that would enumerate too many matchings.

    Timestamps come from a small range so equal (price, timestamp) ties occur.
    """
    while True:
        n_bids = rng.randint(0, budget.max_orders)
        n_asks = rng.randint(0, budget.max_orders)
        horizon = max(1, n_bids + n_asks)

        def draw(make, n):
            return tuple(
                make(
                    i + 1,
                    rng.randint(0, horizon),
                    rng.randint(1, budget.max_quantity),
                    rng.randint(0, budget.max_price),
                )
                for i in range(n)
            )

        bids, asks = draw(bid, n_bids), draw(ask, n_asks)
        if count_matchings(bids, asks) <= budget.max_matchings:
            return bids, asks


def random_instances(
    n: int, seed: int, budget: InstanceBudget = DEFAULT_BUDGET
) -> list[tuple[tuple[Order, ...], tuple[Order, ...]]]:
    rng = random.Random(seed)
    return [random_instance(rng, budget) for _ in range(n)]

