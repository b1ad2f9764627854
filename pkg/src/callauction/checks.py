"""Seeded invariant sweep over small instances, with counterexample shrinking."""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field, replace

from .audit import Verdict, audit, uniqueness_check
from .core import MAX_PRICE, Matching, Order, Side, Transaction, competitiveness_key, volume, volumes_by_order
from .fairness import fair_on_asks, fair_on_bids, make_fair, sort_transactions
from .maximum import maximum_match
from .oracle import (
    DEFAULT_BUDGET,
    InstanceBudget,
    OracleDisagreement,
    enumerate_fair_optimal,
    enumerate_matchings,
    max_volume_oracle,
    optimal_uniform_volume,
    random_instances,
)
from .properties import candidate_prices, check_volume_bound, is_fair, is_ir, is_matching, is_uniform
from .uniform import uniform_match

Mechanism = Callable[[Sequence[Order], Sequence[Order]], Matching]
Books = tuple[tuple[Order, ...], tuple[Order, ...]]


@dataclass(frozen=True)
class Failure:
    check: str
    detail: str
    bids: tuple[Order, ...]
    asks: tuple[Order, ...]

    def describe(self) -> str:
        lines = [f"[{self.check}] {self.detail}"]
        lines += [f"  bid {o.id}: t={o.timestamp} q={o.quantity} p={o.price}" for o in self.bids]
        lines += [f"  ask {o.id}: t={o.timestamp} q={o.quantity} p={o.price}" for o in self.asks]
        return "\n".join(lines)


@dataclass
class Mechanisms:
    um: Mechanism = uniform_match
    mm: Mechanism = maximum_match


@dataclass
class SweepResult:
    instances: int
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def perturbations(matching: Matching, bids: Sequence[Order], asks: Sequence[Order]) -> Iterator[Matching]:
    """Every matching obtained by moving one unit from a traded order to another order of its side."""
    for k, m in enumerate(matching):
        rest = matching[:k] + matching[k + 1 :]
        shrunk = (replace(m, quantity=m.quantity - 1),) if m.quantity > 1 else ()
        for b in bids:
            if b.id != m.bid_id:
                yield rest + shrunk + (Transaction(b.id, m.ask_id, 1, m.price),)
        for a in asks:
            if a.id != m.ask_id:
                yield rest + shrunk + (Transaction(m.bid_id, a.id, 1, m.price),)


def _props(m: Matching, bids, asks, *, uniform: bool) -> str | None:
    reports = [is_matching(m, bids, asks), is_ir(m, bids, asks), is_fair(m, bids, asks)]
    if uniform:
        reports.append(is_uniform(m))
    bad = [r for r in reports if not r]
    return str(bad[0]) if bad else None


def check_mechanisms(bids, asks, budget: InstanceBudget, mech: Mechanisms) -> Iterator[tuple[str, str]]:
    u = mech.um(bids, asks)
    if (err := _props(u, bids, asks, uniform=True)) is not None:
        yield "um properties", err
    if volume(u) != (opt := optimal_uniform_volume(bids, asks)):
        yield "um optimality", f"um volume {volume(u)} != optimal uniform volume {opt}"
    m = mech.mm(bids, asks)
    if (err := _props(m, bids, asks, uniform=False)) is not None:
        yield "mm properties", err
    try:
        best = max_volume_oracle(bids, asks, budget)
    except OracleDisagreement as exc:
        yield "oracle agreement", str(exc)
    else:
        if volume(m) != best:
            yield "mm maximality", f"mm volume {volume(m)} != maximum {best}"
    if volume(m) < volume(u):
        yield "mm >= um", f"mm volume {volume(m)} < um volume {volume(u)}"
    if (rep := audit(bids, asks, u)).verdict is not Verdict.NO_VIOLATION:
        yield "self-audit", rep.verdict_message


def check_volume_bounds(bids, asks, budget: InstanceBudget) -> Iterator[tuple[str, str]]:
    prices = candidate_prices(bids, asks, MAX_PRICE)
    for m in enumerate_matchings(bids, asks, budget):
        for p in prices:
            if not (rep := check_volume_bound(m, bids, asks, p)):
                yield "volume bound", f"{rep.witness} for {m}"
                return


def check_fairness(m: Matching, bids, asks) -> Iterator[tuple[str, str]]:
    f = make_fair(m, bids, asks)
    if not is_matching(f, bids, asks) or not is_fair(f, bids, asks) or volume(f) != volume(m):
        yield "fair", f"fair({m}) = {f} is not a fair matching of volume {volume(m)}"
    sbids = tuple(sorted(bids, key=competitiveness_key))
    sasks = tuple(sorted(asks, key=competitiveness_key))
    fb = fair_on_bids(sort_transactions(m, sbids, Side.BID), sbids)
    if volumes_by_order(fb, Side.ASK) != volumes_by_order(m, Side.ASK):
        yield "fob per-ask volumes", f"{m} -> {fb}"
    fa = fair_on_asks(sort_transactions(m, sasks, Side.ASK), sasks)
    if volumes_by_order(fa, Side.BID) != volumes_by_order(m, Side.BID):
        yield "foa per-bid volumes", f"{m} -> {fa}"


def check_enumerated(bids, asks, budget: InstanceBudget, mech: Mechanisms) -> Iterator[tuple[str, str]]:
    yield from check_volume_bounds(bids, asks, budget)
    fair_by_volume: dict[int, Matching] = {}
    for m in enumerate_matchings(bids, asks, budget):
        yield from check_fairness(m, bids, asks)
        if is_fair(m, bids, asks):
            first = fair_by_volume.setdefault(volume(m), m)
            if not (rep := uniqueness_check(first, m, bids, asks)):
                yield "fair uniqueness", f"{first} vs {m}: {rep.witness}"
    u = mech.um(bids, asks)
    for m in enumerate_fair_optimal(bids, asks, budget):
        if (rep := audit(bids, asks, m)).verdict is not Verdict.NO_VIOLATION:
            yield "fair optimal passes audit", f"{m} flagged against reference {u}"
    for p in perturbations(u, bids, asks):
        if audit(bids, asks, p).verdict is not Verdict.VIOLATION:
            yield "perturbation detected", f"{p} not flagged"
            break


def check_instance(bids, asks, budget: InstanceBudget = DEFAULT_BUDGET, mech: Mechanisms | None = None) -> list[tuple[str, str]]:
    mech = mech or Mechanisms()
    out: list[tuple[str, str]] = []
    try:
        out += check_mechanisms(bids, asks, budget, mech)
        out += check_enumerated(bids, asks, budget, mech)
    except Exception as exc:  # a crashing mechanism is a failure to report, not to propagate
        out.append(("crash", f"{type(exc).__name__}: {exc}"))
    return out


def shrink(bids: tuple[Order, ...], asks: tuple[Order, ...], fails: Callable[[Books], bool]) -> Books:
    """Greedily drop orders and lower quantities while ``fails`` keeps holding."""
    current = (bids, asks)
    progress = True
    while progress:
        progress = False
        for side in (0, 1):
            orders = current[side]
            for k in range(len(orders)):
                candidates = [orders[:k] + orders[k + 1 :]]
                if orders[k].quantity > 1:
                    candidates.append(orders[:k] + (replace(orders[k], quantity=orders[k].quantity - 1),) + orders[k + 1 :])
                for cand in candidates:
                    trial = (cand, current[1]) if side == 0 else (current[0], cand)
                    if fails(trial):
                        current, progress = trial, True
                        break
                if progress:
                    break
            if progress:
                break
    return current


def run_sweep(
    n: int,
    seed: int,
    budget: InstanceBudget = DEFAULT_BUDGET,
    mech: Mechanisms | None = None,
    stop_after: int = 1,
) -> SweepResult:
    """Check every invariant on ``n`` seeded instances; shrink the first failures."""
    mech = mech or Mechanisms()
    result = SweepResult(n)
    for bids, asks in random_instances(n, seed, budget):
        found = check_instance(bids, asks, budget, mech)
        if not found:
            continue
        name = found[0][0]

        def still_fails(books: Books, name=name) -> bool:
            try:
                return any(c == name for c, _ in check_instance(*books, budget, mech))
            except Exception:
                return False

        small = shrink(bids, asks, still_fails)
        detail = next(d for c, d in check_instance(*small, budget, mech) if c == name)
        result.failures.append(Failure(name, detail, *small))
        if len(result.failures) >= stop_after:
            break
    return result
