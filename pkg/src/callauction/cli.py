"""Command-line front end.

Exit codes: 0 success / no violation, 1 violation or failed check,
2 unreadable or malformed input (or a refused oracle budget),
3 a computed matching failed its own property checks.
"""

from __future__ import annotations

import logging
import sys

import click

from .audit import Verdict, audit
from .checks import run_sweep
from .core import MAX_PRICE
from .ingest import (
    ParseError,
    drop_market_orders,
    format_trades,
    parse_asks,
    parse_bids,
    parse_events,
    parse_trades,
    resolve_book,
    substitute_market_prices,
)
from .maximum import maximum_match
from .oracle import HARD_CAP, InstanceBudget
from .properties import is_fair, is_ir, is_matching, is_uniform
from .uniform import uniform_match

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

_file = click.Path(exists=True, dir_okay=False)


def _fail_input(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_INPUT)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log ingestion warnings.")
def main(verbose: bool) -> None:
    """Call-auction matching and trade auditing."""
    logging.basicConfig(level=logging.WARNING if verbose else logging.ERROR, format="%(levelname)s %(message)s")


def _match(mechanism: str, bids_path: str, asks_path: str, out: str, max_price: int) -> None:
    try:
        bids, asks = substitute_market_prices(parse_bids(bids_path), parse_asks(asks_path), max_price)
    except (ParseError, ValueError) as exc:
        _fail_input(exc)
    if mechanism == "um":
        matching = uniform_match(bids, asks)
        reports = [is_matching(matching, bids, asks), is_ir(matching, bids, asks),
                   is_uniform(matching), is_fair(matching, bids, asks)]
    else:
        matching = maximum_match(bids, asks)
        reports = [is_matching(matching, bids, asks), is_ir(matching, bids, asks), is_fair(matching, bids, asks)]
    bad = [r for r in reports if not r]
    if bad:
        click.echo(f"internal error: {bad[0]}; nothing written", err=True)
        sys.exit(EXIT_INVARIANT)
    format_trades(matching, out)


def _match_command(name: str, help_text: str):
    @main.command(name=name, help=help_text)
    @click.option("--bids", "bids_path", type=_file, required=True)
    @click.option("--asks", "asks_path", type=_file, required=True)
    @click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
    @click.option("--max-price", type=click.IntRange(min=0), default=MAX_PRICE, show_default=True,
                  help="Limit price given to market bids.")
    def command(bids_path: str, asks_path: str, out: str, max_price: int) -> None:
        _match(name, bids_path, asks_path, out, max_price)

    return command


_match_command("um", "Uniform-price matching; writes a trades file.")
_match_command("mm", "Maximum-volume matching; writes a trades file.")


@main.command("audit")
@click.option("--bids", "bids_path", type=_file)
@click.option("--asks", "asks_path", type=_file)
@click.option("--trades", "trades_path", type=_file, required=True)
@click.option("--raw-events", "events_path", type=_file,
              help="Build the books from an order-event file instead of --bids/--asks.")
@click.option("--update-requeues-time", is_flag=True,
              help="Updated orders take the update's timestamp instead of keeping their original one.")
@click.option("--keep-market-asks", is_flag=True,
              help="Keep market asks in the books (by default they are removed before auditing).")
@click.option("--max-price", type=click.IntRange(min=0), default=MAX_PRICE, show_default=True)
@click.option("--report-csv", type=click.Path(dir_okay=False, writable=True),
              help="Write the per-order comparison as CSV.")
@click.option("--all-rows", is_flag=True, help="Show every order in the table, not only diverging ones.")
def audit_command(bids_path, asks_path, trades_path, events_path, update_requeues_time,
                  keep_market_asks, max_price, report_csv, all_rows) -> None:
    """Compare exchange trades against the reference uniform matching."""
    if events_path is None and (bids_path is None or asks_path is None):
        click.echo("error: give --bids and --asks, or --raw-events", err=True)
        sys.exit(EXIT_INPUT)
    notes = []
    try:
        if events_path is not None:
            book = resolve_book(parse_events(events_path), update_requeues_time)
            bid_rows, ask_rows = book.bids, book.asks
            notes.append("updates " + ("re-queue at the update time" if update_requeues_time
                                       else "keep the original timestamp"))
            notes.extend(book.warnings)
        else:
            bid_rows, ask_rows = parse_bids(bids_path), parse_asks(asks_path)
        trades = parse_trades(trades_path)
        bids, asks = substitute_market_prices(bid_rows, ask_rows, max_price)
    except (ParseError, ValueError) as exc:
        _fail_input(exc)
    if not keep_market_asks:
        kept = drop_market_orders(asks)
        if len(kept) != len(asks):
            notes.append(f"{len(asks) - len(kept)} market ask(s) removed before auditing")
        asks = kept
    report = audit(bids, asks, trades, notes)
    click.echo(report.to_table(all_rows))
    if report_csv:
        with open(report_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    click.echo(report.verdict_message)
    sys.exit(EXIT_OK if report.verdict is Verdict.NO_VIOLATION else EXIT_VIOLATION)


@main.command("oracle-check")
@click.option("--max-orders", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--max-quantity", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--max-price", type=click.IntRange(min=0), default=5, show_default=True)
@click.option("--max-matchings", type=click.IntRange(min=1), default=20_000, show_default=True)
@click.option("--instances", type=click.IntRange(min=0), default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def oracle_check(max_orders, max_quantity, max_price, max_matchings, instances, seed) -> None:
    """Check every invariant against brute-force oracles on seeded random instances."""
    budget = InstanceBudget(max_orders, max_quantity, max_price, max_matchings)
    if not budget.within(HARD_CAP):
        click.echo(f"error: budget {budget} exceeds hard cap {HARD_CAP}", err=True)
        sys.exit(EXIT_INPUT)
    result = run_sweep(instances, seed, budget)
    if result.ok:
        click.echo(f"{instances} instances: all invariants hold")
        sys.exit(EXIT_OK)
    for failure in result.failures:
        click.echo(failure.describe())
    sys.exit(EXIT_VIOLATION)


if __name__ == "__main__":
    main()
