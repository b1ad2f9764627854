from pathlib import Path

import pytest

from callauction.core import ask, bid

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def unit_pairs():
    """Two unit bids (100, 85) and two unit asks (70, 90)."""
    bids = (bid(1, 1, 1, 100), bid(2, 2, 1, 85))
    asks = (ask(1, 3, 1, 70), ask(2, 4, 1, 90))
    return bids, asks


@pytest.fixture
def two_by_two():
    """Bids q1/q2 and asks q1/q2, all at one price; b1 and a1 arrive first."""
    p = 3
    bids = (bid(1, 1, 1, p), bid(2, 2, 2, p))
    asks = (ask(1, 1, 1, p), ask(2, 2, 2, p))
    return bids, asks, p


@pytest.fixture
def fixtures_dir():
    return FIXTURES
