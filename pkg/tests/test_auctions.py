import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aftermarkets.auctions import (BidVector, all_pay_single, discriminatory,
                                   first_price_single, posted_price_sell,
                                   uniform_price)
from aftermarkets.valuations import MarginalValuation


def random_bids(rng, n, m):
    out = []
    for _ in range(n):
        k = rng.randint(0, min(m, 4))
        vals = sorted((round(rng.uniform(0, 3), 2) for _ in range(k)), reverse=True)
        out.append(BidVector(vals, m))
    return out


def test_bid_vector_validation():
    with pytest.raises(ValueError):
        BidVector([1.0, 2.0], 5)
    with pytest.raises(ValueError):
        BidVector([-1.0], 5)
    with pytest.raises(ValueError):
        BidVector([1.0] * 6, 5)
    assert BidVector.flat(0.0, 3, 5).runs == ()
    assert BidVector.flat(2.0, 3, 5).runs == ((2.0, 3),)


def test_uniform_price_clearing():
    # three agents, m=3: bids 5,4 / 3 / 2 -> price = 2 (first losing bid)
    bids = [BidVector([5.0, 4.0], 3), BidVector([3.0], 3), BidVector([2.0], 3)]
    out = uniform_price(bids, 3)
    assert out.alloc.counts == (2, 1, 0)
    assert out.clearing_price == pytest.approx(2.0)
    assert out.payments == (4.0, 2.0, 0.0)


def test_uniform_price_excess_supply_price_zero():
    bids = [BidVector([5.0], 3), BidVector([3.0], 3)]
    out = uniform_price(bids, 3)
    assert out.clearing_price == 0.0
    # implicit zero bids soak up the leftover unit
    assert out.alloc.total == 3


def test_uniform_price_reserve():
    bids = [BidVector([5.0], 2), BidVector([0.3], 2)]
    out = uniform_price(bids, 2, reserve=0.5)
    # the 0.3 bid is filtered; winner pays the reserve
    assert out.alloc.counts == (1, 0)
    assert out.clearing_price == pytest.approx(0.5)
    out2 = uniform_price(bids, 2, reserve=None)
    assert out2.alloc.counts in ((1, 1), (2, 0))


def test_uniform_price_tiebreak_priority():
    bids = [BidVector([1.0], 2), BidVector([1.0, 1.0], 2)]
    out = uniform_price(bids, 2)
    # agent 0 has priority on the tie: one unit each
    assert out.alloc.counts == (1, 1)
    out2 = uniform_price(bids, 2, tiebreak=(1, 0))
    assert out2.alloc.counts == (0, 2)


def test_discriminatory_pay_as_bid():
    bids = [BidVector([5.0, 4.0], 3), BidVector([3.0], 3), BidVector([2.0], 3)]
    out = discriminatory(bids, 3)
    assert out.alloc.counts == (2, 1, 0)
    assert out.payments == (9.0, 3.0, 0.0)


def test_single_item_auctions():
    out = first_price_single([0.4, 0.9, 0.1])
    assert out.alloc.counts == (0, 1, 0)
    assert out.payments == (0.0, 0.9, 0.0)
    ap = all_pay_single([0.4, 0.9, 0.1])
    assert ap.alloc.counts == (0, 1, 0)
    assert ap.payments == (0.4, 0.9, 0.1)
    tie = first_price_single([0.5, 0.5])
    assert tie.alloc.counts == (1, 0)


def test_posted_price_sell_truthful_and_override():
    vals = [MarginalValuation([2.0, 1.0]), MarginalValuation([3.0])]
    out = posted_price_sell(1.5, (0, 1), vals, 3)
    assert out.alloc.counts == (1, 1)
    assert out.payments == (1.5, 1.5)
    # override: agent 0 buys two units strategically
    out2 = posted_price_sell(1.5, (0, 1), vals, 3, quantities=[2, None])
    assert out2.alloc.counts == (2, 1)


@given(st.integers(0, 10_000))
@settings(max_examples=300, deadline=None)
def test_uniform_price_invariants(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 8)
    bids = random_bids(rng, rng.randint(1, 4), m)
    out = uniform_price(bids, m)
    price = out.clearing_price
    # every winning marginal >= price >= every fully losing positive marginal
    for i, bv in enumerate(bids):
        marginals = bv.runs
        flat = []
        for b, c in marginals:
            flat.extend([b] * c)
        won = out.alloc[i]
        for j, b in enumerate(flat):
            if j < won:
                assert b >= price - 1e-12
    assert out.alloc.total <= m
    assert out.revenue == pytest.approx(price * out.alloc.total)


@given(st.integers(0, 10_000))
@settings(max_examples=300, deadline=None)
def test_discriminatory_revenue_dominates_uniform(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 8)
    bids = random_bids(rng, rng.randint(1, 4), m)
    u = uniform_price(bids, m)
    d = discriminatory(bids, m)
    assert d.alloc.counts == u.alloc.counts
    assert d.revenue >= u.revenue - 1e-12


@given(st.integers(0, 10_000), st.floats(0.0, 2.0))
@settings(max_examples=200, deadline=None)
def test_reserve_monotone_in_sold_units(seed, reserve):
    rng = random.Random(seed)
    m = rng.randint(1, 8)
    bids = random_bids(rng, rng.randint(1, 4), m)
    low = uniform_price(bids, m, reserve=reserve)
    high = uniform_price(bids, m, reserve=reserve + 0.5)
    assert high.alloc.total <= low.alloc.total
