import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aftermarkets.aftermarket import (NO_OFFER, NeverBuy, ResaleSpec,
                                      SignalProtocol, ThresholdBuyer,
                                      apply_signal, check_weak_budget_balance,
                                      opt_out_outcome, run_posted_resale)
from aftermarkets.allocation import Allocation
from aftermarkets.auctions import BidVector, uniform_price
from aftermarkets.valuations import MarginalValuation


def random_setting(rng):
    n = rng.randint(2, 4)
    vals = []
    for _ in range(n):
        k = rng.randint(0, 3)
        vals.append(MarginalValuation(
            sorted((round(rng.uniform(0, 3), 2) for _ in range(k)), reverse=True)))
    counts = tuple(rng.randint(0, 3) for _ in range(n))
    seller = rng.randrange(n)
    buyers = tuple(i for i in range(n) if i != seller)
    price = round(rng.uniform(0.1, 3.0), 2)
    return vals, Allocation(counts), seller, buyers, price


def test_signal_protocols():
    bids = [BidVector([1.0], 2), BidVector([2.0, 2.0], 2)]
    out = uniform_price(bids, 2)
    obs = apply_signal(SignalProtocol.PUBLIC_ALLOCATION_OWN_PAYMENT, out, bids)
    assert obs[0].alloc == out.alloc
    assert obs[0].own_payment == out.payments[0]
    assert obs[0].bids is None
    obs2 = apply_signal(SignalProtocol.PUBLIC_BIDS, out, bids)
    assert obs2[1].bids == tuple(bids)


def test_threshold_buyer_dominant_policy():
    v = MarginalValuation([3.0, 2.0, 1.0])
    buyer = ThresholdBuyer()
    assert buyer.quantity(v, holding=0, price=1.5, stock=5) == 2
    assert buyer.quantity(v, holding=1, price=1.5, stock=5) == 1
    assert buyer.quantity(v, holding=0, price=1.5, stock=1) == 1
    assert buyer.quantity(v, holding=0, price=NO_OFFER, stock=5) == 0
    strict = ThresholdBuyer(threshold=2.5)
    assert strict.quantity(v, holding=0, price=1.5, stock=5) == 1
    assert NeverBuy().quantity(v, 0, 0.1, 5) == 0


def test_posted_resale_sequential_order():
    vals = [MarginalValuation([2.0]), MarginalValuation([2.0, 2.0]),
            MarginalValuation([])]
    initial = Allocation((0, 0, 2))
    spec = ResaleSpec.single(2, (0, 1))
    out = run_posted_resale(initial, spec, {2: 1.0}, {}, vals)
    assert out.final_alloc.counts == (1, 1, 0)
    assert out.transfers == (1.0, 1.0, -2.0)
    assert sum(out.transfers) == 0.0
    # reversed visiting order: agent 1 takes both units
    out2 = run_posted_resale(initial, ResaleSpec.single(2, (1, 0)),
                             {2: 1.0}, {}, vals)
    assert out2.final_alloc.counts == (0, 2, 0)


def test_no_offer_keeps_allocation():
    vals = [MarginalValuation([2.0]), MarginalValuation([])]
    initial = Allocation((0, 2))
    out = run_posted_resale(initial, ResaleSpec.single(1, (0,)),
                            {1: NO_OFFER}, {}, vals)
    assert out.final_alloc.counts == initial.counts
    assert out.transfers == (0.0, 0.0)


def test_winner_led_resale():
    vals = [MarginalValuation([5.0]), MarginalValuation([1.0])]
    spec = ResaleSpec.winner_resale()
    groups = spec.resolved_groups(Allocation((0, 1)))
    assert groups == ((1, (0,)),)
    assert spec.resolved_groups(Allocation((0, 0))) == ()


def test_opt_out_outcome():
    out = opt_out_outcome(Allocation((1, 2)))
    assert out.final_alloc.counts == (1, 2)
    assert out.transfers == (0.0, 0.0)


def test_negative_price_rejected():
    vals = [MarginalValuation([]), MarginalValuation([1.0])]
    with pytest.raises(ValueError):
        run_posted_resale(Allocation((1, 0)), ResaleSpec.single(0, (1,)),
                          {0: -0.5}, {}, vals)


@given(st.integers(0, 10_000))
@settings(max_examples=500, deadline=None)
def test_resale_invariants(seed):
    rng = random.Random(seed)
    vals, initial, seller, buyers, price = random_setting(rng)
    spec = ResaleSpec.single(seller, buyers)
    out = run_posted_resale(initial, spec, {seller: price}, {}, vals)
    # strong budget balance and conservation of units
    assert sum(out.transfers) == pytest.approx(0.0, abs=1e-12)
    assert check_weak_budget_balance(out, scale=price * 10)
    assert out.final_alloc.total == initial.total
    # voluntary participation: the dominant buyer policy never loses utility
    for i in range(len(vals)):
        gain = (vals[i].value(out.final_alloc[i]) - vals[i].value(initial[i])
                - out.transfers[i])
        if i != seller:
            assert gain >= -1e-12
    # seller revenue is nonnegative
    assert out.transfers[seller] <= 1e-12
    # trade weakly increases welfare when buyers value units above the
    # seller's (zero beyond her own use) marginal value only if price <= value;
    # with the dominant policy every purchased unit has value >= price
    for i in buyers:
        bought = out.final_alloc[i] - initial[i]
        if bought > 0:
            assert vals[i].value(initial[i] + bought) - vals[i].value(initial[i]) \
                >= bought * price - 1e-9
