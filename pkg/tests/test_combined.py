import math

import numpy as np
import pytest

from aftermarkets.aftermarket import ResaleSpec, SignalProtocol, ThresholdBuyer
from aftermarkets.auctions import BidVector
from aftermarkets.combined import (Mechanism, MonteCarlo, Quadrature, Strategy,
                                   expected_optimal_welfare, expected_outcome,
                                   play)
from aftermarkets.equilibrium import scripted_lower_bound_equilibrium
from aftermarkets.valuations import lower_bound_market, sample_profile

PROTO = SignalProtocol.PUBLIC_ALLOCATION_OWN_PAYMENT


def scripted(m):
    game = scripted_lower_bound_equilibrium(m)
    return game.market, game.mechanism, game.resale, game.strategies()


def test_play_matches_hand_trace():
    m = 10
    market, mech, resale, strategies = scripted(m)
    profile = [market.agents[0].realize(1.25), market.agents[1].realize(1.2),
               market.agents[2].realize()]
    out = play(market, mech, PROTO, resale, strategies, profile)
    assert out.auction_alloc.counts == (1, 1, 8)
    assert out.clearing_price == 0.0
    # A buys 1 at price 1; B buys m-3=7 since z=1.2 >= 1
    assert out.final_alloc.counts == (2, 8, 0)
    assert out.transfers == (1.0, 7.0, -8.0)
    assert out.utilities[2] == pytest.approx(8.0)
    assert out.welfare == pytest.approx(2 + 1.25 + 2 + 7 * 1.2)


def test_accounting_identity():
    m = 10
    market, mech, resale, strategies = scripted(m)
    for seed in range(50):
        profile = sample_profile(market, seed)
        out = play(market, mech, PROTO, resale, strategies, profile)
        # sum of utilities + revenue + net transfers == welfare
        assert sum(out.utilities) + out.revenue + sum(out.transfers) == \
            pytest.approx(out.welfare, abs=1e-9)
        assert sum(out.transfers) == pytest.approx(0.0, abs=1e-12)


def test_quadrature_matches_closed_forms():
    m = 10
    market, mech, resale, strategies = scripted(m)
    quad = Quadrature(subdivide=1, breakpoints=(1.0,))
    res = expected_outcome(market, mech, PROTO, resale, strategies, quad)
    closed = 5.25 + (m - 3) * (1.0 / (2 * m) + 1.0 / (8 * m * m))
    assert res.welfare == pytest.approx(closed, rel=1e-12)
    assert res.utilities[2] == pytest.approx(1.0 + (m - 3) / (2.0 * m), rel=1e-12)
    assert res.revenue == pytest.approx(0.0, abs=1e-12)


def test_monte_carlo_agrees_with_quadrature():
    m = 10
    market, mech, resale, strategies = scripted(m)
    quad = expected_outcome(market, mech, PROTO, resale, strategies,
                            Quadrature(subdivide=1, breakpoints=(1.0,)))
    mc = expected_outcome(market, mech, PROTO, resale, strategies,
                          MonteCarlo(40_000, seed=3))
    assert mc.welfare_stderr is not None
    assert abs(mc.welfare - quad.welfare) < 3.5 * mc.welfare_stderr


def test_expected_optimal_welfare_closed_form():
    m = 10
    market = lower_bound_market(m)
    Ez = market.agents[1].dist.mean()
    opt = expected_optimal_welfare(market, Quadrature(subdivide=1))
    assert opt == pytest.approx(5.25 + (m - 3) * Ez, rel=1e-10)


def test_fast_path_cross_check():
    """The constant-action evaluator and the generic play() pipeline agree."""
    m = 10
    game = scripted_lower_bound_equilibrium(m)
    ev = game.evaluator()
    market, mech, resale, strategies = scripted(m)
    quad = Quadrature(subdivide=1, breakpoints=(1.0,))
    res = expected_outcome(market, mech, PROTO, resale, strategies, quad)
    assert ev.expected_welfare() == pytest.approx(res.welfare, rel=1e-12)
    for i in range(3):
        assert ev.expected_utility(i) == pytest.approx(res.utilities[i], rel=1e-12)


def test_posted_primary_mechanism():
    market = lower_bound_market(10)
    mech = Mechanism("posted", posted_price=1.9, posted_order=(0, 1, 2))
    strategies = (Strategy(), Strategy(), Strategy())
    profile = [market.agents[0].realize(1.2), market.agents[1].realize(0.5),
               market.agents[2].realize()]
    out = play(market, mech, PROTO, None, strategies, profile)
    # only the two head marginals of 2.0 clear the posted price 1.9
    assert out.final_alloc.counts == (1, 1, 0)
    assert out.revenue == pytest.approx(2 * 1.9)


def test_mechanism_validation():
    with pytest.raises(ValueError):
        Mechanism("vickrey")
    with pytest.raises(ValueError):
        Mechanism("posted")
