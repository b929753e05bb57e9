from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aftermarkets.distributions import Uniform
from aftermarkets.valuations import (ZERO_VALUATION, HeadTailModel,
                                     MarginalValuation, grouped_market,
                                     lower_bound_market, posted_fails_market,
                                     sample_profile, symmetric_fpa_market)


def test_marginal_valuation_basics():
    v = MarginalValuation([2.0, 1.5, 1.5, 0.5])
    assert v.runs == ((2.0, 1), (1.5, 2), (0.5, 1))
    assert v.value(0) == 0
    assert v.value(2) == 3.5
    assert v.value(10) == 5.5
    assert v.marginal(0) == 2.0
    assert v.marginal(3) == 0.5
    assert v.marginal(4) == 0
    assert v.count_ge(1.5) == 3
    assert v.marginals_list(6) == [2.0, 1.5, 1.5, 0.5, 0, 0]


def test_marginal_valuation_rejects_increasing():
    with pytest.raises(ValueError):
        MarginalValuation([1.0, 2.0])
    with pytest.raises(ValueError):
        MarginalValuation.from_runs(((1.0, 1), (2.0, 1)))


def test_fraction_support():
    v = MarginalValuation([Fraction(3, 2), Fraction(1, 3)])
    assert v.value(2) == Fraction(11, 6)


def test_zero_valuation():
    assert ZERO_VALUATION.value(5) == 0
    assert ZERO_VALUATION.count_ge(0.1) == 0


def test_head_tail_realize_and_vectorized_agree():
    model = HeadTailModel(head=(2.0,), tail_count=3, dist=Uniform(0.0, 1.0))
    for s in (0.0, 0.4, 1.0):
        v = model.realize(s)
        for k in range(6):
            assert model.value_vec(np.array([k]), np.array([s]))[0] == \
                pytest.approx(v.value(k))
        for t in (0.2, 0.5, 2.0):
            assert model.count_ge_vec(t, np.array([s]))[0] == v.count_ge(t)


def test_head_tail_rejects_tail_above_head():
    with pytest.raises(ValueError):
        HeadTailModel(head=(1.0,), tail_count=1, dist=Uniform(0.0, 2.0))


def test_lower_bound_market_shape():
    mkt = lower_bound_market(10)
    assert mkt.m == 10 and mkt.n == 3
    a, b, c = mkt.agents
    assert a.head == (2.0,) and a.tail_count == 1
    assert b.head == (2.0,) and b.tail_count == 9
    assert not c.random and c.head == ()
    assert mkt.groups == ((0, 1, 2),)


def test_grouped_market_shape():
    mkt = grouped_market(100, 0.1)
    assert len(mkt.groups) == 10 and mkt.n == 30
    # group size 10: the bulk agent has 9 tail units
    assert mkt.agents[1].tail_count == 9
    with pytest.raises(ValueError):
        grouped_market(100, 0.35)  # ceil(1/gamma)=3 does not divide 100


def test_single_item_markets():
    assert posted_fails_market(0.01, 1000.0).m == 1
    assert symmetric_fpa_market(Uniform(0.0, 1.0)).m == 1


@given(st.integers(0, 9999))
@settings(max_examples=200, deadline=None)
def test_sampled_profiles_valid(seed):
    mkt = lower_bound_market(10)
    profile = sample_profile(mkt, seed)
    a, b, c = profile
    assert a.marginal(0) == 2.0 and 1.0 <= a.marginal(1) <= 1.5
    assert b.marginal(0) == 2.0
    z = b.marginal(1)
    assert 0.0 <= z <= 1.05
    assert all(b.marginal(j) == z for j in range(1, 10))
    assert c.value(10) == 0


def test_sample_profile_deterministic():
    mkt = lower_bound_market(10)
    p1 = sample_profile(mkt, 42)
    p2 = sample_profile(mkt, 42)
    assert [v.runs for v in p1] == [v.runs for v in p2]
