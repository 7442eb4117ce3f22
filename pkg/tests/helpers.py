"""Hypothesis strategies and small fixtures shared by the test modules."""
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from corelab.market import Market, Outcome, PriceVector

DATA = Path(__file__).resolve().parent.parent / "data"

SINGLE_EXCLUSION = Market([[10, 0], [0, 10], [10, 10]], [1, 2, 10])
TWO_WAY_CONFLICT = Market([[10, 0], [0, 11], [5, 3]], [3, 1, 10])
SIMPLE = Market([[6], [10]], [1, 1])


@st.composite
def markets(draw, max_n=4, max_m=3, max_value=6, max_budget=6, max_reserve=0, min_n=1, min_m=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(min_m, max_m))
    values = draw(st.lists(st.lists(st.integers(0, max_value), min_size=m, max_size=m), min_size=n, max_size=n))
    budgets = draw(st.lists(st.integers(1, max_budget), min_size=n, max_size=n))
    reserves = draw(st.lists(st.integers(0, max_reserve), min_size=m, max_size=m))
    return Market(values, budgets, reserves)


@st.composite
def assignments(draw, market):
    """A feasible assignment: each real good to at most one bidder."""
    mu = []
    free = set(market.goods)
    for _ in market.bidders:
        j = draw(st.sampled_from(sorted(free | {0})))
        mu.append(j)
        free.discard(j)
    return tuple(mu)


@st.composite
def outcomes(draw, market, rational=True):
    """A feasible outcome: sold goods priced in [reserve, budget of holder], unsold at reserve."""
    mu = draw(assignments(market))
    holder = {j: i for i, j in enumerate(mu) if j}
    prices = []
    for j in market.goods:
        r = market.reserve(j)
        if j not in holder:
            prices.append(r)
            continue
        hi = market.budgets[holder[j]]
        if hi < r:
            mu = tuple(0 if g == j else g for g in mu)
            prices.append(r)
            continue
        if rational:
            num = draw(st.integers(2 * r, 2 * hi))
            prices.append(Fraction(num, 2))
        else:
            prices.append(draw(st.integers(r, hi)))
    return market, Outcome(mu, PriceVector(prices))


@st.composite
def market_outcomes(draw, **kw):
    market = draw(markets(**kw))
    return draw(outcomes(market))
