import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from corelab.errors import UsageError
from corelab.generate import random_market, random_markets
from corelab.io import (
    load_market,
    market_from_dict,
    market_from_json,
    market_to_json,
    outcome_from_dict,
    outcome_to_dict,
    parse_rational,
    rational_to_str,
)

from helpers import DATA, SINGLE_EXCLUSION, TWO_WAY_CONFLICT, market_outcomes, markets


def test_rationals():
    assert rational_to_str(Fraction(7, 2)) == "7/2"
    assert rational_to_str(3) == "3/1"
    assert parse_rational("7/2") == Fraction(7, 2)
    assert parse_rational("4/2") == 2 and isinstance(parse_rational("4/2"), int)
    assert parse_rational(5) == 5
    for bad in ("x", "1/0", True, 1.5, None):
        with pytest.raises(UsageError):
            parse_rational(bad)


def test_bundled_examples_load():
    assert load_market(str(DATA / "single_exclusion.json")) == SINGLE_EXCLUSION
    assert load_market(str(DATA / "two_way_conflict.json")) == TWO_WAY_CONFLICT


def test_reserves_default_to_zero():
    m = market_from_dict({"bidders": [{"values": [1, 2], "budget": 3}]})
    assert m.reserves == (0, 0)


@pytest.mark.parametrize("text", [
    "{",
    "[]",
    '{"bidders": [{"values": [1]}]}',
    '{"bidders": [{"values": 1, "budget": 1}]}',
    '{"bidders": [{"values": [1], "budget": 1}], "reserves": 3}',
    '{"bidders": [{"values": [1], "budget": 0}]}',
])
def test_malformed_markets(text):
    with pytest.raises(UsageError):
        market_from_json(text)


def test_missing_file():
    with pytest.raises(UsageError):
        load_market("/nonexistent/market.json")


def test_malformed_outcomes():
    with pytest.raises(UsageError):
        outcome_from_dict({"assignment": [0]})
    with pytest.raises(UsageError):
        outcome_from_dict({"assignment": [True], "prices": []})


@settings(max_examples=100, deadline=None)
@given(markets(max_reserve=3))
def test_market_json_round_trip(market):
    assert market_from_json(market_to_json(market)) == market


@settings(max_examples=100, deadline=None)
@given(market_outcomes(max_reserve=2))
def test_outcome_round_trip(mo):
    _, outcome = mo
    back = outcome_from_dict(outcome_to_dict(outcome))
    assert back == outcome


def test_generation_is_deterministic():
    a = random_markets(7, 20, 4, 3, reserves=(0, 2))
    b = random_markets(7, 20, 4, 3, reserves=(0, 2))
    assert a == b
    assert a != random_markets(8, 20, 4, 3, reserves=(0, 2))
    m = random_market(random.Random(1), 3, 2, values=(2, 2), budgets=(5, 5))
    assert m.values == ((2, 2),) * 3 and m.budgets == (5, 5, 5) and m.reserves == (0, 0)


def test_generation_rejects_bad_ranges():
    with pytest.raises(UsageError):
        random_market(random.Random(0), 2, 2, values=(3, 1))
    with pytest.raises(UsageError):
        random_market(random.Random(0), 2, 2, budgets=(0, 3))
    with pytest.raises(UsageError):
        random_market(random.Random(0), -1, 2)
