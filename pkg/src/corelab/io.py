"""JSON reading and writing for markets, outcomes and solver reports.

Market documents look like::

    {"bidders": [{"values": [10, 0], "budget": 1}, ...], "reserves": [0, 0]}

``reserves`` is optional and defaults to zeros. Exact rationals are written as
``"num/den"`` strings and read back from either that form or plain integers.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import UsageError
from .market import Market, Outcome, PriceVector


def rational_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(raw):
    if isinstance(raw, bool):
        raise UsageError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            x = Fraction(raw.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"not a rational: {raw!r}")
        return x.numerator if x.denominator == 1 else x
    raise UsageError(f"not a rational: {raw!r}")


def market_to_dict(market: Market) -> dict:
    return {
        "bidders": [
            {"values": list(row), "budget": b} for row, b in zip(market.values, market.budgets)
        ],
        "reserves": list(market.reserves),
    }


def market_from_dict(doc: Any) -> Market:
    if not isinstance(doc, dict) or not isinstance(doc.get("bidders"), list):
        raise UsageError("market document needs a 'bidders' list")
    values, budgets = [], []
    for k, bidder in enumerate(doc["bidders"]):
        if not isinstance(bidder, dict) or "values" not in bidder or "budget" not in bidder:
            raise UsageError(f"bidder {k + 1} needs 'values' and 'budget'")
        if not isinstance(bidder["values"], list):
            raise UsageError(f"bidder {k + 1}: 'values' must be a list")
        values.append(bidder["values"])
        budgets.append(bidder["budget"])
    reserves = doc.get("reserves")
    if reserves is None:
        reserves = [0] * (len(values[0]) if values else 0)
    if not isinstance(reserves, list):
        raise UsageError("'reserves' must be a list")
    return Market(values, budgets, reserves)


def market_to_json(market: Market) -> str:
    return json.dumps(market_to_dict(market), indent=2) + "\n"


def market_from_json(text: str) -> Market:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}")
    return market_from_dict(doc)


def load_market(path: str) -> Market:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    return market_from_json(text)


def outcome_to_dict(outcome: Outcome) -> dict:
    return {
        "assignment": list(outcome.assignment),
        "prices": [rational_to_str(x) for x in outcome.prices],
    }


def outcome_from_dict(doc: Any) -> Outcome:
    if not isinstance(doc, dict) or "assignment" not in doc or "prices" not in doc:
        raise UsageError("outcome document needs 'assignment' and 'prices'")
    assignment = doc["assignment"]
    if not isinstance(assignment, list) or any(
        isinstance(j, bool) or not isinstance(j, int) for j in assignment
    ):
        raise UsageError("'assignment' must be a list of good indices")
    prices = tuple(parse_rational(x) for x in doc["prices"])
    return Outcome(tuple(assignment), PriceVector(prices))


def solve_report_to_dict(report) -> dict:
    out = {
        "welfare": report.welfare,
        "assignments_explored": report.assignments_explored,
        "lp_calls": report.lp_calls,
    }
    if report.outcome is not None:
        out.update(outcome_to_dict(report.outcome))
    return out
