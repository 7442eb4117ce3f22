"""Check an outcome against the quadratic budget-constrained core program.

The binary helpers are derived from the outcome: ``m`` from the assignment,
``alpha_i(j) = 0`` iff bidder ``i`` strictly gains by switching to ``j``,
``beta_i(j) = 1`` iff ``p(j) >= b^i``, and ``y_i(j) = 0`` iff both
``alpha_i(j)`` and ``beta_i(j)`` are 0. The big-M bound in the price-cap row
is vacuous when ``m_i(j) = 0``, so it is simply skipped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from ..market import Market, Outcome, check_outcome

EPSILON = Fraction(1, 2)


def selection_row_holds(alpha: int, beta: int, y: int, eps=EPSILON) -> bool:
    """The row ``(1-alpha) + (1-beta) - 2 <= 2(1-y) - eps*y``.

    For ``0 < eps < 1`` it rules out exactly ``y = 1`` with ``alpha = beta = 0``.
    """
    return (1 - alpha) + (1 - beta) - 2 <= 2 * (1 - y) - eps * y


@dataclass
class QbcReport:
    holds: bool
    violations: List[str] = field(default_factory=list)


def qbc_report(market: Market, outcome: Outcome, eps=EPSILON) -> QbcReport:
    check_outcome(market, outcome)
    mu, p = outcome.assignment, outcome.prices
    bad = []
    m = {(i, j): int(mu[i] == j) for i in market.bidders for j in market.goods}
    pi_b = {i: sum((market.value(i, j) - p[j]) * m[i, j] for j in market.goods) for i in market.bidders}
    pi_s = {j: sum((p[j] - market.reserve(j)) * m[i, j] for i in market.bidders) for j in market.goods}

    for i in market.bidders:
        if sum(m[i, j] for j in market.goods) > 1:
            bad.append(f"one-good-per-bidder: bidder {i}")
    for j in market.goods:
        if sum(m[i, j] for i in market.bidders) > 1:
            bad.append(f"one-bidder-per-good: good {j}")
        if p[j] < 0:
            bad.append(f"nonneg-price: good {j}")

    for i in market.bidders:
        b = market.budgets[i]
        for j in market.goods:
            v = market.value(i, j)
            alpha = 0 if v - p[j] > pi_b[i] else 1
            beta = 1 if p[j] >= b else 0
            y = 0 if alpha == 0 and beta == 0 else 1
            if not pi_b[i] >= (v - p[j]) * alpha:
                bad.append(f"buyer-no-gain: pair {(i, j)}")
            if not pi_s[j] >= min(v, b) * (1 - y):
                bad.append(f"seller-no-gain: pair {(i, j)}")
            if not b >= p[j] * (1 - beta):
                bad.append(f"affordable-link: pair {(i, j)}")
            if not p[j] >= b * beta:
                bad.append(f"unaffordable-link: pair {(i, j)}")
            if not selection_row_holds(alpha, beta, y, eps):
                bad.append(f"selection: pair {(i, j)}")
            if m[i, j] and not (market.reserve(j) <= p[j] <= min(v, b)):
                bad.append(f"price-window: pair {(i, j)}")
    return QbcReport(not bad, bad)


def verify_qbc(market: Market, outcome: Outcome, eps=EPSILON) -> bool:
    """Whether the outcome, with derived binaries, satisfies every program row."""
    return qbc_report(market, outcome, eps).holds
