"""Exhaustive integer-price search, used to cross-check the exact solver.

Every assignment is paired with every integer price vector in which a sold
good costs between its reserve and its buyer's budget and an unsold good
costs exactly its reserve; each candidate is kept iff it has no blocking pair.
"""
from __future__ import annotations

import itertools
from typing import Iterator, List, Optional

from ..errors import ResourceLimitError
from ..market import DUMMY, Market, Outcome, PriceVector, blocking_pairs_unchecked
from .core_search import SolveReport

DEFAULT_MAX_CANDIDATES = 2_000_000


def all_assignments(market: Market) -> Iterator[tuple]:
    """Every assignment in lexicographic order of the assignment vector."""

    def rec(i, used):
        if i == market.n:
            yield ()
            return
        for j in market.all_goods:
            if j != DUMMY and j in used:
                continue
            for rest in rec(i + 1, used | {j} if j else used):
                yield (j,) + rest

    return rec(0, frozenset())


def _price_ranges(market, mu):
    holder = {j: i for i, j in enumerate(mu) if j != DUMMY}
    ranges = []
    for j in market.goods:
        r = market.reserves[j - 1]
        if j in holder:
            ranges.append(range(r, market.budgets[holder[j]] + 1))
        else:
            ranges.append(range(r, r + 1))
    return ranges


def candidate_count(market: Market) -> int:
    total = 0
    for mu in all_assignments(market):
        size = 1
        for rng in _price_ranges(market, mu):
            size *= len(rng)
        total += size
    return total


def core_outcomes(market: Market, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> List[Outcome]:
    """All integer-price core outcomes, ordered by assignment then prices."""
    if candidate_count(market) > max_candidates:
        raise ResourceLimitError(f"more than {max_candidates} candidate outcomes")
    found = []
    for mu in all_assignments(market):
        for prices in itertools.product(*_price_ranges(market, mu)):
            if next(blocking_pairs_unchecked(market, mu, prices), None) is None:
                found.append(Outcome(mu, PriceVector(prices)))
    return found


def supportable_assignments(market: Market, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> List[tuple]:
    """Assignments admitting at least one integer core price vector."""
    seen = []
    for outcome in core_outcomes(market, max_candidates):
        if not seen or seen[-1] != outcome.assignment:
            seen.append(outcome.assignment)
    return seen


def _welfare(market, mu):
    return sum(market.values[i][j - 1] for i, j in enumerate(mu) if j)


def brute_force_oracle(market: Market, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> SolveReport:
    """Max-welfare integer-price core outcome.

    Ties go to the lexicographically smallest assignment, then the smallest
    price vector.
    """
    best: Optional[Outcome] = None
    best_w = None
    outcomes = core_outcomes(market, max_candidates)
    for outcome in outcomes:
        w = _welfare(market, outcome.assignment)
        if best_w is None or w > best_w:
            best, best_w = outcome, w
    explored = sum(1 for _ in all_assignments(market))
    return SolveReport(best, best_w, explored, 0)
