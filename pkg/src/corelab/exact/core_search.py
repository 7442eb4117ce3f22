"""Welfare-maximizing core outcomes by exact search.

For a fixed assignment, core membership is a conjunction over bidder-good
pairs of a two-way disjunction: either the bidder does not envy the good
(``NoEnvy``) or cannot strictly afford it (``Unaffordable``). Each disjunct is
a linear constraint on prices, so a supporting price vector exists iff some
choice of disjuncts gives a feasible linear system.
"""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import InvariantError, ResourceLimitError, UsageError
from ..market import DUMMY, Market, Outcome, PriceVector, check_assignment, is_core
from .fourier_motzkin import EQ, GE, LE, LinearConstraintSystem, lp_feasible

NO_ENVY = "no_envy"
UNAFFORDABLE = "unaffordable"

DEFAULT_MAX_NODES = 200_000


def default_max_nodes() -> int:
    """Node cap for the search; ``CORELAB_MAX_NODES`` overrides the default."""
    raw = os.environ.get("CORELAB_MAX_NODES")
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"CORELAB_MAX_NODES must be an integer, got {raw!r}")
    if cap < 1:
        raise UsageError("CORELAB_MAX_NODES must be positive")
    return cap


# A disjunct choice maps each pair (i, j), j a real good other than mu(i),
# to NO_ENVY or UNAFFORDABLE.
DisjunctChoice = Dict[Tuple[int, int], str]


@dataclass
class SolveReport:
    outcome: Optional[Outcome]
    welfare: Optional[int]
    assignments_explored: int = 0
    lp_calls: int = 0


def _names(market):
    return [f"p{j}" for j in market.goods]


def _var(j):
    return j - 1


def _box_constraints(market: Market, mu) -> LinearConstraintSystem:
    system = LinearConstraintSystem(market.m, names=_names(market))
    sold = {}
    for i, j in enumerate(mu):
        if j != DUMMY:
            sold[j] = i
    for j in market.goods:
        r = market.reserves[j - 1]
        if j in sold:
            i = sold[j]
            system.add({_var(j): 1}, GE, r)
            system.add({_var(j): 1}, LE, min(market.values[i][j - 1], market.budgets[i]))
        else:
            system.add({_var(j): 1}, EQ, r)
    return system


def _pairs(market, mu):
    return [(i, j) for i in market.bidders for j in market.goods if j != mu[i]]


def _add_disjunct(system, market, mu, i, j, branch):
    if branch == UNAFFORDABLE:
        system.add({_var(j): 1}, GE, market.budgets[i])
        return
    if branch != NO_ENVY:
        raise UsageError(f"unknown disjunct {branch!r}")
    # v_i(mu(i)) - p(mu(i)) >= v_i(j) - p(j)
    held = mu[i]
    gap = market.values[i][j - 1] - (market.values[i][held - 1] if held else 0)
    coeffs = {_var(j): 1}
    if held != DUMMY:
        coeffs[_var(held)] = -1
    system.add(coeffs, GE, gap)


def core_constraints(market: Market, mu, choice: DisjunctChoice) -> LinearConstraintSystem:
    """The linear system for assignment ``mu`` under the given disjunct choice.

    Pairs missing from ``choice`` contribute nothing, which lets callers build
    partial systems during search.
    """
    check_assignment(market, mu)
    system = _box_constraints(market, mu)
    for (i, j), branch in sorted(choice.items()):
        if j == mu[i] or j == DUMMY:
            raise UsageError(f"pair {(i, j)} is not a deviation pair")
        _add_disjunct(system, market, mu, i, j, branch)
    return system


def _bounds(market, mu):
    """Per-good price interval implied by the box constraints alone."""
    lo, hi = {DUMMY: 0}, {DUMMY: 0}
    holder = {j: i for i, j in enumerate(mu) if j != DUMMY}
    for j in market.goods:
        r = market.reserves[j - 1]
        if j in holder:
            i = holder[j]
            lo[j], hi[j] = r, min(market.values[i][j - 1], market.budgets[i])
        else:
            lo[j] = hi[j] = r
    return lo, hi


def _classify(market, mu, i, j, lo, hi):
    """(certainly satisfied?, no_envy possible?, unaffordable possible?)."""
    b = market.budgets[i]
    held = mu[i]
    gap = market.values[i][j - 1] - (market.values[i][held - 1] if held else 0)
    envy_sure = lo[j] - hi[held] >= gap
    unaff_sure = lo[j] >= b
    envy_ok = hi[j] - lo[held] >= gap
    unaff_ok = hi[j] >= b
    return envy_sure or unaff_sure, envy_ok, unaff_ok


class _Counter:
    def __init__(self):
        self.lp_calls = 0

    def feasible(self, system):
        self.lp_calls += 1
        return lp_feasible(system)


def _core_prices(market, mu, counter) -> Optional[PriceVector]:
    lo, hi = _bounds(market, mu)
    if any(lo[j] > hi[j] for j in market.goods):
        return None
    system = _box_constraints(market, mu)
    open_pairs = []
    for i, j in _pairs(market, mu):
        settled, envy_ok, unaff_ok = _classify(market, mu, i, j, lo, hi)
        if settled:
            continue
        if not envy_ok and not unaff_ok:
            return None
        if envy_ok and unaff_ok:
            open_pairs.append((i, j))
        else:
            _add_disjunct(system, market, mu, i, j, NO_ENVY if envy_ok else UNAFFORDABLE)

    def violated(point):
        prices = (Fraction(0),) + point
        for i, j in open_pairs:
            held = mu[i]
            if prices[j] >= market.budgets[i]:
                continue
            if (market.values[i][held - 1] if held else 0) - prices[held] >= market.values[i][j - 1] - prices[j]:
                continue
            return i, j
        return None

    # Branch lazily: only on a pair the current witness point violates. Any
    # solution of the node satisfies one of that pair's two disjuncts, and
    # once fixed the pair stays satisfied throughout its subtree.
    def search(system):
        point = counter.feasible(system)
        if point is None:
            return None
        pair = violated(point)
        if pair is None:
            return point
        for branch in (NO_ENVY, UNAFFORDABLE):
            child = system.copy()
            _add_disjunct(child, market, mu, *pair, branch)
            found = search(child)
            if found is not None:
                return found
        return None

    point = search(system)
    if point is None:
        return None
    prices = PriceVector(tuple(x.numerator if x.denominator == 1 else x for x in point))
    outcome = Outcome(tuple(mu), prices)
    if not is_core(market, outcome):
        raise AssertionError("constructed prices do not support a core outcome")
    return prices


def assignment_core_feasible(market: Market, mu) -> Optional[PriceVector]:
    """Prices making ``(mu, p)`` a core outcome, or ``None`` if none exist."""
    check_assignment(market, mu)
    return _core_prices(market, tuple(mu), _Counter())


def _matching_bound(market, bidders, goods):
    if not bidders or not goods:
        return 0
    w = np.array([[market.values[i][j - 1] for j in goods] for i in bidders], dtype=np.int64)
    rows, cols = linear_sum_assignment(w, maximize=True)
    return int(w[rows, cols].sum())


def max_weight_matching_value(market: Market) -> int:
    """Welfare of a value-maximizing assignment, ignoring budgets and reserves."""
    return _matching_bound(market, list(market.bidders), list(market.goods))


def solve_welfare_max_core(market: Market, max_nodes: Optional[int] = None) -> SolveReport:
    """A welfare-maximizing core outcome.

    Assignments are generated best-first: partial assignments of bidders
    ``0..k-1`` are expanded in order of an optimistic bound (welfare so far plus
    a budget-free max-weight matching of the rest). Complete assignments pop
    off the queue in non-increasing welfare order, ties by assignment vector;
    the first with supporting core prices is returned.
    """
    cap = default_max_nodes() if max_nodes is None else max_nodes
    counter = _Counter()
    n = market.n
    if n == 0:
        outcome = Outcome((), PriceVector(market.reserves))
        return SolveReport(outcome, 0, 1, 0)

    def bound(partial, welfare_so_far):
        used = set(partial) - {DUMMY}
        rest_goods = [j for j in market.goods if j not in used]
        return welfare_so_far + _matching_bound(market, list(range(len(partial), n)), rest_goods)

    heap = [(-bound((), 0), (), 0)]
    nodes = 0
    explored = 0
    while heap:
        neg_ub, partial, w = heapq.heappop(heap)
        nodes += 1
        if nodes > cap:
            raise ResourceLimitError(
                f"search exceeded {cap} nodes", partial=SolveReport(None, None, explored, counter.lp_calls)
            )
        if len(partial) == n:
            explored += 1
            prices = _core_prices(market, partial, counter)
            if prices is not None:
                return SolveReport(Outcome(partial, prices), w, explored, counter.lp_calls)
            continue
        i = len(partial)
        used = set(partial) - {DUMMY}
        for j in [DUMMY] + [g for g in market.goods if g not in used]:
            v = market.values[i][j - 1] if j else 0
            # Goods priced above the bidder's reach can never be sold to it.
            if j and market.reserves[j - 1] > min(v, market.budgets[i]):
                continue
            child = partial + (j,)
            heapq.heappush(heap, (-bound(child, w + v), child, w + v))
    raise InvariantError("no assignment admits core prices")
