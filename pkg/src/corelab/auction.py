"""Iterative ascending auction for budget-constrained unit-demand bidders.

The auctioneer only ever asks demand queries ``D_i(p, R_i)``. Each round does
exactly one of:

* step 3 -- some bidder that demanded only goods of the last raised set lost a
  demanded good; exclude those goods for one chosen bidder and roll prices
  back to the previous round;
* step 4 -- raise every good in a minimally overdemanded set by 1;
* step 5 -- no conflict and nothing overdemanded: read off an assignment.

Prices start at the reserves. The choice in step 3 is delegated to a policy
object with a ``choose(conflict, state)`` method.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .errors import InvariantError, ResourceLimitError, UsageError
from .market import (
    DUMMY,
    Market,
    Outcome,
    PriceVector,
    restricted_demand_set,
    strict_budget_set,
)
from .matching import alternating_tree, cover_right, max_matching


# -- over/underdemanded sets -------------------------------------------------

def is_overdemanded(T, demands: Sequence[frozenset]) -> bool:
    """More than ``|T|`` bidders demand only goods inside ``T`` (dummy excluded)."""
    T = frozenset(T)
    if DUMMY in T:
        return False
    return sum(1 for d in demands if d <= T) > len(T)


def is_underdemanded(T, p: PriceVector, demands: Sequence[frozenset], reserves) -> bool:
    """Every good of ``T`` is priced above reserve, yet fewer than ``|T|`` bidders demand into ``T``."""
    T = frozenset(T)
    if any(j == DUMMY or p[j] <= reserves[j - 1] for j in T):
        return False
    return sum(1 for d in demands if d & T) < len(T)


def _demand_graph(demands, bidders, allowed=None):
    adj = {}
    for i in bidders:
        goods = sorted(g for g in demands[i] if g != DUMMY)
        if allowed is not None:
            goods = [g for g in goods if g in allowed]
        adj[i] = goods
    return adj


def _find_overdemanded(demands, allowed):
    bidders = [i for i, d in enumerate(demands) if DUMMY not in d and d <= allowed]
    adj = _demand_graph(demands, bidders)
    match = max_matching(bidders, adj)
    unmatched = [i for i in bidders if i not in match]
    if not unmatched:
        return None
    _, goods = alternating_tree(unmatched[0], adj, match)
    return frozenset(goods)


def minimal_overdemanded_set(demands: Sequence[frozenset]) -> Optional[frozenset]:
    """A minimally overdemanded set, or ``None`` when no overdemanded set exists.

    An overdemanded set exists iff the bidders without the dummy in their
    demand cannot all be matched to distinct demanded goods. The alternating
    tree of the lowest unmatched bidder yields one; it is then shrunk by
    dropping goods in ascending order while an overdemanded subset remains.
    """
    demands = [frozenset(d) for d in demands]
    everything = frozenset().union(*demands) - {DUMMY} if demands else frozenset()
    T = _find_overdemanded(demands, everything)
    if T is None:
        return None
    shrunk = True
    while shrunk:
        shrunk = False
        for g in sorted(T):
            sub = _find_overdemanded(demands, T - {g})
            if sub is not None:
                T = sub
                shrunk = True
                break
    return T


def has_underdemanded_set(p: PriceVector, demands: Sequence[frozenset], reserves) -> bool:
    """Whether any underdemanded set exists (Hall's condition on the priced goods)."""
    priced = [j for j in range(1, len(p) + 1) if p[j] > reserves[j - 1]]
    if not priced:
        return False
    priced_set = set(priced)
    adj = {}
    for g in priced:
        adj[g] = [i for i, d in enumerate(demands) if g in d]
    match = max_matching(priced, adj)
    return len(match) < len(priced_set)


def underdemanded_sets_bruteforce(p, demands, reserves):
    """All underdemanded sets by subset enumeration (small ``m`` only)."""
    m = len(p)
    found = []
    for k in range(1, m + 1):
        for T in itertools.combinations(range(1, m + 1), k):
            if is_underdemanded(T, p, demands, reserves):
                found.append(frozenset(T))
    return found


def overdemanded_sets_bruteforce(demands, m):
    found = []
    for k in range(1, m + 1):
        for T in itertools.combinations(range(1, m + 1), k):
            if is_overdemanded(T, demands):
                found.append(frozenset(T))
    return found


# -- state, policies, trace --------------------------------------------------

@dataclass(frozen=True)
class AuctionState:
    t: int
    prices: PriceVector
    restrictions: tuple
    prev_prices: Optional[PriceVector] = None
    overdemanded_prev: frozenset = frozenset()
    demands_prev: Optional[tuple] = None


@dataclass(frozen=True)
class TraceRow:
    t: int
    step: int
    prices: PriceVector
    demands: tuple
    restrictions: tuple
    overdemanded: frozenset
    conflict: frozenset
    chosen: Optional[int] = None
    excluded: frozenset = frozenset()


class FirstIndex:
    """Pick the lowest-indexed bidder of the conflict set."""

    def choose(self, conflict, state, event):
        return min(conflict)

    def __repr__(self):
        return "FirstIndex()"


@dataclass
class FixedScript:
    """Pick ``choices[k]`` at the ``k``-th step-3 event (0-based bidder ids)."""

    choices: list

    def choose(self, conflict, state, event):
        if event >= len(self.choices):
            raise UsageError(f"script has no choice for step-3 event #{event + 1}")
        i = self.choices[event]
        if i not in conflict:
            raise UsageError(
                f"scripted bidder {i + 1} is not in the conflict set {format_bidders(conflict)}"
            )
        return i


@dataclass
class Round:
    """What step 2 decided for the current state."""

    demands: tuple
    conflict: frozenset
    step: int
    overdemanded: frozenset = frozenset()


def initial_state(market: Market) -> AuctionState:
    return AuctionState(
        t=1,
        prices=PriceVector(market.reserves),
        restrictions=tuple(frozenset(market.all_goods) for _ in market.bidders),
    )


def current_demands(market: Market, state: AuctionState) -> tuple:
    return tuple(
        restricted_demand_set(market, i, state.prices, state.restrictions[i])
        for i in market.bidders
    )


def conflict_set(state: AuctionState, new_demands: Sequence[frozenset]) -> frozenset:
    """Bidders who demanded only inside the last raised set and lost a demanded good."""
    if state.t == 1 or not state.overdemanded_prev or state.demands_prev is None:
        return frozenset()
    O = state.overdemanded_prev
    return frozenset(
        i
        for i, (before, now) in enumerate(zip(state.demands_prev, new_demands))
        if before <= O and before - now
    )


def check_state(market: Market, state: AuctionState):
    """Strict budget sets stay inside the restriction sets; prices respect reserves."""
    for i in market.bidders:
        if not strict_budget_set(market, i, state.prices) <= state.restrictions[i]:
            raise InvariantError(f"round {state.t}: strict budget set of bidder {i} not in R_i")
    for j in market.goods:
        if state.prices[j] < market.reserve(j):
            raise InvariantError(f"round {state.t}: price of good {j} below reserve")


def examine(market: Market, state: AuctionState, check=True) -> Round:
    demands = current_demands(market, state)
    conflict = conflict_set(state, demands)
    if conflict:
        return Round(demands, conflict, 3)
    if check and has_underdemanded_set(state.prices, demands, market.reserves):
        raise InvariantError(f"round {state.t}: underdemanded set outside step 3")
    O = minimal_overdemanded_set(demands)
    if O is not None:
        return Round(demands, conflict, 4, O)
    return Round(demands, conflict, 5)


def apply_round(market: Market, state: AuctionState, rnd: Round, chosen=None):
    """Execute the step chosen in ``rnd``; returns ``(row, next_state)``.

    ``next_state`` is ``None`` after step 5.
    """
    base = dict(
        t=state.t,
        step=rnd.step,
        prices=state.prices,
        demands=rnd.demands,
        restrictions=state.restrictions,
        conflict=rnd.conflict,
    )
    if rnd.step == 3:
        if chosen not in rnd.conflict:
            raise UsageError(
                f"bidder {chosen!r} (0-based) is not in the conflict set {sorted(rnd.conflict)}"
            )
        excluded = state.demands_prev[chosen] - rnd.demands[chosen]
        restrictions = list(state.restrictions)
        restrictions[chosen] = restrictions[chosen] - excluded
        row = TraceRow(overdemanded=frozenset(), chosen=chosen, excluded=excluded, **base)
        nxt = AuctionState(
            t=state.t + 1,
            prices=state.prev_prices,
            restrictions=tuple(restrictions),
            prev_prices=state.prices,
            overdemanded_prev=frozenset(),
            demands_prev=rnd.demands,
        )
        return row, nxt
    if rnd.step == 4:
        row = TraceRow(overdemanded=rnd.overdemanded, **base)
        nxt = AuctionState(
            t=state.t + 1,
            prices=state.prices.raised(rnd.overdemanded),
            restrictions=state.restrictions,
            prev_prices=state.prices,
            overdemanded_prev=rnd.overdemanded,
            demands_prev=rnd.demands,
        )
        return row, nxt
    return TraceRow(overdemanded=frozenset(), **base), None


def step(market: Market, state: AuctionState, policy=None, event=0, check=True):
    """One auction round under ``policy``; returns ``(row, next_state_or_None)``."""
    if check:
        check_state(market, state)
    rnd = examine(market, state, check=check)
    chosen = None
    if rnd.step == 3:
        chosen = (policy or FirstIndex()).choose(rnd.conflict, state, event)
    return apply_round(market, state, rnd, chosen)


def extract_assignment(market: Market, p: PriceVector, restrictions, demands=None) -> tuple:
    """Assignment giving each bidder a demanded good and selling every good priced above reserve.

    Requires that no over- or underdemanded set exists for the given demands.
    """
    if demands is None:
        demands = tuple(
            restricted_demand_set(market, i, p, restrictions[i]) for i in market.bidders
        )
    must_buy = [i for i in market.bidders if DUMMY not in demands[i]]
    adj = _demand_graph(demands, market.bidders)
    must_adj = {i: adj[i] for i in must_buy}
    match = max_matching(must_buy, must_adj)
    if len(match) < len(must_buy):
        raise InvariantError("overdemanded set present at step 5")
    priced = [j for j in market.goods if p[j] > market.reserve(j)]
    match = cover_right(match, adj, priced)
    if match is None:
        raise InvariantError("underdemanded set present at step 5")
    mu = tuple(match.get(i, DUMMY) for i in market.bidders)
    for i in market.bidders:
        if mu[i] not in demands[i]:
            raise InvariantError(f"bidder {i} assigned outside its demand set")
    return mu


# -- full runs ---------------------------------------------------------------

@dataclass
class AuctionResult:
    outcome: Outcome
    trace: List[TraceRow]
    certificate: bool
    choices: list = field(default_factory=list)

    @property
    def step3_events(self):
        return [row for row in self.trace if row.step == 3]


def round_limit(market: Market) -> int:
    top = max([1] + list(market.budgets) + [v for row in market.values for v in row])
    price_rounds = market.m * (top + 2) + 1
    exclusions = market.n * (market.m + 1) + 1
    return 2 * exclusions * (price_rounds + 1)


def _finish(market, state, rnd, trace, choices):
    row, _ = apply_round(market, state, rnd)
    trace.append(row)
    mu = extract_assignment(market, state.prices, state.restrictions, rnd.demands)
    certificate = all(len(r.conflict) == 1 for r in trace if r.step == 3)
    return AuctionResult(Outcome(mu, state.prices), trace, certificate, list(choices))


def run_auction(market: Market, policy=None, check=True) -> AuctionResult:
    """Run the auction to completion under a step-3 policy (default :class:`FirstIndex`).

    The returned ``certificate`` is true iff every step-3 event had a single
    candidate bidder.
    """
    policy = policy or FirstIndex()
    state = initial_state(market)
    trace, choices = [], []
    limit = round_limit(market)
    while True:
        if state.t > limit:
            raise InvariantError("auction exceeded its round bound")
        if check:
            check_state(market, state)
        rnd = examine(market, state, check=check)
        if rnd.step == 5:
            return _finish(market, state, rnd, trace, choices)
        chosen = None
        if rnd.step == 3:
            chosen = policy.choose(rnd.conflict, state, len(choices))
            choices.append(chosen)
        row, state = apply_round(market, state, rnd, chosen)
        trace.append(row)


def run_auction_all_branches(market: Market, max_branches=10_000, check=True) -> List[AuctionResult]:
    """Outcomes of every sequence of step-3 choices, deduplicated by outcome.

    Branches are explored depth-first, lower bidder index first; the first
    trace reaching an outcome is kept. Raises :class:`ResourceLimitError`
    (with the outcomes found so far in ``partial``) past ``max_branches`` leaves.
    """
    results = {}
    leaves = 0
    limit = round_limit(market)

    def explore(state, trace, choices):
        nonlocal leaves
        while True:
            if state.t > limit:
                raise InvariantError("auction exceeded its round bound")
            if check:
                check_state(market, state)
            rnd = examine(market, state, check=check)
            if rnd.step == 5:
                leaves += 1
                if leaves > max_branches:
                    raise ResourceLimitError(
                        f"more than {max_branches} auction branches", partial=list(results.values())
                    )
                res = _finish(market, state, rnd, trace, choices)
                results.setdefault(res.outcome, res)
                return
            if rnd.step == 3:
                for i in sorted(rnd.conflict):
                    row, nxt = apply_round(market, state, rnd, i)
                    explore(nxt, trace + [row], choices + [i])
                return
            row, state = apply_round(market, state, rnd)
            trace = trace + [row]

    explore(initial_state(market), [], [])
    return list(results.values())


# -- rendering ---------------------------------------------------------------

def good_name(j: int, m: int) -> str:
    if j == DUMMY:
        return "0"
    if m <= 26:
        return chr(ord("A") + j - 1)
    return f"g{j}"


def format_set(goods, m: int, full=None) -> str:
    goods = frozenset(goods)
    if full is not None and goods == full:
        return "S"
    if not goods:
        return "{}"
    return "{" + ",".join(good_name(j, m) for j in sorted(goods)) + "}"


def format_prices(p: PriceVector) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def format_bidders(bidders) -> str:
    if not bidders:
        return "{}"
    return "{" + ",".join(str(i + 1) for i in sorted(bidders)) + "}"


def trace_rows(trace: Sequence[TraceRow], market: Market) -> List[List[str]]:
    """Trace as string cells: ``t, step, prices, D_1..D_n, R_1..R_n, O, I`` (1-based bidders)."""
    full = frozenset(market.all_goods)
    m = market.m
    rows = []
    for r in trace:
        rows.append(
            [str(r.t), str(r.step), format_prices(r.prices)]
            + [format_set(d, m) for d in r.demands]
            + [format_set(R, m, full) for R in r.restrictions]
            + [format_set(r.overdemanded, m), format_bidders(r.conflict)]
        )
    return rows


def trace_header(market: Market) -> List[str]:
    n = market.n
    return (
        ["t", "step", "prices"]
        + [f"D_{i}" for i in range(1, n + 1)]
        + [f"R_{i}" for i in range(1, n + 1)]
        + ["O", "I"]
    )


def trace_tsv(trace: Sequence[TraceRow], market: Market) -> str:
    lines = ["\t".join(trace_header(market))]
    lines += ["\t".join(cells) for cells in trace_rows(trace, market)]
    return "\n".join(lines) + "\n"


def trace_table(trace: Sequence[TraceRow], market: Market) -> str:
    header = trace_header(market)
    body = trace_rows(trace, market)
    widths = [max(len(c) for c in col) for col in zip(header, *body)]
    fmt = " | ".join("{:<%d}" % w for w in widths)
    out = [fmt.format(*header), "-+-".join("-" * w for w in widths)]
    out += [fmt.format(*cells) for cells in body]
    return "\n".join(out) + "\n"
