"""Strategic questions: general position and profitable misreports.

General position is checked by enumerating alternating walks. A walk starts
at a bidder, alternates a forward edge ``i -> j`` (weight ``-v_i(j)``) with a
backward edge ``j -> k`` (weight ``v_k(j)``) to another bidder, and ends with
either a maximum-price edge ``k -> j`` (weight ``b^k - v_k(j)``) or the
terminal edge ``k -> 0`` (weight 0). Walks never reuse an edge and never step
straight back to the bidder they just left. Forward, backward and max-price
edges join bidders with real goods only; the dummy good is reached only by
terminal edges.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import ContractViolation, UsageError
from .market import DUMMY, Market, Outcome, is_core, utility

FORWARD, BACKWARD, MAX_PRICE, TERMINAL = "fwd", "bwd", "max", "term"

# An edge is (kind, tail, head, weight); bidder and good ids are raw indices.
Edge = Tuple[str, int, int, int]


@dataclass(frozen=True)
class WalkGraph:
    """The weighted bidder-good multigraph behind the general-position test."""

    market: Market

    def forward(self, i: int) -> List[Edge]:
        return [(FORWARD, i, j, -self.market.values[i][j - 1]) for j in self.market.goods]

    def backward(self, j: int, came_from: int) -> List[Edge]:
        return [
            (BACKWARD, j, k, self.market.values[k][j - 1])
            for k in self.market.bidders
            if k != came_from
        ]

    def endings(self, i: int) -> List[Edge]:
        b = self.market.budgets[i]
        ends = [(MAX_PRICE, i, j, b - self.market.values[i][j - 1]) for j in self.market.goods]
        ends.append((TERMINAL, i, DUMMY, 0))
        return ends

    def edge_count(self) -> int:
        n, m = self.market.n, self.market.m
        return 3 * n * m + n


def walk_weight(walk: Sequence[Edge]) -> int:
    return sum(e[3] for e in walk)


def format_walk(walk: Sequence[Edge]) -> str:
    """Arrow chain with 1-based bidders and per-edge weights."""
    if not walk:
        return ""
    parts = [f"bidder {walk[0][1] + 1}"]
    for kind, _, head, w in walk:
        target = f"bidder {head + 1}" if kind == BACKWARD else f"good {head}"
        parts.append(f"-[{kind} {w:+d}]-> {target}")
    return " ".join(parts) + f"  (total {walk_weight(walk):+d})"


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN_WITHIN_BOUND = "unknown-within-bound"


@dataclass
class GeneralPositionResult:
    verdict: Verdict
    witness: Optional[Tuple[Tuple[Edge, ...], Tuple[Edge, ...]]] = None
    walks_enumerated: int = 0
    max_len: int = 0

    def __bool__(self):
        raise TypeError("use .verdict; the check is three-valued")

    def describe(self) -> str:
        lines = [f"general position: {self.verdict.value} (max walk length {self.max_len}, "
                 f"{self.walks_enumerated} walks)"]
        if self.witness:
            a, b = self.witness
            lines.append("  " + format_walk(a))
            lines.append("  " + format_walk(b))
        return "\n".join(lines)


DEFAULT_MAX_WALKS = 500_000


def general_position_check(
    market: Market, max_len: Optional[int] = None, max_walks: int = DEFAULT_MAX_WALKS
) -> GeneralPositionResult:
    """Search for two equal-weight walks from one bidder with different final edges.

    Walks are enumerated breadth-first by length, so the shortest witness is
    found first. ``TRUE`` is returned only when every walk was enumerated
    without hitting ``max_len`` (default ``2(n+m)``) or ``max_walks``.
    """
    if max_len is None:
        max_len = 2 * (market.n + market.m)
    if max_len < 2:
        raise UsageError("max_len must be at least 2")
    graph = WalkGraph(market)
    count = 0
    exhausted = True
    for start in market.bidders:
        seen = {}
        # state: (current bidder, bidder we came from, edges so far, used set)
        layer = [(start, None, (), frozenset())]
        while layer:
            nxt = []
            for here, prev, path, used in layer:
                for end in graph.endings(here):
                    walk = path + (end,)
                    count += 1
                    if count > max_walks:
                        return GeneralPositionResult(Verdict.UNKNOWN_WITHIN_BOUND, None, count - 1, max_len)
                    w = walk_weight(walk)
                    final = end[:3]
                    other = seen.get(w)
                    if other is None:
                        seen[w] = walk
                    elif other[-1][:3] != final:
                        return GeneralPositionResult(Verdict.FALSE, (other, walk), count, max_len)
                for fwd in graph.forward(here):
                    if fwd[:3] in used:
                        continue
                    for bwd in graph.backward(fwd[2], here):
                        if bwd[:3] in used:
                            continue
                        if len(path) + 3 > max_len:
                            exhausted = False
                            continue
                        nxt.append((bwd[2], here, path + (fwd, bwd), used | {fwd[:3], bwd[:3]}))
            layer = nxt
    verdict = Verdict.TRUE if exhausted else Verdict.UNKNOWN_WITHIN_BOUND
    return GeneralPositionResult(verdict, None, count, max_len)


# ---------------------------------------------------------------------------
# Misreports

Mechanism = Callable[[Market], Outcome]


def auction_mechanism(market: Market) -> Outcome:
    from .auction import run_auction

    return run_auction(market).outcome


def solver_mechanism(market: Market) -> Outcome:
    from .exact import solve_welfare_max_core

    return solve_welfare_max_core(market).outcome


@dataclass
class MisreportResult:
    bidder: int
    truthful_outcome: Outcome
    reported_outcome: Outcome
    truthful_utilities: tuple
    deviating_utility: object
    description: str

    @property
    def gain(self):
        before = self.truthful_utilities[self.bidder]
        if self.deviating_utility == -math.inf:
            return -math.inf
        return self.deviating_utility - before


def _run_core(mechanism, market, label):
    outcome = mechanism(market)
    if not is_core(market, outcome):
        raise ContractViolation(f"mechanism returned a non-core outcome on the {label} market")
    return outcome


def misreport_experiment(
    market: Market,
    bidder: int,
    reported_values: Optional[Sequence[int]] = None,
    reported_budget: Optional[int] = None,
    mechanism: Mechanism = auction_mechanism,
) -> MisreportResult:
    """Run ``mechanism`` truthfully and with one bidder's report changed.

    Utilities are always evaluated against the true values and budget, so a
    manipulator that wins a good priced above its true budget gets ``-inf``.
    """
    market.check_bidder(bidder)
    values = market.values[bidder] if reported_values is None else tuple(reported_values)
    budget = market.budgets[bidder] if reported_budget is None else reported_budget
    reported = market.with_bidder(bidder, values, budget)

    truthful = _run_core(mechanism, market, "truthful")
    deviated = _run_core(mechanism, reported, "reported")
    truthful_utils = tuple(
        utility(market, i, truthful.assignment[i], truthful.prices) for i in market.bidders
    )
    dev_util = utility(market, bidder, deviated.assignment[bidder], deviated.prices)
    changes = []
    if tuple(values) != market.values[bidder]:
        changes.append(f"values {list(values)}")
    if budget != market.budgets[bidder]:
        changes.append(f"budget {budget}")
    desc = f"bidder {bidder + 1} reports " + (", ".join(changes) if changes else "truthfully")
    return MisreportResult(bidder, truthful, deviated, truthful_utils, dev_util, desc)


@dataclass
class ICReport:
    market: Market
    manipulator: int
    experiment: MisreportResult

    @property
    def truthful_utility(self):
        return self.experiment.truthful_utilities[self.manipulator]

    @property
    def deviating_utility(self):
        return self.experiment.deviating_utility

    @property
    def deviating_prices(self):
        return self.experiment.reported_outcome.prices

    def describe(self) -> str:
        e = self.experiment
        lines = [
            "market: 3 bidders, 2 goods, every value 10, every budget 1",
            f"truthful assignment {list(e.truthful_outcome.assignment)} at prices "
            f"{list(e.truthful_outcome.prices)}; utilities {list(e.truthful_utilities)}",
            f"bidder {self.manipulator + 1} receives nothing (utility {self.truthful_utility})",
            f"{e.description}: assignment {list(e.reported_outcome.assignment)} at prices "
            f"{list(e.reported_outcome.prices)}",
            f"true utility after misreport: {self.deviating_utility} (gain {e.gain})",
        ]
        return "\n".join(lines)


def ic_market() -> Market:
    return Market([[10, 10], [10, 10], [10, 10]], [1, 1, 1])


def ic_counterexample(mechanism: Mechanism = auction_mechanism) -> ICReport:
    """A bidder left empty-handed gains by overstating its budget from 1 to 2."""
    market = ic_market()
    truthful = _run_core(mechanism, market, "truthful")
    losers = [i for i in market.bidders if truthful.assignment[i] == DUMMY]
    if not losers:
        raise ContractViolation("every bidder won a good; two goods cannot serve three bidders")
    manipulator = losers[0]
    result = misreport_experiment(market, manipulator, reported_budget=2, mechanism=mechanism)
    return ICReport(market, manipulator, result)
