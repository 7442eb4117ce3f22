"""Budget-constrained assignment markets: model, utilities, demand sets, core tests.

Bidders are indexed ``0..n-1``. Real goods are indexed ``1..m``; index ``0`` is
the dummy good (value 0, price 0, unlimited copies). The dummy good is never
stored in the value matrix or the price vector, but every set-valued function
here includes it where the definitions call for it.

Prices may be ``int`` or ``fractions.Fraction``; nothing in this module uses
floating point except the ``-inf`` utility of an unaffordable good.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import UsageError

NEG_INF = -math.inf

DUMMY = 0


def _as_int_tuple(row, what):
    out = []
    for x in row:
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                x = int(x)
            else:
                raise UsageError(f"{what} must be integers, got {x!r}")
        out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Market:
    """An immutable assignment market ``M = (bidders, goods, v, b, r)``.

    ``values[i][j-1]`` is bidder ``i``'s value for real good ``j``.
    """

    values: tuple
    budgets: tuple
    reserves: tuple = None

    def __post_init__(self):
        values = tuple(_as_int_tuple(row, "values") for row in self.values)
        budgets = _as_int_tuple(self.budgets, "budgets")
        if len(budgets) != len(values):
            raise UsageError("need exactly one budget per bidder")
        if self.reserves is None:
            if not values:
                raise UsageError("an empty market needs explicit reserves to fix m")
            reserves = (0,) * len(values[0])
        else:
            reserves = _as_int_tuple(self.reserves, "reserves")
        m = len(reserves)
        for row in values:
            if len(row) != m:
                raise UsageError("value rows must all have one entry per good")
            if any(x < 0 for x in row):
                raise UsageError("values must be non-negative")
        if any(b < 1 for b in budgets):
            raise UsageError("budgets must be positive")
        if any(r < 0 for r in reserves):
            raise UsageError("reserves must be non-negative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "reserves", reserves)

    @property
    def n(self) -> int:
        return len(self.budgets)

    @property
    def m(self) -> int:
        return len(self.reserves)

    @property
    def bidders(self) -> range:
        return range(self.n)

    @property
    def goods(self) -> range:
        """Real goods ``1..m``."""
        return range(1, self.m + 1)

    @property
    def all_goods(self) -> range:
        """Goods including the dummy, ``0..m``."""
        return range(self.m + 1)

    def value(self, i: int, j: int) -> int:
        self.check_bidder(i)
        self.check_good(j)
        return 0 if j == DUMMY else self.values[i][j - 1]

    def reserve(self, j: int) -> int:
        self.check_good(j)
        return 0 if j == DUMMY else self.reserves[j - 1]

    def check_bidder(self, i):
        if not (isinstance(i, int) and 0 <= i < self.n):
            raise UsageError(f"bidder index {i!r} out of range 0..{self.n - 1}")

    def check_good(self, j):
        if not (isinstance(j, int) and 0 <= j <= self.m):
            raise UsageError(f"good index {j!r} out of range 0..{self.m}")

    def with_budget(self, i: int, budget: int) -> "Market":
        budgets = list(self.budgets)
        budgets[i] = budget
        return Market(self.values, budgets, self.reserves)

    def with_bidder(self, i: int, values: Sequence[int], budget: int) -> "Market":
        rows = list(self.values)
        rows[i] = tuple(values)
        budgets = list(self.budgets)
        budgets[i] = budget
        return Market(rows, budgets, self.reserves)

    def with_budgets(self, budgets: Sequence[int]) -> "Market":
        return Market(self.values, budgets, self.reserves)


@dataclass(frozen=True)
class PriceVector:
    """Exact prices for the real goods; ``p[0]`` is always 0."""

    prices: tuple

    def __post_init__(self):
        prices = tuple(self.prices)
        for x in prices:
            if not isinstance(x, Rational) or isinstance(x, bool):
                raise UsageError(f"prices must be exact rationals, got {x!r}")
            if x < 0:
                raise UsageError("prices must be non-negative")
        object.__setattr__(self, "prices", prices)

    @classmethod
    def zeros(cls, m: int) -> "PriceVector":
        return cls((0,) * m)

    def __getitem__(self, j: int):
        if j == DUMMY:
            return 0
        if not 1 <= j <= len(self.prices):
            raise UsageError(f"good index {j!r} out of range")
        return self.prices[j - 1]

    def __len__(self):
        return len(self.prices)

    def __iter__(self):
        return iter(self.prices)

    def raised(self, goods: Iterable[int], step=1) -> "PriceVector":
        goods = set(goods)
        return PriceVector(
            tuple(x + step if j in goods else x for j, x in enumerate(self.prices, 1))
        )

    def dominated_by(self, other: "PriceVector") -> bool:
        """Coefficient-wise ``self <= other``."""
        return all(a <= b for a, b in zip(self.prices, other.prices))


@dataclass(frozen=True)
class Outcome:
    """An assignment ``mu`` (bidder -> good index, 0 = nothing) with prices."""

    assignment: tuple
    prices: PriceVector

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if not isinstance(self.prices, PriceVector):
            object.__setattr__(self, "prices", PriceVector(self.prices))


def check_assignment(market: Market, assignment: Sequence[int]):
    if len(assignment) != market.n:
        raise UsageError("assignment must map every bidder")
    seen = set()
    for j in assignment:
        market.check_good(j)
        if j != DUMMY:
            if j in seen:
                raise UsageError(f"good {j} assigned to more than one bidder")
            seen.add(j)


def check_outcome(market: Market, outcome: Outcome):
    """Raise :class:`UsageError` unless ``outcome`` is a feasible outcome.

    Feasible means: a valid assignment, ``p(mu(i)) <= b^i``, sold goods priced at
    or above their reserve, unsold real goods priced exactly at their reserve.
    """
    mu, p = outcome.assignment, outcome.prices
    check_assignment(market, mu)
    if len(p) != market.m:
        raise UsageError("price vector length must equal the number of goods")
    sold = set(mu) - {DUMMY}
    for i, j in enumerate(mu):
        if p[j] > market.budgets[i]:
            raise UsageError(f"bidder {i} pays {p[j]} above budget {market.budgets[i]}")
    for j in market.goods:
        r = market.reserve(j)
        if j in sold and p[j] < r:
            raise UsageError(f"good {j} sold below its reserve")
        if j not in sold and p[j] != r:
            raise UsageError(f"unsold good {j} must be priced at its reserve {r}")


def utility(market: Market, i: int, j: int, p: PriceVector):
    """``v_i(j) - p(j)`` if affordable, else ``-inf``."""
    v = market.value(i, j)
    price = p[j]
    if price > market.budgets[i]:
        return NEG_INF
    return v - price


def _best(market, i, p, candidates):
    b = market.budgets[i]
    affordable = [j for j in candidates if p[j] <= b]
    if not affordable:
        return frozenset()
    utils = {j: market.value(i, j) - p[j] for j in affordable}
    top = max(utils.values())
    return frozenset(j for j, u in utils.items() if u == top)


def demand_set(market: Market, i: int, p: PriceVector) -> frozenset:
    """Affordable goods (dummy included) of maximal utility for bidder ``i``."""
    market.check_bidder(i)
    return _best(market, i, p, market.all_goods)


def restricted_demand_set(market: Market, i: int, p: PriceVector, allowed) -> frozenset:
    """Demand set of bidder ``i`` when only goods in ``allowed`` may be demanded."""
    market.check_bidder(i)
    allowed = frozenset(allowed)
    if not allowed:
        raise UsageError("restriction set must be non-empty")
    for j in allowed:
        market.check_good(j)
    return _best(market, i, p, sorted(allowed))


def strict_budget_set(market: Market, i: int, p: PriceVector) -> frozenset:
    """Goods priced strictly below bidder ``i``'s budget, plus the dummy."""
    market.check_bidder(i)
    b = market.budgets[i]
    return frozenset([DUMMY] + [j for j in market.goods if p[j] < b])


def blocking_pairs(market: Market, outcome: Outcome) -> list:
    """All ``(i, j)`` with ``pi_i(j,p) > pi_i(mu(i),p)`` and ``p(j) < b^i``, sorted."""
    check_outcome(market, outcome)
    return list(blocking_pairs_unchecked(market, outcome.assignment, outcome.prices.prices))


def blocking_pairs_unchecked(market: Market, mu, real_prices):
    """Yield blocking pairs for a feasible outcome given as raw tuples.

    Skips all validation; callers must have checked feasibility already.
    ``real_prices[j-1]`` is the price of good ``j``.
    """
    prices = (0,) + tuple(real_prices)
    for i, row in enumerate(market.values):
        b = market.budgets[i]
        held = mu[i]
        current = (row[held - 1] if held else 0) - prices[held]
        if 0 > current:
            yield (i, DUMMY)
        for j, v in enumerate(row, 1):
            if prices[j] < b and v - prices[j] > current:
                yield (i, j)


def is_core(market: Market, outcome: Outcome) -> bool:
    check_outcome(market, outcome)
    return next(blocking_pairs_unchecked(market, outcome.assignment, outcome.prices.prices), None) is None


def is_competitive_equilibrium(market: Market, outcome: Outcome) -> bool:
    check_outcome(market, outcome)
    mu, p = outcome.assignment, outcome.prices
    return all(mu[i] in demand_set(market, i, p) for i in market.bidders)


def welfare(market: Market, assignment: Sequence[int]) -> int:
    check_assignment(market, assignment)
    return sum(market.value(i, j) for i, j in enumerate(assignment))


def gains_from_trade(market: Market, assignment: Sequence[int]) -> int:
    """Sum of ``v_i(mu(i)) - r_mu(i)``; the dummy good has reserve 0."""
    check_assignment(market, assignment)
    return sum(market.value(i, j) - market.reserve(j) for i, j in enumerate(assignment))


def restriction_witness(market: Market, outcome: Outcome):
    """Restriction sets certifying core membership, or ``None`` if not core.

    For a core outcome the sets are ``R_i = B_i(p) | {mu(i)}``; each bidder then
    receives a good from its restricted demand set.
    """
    if not is_core(market, outcome):
        return None
    mu, p = outcome.assignment, outcome.prices
    sets = []
    for i in market.bidders:
        r_i = strict_budget_set(market, i, p) | {mu[i]}
        assert mu[i] in restricted_demand_set(market, i, p, r_i)
        sets.append(r_i)
    return sets
