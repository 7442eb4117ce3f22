"""Seeded random market generation."""
from __future__ import annotations

import random
from typing import Optional, Tuple

from .errors import UsageError
from .market import Market


def _check_range(name, lo_hi, floor):
    lo, hi = lo_hi
    if lo > hi:
        raise UsageError(f"{name} range is empty: {lo} > {hi}")
    if lo < floor:
        raise UsageError(f"{name} range must start at {floor} or more")


def random_market(
    rng: random.Random,
    n: int,
    m: int,
    values: Tuple[int, int] = (0, 6),
    budgets: Tuple[int, int] = (1, 6),
    reserves: Optional[Tuple[int, int]] = None,
) -> Market:
    """Market with integer entries drawn uniformly from the inclusive ranges.

    Without ``reserves`` every reserve is 0.
    """
    if n < 0 or m < 0:
        raise UsageError("n and m must be non-negative")
    _check_range("value", values, 0)
    _check_range("budget", budgets, 1)
    if reserves is not None:
        _check_range("reserve", reserves, 0)
    rows = [[rng.randint(*values) for _ in range(m)] for _ in range(n)]
    bud = [rng.randint(*budgets) for _ in range(n)]
    res = [rng.randint(*reserves) for _ in range(m)] if reserves else [0] * m
    return Market(rows, bud, res)


def random_markets(
    seed: int,
    count: int,
    max_n: int,
    max_m: int,
    values: Tuple[int, int] = (0, 6),
    budgets: Tuple[int, int] = (1, 6),
    reserves: Optional[Tuple[int, int]] = None,
    min_n: int = 1,
    min_m: int = 1,
):
    """``count`` markets with sizes drawn from ``min..max``; fully determined by ``seed``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(min_n, max_n)
        m = rng.randint(min_m, max_m)
        out.append(random_market(rng, n, m, values, budgets, reserves))
    return out
