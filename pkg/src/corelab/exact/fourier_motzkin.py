"""Exact feasibility of small linear systems with strict and non-strict rows.

Variables are eliminated one at a time (Fourier-Motzkin); a witness point is
rebuilt by back-substitution, choosing each coordinate as the smallest value
its interval allows (or a nearby rational when the lower end is open).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import UsageError

LE, LT, EQ, GE, GT = "<=", "<", "=", ">=", ">"


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x  rel  bound``."""

    coeffs: tuple
    rel: str
    bound: Fraction

    def holds(self, x: Sequence) -> bool:
        lhs = sum(Fraction(a) * v for a, v in zip(self.coeffs, x))
        return {
            LE: lhs <= self.bound,
            LT: lhs < self.bound,
            EQ: lhs == self.bound,
            GE: lhs >= self.bound,
            GT: lhs > self.bound,
        }[self.rel]


@dataclass
class LinearConstraintSystem:
    """Constraints over ``nvars`` variables, built up with :meth:`add`."""

    nvars: int
    constraints: List[Constraint] = field(default_factory=list)
    names: Optional[Sequence[str]] = None

    def add(self, coeffs, rel, bound):
        if rel not in (LE, LT, EQ, GE, GT):
            raise UsageError(f"unknown relation {rel!r}")
        if isinstance(coeffs, dict):
            vec = [Fraction(0)] * self.nvars
            for k, a in coeffs.items():
                vec[k] += Fraction(a)
            coeffs = vec
        coeffs = tuple(Fraction(a) for a in coeffs)
        if len(coeffs) != self.nvars:
            raise UsageError("coefficient vector has the wrong length")
        self.constraints.append(Constraint(coeffs, rel, Fraction(bound)))
        return self

    def extend(self, other: "LinearConstraintSystem"):
        if other.nvars != self.nvars:
            raise UsageError("cannot merge systems over different variables")
        self.constraints.extend(other.constraints)
        return self

    def copy(self) -> "LinearConstraintSystem":
        return LinearConstraintSystem(self.nvars, list(self.constraints), self.names)

    def satisfied_by(self, x) -> bool:
        return all(c.holds(x) for c in self.constraints)

    def __len__(self):
        return len(self.constraints)

    def describe(self) -> List[str]:
        names = self.names or [f"x{k}" for k in range(self.nvars)]
        out = []
        for c in self.constraints:
            terms = [f"{a}*{names[k]}" for k, a in enumerate(c.coeffs) if a]
            out.append(f"{' + '.join(terms) or '0'} {c.rel} {c.bound}")
        return out


# internal row: (coeffs tuple, bound, strict) meaning coeffs.x < bound or <= bound
Row = Tuple[tuple, Fraction, bool]


def _normalize(rows: Sequence[Constraint]) -> List[Row]:
    out = []
    for c in rows:
        a, b = c.coeffs, c.bound
        if c.rel in (LE, LT):
            out.append((a, b, c.rel == LT))
        elif c.rel in (GE, GT):
            out.append((tuple(-x for x in a), -b, c.rel == GT))
        else:
            out.append((a, b, False))
            out.append((tuple(-x for x in a), -b, False))
    return out


def _scaled(row: Row) -> Row:
    """Divide by the largest |coefficient| so duplicate rows compare equal."""
    a, b, strict = row
    top = max((abs(x) for x in a), default=0)
    if top == 0:
        return row
    return tuple(x / top for x in a), b / top, strict


def _dedupe(rows: List[Row]) -> List[Row]:
    # Keep only the tightest row per direction vector.
    best = {}
    for row in rows:
        a, b, strict = _scaled(row)
        prev = best.get(a)
        if prev is None or b < prev[0] or (b == prev[0] and strict and not prev[1]):
            best[a] = (b, strict)
    return [(a, b, s) for a, (b, s) in best.items()]


def _trivially_false(row: Row) -> bool:
    a, b, strict = row
    if any(a):
        return False
    return b < 0 or (strict and b == 0)


def _eliminate(rows: List[Row], k: int) -> List[Row]:
    pos, neg, rest = [], [], []
    for row in rows:
        (pos if row[0][k] > 0 else neg if row[0][k] < 0 else rest).append(row)
    for ap, bp, sp in pos:
        for an, bn, sn in neg:
            cp, cn = ap[k], -an[k]
            a = tuple(x / cp + y / cn for x, y in zip(ap, an))
            a = a[:k] + (Fraction(0),) + a[k + 1:]
            rest.append((a, bp / cp + bn / cn, sp or sn))
    # Constant rows are either contradictions (kept, so the caller sees them) or
    # tautologies (dropped).
    return _dedupe([r for r in rest if any(r[0]) or _trivially_false(r)])


def _pick(lo, lo_strict, hi, hi_strict) -> Optional[Fraction]:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi if not hi_strict else Fraction(math.floor(hi) - 1 if hi == math.floor(hi) else math.floor(hi))
    if hi is not None and (hi < lo or (hi == lo and (lo_strict or hi_strict))):
        return None
    if not lo_strict:
        return lo
    cand = Fraction(math.floor(lo) + 1)
    if hi is None or cand < hi or (cand == hi and not hi_strict):
        return cand
    return (lo + hi) / 2


def lp_feasible(system: LinearConstraintSystem) -> Optional[Tuple[Fraction, ...]]:
    """A rational point satisfying every constraint, or ``None`` if none exists."""
    n = system.nvars
    rows = _dedupe(_normalize(system.constraints))
    if any(_trivially_false(r) for r in rows):
        return None
    stages = []
    for k in reversed(range(n)):
        stages.append(rows)
        rows = _eliminate(rows, k)
        if any(_trivially_false(r) for r in rows):
            return None
    x = [Fraction(0)] * n
    # stages[-1] involves only variable 0, stages[0] all variables.
    for k, stage in zip(range(n), reversed(stages)):
        lo = hi = None
        lo_strict = hi_strict = False
        for a, b, strict in stage:
            c = a[k]
            if c == 0:
                continue
            rhs = (b - sum(a[q] * x[q] for q in range(k))) / c
            if c > 0:
                if hi is None or rhs < hi or (rhs == hi and strict):
                    hi, hi_strict = rhs, strict
            else:
                if lo is None or rhs > lo or (rhs == lo and strict):
                    lo, lo_strict = rhs, strict
        val = _pick(lo, lo_strict, hi, hi_strict)
        if val is None:
            raise AssertionError("back-substitution found an empty interval")
        x[k] = val
    point = tuple(x)
    if not system.satisfied_by(point):
        raise AssertionError("Fourier-Motzkin returned a point violating the system")
    return point
