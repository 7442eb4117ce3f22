"""Cardinality bipartite matching by augmenting paths.

Left vertices are bidders, right vertices are goods. Everything iterates in
ascending index order so results are reproducible run to run.
"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Sequence


def _augment(u, adj, match_right, seen):
    for g in adj[u]:
        if g in seen:
            continue
        seen.add(g)
        if g not in match_right or _augment(match_right[g], adj, match_right, seen):
            match_right[g] = u
            return True
    return False


def max_matching(left: Iterable[int], adj: Mapping[int, Sequence[int]]) -> Dict[int, int]:
    """Maximum matching as a ``left -> right`` dict (Kuhn's algorithm)."""
    match_right: Dict[int, int] = {}
    for u in sorted(left):
        _augment(u, adj, match_right, set())
    return {u: g for g, u in match_right.items()}


def alternating_tree(root: int, adj: Mapping[int, Sequence[int]], match_left: Mapping[int, int]):
    """Bidders and goods reachable from ``root`` along alternating paths.

    From a bidder every adjacent good is reachable; from a good only its mate.
    Returns ``(bidders, goods)`` as sets.
    """
    mate_of = {g: u for u, g in match_left.items()}
    bidders, goods = {root}, set()
    stack = [root]
    while stack:
        u = stack.pop()
        for g in adj[u]:
            if g in goods:
                continue
            goods.add(g)
            v = mate_of.get(g)
            if v is not None and v not in bidders:
                bidders.add(v)
                stack.append(v)
    return bidders, goods


def cover_right(
    match_left: Dict[int, int],
    adj: Mapping[int, Sequence[int]],
    required_goods: Iterable[int],
):
    """Extend a matching so every good in ``required_goods`` is matched.

    Matched bidders stay matched; a good can be freed only if it is not
    required. Each uncovered required good is routed along an alternating path
    that ends at an unmatched bidder or at a matched optional good. Returns the
    new ``left -> right`` dict, or ``None`` if some good cannot be covered.
    """
    required = set(required_goods)
    match_left = dict(match_left)
    demanders: Dict[int, list] = {}
    for u in sorted(adj):
        for g in adj[u]:
            demanders.setdefault(g, []).append(u)

    for target in sorted(required):
        mate_of = {g: u for u, g in match_left.items()}
        if target in mate_of:
            continue
        # BFS over goods; parent[g] = (bidder that would take g, good it gives up)
        parent = {target: None}
        queue = [target]
        end = None
        while queue and end is None:
            g = queue.pop(0)
            for u in demanders.get(g, ()):
                held = match_left.get(u)
                if held is None:
                    end = (u, g)
                    break
                if held in parent:
                    continue
                parent[held] = (u, g)
                if held not in required:
                    end = (None, held)
                    break
                queue.append(held)
        if end is None:
            return None
        u, g = end
        if u is not None:
            match_left[u] = g
        # Walk back toward the target, shifting each bidder onto the good that
        # precedes its current one in the path.
        step = parent[g]
        while step is not None:
            bidder, good = step
            match_left[bidder] = good
            step = parent[good]
    return match_left
