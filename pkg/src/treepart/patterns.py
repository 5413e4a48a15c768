"""Backtracking search for small (induced) subgraph patterns."""

from __future__ import annotations

from typing import Iterable

from .config import budgets
from .errors import PatternTooLarge
from .graph import FamilySpec, Graph, generate


def _search_order(p: Graph) -> list[int]:
    """Pattern vertices so each one (after the first per component) touches an earlier one."""
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(p.n))
    while remaining:
        start = max(remaining, key=lambda v: (p.degree(v), -v))
        order.append(start)
        placed.add(start)
        remaining.discard(start)
        while True:
            frontier = [v for v in remaining if p.neighbors(v) & placed]
            if not frontier:
                break
            v = max(frontier, key=lambda v: (len(p.neighbors(v) & placed), p.degree(v), -v))
            order.append(v)
            placed.add(v)
            remaining.discard(v)
    return order


def contains_pattern(g: Graph, pattern, mode: str = "subgraph",
                     within: Iterable[int] | None = None,
                     max_pattern: int | None = None) -> dict[int, int] | None:
    """Find an injective map pattern -> g realising it as a (induced) subgraph.

    Returns ``{pattern vertex: host vertex}`` or None.  ``within`` restricts the
    host to an induced subgraph.  Patterns above the size budget raise
    PatternTooLarge.
    """
    if mode not in ("subgraph", "induced"):
        raise ValueError(f"unknown mode {mode!r}")
    p = pattern if isinstance(pattern, Graph) else generate(
        pattern if isinstance(pattern, FamilySpec) else FamilySpec.parse(pattern))
    limit = budgets().pattern_n if max_pattern is None else max_pattern
    if p.n > limit:
        raise PatternTooLarge(f"pattern has {p.n} vertices, budget {limit}")
    host = sorted(range(g.n) if within is None else set(within))
    if p.n == 0:
        return {}
    if p.n > len(host):
        return None
    allowed = set(host)
    induced = mode == "induced"
    order = _search_order(p)
    pos = {v: i for i, v in enumerate(order)}
    # for each pattern vertex: earlier pattern neighbours / earlier non-neighbours
    back_nb = [[w for w in p.neighbors(v) if pos[w] < pos[v]] for v in order]
    back_non = [[w for w in order[:i] if not p.has_edge(order[i], w)] for i in range(len(order))]
    need_deg = [p.degree(v) for v in order]
    host_deg = {v: len(g.neighbors(v) & allowed) for v in host}

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def candidates(i: int):
        nb = back_nb[i]
        if nb:
            base = g.neighbors(mapping[nb[0]]) & allowed
            for w in nb[1:]:
                base = base & g.neighbors(mapping[w])
            return sorted(base - used)
        return [v for v in host if v not in used]

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        pv = order[i]
        for h in candidates(i):
            if host_deg[h] < need_deg[i]:
                continue
            if induced and any(g.has_edge(h, mapping[w]) for w in back_non[i]):
                continue
            mapping[pv] = h
            used.add(h)
            if extend(i + 1):
                return True
            used.discard(h)
            del mapping[pv]
        return False

    return dict(mapping) if extend(0) else None


def greedy_packing(g: Graph, pattern, mode: str = "subgraph",
                   within: Iterable[int] | None = None,
                   limit: int | None = None) -> list[frozenset[int]]:
    """Disjoint copies of ``pattern`` found greedily until none is left (or ``limit``)."""
    remaining = set(range(g.n) if within is None else within)
    out = []
    while limit is None or len(out) < limit:
        emb = contains_pattern(g, pattern, mode, within=remaining)
        if emb is None:
            break
        copy = frozenset(emb.values())
        out.append(copy)
        remaining -= copy
    return out
