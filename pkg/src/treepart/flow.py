"""Unit vertex-capacity max-flow (Menger) used for path counting and separators."""

from __future__ import annotations

from collections import deque
from typing import Iterable

INF = 1 << 30


class _Network:
    __slots__ = ("cap", "adj")

    def __init__(self):
        self.cap: dict[tuple[int, int], int] = {}
        self.adj: dict[int, list[int]] = {}

    def add(self, a: int, b: int, c: int) -> None:
        if (a, b) not in self.cap:
            self.adj.setdefault(a, []).append(b)
            self.adj.setdefault(b, []).append(a)
            self.cap.setdefault((b, a), 0)
            self.cap[(a, b)] = 0
        self.cap[(a, b)] += c

    def _augment(self, s: int, t: int) -> bool:
        parent = {s: None}
        queue = deque([s])
        cap = self.cap
        while queue:
            a = queue.popleft()
            for b in self.adj.get(a, ()):
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    if b == t:
                        queue.clear()
                        break
                    queue.append(b)
        if t not in parent:
            return False
        b = t
        while parent[b] is not None:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        return True

    def maxflow(self, s: int, t: int, limit: int = INF) -> int:
        flow = 0
        while flow < limit and self._augment(s, t):
            flow += 1
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in self.adj.get(a, ()):
                if b not in seen and self.cap[(a, b)] > 0:
                    seen.add(b)
                    queue.append(b)
        return seen


def _vin(x: int) -> int:
    return 2 * x + 2


def _vout(x: int) -> int:
    return 2 * x + 3


def count_disjoint_paths(g, u: int, v: int, limit: int = INF) -> int:
    """Number of internally vertex-disjoint u-v paths (the edge uv counts as one).

    Counting stops once ``limit`` is reached.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    direct = 1 if g.has_edge(u, v) else 0
    if direct >= limit:
        return direct
    net = _Network()
    for x in range(g.n):
        if x != u and x != v:
            net.add(_vin(x), _vout(x), 1)
    for a, b in g.edges():
        if {a, b} == {u, v}:
            continue
        for p, q in ((a, b), (b, a)):
            if q == u or p == v:
                continue
            net.add(_vout(p), _vin(q), INF)
    return direct + net.maxflow(_vout(u), _vin(v), limit - direct)


def min_vertex_separator(g, sources: Iterable[int], sinks: Iterable[int],
                         within: Iterable[int] | None = None) -> frozenset[int]:
    """Minimum vertex set meeting every path from ``sources`` to ``sinks``.

    All vertices, terminals included, may be chosen; paths run inside
    ``within`` (default: all vertices).
    """
    allowed = set(range(g.n)) if within is None else set(within)
    src = [a for a in sources if a in allowed]
    dst = [b for b in sinks if b in allowed]
    if not src or not dst:
        return frozenset()
    s, t = 0, 1
    net = _Network()
    for x in allowed:
        net.add(_vin(x), _vout(x), 1)
        for y in g.neighbors(x):
            if y in allowed:
                net.add(_vout(x), _vin(y), INF)
    for a in src:
        net.add(s, _vin(a), INF)
    for b in dst:
        net.add(_vout(b), t, INF)
    net.maxflow(s, t)
    side = net.reachable(s)
    return frozenset(x for x in allowed if _vin(x) in side and _vout(x) not in side)


def disjoint_paths(g, sources: Iterable[int], sinks: Iterable[int],
                   within: Iterable[int] | None = None, limit: int = INF) -> list[tuple[int, ...]]:
    """Maximum family of vertex-disjoint paths from ``sources`` to ``sinks``.

    A vertex in both sets counts as a one-vertex path.  At most ``limit`` paths.
    """
    allowed = set(range(g.n)) if within is None else set(within)
    src = {a for a in sources if a in allowed}
    dst = {b for b in sinks if b in allowed}
    if not src or not dst or limit <= 0:
        return []
    s, t = 0, 1
    net = _Network()
    for x in allowed:
        net.add(_vin(x), _vout(x), 1)
        for y in g.neighbors(x):
            if y in allowed:
                net.add(_vout(x), _vin(y), 1)
    for a in src:
        net.add(s, _vin(a), 1)
    for b in dst:
        net.add(_vout(b), t, 1)
    original = dict(net.cap)
    value = net.maxflow(s, t, limit)
    used = {arc for arc, c in original.items() if c > 0 and net.cap[arc] < c}
    nxt: dict[int, list[int]] = {}
    for a, b in used:
        nxt.setdefault(a, []).append(b)
    paths = []
    for _ in range(value):
        node = nxt[s].pop()
        path = []
        while node != t:
            if node >= 2 and node % 2 == 0:
                path.append((node - 2) // 2)
            node = nxt[node].pop()
        paths.append(tuple(path))
    return paths
