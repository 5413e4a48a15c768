"""Erdős–Pósa style packing / hitting sets for families of connected subgraphs."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .config import budgets
from .errors import PackingBudgetExceeded
from .flow import disjoint_paths
from .graph import Graph, components
from .treewidth import TreeDecomposition


class FamilyOracle:
    """A family of connected subgraphs, given by a member search.

    Members are handled as vertex sets; a set "contains a member" when its
    induced subgraph has a member as a subgraph, which is upward closed.
    """

    def __init__(self, g: Graph):
        self.g = g

    def find_member(self, sub: frozenset[int]) -> frozenset[int] | None:
        raise NotImplementedError

    def contains_member(self, sub: frozenset[int]) -> bool:
        return self.find_member(sub) is not None

    def upper_bound(self, comp: frozenset[int]) -> int:
        """Upper bound on the packing number of a connected vertex set."""
        return len(comp)

    def connected_contains(self, S: frozenset[int]) -> bool:
        """contains_member for a set already known to be connected."""
        return self.contains_member(S)

    def exact_packing(self, comp: frozenset[int], cap: int):
        """Maximum packing by a direct method, or None when unavailable."""
        return None

    def is_member(self, verts: frozenset[int]) -> bool:
        """Connected vertex set containing a member."""
        return len(components(self.g, verts)) == 1 and self.contains_member(verts)

    def shrink(self, member: frozenset[int]) -> frozenset[int]:
        """An inclusion-minimal member inside ``member``."""
        m = member
        changed = True
        while changed:
            changed = False
            for v in sorted(m, reverse=True):
                inner = self.find_member(m - {v})
                if inner is not None:
                    m = inner
                    changed = True
                    break
        return m

    def minimal_members_containing(self, v: int, sub: frozenset[int],
                                   counter: list[int], limit: int) -> Iterator[frozenset[int]]:
        """Members containing v, including every inclusion-minimal one.

        Connected sets through v are enumerated once each and not extended
        past the first point where they contain a member.
        """
        g = self.g

        def grow(S: frozenset[int], cand: frozenset[int], forbidden: frozenset[int]):
            counter[0] += 1
            if counter[0] > limit:
                raise PackingBudgetExceeded("minimal-member enumeration budget exceeded")
            if self.connected_contains(S):
                yield S
                return
            cl = sorted(cand)
            for i, u in enumerate(cl):
                forb = forbidden | frozenset(cl[:i])
                newc = (frozenset(cl[i + 1:]) | (g.neighbors(u) & sub)) - S - {u} - forb
                yield from grow(S | {u}, newc, forb)

        if v in sub:
            yield from grow(frozenset([v]), g.neighbors(v) & sub, frozenset())


class EdgeFamily(FamilyOracle):
    """All edges of g."""

    def find_member(self, sub):
        for u in sorted(sub):
            for w in self.g.adj[u]:
                if w in sub:
                    return frozenset((u, w))
        return None

    def upper_bound(self, comp):
        return len(comp) // 2

    def minimal_members_containing(self, v, sub, counter, limit):
        for w in self.g.adj[v]:
            if w in sub:
                counter[0] += 1
                yield frozenset((v, w))


class TerminalFamily(FamilyOracle):
    """Connected subgraphs meeting every terminal set."""

    def __init__(self, g: Graph, terminals: Sequence[Iterable[int]]):
        super().__init__(g)
        self.terminals = [frozenset(t) for t in terminals]

    def upper_bound(self, comp):
        # disjoint members use distinct vertices of every terminal set, and
        # contain disjoint paths between any two terminal sets
        ts = [comp & t for t in self.terminals]
        ub = min(len(t) for t in ts)
        if ub and len(ts) >= 3:
            for i in range(len(ts)):
                for j in range(i + 1, len(ts)):
                    ub = min(ub, len(disjoint_paths(self.g, ts[i], ts[j], comp, ub)))
        return ub

    def exact_packing(self, comp, cap):
        ts = [comp & t for t in self.terminals]
        if len(ts) == 1:
            return tuple(frozenset([v]) for v in sorted(ts[0]))[:cap]
        if len(ts) == 2:
            return tuple(frozenset(p) for p in disjoint_paths(self.g, ts[0], ts[1], comp, cap))
        return None

    def contains_member(self, sub):
        return self._component_hitting(sub) is not None

    def connected_contains(self, S):
        return all(S & t for t in self.terminals)

    def _component_hitting(self, sub):
        if not sub:
            return None
        for comp in components(self.g, sub):
            if all(comp & t for t in self.terminals):
                return comp
        return None

    def find_member(self, sub):
        comp = self._component_hitting(sub)
        if comp is None:
            return None
        # union of shortest paths from a root to the nearest vertex of each terminal set
        best = None
        roots = sorted(comp & min(self.terminals, key=len))[:8]
        for r in roots:
            parent = {r: None}
            queue = deque([r])
            while queue:
                x = queue.popleft()
                for y in self.g.adj[x]:
                    if y in comp and y not in parent:
                        parent[y] = x
                        queue.append(y)
            order = list(parent)  # BFS order = nondecreasing distance
            rank = {x: i for i, x in enumerate(order)}
            member = {r}
            for t in self.terminals:
                x = min(comp & t, key=lambda u: rank[u])
                while x is not None and x not in member:
                    member.add(x)
                    x = parent[x]
            if best is None or len(member) < len(best):
                best = frozenset(member)
        return best


class PatternFamily(FamilyOracle):
    """Connected vertex sets containing a fixed connected pattern as a subgraph."""

    def __init__(self, g: Graph, pattern: Graph):
        super().__init__(g)
        self.pattern = pattern

    def find_member(self, sub):
        from .patterns import contains_pattern

        emb = contains_pattern(self.g, self.pattern, "subgraph", within=sub)
        return None if emb is None else frozenset(emb.values())


@dataclass(frozen=True)
class EPResult:
    packing: tuple[frozenset[int], ...] | None
    hitting_set: frozenset[int] | None
    tree_nodes: frozenset[int]
    exact: bool
    bound: float
    ell: int

    @property
    def is_packing(self) -> bool:
        return self.packing is not None


def ep_bound(width: int, ell: int) -> float:
    return (width + 1) * ell * math.log2(ell + 1)


class _EP:
    def __init__(self, g: Graph, td: TreeDecomposition, fam: FamilyOracle,
                 exact: bool, limit: int):
        self.g = g
        self.td = td
        self.fam = fam
        self.exact = exact
        self.limit = limit
        self.counter = [0]
        self.memo: dict[frozenset[int], tuple[tuple[frozenset[int], ...], bool]] = {}
        # root the tree at 0 and record subtrees
        t = td.size
        self.parent = [-1] * t
        self.order: list[int] = []
        if t:
            seen = {0}
            queue = deque([0])
            while queue:
                x = queue.popleft()
                self.order.append(x)
                for y in td.tree_adj[x]:
                    if y not in seen:
                        seen.add(y)
                        self.parent[y] = x
                        queue.append(y)

    # packing number -------------------------------------------------------
    def greedy(self, sub: frozenset[int], cap: int) -> tuple[frozenset[int], ...]:
        out = []
        rest = sub
        while len(out) < cap:
            m = self.fam.find_member(rest)
            if m is None:
                break
            m = self.fam.shrink(m)
            out.append(m)
            rest = rest - m
        return tuple(out)

    def pack(self, sub: frozenset[int], cap: int) -> tuple[frozenset[int], ...]:
        """A maximum packing inside ``sub`` truncated at ``cap`` members."""
        if cap <= 0:
            return ()
        if not self.exact:
            return self.greedy(sub, cap)
        out: tuple[frozenset[int], ...] = ()
        for comp in components(self.g, sub):
            if len(out) >= cap:
                break
            out += self._pack_connected(comp, cap - len(out))
        return out

    def _pack_connected(self, sub: frozenset[int], cap: int) -> tuple[frozenset[int], ...]:
        hit = self.memo.get(sub)
        if hit is not None:
            p, exact = hit
            if exact or len(p) >= cap:
                return p[:cap]
        self.counter[0] += 1
        if self.counter[0] > self.limit:
            raise PackingBudgetExceeded("packing search exceeded its node budget")
        direct = self.fam.exact_packing(sub, cap)
        if direct is not None:
            self.memo[sub] = (direct, len(direct) < cap)
            return direct
        ub = min(cap, self.fam.upper_bound(sub))
        m = self.fam.find_member(sub) if ub > 0 else None
        if m is None:
            best: tuple[frozenset[int], ...] = ()
        else:
            m = self.fam.shrink(m)
            best = (m,) + self.pack(sub - m, cap - 1)
            if len(best) < ub:
                v = min(m)
                alt = self.pack(sub - {v}, cap)
                if len(alt) > len(best):
                    best = alt
                if len(best) < ub:
                    for member in self.fam.minimal_members_containing(
                            v, sub, self.counter, self.limit):
                        if len(best) >= ub:
                            break
                        rest = self.pack(sub - member, cap - 1)
                        if 1 + len(rest) > len(best):
                            best = (member,) + rest
        exact = len(best) < cap
        self.memo[sub] = (best, exact)
        return best

    # recursion -----------------------------------------------------------------
    def run(self, sub: frozenset[int], ell: int):
        """('packing', members) or ('hit', tree nodes)."""
        if ell == 0:
            m = self.fam.find_member(sub)
            return ("packing", (m,)) if m is not None else ("hit", frozenset())
        p = self.pack(sub, ell + 1)
        if len(p) > ell:
            return ("packing", p)
        td = self.td
        t = td.size
        bags = [b & sub for b in td.bags]
        # vertices in the bags of each rooted subtree
        below = [set(b) for b in bags]
        for x in reversed(self.order):
            if self.parent[x] >= 0:
                below[self.parent[x]] |= below[x]
        total = set(sub)
        out_deg = [0] * t
        for x in self.order:
            par = self.parent[x]
            if par < 0:
                continue
            # edge e = (x, par); G_{e,x}: x side minus W_par; G_{e,par}: the rest minus W_x
            side_x = frozenset(below[x] - bags[par])
            if len(self.pack(side_x, ell // 2 + 1)) <= ell / 2:
                out_deg[x] += 1  # x -> par
            else:
                out_deg[par] += 1  # par -> x
        s = min(x for x in range(t) if out_deg[x] == 0)
        if ell == 1:
            return ("hit", frozenset([s]))
        X = {s}
        for comp in components(self.g, sub - bags[s]):
            ell_j = len(self.pack(comp, ell + 1))
            while True:
                kind, val = self.run(comp, ell_j)
                if kind == "hit":
                    X |= val
                    break
                ell_j = len(val)  # only reachable with greedy estimates
        return ("hit", frozenset(X))


def ep_hitting_set(g: Graph, td: TreeDecomposition, fam: FamilyOracle, ell: int,
                   vertices: Iterable[int] | None = None, mode: str = "auto",
                   node_budget: int | None = None) -> EPResult:
    """More than ``ell`` disjoint members, or a hitting set of bounded size.

    ``mode`` is 'exact' (raise PackingBudgetExceeded beyond budget), 'greedy',
    or 'auto' (exact, falling back to greedy).  Hitting sets are always
    certified: no member survives in the complement.
    """
    sub = frozenset(range(g.n) if vertices is None else vertices)
    tdr = td.restrict(sub)
    limit = budgets().ep_nodes if node_budget is None else node_budget
    width = td.width
    if mode not in ("exact", "greedy", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    exact = mode != "greedy"
    try:
        kind, val = _EP(g, tdr, fam, exact, limit).run(sub, ell)
    except PackingBudgetExceeded:
        if mode == "exact":
            raise
        exact = False
        kind, val = _EP(g, tdr, fam, False, limit).run(sub, ell)
    bound = ep_bound(width, ell)
    if kind == "packing":
        return EPResult(tuple(val), None, frozenset(), exact, bound, ell)
    Q = set()
    for x in val:
        Q |= tdr.bags[x]
    rest = sub - Q
    m = fam.find_member(frozenset(rest))
    while m is not None:  # repair (greedy estimates only); keeps the certificate sound
        exact = False
        Q |= m
        m = fam.find_member(frozenset(sub - Q))
    for v in sorted(Q):  # prune: keep only vertices the certificate still needs
        if fam.find_member(frozenset(sub - (Q - {v}))) is None:
            Q.discard(v)
    return EPResult(None, frozenset(Q), frozenset(val), exact, bound, ell)
