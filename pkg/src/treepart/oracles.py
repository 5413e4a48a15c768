"""Disjointedness oracles for specific graph classes."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coverings import Covering, QOracle, _has_empty_residual, singleton_partition
from .ep import TerminalFamily, ep_bound, ep_hitting_set
from .errors import NotWeaklyOuterKPlanar, OracleViolation, UnsupportedBlock
from .flow import min_vertex_separator
from .graph import Graph, neighborhood
from .treewidth import TreeDecomposition, decomposition_for


def _residuals(blocks: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    out = []
    seen: frozenset[int] = frozenset()
    for b in blocks:
        out.append(b - seen)
        seen = seen | b
    return out


class DegreeOracle(QOracle):
    """Q = N(B_1') inside X; at most Delta * ell * t vertices."""

    def __init__(self, g: Graph, covering: Covering | None = None):
        super().__init__(g, covering or singleton_partition(g), 1)
        self.delta = g.max_degree()

    def bound(self, t: int) -> float:
        return self.delta * self.covering.ell * max(t, 1)

    def _answer(self, blocks, members, X):
        return neighborhood(self.g, blocks[0]) & X


def degree_oracle(g: Graph) -> DegreeOracle:
    return DegreeOracle(g)


class EPOracle(QOracle):
    """Hitting sets for 'connected subgraphs of X meeting every N(B_i')' via EP.

    The packing size is measured per query; ``bound`` is therefore not known
    in advance and the per-query EP bound is tracked in ``max_ep_bound``.
    """

    measured = True
    default_node_budget = 20_000

    def __init__(self, g: Graph, covering: Covering, c: int,
                 td: TreeDecomposition | None = None, mode: str = "auto",
                 node_budget: int | None = None):
        super().__init__(g, covering, c)
        self.td = td if td is not None else decomposition_for(g)
        self.mode = mode
        self.node_budget = self.default_node_budget if node_budget is None else node_budget
        self.max_packing = 0
        self.max_ep_bound = 0.0
        self.packings: list[tuple[frozenset[int], ...]] = []

    def bound(self, t: int):
        return None

    def query_bound(self, t: int, ell: int) -> float:
        """(width+1) * c * t * ell * log2(ell+1), with measured packing size ell."""
        return ep_bound(self.td.width, ell) * self.c * max(t, 1)

    def _answer(self, blocks, members, X):
        res = _residuals(blocks)
        terms = [neighborhood(self.g, r) & X for r in res]
        if any(not t for t in terms):
            return frozenset()
        fam = TerminalFamily(self.g, terms)
        ell = 0
        # greedy packing as the starting estimate, then let EP correct it
        rest = X
        while True:
            m = fam.find_member(rest)
            if m is None:
                break
            ell += 1
            rest = rest - m
        while True:
            res_ep = ep_hitting_set(self.g, self.td, fam, ell, X, self.mode, self.node_budget)
            if not res_ep.is_packing:
                break
            ell = len(res_ep.packing)
        if not res_ep.exact:
            self.flags.add("ep-bound-unverified")
        self.max_packing = max(self.max_packing, ell)
        self.max_ep_bound = max(self.max_ep_bound, res_ep.bound)
        self.packings.append(tuple(fam.shrink(m) for m in _greedy_members(fam, X)))
        return res_ep.hitting_set


def _greedy_members(fam, X):
    rest = X
    out = []
    while True:
        m = fam.find_member(rest)
        if m is None:
            return out
        out.append(m)
        rest = rest - m


def minor_free_oracle(g: Graph, s: int, td: TreeDecomposition | None = None,
                      mode: str = "auto") -> EPOracle:
    """Oracle for the singleton partition with c = s (K_{s,t}-minor-free graphs)."""
    return EPOracle(g, singleton_partition(g), s, td, mode)


class TopoMinorOracle(EPOracle):
    """EP oracle that also records how its packings split under assign_trick."""

    def __init__(self, g, covering, c, td=None, mode="auto"):
        super().__init__(g, covering, c, td, mode)
        self.assigned = 0
        self.unassigned = 0

    def _answer(self, blocks, members, X):
        Q = super()._answer(blocks, members, X)
        if self.packings and self.packings[-1]:
            S = frozenset().union(*blocks)
            res = _residuals(blocks)
            classes = {v: i for i, r in enumerate(res) for v in r}
            out = assign_trick(self.g, S, list(self.packings[-1]), classes)
            self.assigned += len(out.assigned)
            self.unassigned += len(out.unassigned)
        return Q


def topo_minor_oracle(g: Graph, p: int, td: TreeDecomposition | None = None,
                      mode: str = "auto") -> TopoMinorOracle:
    return TopoMinorOracle(g, singleton_partition(g), p, td, mode)


class K2tOracle(QOracle):
    """c = 2: Q is a minimum vertex separator between N(B_1') and N(B_2') in X."""

    measured = True

    def __init__(self, g: Graph, covering: Covering | None = None):
        super().__init__(g, covering or singleton_partition(g), 2)

    def bound(self, t):
        return None

    def _answer(self, blocks, members, X):
        res = _residuals(blocks)
        S = blocks[0] | blocks[1]
        A1 = (neighborhood(self.g, res[0]) - S) & X
        A2 = (neighborhood(self.g, res[1]) - S) & X
        return min_vertex_separator(self.g, A1, A2, X)


def k2t_menger_oracle(g: Graph) -> K2tOracle:
    return K2tOracle(g)


# assignment trick ------------------------------------------------------------------

@dataclass(frozen=True)
class AssignResult:
    contracted: Graph
    order: tuple[int, ...]
    assigned: tuple[tuple[frozenset[int], tuple[int, int]], ...]
    unassigned: tuple[frozenset[int], ...]


def assign_trick(g: Graph, A: Iterable[int], packing: Sequence[Iterable[int]],
                 classes: dict[int, int] | None = None) -> AssignResult:
    """Greedily give each member a private pair of its A-neighbours.

    Members are taken by lowest vertex id and pairs lexicographically.  With
    ``classes`` the two ends of a pair must lie in different classes.  The
    contracted graph is G[A] plus one edge per assigned member.
    """
    A = sorted(set(A))
    Aset = set(A)
    index = {v: i for i, v in enumerate(A)}
    occupied: set[tuple[int, int]] = set()
    assigned, unassigned = [], []
    for member in sorted((frozenset(m) for m in packing), key=min):
        nbrs = sorted(neighborhood(g, member) & Aset)
        chosen = None
        for i, x in enumerate(nbrs):
            for y in nbrs[i + 1:]:
                if classes is not None and classes.get(x) == classes.get(y):
                    continue
                if (x, y) not in occupied:
                    chosen = (x, y)
                    break
            if chosen:
                break
        if chosen is None:
            unassigned.append(member)
        else:
            occupied.add(chosen)
            assigned.append((member, chosen))
    edges = {(index[u], index[v]) for u, v in g.edges() if u in Aset and v in Aset}
    edges |= {(index[x], index[y]) for x, y in occupied}
    return AssignResult(Graph.from_edges(len(A), sorted(edges)), tuple(A),
                        tuple(assigned), tuple(unassigned))


# circular drawings ---------------------------------------------------------------

@dataclass(frozen=True)
class CircularDrawing:
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order must be a permutation of 0..n-1")

    @property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def crosses(self, e, f) -> bool:
        pos = self.position
        return _cross(pos, e, f)


def _cross(pos, e, f) -> bool:
    a, b = sorted((pos[e[0]], pos[e[1]]))
    c, d = pos[f[0]], pos[f[1]]
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def parse_drawing(text: str) -> CircularDrawing:
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            return CircularDrawing(tuple(int(x) for x in line.split()))
    raise ValueError("empty drawing")


def format_drawing(d: CircularDrawing) -> str:
    return " ".join(map(str, d.order)) + "\n"


@dataclass(frozen=True)
class CrossingStats:
    counts: dict
    crossing_pairs: tuple
    max_crossings: int
    total: int
    weak_k: int


def crossing_stats(g: Graph, d: CircularDrawing) -> CrossingStats:
    pos = d.position
    edges = list(g.edges())
    counts = {e: 0 for e in edges}
    pairs = []
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            if _cross(pos, e, f):
                counts[e] += 1
                counts[f] += 1
                pairs.append((e, f))
    weak = max((min(counts[e], counts[f]) for e, f in pairs), default=0)
    return CrossingStats(counts, tuple(pairs), max(counts.values(), default=0),
                         len(pairs), weak)


class OuterKPlanarOracle(QOracle):
    """(2, 4k+4) oracle for singleton queries in a weakly outer k-planar drawing."""

    native_union = False

    def __init__(self, g: Graph, drawing: CircularDrawing, k: int | None = None):
        super().__init__(g, singleton_partition(g), 2)
        if len(drawing.order) != g.n:
            raise ValueError("drawing and graph sizes differ")
        stats = crossing_stats(g, drawing)
        if k is None:
            k = stats.weak_k
        for e, f in stats.crossing_pairs:
            if stats.counts[e] > k and stats.counts[f] > k:
                raise NotWeaklyOuterKPlanar((e, f))
        self.k = k
        self.drawing = drawing
        n = g.n
        order = drawing.order
        ham = [(order[i], order[(i + 1) % n]) for i in range(n)] if n >= 3 else []
        self.gplus = Graph.from_edges(n, list(g.edges()) + ham)
        self.pos = drawing.position
        self.edges = list(self.gplus.edges())
        self._crossing: dict = {}

    def bound(self, t):
        return 4 * self.k + 4

    def crossing_edges(self, e) -> list[tuple[int, int]]:
        e = (min(e), max(e))
        if e not in self._crossing:
            self._crossing[e] = [f for f in self.edges if _cross(self.pos, e, f)]
        return self._crossing[e]

    def separator(self, vi: int, vj: int) -> frozenset[int]:
        """Q for the query ({vi}, {vj}) in g plus the boundary cycle."""
        n = self.g.n
        if n <= 2 or vi == vj:
            return frozenset()
        order, pos, gp = self.drawing.order, self.pos, self.gplus
        if pos[vj] == (pos[vi] + 1) % n:
            vi, vj = vj, vi
        pi, pj = pos[vi], pos[vj]
        cw = [order[(pi + s) % n] for s in range(1, (pj - pi) % n)]
        ccw = [order[(pi - s) % n] for s in range(1, (pi - pj) % n)]
        Q: set[int] = set()
        for arc, toward in ((cw, -1), (ccw, +1)):
            # toward: direction to scan from vj back into this arc
            prime = next((v for v in arc if gp.has_edge(v, vj)), None)
            if prime is None:
                continue
            e_prime = (prime, vj)
            crossing = self.crossing_edges(e_prime)
            if len(crossing) > self.k:
                ends = {x for f in crossing for x in f}
                v_side = None
                for s in range(1, n):
                    cand = order[(pj + toward * s) % n]
                    if cand in ends:
                        v_side = cand
                        break
                e_side = min(f for f in crossing if v_side in f)
            else:
                v_side, e_side = prime, e_prime
            for f in self.crossing_edges(e_side):
                Q.update(f)
            Q.update((v_side, prime))
        Q -= {vi, vj}
        if len(Q) > 4 * self.k + 4:
            raise OracleViolation(f"outer-k-planar oracle produced |Q| = {len(Q)}")
        return frozenset(Q)

    def _answer(self, blocks, members, X):
        if _has_empty_residual(blocks):
            return frozenset()
        (vi,), (vj,) = blocks[0], blocks[1]
        return self.separator(vi, vj) & X


def outer_k_planar_oracle(g: Graph, drawing: CircularDrawing,
                          k: int | None = None) -> OuterKPlanarOracle:
    return OuterKPlanarOracle(g, drawing, k)


def random_outer_k_planar(n: int, k: int, rng: random.Random, attempts: int | None = None,
                          shuffle: bool = True) -> tuple[Graph, CircularDrawing]:
    """Random graph with a weakly outer k-planar circular drawing.

    Chords are proposed at random and kept while every crossing pair still has
    an edge with at most k crossings.
    """
    order = list(range(n))
    if shuffle:
        rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    edges: list[tuple[int, int]] = []
    counts: dict = {}
    present = set()
    for _ in range(attempts if attempts is not None else 4 * n):
        if n < 2:
            break
        u, v = rng.sample(range(n), 2)
        e = (min(u, v), max(u, v))
        if e in present:
            continue
        crossing = [f for f in edges if _cross(pos, e, f)]
        trial = dict(counts)
        trial[e] = len(crossing)
        for f in crossing:
            trial[f] += 1
        ok = True
        for f in crossing:
            if trial[e] > k and trial[f] > k:
                ok = False
                break
        if ok:
            # existing pairs involving an edge whose count grew
            grown = set(crossing)
            for f in grown:
                for h in edges:
                    if h != f and _cross(pos, f, h) and trial[f] > k and trial[h] > k:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            edges.append(e)
            present.add(e)
            counts = trial
    return Graph.from_edges(n, edges), CircularDrawing(tuple(order))
