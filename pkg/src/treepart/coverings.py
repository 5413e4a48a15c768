"""Coverings, disjointedness queries, witnesses and the generic oracle builders."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from .config import budgets
from .errors import OracleViolation, TooLarge, UnsupportedBlock
from .graph import Graph, component_of, components, neighborhood


@dataclass(frozen=True)
class Covering:
    """Blocks of vertices covering V(G); ``ell`` is the largest block size."""

    blocks: tuple[frozenset[int], ...]
    ell: int
    is_partition: bool

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Covering":
        bl = tuple(frozenset(b) for b in blocks)
        if any(not b for b in bl):
            raise ValueError("blocks must be nonempty")
        seen: set[int] = set()
        disjoint = True
        for b in bl:
            if seen & b:
                disjoint = False
            seen |= b
        return cls(bl, max((len(b) for b in bl), default=0), disjoint)

    @cached_property
    def containing(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, b in enumerate(self.blocks):
            for v in b:
                out.setdefault(v, []).append(i)
        return {v: tuple(ix) for v, ix in out.items()}

    @cached_property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    def union(self, indices: Iterable[int]) -> "BlockUnion":
        idx = tuple(sorted(set(indices)))
        verts = frozenset().union(*(self.blocks[i] for i in idx)) if idx else frozenset()
        return BlockUnion(idx, verts)

    def greedy_cover(self, R: Iterable[int], within: frozenset[int] | None = None) -> "BlockUnion":
        """Lowest-index blocks covering R, one per still-uncovered vertex of R."""
        chosen: list[int] = []
        covered: set[int] = set()
        for v in sorted(R):
            if v in covered:
                continue
            i = self.containing[v][0]
            chosen.append(i)
            covered |= self.blocks[i]
        bu = self.union(chosen)
        return bu if within is None else bu.restrict(within)

    def check(self, g: Graph) -> None:
        if self.vertices != frozenset(range(g.n)):
            raise ValueError("blocks do not cover V(G)")


def singleton_partition(g: Graph) -> Covering:
    return Covering(tuple(frozenset([v]) for v in range(g.n)), 1 if g.n else 0, True)


def restrict(beta: Covering, g: Graph, sub: Iterable[int]) -> Covering:
    """Blocks intersected with ``sub``; empty blocks dropped, ell kept."""
    s = frozenset(sub)
    blocks = tuple(b & s for b in beta.blocks if b & s)
    return Covering(blocks, beta.ell, beta.is_partition)


def format_covering(beta: Covering) -> str:
    return "".join(" ".join(map(str, sorted(b))) + "\n" for b in beta.blocks)


def parse_covering(text: str, partition: bool = False) -> Covering:
    blocks = [[int(x) for x in ln.split()] for ln in text.splitlines()
              if ln.strip() and not ln.lstrip().startswith("#")]
    cov = Covering.from_blocks(blocks)
    if partition and not cov.is_partition:
        raise ValueError("blocks of a partition must be disjoint")
    return cov


@dataclass(frozen=True)
class BlockUnion:
    """An element of beta[t]: the union of the referenced blocks (possibly restricted)."""

    member_indices: tuple[int, ...]
    vertices: frozenset[int]

    @property
    def t(self) -> int:
        return len(self.member_indices)

    def restrict(self, sub: frozenset[int]) -> "BlockUnion":
        return BlockUnion(self.member_indices, self.vertices & sub)


@dataclass(frozen=True)
class DisjointednessQuery:
    """c blocks and a component X of host - union(blocks).

    ``host`` is the vertex set of the current induced subgraph (None: all of G).
    """

    blocks: tuple[BlockUnion, ...]
    component: frozenset[int]
    host: frozenset[int] | None = None

    @cached_property
    def residuals(self) -> tuple[frozenset[int], ...]:
        out = []
        seen: frozenset[int] = frozenset()
        for b in self.blocks:
            out.append(b.vertices - seen)
            seen = seen | b.vertices
        return tuple(out)

    @property
    def c(self) -> int:
        return len(self.blocks)

    @property
    def t(self) -> int:
        return max((b.t for b in self.blocks), default=0)


def raw_query(blocks: Sequence[Iterable[int]], component: Iterable[int]) -> DisjointednessQuery:
    """Query from plain vertex sets (member indices are the vertices themselves)."""
    bus = tuple(BlockUnion(tuple(sorted(set(b))), frozenset(b)) for b in blocks)
    return DisjointednessQuery(bus, frozenset(component))


@dataclass(frozen=True)
class QWitness:
    Q: frozenset[int]
    assignment: tuple[tuple[frozenset[int], int], ...]

    def index_of(self, comp: frozenset[int]) -> int | None:
        for y, i in self.assignment:
            if y == comp:
                return i
        return None


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def residual_neighborhoods(g: Graph, q: DisjointednessQuery) -> list[frozenset[int]]:
    return [neighborhood(g, r) if r else frozenset() for r in q.residuals]


def assign(g: Graph, q: DisjointednessQuery, Q: Iterable[int],
           nbhd: list[frozenset[int]] | None = None) -> QWitness | None:
    """Give each component of X - Q the lowest index whose N(B_i') it avoids."""
    Q = frozenset(Q)
    nbhd = residual_neighborhoods(g, q) if nbhd is None else nbhd
    out = []
    for comp in components(g, q.component - Q):
        for i, nb in enumerate(nbhd):
            if not comp & nb:
                out.append((comp, i))
                break
        else:
            return None
    return QWitness(Q, tuple(out))


def verify_witness(g: Graph, q: DisjointednessQuery, w: QWitness, d) -> WitnessReport:
    if d is not None and len(w.Q) > d:
        return WitnessReport(False, f"|Q| = {len(w.Q)} exceeds {d}")
    if not w.Q <= q.component:
        return WitnessReport(False, "Q is not inside X")
    nbhd = residual_neighborhoods(g, q)
    comps = components(g, q.component - w.Q)
    given = dict(w.assignment)
    if set(given) != set(comps):
        return WitnessReport(False, "assignment does not list the components of X - Q")
    for comp in comps:
        i = given[comp]
        if not 0 <= i < len(nbhd):
            return WitnessReport(False, f"index {i} out of range")
        hit = comp & nbhd[i]
        if hit:
            return WitnessReport(False, f"component {sorted(comp)} meets N(B_{i + 1}') at {min(hit)}")
    return WitnessReport(True)


def brute_min_q(g: Graph, q: DisjointednessQuery, max_n: int | None = None) -> QWitness:
    """Smallest valid Q by exhaustive subset search."""
    limit = budgets().min_q_n if max_n is None else max_n
    X = sorted(q.component)
    if len(X) > limit:
        raise TooLarge(f"|X| = {len(X)} exceeds the subset budget {limit}")
    nbhd = residual_neighborhoods(g, q)
    for size in range(len(X) + 1):
        for Q in combinations(X, size):
            w = assign(g, q, Q, nbhd)
            if w is not None:
                return w
    raise AssertionError("Q = X always works")


@dataclass(frozen=True)
class CDReport:
    ok: bool
    counterexample: DisjointednessQuery | None = None
    witness: QWitness | None = None
    queries: int = 0
    max_q: int = 0

    def __bool__(self) -> bool:
        return self.ok


def check_cd_disjointed(g: Graph, beta: Covering, c: int, d: int,
                        max_queries: int = 200_000) -> CDReport:
    """Exhaustively check every c-tuple of blocks and every component."""
    count = 0
    worst = 0
    for tup in product(range(len(beta.blocks)), repeat=c):
        bus = tuple(beta.union([i]) for i in tup)
        removed = frozenset().union(*(b.vertices for b in bus)) if bus else frozenset()
        for comp in components(g, set(range(g.n)) - removed):
            count += 1
            if count > max_queries:
                raise TooLarge("too many disjointedness queries")
            q = DisjointednessQuery(bus, comp)
            w = brute_min_q(g, q)
            worst = max(worst, len(w.Q))
            if len(w.Q) > d:
                return CDReport(False, q, w, count, worst)
    return CDReport(True, None, None, count, worst)


# oracles ---------------------------------------------------------------------

class QOracle:
    """Answers disjointedness queries for a covering of a fixed host graph.

    Queries may come from an induced subgraph (``q.host``); they are answered by
    lifting blocks and component to the host graph and intersecting the
    answer with the component.
    """

    c: int
    native_union = True
    measured = False  # True when bound() is not known in advance

    def __init__(self, g: Graph, covering: Covering, c: int):
        self.g = g
        self.covering = covering
        self.c = c
        self._cache: dict = {}
        self.calls = 0
        self.max_q = 0
        self.flags: set[str] = set()

    def bound(self, t: int) -> float | None:
        raise NotImplementedError

    def _answer(self, blocks: tuple[frozenset[int], ...], members: tuple[tuple[int, ...], ...],
                X: frozenset[int]) -> frozenset[int]:
        raise NotImplementedError

    def full_blocks(self, q: DisjointednessQuery) -> tuple[frozenset[int], ...]:
        cov = self.covering.blocks
        return tuple(frozenset().union(*(cov[i] for i in b.member_indices)) if b.member_indices
                     else frozenset() for b in q.blocks)

    def query(self, q: DisjointednessQuery) -> QWitness:
        self.calls += 1
        if len(q.blocks) != self.c:
            raise UnsupportedBlock(f"expected {self.c} blocks, got {len(q.blocks)}")
        if not self.native_union and any(b.t > 1 for b in q.blocks):
            raise UnsupportedBlock("this oracle only answers single-block queries")
        if any(not r for r in q.residuals) or not q.component:
            Q: frozenset[int] = frozenset()
        else:
            full = self.full_blocks(q)
            removed = frozenset().union(*full)
            X_host = component_of(self.g, q.component, set(range(self.g.n)) - removed)
            key = (tuple(b.member_indices for b in q.blocks), X_host)
            if key not in self._cache:
                self._cache[key] = frozenset(self._answer(full, key[0], X_host))
            Q = self._cache[key] & q.component
        w = assign(self.g, q, Q)
        if w is None:
            raise OracleViolation(f"{type(self).__name__}: returned Q does not split X")
        self.max_q = max(self.max_q, len(Q))
        return w


def _bfs_nodes(adj, sources: Iterable[int]) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(sorted(dist))
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


class PartitionOracle(QOracle):
    """(c, c*ell)-disjointedness of the parts of a c-tree-partition."""

    native_union = False

    def __init__(self, g: Graph, p):
        part_ids = [h for h in range(len(p.parts)) if p.parts[h]]
        covering = Covering(tuple(frozenset(p.parts[h]) for h in part_ids),
                            max((len(p.parts[h]) for h in part_ids), default=0), True)
        super().__init__(g, covering, p.c)
        self.p = p
        self.node_of_block = part_ids
        self.td = p.certificate.compact()
        self.H = p.quotient
        self.subtree: dict[int, frozenset[int]] = {}
        for x, bag in enumerate(self.td.bags):
            for h in bag:
                self.subtree.setdefault(h, set()).add(x)  # type: ignore[union-attr]
        self.subtree = {h: frozenset(s) for h, s in self.subtree.items()}

    def bound(self, t: int) -> float:
        return self.c * self.covering.ell

    def quotient_answer(self, vs: Sequence[int], Xq: frozenset[int]) -> frozenset[int]:
        """Q' inside the quotient component Xq for nodes v_1..v_c."""
        td = self.td
        T = [self.subtree.get(v, frozenset()) for v in vs]
        for i in range(len(vs)):
            for j in range(len(vs)):
                if i != j and not (T[i] & T[j]):
                    dist = _bfs_nodes(td.tree_adj, T[j])
                    z = min(T[i], key=lambda x: (dist.get(x, 1 << 30), x))
                    return td.bags[z] & Xq
        TX = frozenset(x for x, bag in enumerate(td.bags) if bag & Xq)
        if any(not (Ti & TX) for Ti in T):
            return frozenset()
        common = TX.intersection(*T)
        if len(common) != 1:
            raise OracleViolation(f"Helly intersection has {len(common)} nodes")
        (z,) = common
        Qp = td.bags[z] & Xq
        if len(Qp) != 1:
            raise OracleViolation("Helly bag does not have exactly one component vertex")
        return Qp

    def _answer(self, blocks, members, X):
        vs = [self.node_of_block[m[0]] for m in members]
        if len(set(vs)) < len(vs):
            return frozenset()
        part_of = self.p.part_of
        removed = set(vs)
        Xq = component_of(self.H, [part_of[next(iter(X))]], set(range(self.H.n)) - removed)
        Qp = self.quotient_answer(vs, Xq)
        Q = frozenset().union(*(self.p.parts[h] for h in Qp)) & X if Qp else frozenset()
        if len(Q) > self.bound(1):
            raise OracleViolation("partition oracle exceeded c*ell")
        return Q


def oracle_from_partition(g: Graph, p) -> PartitionOracle:
    return PartitionOracle(g, p)


class LiftedOracle(QOracle):
    """Answers unions of t blocks from a single-block oracle; |Q| <= d * t^c."""

    def __init__(self, base: QOracle, d: float | None = None):
        super().__init__(base.g, base.covering, base.c)
        self.base = base
        self.d = base.bound(1) if d is None else d
        self.measured = base.measured

    def bound(self, t: int) -> float | None:
        if self.d is None:
            return None
        return self.d * max(t, 1) ** self.c

    def _answer(self, blocks, members, X):
        cov = self.covering.blocks
        everything = set(range(self.g.n))
        Q: set[int] = set()
        for y in product(*members):
            A = tuple(cov[i] for i in y)
            removed = frozenset().union(*A)
            Xy = component_of(self.g, X, everything - removed)
            key = (tuple((i,) for i in y), Xy)
            cache = self.base._cache
            if key not in cache:
                if _has_empty_residual(A):
                    cache[key] = frozenset()
                else:
                    cache[key] = frozenset(self.base._answer(A, key[0], Xy))
            Q |= cache[key]
        self.flags |= self.base.flags
        return frozenset(Q) & X


def _has_empty_residual(blocks: Sequence[frozenset[int]]) -> bool:
    seen: frozenset[int] = frozenset()
    for b in blocks:
        if not (b - seen):
            return True
        seen = seen | b
    return False


def lift_oracle(base: QOracle, d: float | None = None) -> LiftedOracle:
    return LiftedOracle(base, d)
