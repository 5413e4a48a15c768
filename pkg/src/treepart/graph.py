"""Simple undirected graphs on vertices 0..n-1, generators and transforms."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InvalidSpec, NotASubdivision
from .flow import count_disjoint_paths


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph; ``adj[v]`` is the sorted tuple of neighbours of v."""

    adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    _sets: tuple[frozenset[int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        sets = tuple(frozenset(a) for a in self.adj)
        for v, nb in enumerate(self.adj):
            if v in sets[v]:
                raise ValueError(f"loop at {v}")
            if list(nb) != sorted(sets[v]) or len(nb) != len(sets[v]):
                raise ValueError(f"adjacency of {v} not strictly sorted")
            for w in nb:
                if not 0 <= w < len(self.adj) or v not in sets[w]:
                    raise ValueError(f"asymmetric adjacency {v}-{w}")
        if self.labels is not None and len(self.labels) != len(self.adj):
            raise ValueError("label count differs from vertex count")
        object.__setattr__(self, "_sets", sets)

    # construction ---------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(tuple(tuple(sorted(s)) for s in nbrs),
                   None if labels is None else tuple(labels))

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(tuple(() for _ in range(n)))

    # queries --------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield (u, v)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def label(self, v: int) -> str:
        return "" if self.labels is None else self.labels[v]

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph relabelled densely; returns it with the old ids in order."""
        order = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(order)}
        adj = tuple(tuple(sorted(index[w] for w in self.adj[v] if w in index)) for v in order)
        labels = None if self.labels is None else tuple(self.labels[v] for v in order)
        return Graph(adj, labels), order

    def relabel(self, labels: Sequence[str]) -> "Graph":
        return Graph(self.adj, tuple(labels))


def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components of g (or of g[within]), ordered by smallest vertex."""
    allowed = set(range(g.n)) if within is None else set(within)
    seen: set[int] = set()
    out = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adj[v]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        out.append(frozenset(comp))
    return out


def component_of(g: Graph, start: Iterable[int], within: Iterable[int]) -> frozenset[int]:
    """Vertices of g[within] reachable from ``start``."""
    allowed = set(within)
    comp = {s for s in start if s in allowed}
    queue = deque(comp)
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if w in allowed and w not in comp:
                comp.add(w)
                queue.append(w)
    return frozenset(comp)


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Open neighbourhood N(S)."""
    s = set(s)
    out: set[int] = set()
    for v in s:
        out.update(g.adj[v])
    return frozenset(out - s)


def is_connected(g: Graph, within: Iterable[int] | None = None) -> bool:
    return len(components(g, within)) <= 1


# text format ---------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty graph file")
    n, m = (int(x) for x in rows[0][:2])
    edges = []
    for row in rows[1:1 + m]:
        u, v = int(row[0]), int(row[1])
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"bad edge {u} {v}")
        edges.append((min(u, v), max(u, v)))
    if len(edges) != m:
        raise ValueError(f"expected {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


# transforms ----------------------------------------------------------

def disjoint_copies(g: Graph, ell: int) -> Graph:
    """``ell`` disjoint copies; copy i occupies ids [i*n, (i+1)*n)."""
    if ell < 1:
        raise InvalidSpec("copy count must be positive")
    n = g.n
    adj = tuple(tuple(w + i * n for w in g.adj[v]) for i in range(ell) for v in range(n))
    labels = None
    if g.labels is not None:
        labels = tuple(f"copy {i}: {g.labels[v]}" for i in range(ell) for v in range(n))
    return Graph(adj, labels)


def add_dominant(g: Graph, label: str = "dominant") -> Graph:
    """Add vertex n adjacent to every existing vertex."""
    n = g.n
    adj = tuple(a + (n,) for a in g.adj) + (tuple(range(n)),)
    labels = None if g.labels is None else g.labels + (label,)
    return Graph(adj, labels)


@dataclass(frozen=True)
class SubdivisionMap:
    """A graph ``original`` and a subdivision ``subdivided`` of it.

    ``vertex_image[v]`` is the branch vertex of original vertex v, ``paths[(u, v)]``
    the path (u < v, listed from u's image) replacing edge uv, and
    ``branch_of[x]`` is ``("v", v)`` or ``("e", (u, v), i)`` for the i-th internal
    vertex of that path.
    """

    original: Graph
    subdivided: Graph
    vertex_image: tuple[int, ...]
    paths: dict
    branch_of: tuple

    def internal(self, edge: tuple[int, int]) -> tuple[int, ...]:
        return self.paths[edge][1:-1]


def subdivide(g: Graph, counts) -> SubdivisionMap:
    """Replace each edge uv by a path with ``counts[(u, v)]`` internal vertices.

    ``counts`` is a mapping keyed by sorted edge, or a single int for all edges.
    New vertices get ids n, n+1, ... in edge order, listed from the smaller end.
    """
    edges = list(g.edges())
    if isinstance(counts, int):
        counts = {e: counts for e in edges}
    nxt = g.n
    new_edges = []
    paths = {}
    branch: list = [("v", v) for v in range(g.n)]
    for u, v in edges:
        c = counts[(u, v)]
        if c < 0:
            raise InvalidSpec("negative subdivision count")
        path = [u] + list(range(nxt, nxt + c)) + [v]
        for i in range(c):
            branch.append(("e", (u, v), i + 1))
        nxt += c
        paths[(u, v)] = tuple(path)
        new_edges.extend(zip(path, path[1:]))
    labels = None
    if g.labels is not None:
        labels = list(g.labels) + [f"subdivision {b[1]} #{b[2]}" for b in branch[g.n:]]
    sub = Graph.from_edges(nxt, new_edges, labels)
    return SubdivisionMap(g, sub, tuple(range(g.n)), paths, tuple(branch))


def suppress_degree_two(g: Graph, strict: bool = False) -> SubdivisionMap:
    """Express g as a subdivision of a smaller simple graph (its core).

    Degree-2 vertices are suppressed.  Where full suppression would create a
    loop or a parallel edge, a few degree-2 vertices stay in the core (a loop
    keeps two, spaced evenly; a parallel chain keeps its middle vertex; a
    cycle component keeps three).  With ``strict`` that situation raises
    NotASubdivision instead.
    """
    deg2 = [g.degree(v) == 2 for v in range(g.n)]
    keep = {v for v in range(g.n) if not deg2[v]}
    chains = []  # (u, internal list, w) with u, w branch vertices
    seen_internal: set[int] = set()
    direct = set()
    for u in sorted(keep):
        for w in g.adj[u]:
            if not deg2[w]:
                if u < w:
                    direct.add((u, w))
                continue
            if w in seen_internal:
                continue
            internal = [w]
            prev, cur = u, w
            while deg2[cur]:
                a, b = g.adj[cur]
                nxt = b if a == prev else a
                if not deg2[nxt]:
                    break
                internal.append(nxt)
                prev, cur = cur, nxt
            end = nxt
            seen_internal.update(internal)
            chains.append((u, internal, end))
    cycles = []
    for comp in components(g, [v for v in range(g.n) if deg2[v] and v not in seen_internal]):
        start = min(comp)
        order = [start]
        prev, cur = None, start
        while True:
            a, b = g.adj[cur]
            nxt = a if a != prev else b
            if prev is None:
                nxt = min(a, b)
            if nxt == start:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        cycles.append(order)

    used_pairs = set(direct)
    for u, internal, w in chains:
        pair = (min(u, w), max(u, w))
        if u == w:
            if strict:
                raise NotASubdivision(f"suppressing chain at {u} creates a loop")
            L = len(internal)
            keep.update({internal[L // 3], internal[(2 * L) // 3]} if L > 2 else set(internal))
        elif pair in used_pairs:
            if strict:
                raise NotASubdivision(f"suppressing chain {u}-{w} creates a parallel edge")
            keep.add(internal[(len(internal) - 1) // 2])
        else:
            used_pairs.add(pair)
    for order in cycles:
        if strict:
            raise NotASubdivision("a cycle component has no branch vertex")
        L = len(order)
        keep.update({order[0], order[L // 3], order[(2 * L) // 3]})

    core_ids = sorted(keep)
    index = {v: i for i, v in enumerate(core_ids)}
    branch: list = [None] * g.n
    for v in core_ids:
        branch[v] = ("v", index[v])
    paths = {}
    core_edges = []
    done: set[int] = set()
    for s in core_ids:
        for w in g.adj[s]:
            if w in done:
                continue
            walk = [s]
            prev, cur = s, w
            while cur not in keep:
                walk.append(cur)
                a, b = g.adj[cur]
                prev, cur = cur, (b if a == prev else a)
            walk.append(cur)
            a, b = index[walk[0]], index[walk[-1]]
            if a > b:
                walk.reverse()
                a, b = b, a
            if (a, b) in paths:
                continue
            paths[(a, b)] = tuple(walk)
            core_edges.append((a, b))
            for pos, x in enumerate(walk[1:-1], start=1):
                branch[x] = ("e", (a, b), pos)
                done.add(x)
    core = Graph.from_edges(len(core_ids), core_edges)
    return SubdivisionMap(core, g, tuple(core_ids), paths, tuple(branch))


def robust_power(g: Graph, lam: int) -> Graph:
    """G^(lam): uv is an edge iff G has lam internally disjoint u-v paths."""
    if lam < 1:
        raise InvalidSpec("lambda must be at least 1")
    edges = []
    comp_of = {}
    for i, comp in enumerate(components(g)):
        for v in comp:
            comp_of[v] = i
    for u in range(g.n):
        if g.degree(u) < lam:
            continue
        for v in range(u + 1, g.n):
            if g.degree(v) < lam or comp_of[u] != comp_of[v]:
                continue
            if count_disjoint_paths(g, u, v, lam) >= lam:
                edges.append((u, v))
    return Graph.from_edges(g.n, edges, g.labels)


# families ------------------------------------------------------------

_ARITY = {
    "path": 1, "cycle": 1, "star": 1, "complete": 1, "edgeless": 1,
    "complete_bipartite": 2, "grid": 2, "spider": 2, "fan": 1,
    "gcl": 2, "ccl": 2, "spider_lb": 2, "clump_gadget": 2,
}
_ALIASES = {"kbip": "complete_bipartite", "k": "complete", "bipartite": "complete_bipartite",
            "clump": "clump_gadget", "j": "spider_lb"}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise InvalidSpec(f"unknown family {self.kind!r}")
        if len(self.params) != _ARITY[self.kind]:
            raise InvalidSpec(f"{self.kind} takes {_ARITY[self.kind]} parameter(s)")
        if any(p < 0 for p in self.params):
            raise InvalidSpec("parameters must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Accepts 'gcl 3 2', 'ccl-2-2', 'grid5x5', 'path 4' and similar."""
        t = text.strip().lower()
        m = re.fullmatch(r"grid\s*(\d+)\s*x\s*(\d+)", t)
        if m:
            return cls("grid", (int(m.group(1)), int(m.group(2))))
        parts = [p for p in re.split(r"[\s,:\-]+", t) if p]
        if not parts:
            raise InvalidSpec("empty family spec")
        kind = _ALIASES.get(parts[0], parts[0])
        try:
            params = tuple(int(p) for p in parts[1:])
        except ValueError as exc:
            raise InvalidSpec(f"bad parameters in {text!r}") from exc
        return cls(kind, params)

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.params)])


def _path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _closure_family(c: int, ell: int, base: Graph, tag: str) -> Graph:
    g = base
    for level in range(1, c + 1):
        g = add_dominant(disjoint_copies(g, ell), f"dominant level {level}")
    return g


def generate(spec: FamilySpec | str) -> Graph:
    """Build the named graph.  Id layouts:

    path/cycle: 0..n-1 in order; star s: centre 0; complete_bipartite s t: the
    s side first; grid a b: row-major r*b + c; spider s t: centre 0 and leg i
    at 1+i*t .. (i+1)*t (nearest the centre first); fan l: path 0..l-1 then the
    apex; gcl/ccl c l: l copies of level c-1 then the dominant vertex last;
    spider_lb c N: path p_0..p_N then the attached closures edge by edge;
    clump_gadget t n: clique v_1..v_{t-1} then the path x_1..x_n.
    """
    if isinstance(spec, str):
        spec = FamilySpec.parse(spec)
    k, p = spec.kind, spec.params
    if k == "path":
        (n,) = p
        g = _path(n)
        return g.relabel([f"p{i}" for i in range(n)])
    if k == "edgeless":
        return Graph.empty(p[0])
    if k == "cycle":
        (n,) = p
        if n < 3:
            raise InvalidSpec("cycle needs n >= 3")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if k == "star":
        (s,) = p
        return Graph.from_edges(s + 1, [(0, i) for i in range(1, s + 1)],
                                ["centre"] + [f"leaf {i}" for i in range(1, s + 1)])
    if k == "complete":
        (n,) = p
        return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if k == "complete_bipartite":
        s, t = p
        return Graph.from_edges(s + t, [(i, s + j) for i in range(s) for j in range(t)])
    if k == "grid":
        a, b = p
        edges = []
        for r in range(a):
            for c in range(b):
                v = r * b + c
                if c + 1 < b:
                    edges.append((v, v + 1))
                if r + 1 < a:
                    edges.append((v, v + b))
        return Graph.from_edges(a * b, edges)
    if k == "spider":
        s, t = p
        if s < 2 or t < 1:
            raise InvalidSpec("spider needs s >= 2 and t >= 1")
        edges, labels = [], ["centre"]
        for i in range(s):
            prev = 0
            for j in range(t):
                v = 1 + i * t + j
                edges.append((prev, v))
                labels.append(f"leg {i}, depth {j + 1}")
                prev = v
        return Graph.from_edges(1 + s * t, edges, labels)
    if k == "fan":
        (ell,) = p
        if ell < 1:
            raise InvalidSpec("fan needs a path of at least one vertex")
        return add_dominant(_path(ell), "apex").relabel(
            [f"p{i}" for i in range(ell)] + ["apex"])
    if k in ("gcl", "ccl"):
        c, ell = p
        if ell < 1 or (k == "gcl" and c < 1):
            raise InvalidSpec(f"{k} needs c >= 1 and l >= 1")
        if k == "gcl":
            base = _path(ell + 1).relabel([f"p{i}" for i in range(ell + 1)])
            return _closure_family(c - 1, ell, base, k)
        return _closure_family(c, ell, Graph.empty(1).relabel(["leaf"]), k)
    if k == "spider_lb":
        c, N = p
        if c < 1 or N < 1:
            raise InvalidSpec("spider_lb needs c >= 1 and N >= 1")
        inner = generate(FamilySpec("ccl", (c - 1, N)))
        edges = [(i, i + 1) for i in range(N)]
        labels = [f"p{i}" for i in range(N + 1)]
        nxt = N + 1
        for i in range(N):
            for copy in range(2 * N - 1):
                off = nxt
                for u, v in inner.edges():
                    edges.append((off + u, off + v))
                for x in range(inner.n):
                    edges.append((i, off + x))
                    edges.append((i + 1, off + x))
                    labels.append(f"edge {i}, copy {copy} of C_{{{c - 1},{N}}}")
                nxt += inner.n
        return Graph.from_edges(nxt, edges, labels)
    if k == "clump_gadget":
        t, n = p
        if t < 2 or n < 1:
            raise InvalidSpec("clump_gadget needs t >= 2 and n >= 1")
        q = t - 1
        edges = [(i, j) for i in range(q) for j in range(i + 1, q)]
        edges += [(q + j, q + j + 1) for j in range(n - 1)]
        for j in range(1, n + 1):
            i = (j - 1) % q  # v_{i+1} meets x_j when j = i+1 mod (t-1)
            edges.append((i, q + j - 1))
        labels = [f"v{i + 1}" for i in range(q)]
        labels += [f"clump {(j - 1) // q}, slot {(j - 1) % q + 1}" for j in range(1, n + 1)]
        return Graph.from_edges(q + n, edges, labels)
    raise InvalidSpec(f"unknown family {k!r}")
