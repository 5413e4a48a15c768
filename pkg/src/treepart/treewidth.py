"""Tree decompositions: validation, exact and heuristic treewidth, separators."""

from __future__ import annotations

from itertools import combinations
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .config import budgets
from .errors import InvalidDecomposition, NoBalancedBag, TooLarge
from .graph import Graph, components


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, bags: Iterable[Iterable[int]], edges: Iterable[tuple[int, int]]):
        return cls(tuple(frozenset(b) for b in bags),
                   tuple((min(a, b), max(a, b)) for a, b in edges))

    @property
    def size(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @cached_property
    def tree_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(a)) for a in adj)

    def nodes_containing(self, v: int) -> list[int]:
        return [x for x, b in enumerate(self.bags) if v in b]

    def restrict(self, vertices: Iterable[int]) -> "TreeDecomposition":
        """Same tree with every bag intersected with ``vertices``."""
        keep = frozenset(vertices)
        return TreeDecomposition(tuple(b & keep for b in self.bags), self.tree_edges)

    def compact(self) -> "TreeDecomposition":
        """Contract tree edges whose one bag is a subset of the other."""
        bags = list(self.bags)
        alive = [True] * len(bags)
        adj = [set(a) for a in self.tree_adj]
        changed = True
        while changed:
            changed = False
            for x in range(len(bags)):
                if not alive[x]:
                    continue
                for y in sorted(adj[x]):
                    if bags[x] <= bags[y]:
                        # merge x into y
                        for z in adj[x]:
                            if z != y:
                                adj[z].discard(x)
                                adj[z].add(y)
                                adj[y].add(z)
                        adj[y].discard(x)
                        adj[x] = set()
                        alive[x] = False
                        changed = True
                        break
        index = {}
        for x in range(len(bags)):
            if alive[x]:
                index[x] = len(index)
        new_bags = [bags[x] for x in index]
        edges = {(min(index[x], index[y]), max(index[x], index[y]))
                 for x in index for y in adj[x]}
        return TreeDecomposition.build(new_bags, sorted(edges))

    def relabel_vertices(self, mapping) -> "TreeDecomposition":
        return TreeDecomposition(tuple(frozenset(mapping[v] for v in b) for b in self.bags),
                                 self.tree_edges)


def validate_td(g: Graph, td: TreeDecomposition, vertices: Iterable[int] | None = None) -> int:
    """Check the tree-decomposition conditions for g; return the width."""
    t = td.size
    verts = set(range(g.n)) if vertices is None else set(vertices)
    if t == 0:
        if verts:
            raise InvalidDecomposition("vertex-coverage", min(verts))
        return -1
    for a, b in td.tree_edges:
        if not (0 <= a < t and 0 <= b < t) or a == b:
            raise InvalidDecomposition("tree", (a, b))
    if len(set(td.tree_edges)) != t - 1 or not _tree_connected(td):
        raise InvalidDecomposition("tree", "not a tree")
    for b in td.bags:
        stray = b - verts
        if stray:
            raise InvalidDecomposition("vertex-coverage", min(stray))
    for u, v in g.edges():
        if u in verts and v in verts and not any(u in b and v in b for b in td.bags):
            raise InvalidDecomposition("edge-coverage", (u, v))
    for v in sorted(verts):
        nodes = set(td.nodes_containing(v))
        if not nodes:
            raise InvalidDecomposition("vertex-coverage", v)
        if not _connected_in_tree(td, nodes):
            raise InvalidDecomposition("connectivity", v)
    return td.width


def _tree_connected(td: TreeDecomposition) -> bool:
    return _connected_in_tree(td, set(range(td.size)))


def _connected_in_tree(td: TreeDecomposition, nodes: set[int]) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in td.tree_adj[x]:
            if y in nodes and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == nodes


# elimination orderings -------------------------------------------------

def td_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Decomposition induced by eliminating vertices in ``order``."""
    n = g.n
    if n == 0:
        return TreeDecomposition((), ())
    pos = {v: i for i, v in enumerate(order)}
    nbrs = [set(g.neighbors(v)) for v in range(n)]
    bags = []
    higher = []
    for v in order:
        later = {w for w in nbrs[v] if pos[w] > pos[v]}
        for a in later:
            nbrs[a] |= later - {a}
        bags.append(frozenset(later | {v}))
        higher.append(later)
    edges = []
    roots = []
    for i, v in enumerate(order):
        if higher[i]:
            parent = min(higher[i], key=lambda w: pos[w])
            edges.append((i, pos[parent]))
        else:
            roots.append(i)
    for r in roots[:-1]:
        edges.append((r, roots[-1]))
    return TreeDecomposition.build(bags, edges)


def min_fill_ordering(g: Graph) -> list[int]:
    nbrs = [set(g.neighbors(v)) for v in range(g.n)]
    alive = set(range(g.n))
    order = []
    while alive:
        best, best_key = None, None
        for v in alive:
            nb = list(nbrs[v])
            fill = 0
            for i, a in enumerate(nb):
                na = nbrs[a]
                for b in nb[i + 1:]:
                    if b not in na:
                        fill += 1
            key = (fill, len(nb), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        v = best
        nb = nbrs[v]
        for a in nb:
            nbrs[a] |= nb - {a}
            nbrs[a].discard(v)
        alive.discard(v)
        order.append(v)
    return order


def heuristic_td(g: Graph) -> TreeDecomposition:
    """Min-fill elimination decomposition (compacted)."""
    return td_from_ordering(g, min_fill_ordering(g)).compact()


# exact treewidth ---------------------------------------------------------

def _masks(g: Graph) -> list[int]:
    out = []
    for v in range(g.n):
        m = 0
        for w in g.adj[v]:
            m |= 1 << w
        out.append(m)
    return out


def _q_set(adj: list[int], s: int, v: int) -> int:
    """Vertices outside S+v reachable from v through S (eliminated graph neighbours)."""
    reach = 1 << v
    frontier = adj[v] & s
    reach |= frontier
    result = adj[v]
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        w = low.bit_length() - 1
        result |= adj[w]
        new = adj[w] & s & ~reach
        reach |= new
        frontier |= new
    return result & ~s & ~(1 << v)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mmd_lower_bound(g: Graph) -> int:
    nbrs = [set(g.neighbors(v)) for v in range(g.n)]
    alive = set(range(g.n))
    lb = 0
    while len(alive) > 1:
        v = min(alive, key=lambda x: (len(nbrs[x]), x))
        d = len(nbrs[v])
        lb = max(lb, d)
        if d == 0:
            alive.discard(v)
            continue
        # contract v into its lowest-degree neighbour (minor-min-width)
        u = min(nbrs[v], key=lambda x: (len(nbrs[x]), x))
        for w in nbrs[v]:
            nbrs[w].discard(v)
            if w != u:
                nbrs[w].add(u)
                nbrs[u].add(w)
        alive.discard(v)
    return lb


def _decide(adj: list[int], full: int, k: int, budget_states: int):
    """Elimination prefix of a width-<=k ordering, or None."""
    failed: set[int] = set()
    n_states = [0]

    def rec(s: int, prefix: list[int]):
        rest = full & ~s
        if _popcount(rest) <= k + 1:
            return prefix
        if s in failed:
            return None
        n_states[0] += 1
        if n_states[0] > budget_states:
            raise TooLarge("treewidth search exceeded its state budget")
        options = []
        r = rest
        while r:
            low = r & -r
            r ^= low
            v = low.bit_length() - 1
            q = _q_set(adj, s, v)
            size = _popcount(q)
            if size > k:
                continue
            if _is_clique(adj, s, q):
                # simplicial vertex: eliminating it first is always safe
                options = [(v, size)]
                break
            options.append((v, size))
        options.sort(key=lambda t: t[1])
        for v, _ in options:
            prefix.append(v)
            got = rec(s | (1 << v), prefix)
            if got is not None:
                return got
            prefix.pop()
        failed.add(s)
        return None

    return rec(0, [])


def _is_clique(adj: list[int], s: int, q: int) -> bool:
    rest = q
    while rest:
        low = rest & -rest
        rest ^= low
        w = low.bit_length() - 1
        others = q & ~low
        if others & ~_q_set(adj, s, w):
            return False
    return True


def exact_treewidth(g: Graph, max_n: int | None = None) -> tuple[int, TreeDecomposition]:
    """Optimal width with a certifying decomposition (subset search over elimination prefixes)."""
    limit = budgets().treewidth_n if max_n is None else max_n
    if g.n > limit:
        raise TooLarge(f"exact treewidth budget is n <= {limit}, got {g.n}")
    if g.n == 0:
        return -1, TreeDecomposition((), ())
    heur = td_from_ordering(g, min_fill_ordering(g))
    ub = heur.width
    lb = _mmd_lower_bound(g)
    if lb >= ub:
        return ub, heur.compact()
    adj = _masks(g)
    full = (1 << g.n) - 1
    for k in range(lb, ub):
        prefix = _decide(adj, full, k, 50_000_000)
        if prefix is not None:
            rest = [v for v in range(g.n) if v not in set(prefix)]
            td = td_from_ordering(g, prefix + rest)
            assert td.width <= k
            return td.width, td.compact()
    return ub, heur.compact()


def treewidth_at_most(g: Graph, k: int) -> bool:
    """Decision version of exact treewidth (no decomposition)."""
    if g.n <= k + 1:
        return True
    if _mmd_lower_bound(g) > k:
        return False
    if td_from_ordering(g, min_fill_ordering(g)).width <= k:
        return True
    return _decide(_masks(g), (1 << g.n) - 1, k, 50_000_000) is not None


def treewidth_by_orderings(g: Graph) -> int:
    """Independent brute force: minimum width over all elimination orderings."""
    from itertools import permutations

    if g.n == 0:
        return -1
    best = g.n - 1
    for order in permutations(range(g.n)):
        nbrs = [set(g.neighbors(v)) for v in range(g.n)]
        width = 0
        for v in order:
            nb = nbrs[v]
            width = max(width, len(nb))
            if width >= best:
                break
            for a in nb:
                nbrs[a] |= nb - {a}
                nbrs[a].discard(v)
        best = min(best, width)
    return best


def decomposition_for(g: Graph, exact_ok: bool = True) -> TreeDecomposition:
    """Exact decomposition when within budget, else the min-fill heuristic."""
    if exact_ok and g.n <= budgets().treewidth_n:
        return exact_treewidth(g)[1]
    return heuristic_td(g)


# separators --------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]


def balanced_separator(g: Graph, td: TreeDecomposition, R: Iterable[int],
                       vertices: Iterable[int] | None = None) -> Separation:
    """Split g (or g[vertices]) by a bag C so each side holds <= 2/3 of R minus C.

    Whole bags are tried first; C falls back to a subset of a bag when needed.
    """
    verts = frozenset(range(g.n) if vertices is None else vertices)
    R = frozenset(R) & verts
    if not R:
        raise ValueError("R must be nonempty")
    scored = []
    for x, bag in enumerate(td.bags):
        C = bag & verts
        comps = components(g, verts - C)
        weights = [len(c & R) for c in comps]
        scored.append((max(weights, default=0), x, C, comps, weights))
    scored.sort(key=lambda t: (t[0], t[1]))
    for _, x, C, comps, weights in scored:
        sep = _bin(R, C, comps, weights)
        if sep is not None:
            return sep
    # A whole bag can leave too little of R outside C (e.g. one R-vertex);
    # shrinking C to a subset of a bag then restores the 2/3 split.
    for _, x, bag, _, _ in scored:
        movable = sorted(bag)
        for size in range(1, min(len(movable), _SUBSET_DEPTH) + 1):
            for drop in combinations(movable, size):
                C = bag - frozenset(drop)
                comps = components(g, verts - C)
                sep = _bin(R, C, comps, [len(c & R) for c in comps])
                if sep is not None:
                    return sep
    raise NoBalancedBag("no bag splits R within the 2/3 bound")


_SUBSET_DEPTH = 4


def _bin(R, C, comps, weights) -> Separation | None:
    """Greedy largest-first binning of components into two sides."""
    total = len(R - C)
    A: set[int] = set()
    B: set[int] = set()
    wa = wb = 0
    for w, comp in sorted(zip(weights, comps), key=lambda t: (-t[0], min(t[1]))):
        if wa <= wb:
            A |= comp
            wa += w
        else:
            B |= comp
            wb += w
    if 3 * wa <= 2 * total and 3 * wb <= 2 * total:
        return Separation(frozenset(A), frozenset(B), C)
    return None


# text format ---------------------------------------------------------------

def format_td(td: TreeDecomposition) -> str:
    lines = [f"{td.size} {td.size}"]
    for x, b in enumerate(td.bags):
        lines.append(f"{x}: " + " ".join(map(str, sorted(b))))
    lines.extend(f"{a} {b}" for a, b in td.tree_edges)
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    t, b = (int(x) for x in rows[0].split()[:2])
    bags: list[frozenset[int]] = [frozenset()] * t
    for row in rows[1:1 + b]:
        node, _, rest = row.partition(":")
        bags[int(node)] = frozenset(int(v) for v in rest.split())
    edges = []
    for row in rows[1 + b:1 + b + max(t - 1, 0)]:
        a, c = row.split()[:2]
        edges.append((int(a), int(c)))
    return TreeDecomposition.build(bags, edges)
