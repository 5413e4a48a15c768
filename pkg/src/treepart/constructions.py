"""Explicit partition builders: subdivisions, robust-power recursions, excluded-subgraph classes."""

from __future__ import annotations

import math
from collections import deque
from typing import Callable, Sequence

from .config import budgets
from .coverings import Covering, QOracle, _has_empty_residual, oracle_from_partition
from .errors import (ClassViolation, CoreTooLarge, DegreeBoundViolated, NonCliqueRemainder,
                     PatternTooLarge)
from .graph import (FamilySpec, Graph, SubdivisionMap, components, disjoint_copies,
                    generate, robust_power, suppress_degree_two)
from .oracles import EPOracle
from .partitioner import (CTreePartition, component_partition_c0, compute_partition,
                          compute_partition_cd, partition_problems)
from .patterns import contains_pattern, greedy_packing
from .pipelines import degree_partition
from .treewidth import TreeDecomposition, decomposition_for


def _check_valid(g: Graph, p: CTreePartition, what: str) -> CTreePartition:
    problems = partition_problems(g, p)
    if problems:
        raise AssertionError(f"{what}: {problems[0]}")
    return p


def _bag_with(td_bags: list[frozenset[int]], nodes: set[int]) -> int:
    for i, b in enumerate(td_bags):
        if nodes <= b:
            return i
    raise AssertionError(f"no certificate bag holds {sorted(nodes)}")


def _pairs_from_ends(internal: Sequence[int]) -> list[frozenset[int]]:
    """{v_1, v_s}, {v_2, v_(s-1)}, ... ; the middle one is a singleton for odd s."""
    s = len(internal)
    return [frozenset({internal[i], internal[s - 1 - i]}) for i in range((s + 1) // 2)]


# subdivisions ----------------------------------------------------------------

def subdivide_partition(sm: SubdivisionMap, p: CTreePartition, c: int | None = None) -> CTreePartition:
    """Partition of ``sm.subdivided`` from a partition ``p`` of ``sm.original``.

    c >= 2: each subdivided path becomes a chain of new parts pairing its ends,
    hung off both end parts (or a chain of singletons closing a cycle when
    p has width 1).  Width stays max(width(p), ...) <= t.

    c = 1: quotient edges are oriented away from a root; on an edge between
    parts x -> y the internal vertex next to the x-side end joins V_y, so
    each part gains at most t^2 vertices and the quotient stays a forest.
    """
    c = p.c if c is None else c
    g0, g1 = sm.original, sm.subdivided
    img = sm.vertex_image
    part_of = p.part_of
    parts: list[set[int]] = [set(img[v] for v in part) for part in p.parts]
    bags: list[frozenset[int]] = list(p.certificate.bags)
    tedges: list[tuple[int, int]] = list(p.certificate.tree_edges)
    qedges: set[tuple[int, int]] = set(p.quotient.edges())
    t = p.width

    def new_part(verts) -> int:
        parts.append(set(verts))
        return len(parts) - 1

    def qedge(a: int, b: int) -> None:
        if a != b:
            qedges.add((min(a, b), max(a, b)))

    def hang_chain(anchor: int, first_bag: set[int], chain: list[int]) -> None:
        """Bags first_bag, {z1,z2}, {z2,z3}, ... attached to bag ``anchor``."""
        bags.append(frozenset(first_bag))
        tedges.append((anchor, len(bags) - 1))
        prev = len(bags) - 1
        for a, b in zip(chain, chain[1:]):
            bags.append(frozenset({a, b}))
            tedges.append((prev, len(bags) - 1))
            prev = len(bags) - 1

    if not bags and parts:
        bags.append(frozenset(range(len(parts))))

    parent: dict[int, int | None] = {}
    if c == 1:
        for comp in components(p.quotient):
            root = min(comp)
            parent[root] = None
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y in p.quotient.adj[x]:
                    if y not in parent:
                        parent[y] = x
                        queue.append(y)

    for (u, v), path in sorted(sm.paths.items()):
        internal = list(path[1:-1])
        if not internal:
            continue
        a, b = path[0], path[-1]
        x = part_of[_orig(sm, a)]
        y = part_of[_orig(sm, b)]
        if c == 1:
            if x != y:
                # tail end (parent side) gives its internal neighbour to the child part
                if parent.get(y) == x:
                    head, absorbed, rest = y, internal[0], internal[1:]
                else:
                    head, absorbed, rest = x, internal[-1], internal[:-1]
                parts[head].add(absorbed)
                if not rest:
                    continue
                chain = [new_part(pr) for pr in _pairs_from_ends(rest)]
                for z1, z2 in zip(chain, chain[1:]):
                    qedge(z1, z2)
                qedge(head, chain[0])
                anchor = _bag_with(bags, {head})
                hang_chain(anchor, {head, chain[0]}, chain)
            else:
                chain = [new_part(pr) for pr in _pairs_from_ends(internal)]
                for z1, z2 in zip(chain, chain[1:]):
                    qedge(z1, z2)
                qedge(x, chain[0])
                hang_chain(_bag_with(bags, {x}), {x, chain[0]}, chain)
            continue
        if t <= 1 and len(internal) > 1:
            # singleton cycle x - u_1 - ... - u_s - y, bags {x,y,u_1}, {y,u_i,u_(i+1)}
            us = [new_part({w}) for w in internal]
            qedge(x, us[0])
            qedge(us[-1], y)
            for z1, z2 in zip(us, us[1:]):
                qedge(z1, z2)
            anchor = _bag_with(bags, {x, y})
            bags.append(frozenset({x, y, us[0]}))
            tedges.append((anchor, len(bags) - 1))
            prev = len(bags) - 1
            for z1, z2 in zip(us, us[1:]):
                bags.append(frozenset({y, z1, z2}))
                tedges.append((prev, len(bags) - 1))
                prev = len(bags) - 1
            continue
        chain = [new_part(pr) for pr in _pairs_from_ends(internal)]
        for z1, z2 in zip(chain, chain[1:]):
            qedge(z1, z2)
        qedge(x, chain[0])
        qedge(y, chain[0])
        hang_chain(_bag_with(bags, {x, y}), {x, y, chain[0]}, chain)

    H = Graph.from_edges(len(parts), sorted(qedges))
    td = TreeDecomposition.build(bags, tedges)
    meta = {"base_width": t, "bound": (t * t + t) if c == 1 else max(t, 1)}
    return CTreePartition(tuple(frozenset(s) for s in parts), H, td, c, meta)


def _orig(sm: SubdivisionMap, x: int) -> int:
    tag = sm.branch_of[x]
    assert tag[0] == "v"
    return tag[1]


class SubdivisionOracle(QOracle):
    """Answers for the restriction of a partition of a subdivision to the branch vertices.

    Each component Y' of G' - B' meeting X gets the partition oracle's Q'_j;
    internal subdivision vertices in Q'_j or in B' are replaced by the ends of
    their subdivided edge.
    """

    native_union = False

    def __init__(self, sm: SubdivisionMap, p_sub: CTreePartition):
        self.sm = sm
        self.base = oracle_from_partition(sm.subdivided, p_sub)
        g = sm.original
        inv = {x: v for v, x in enumerate(sm.vertex_image)}
        self.inv = inv
        blocks, base_index = [], []
        for i, block in enumerate(self.base.covering.blocks):
            restricted = frozenset(inv[x] for x in block if x in inv)
            if restricted:
                blocks.append(restricted)
                base_index.append(i)
        self.base_index = base_index
        super().__init__(g, Covering(tuple(blocks), max(map(len, blocks), default=0), True),
                         p_sub.c)
        self.ell_sub = p_sub.width

    def bound(self, t):
        c, ell = self.c, self.ell_sub
        return 2 * c * ell * (c * ell + 1)

    def _ends(self, x: int) -> tuple[int, ...]:
        tag = self.sm.branch_of[x]
        if tag[0] == "v":
            return (tag[1],)
        return tag[1]

    def _answer(self, blocks, members, X):
        from .graph import component_of
        if _has_empty_residual(blocks):
            return frozenset()
        g1 = self.sm.subdivided
        img = self.sm.vertex_image
        bidx = [self.base_index[m[0]] for m in members]
        full = [self.base.covering.blocks[i] for i in bidx]
        Bp = frozenset().union(*full)
        Q: set[int] = set()
        for x in Bp:
            if self.sm.branch_of[x][0] == "e":
                Q.update(self._ends(x))
        everything = frozenset(range(g1.n))
        seen: set[int] = set()
        for v in sorted(X):
            w = img[v]
            if w in seen or w in Bp:
                continue
            Y = component_of(g1, [w], everything - Bp)
            seen |= Y
            Qj = self.base._answer(tuple(full), tuple((i,) for i in bidx), Y)
            for z in Qj:
                Q.update(self._ends(z))
        return frozenset(Q) & X


def original_partition_from_subdivision(sm: SubdivisionMap, p_sub: CTreePartition,
                                        c: int | None = None, checked: bool = False
                                        ) -> CTreePartition:
    """c-tree-partition of ``sm.original`` from one of ``sm.subdivided``.

    The blocks are the parts restricted to branch vertices; the (c, d) oracle
    with d = 2 c l (c l + 1) feeds compute_partition_cd.
    """
    c = p_sub.c if c is None else c
    g = sm.original
    if c == 0:
        parts = [frozenset(sm.vertex_image.index(x) for x in part if sm.branch_of[x][0] == "v")
                 for part in p_sub.parts]
        parts = [q for q in parts if q]
        out = CTreePartition.from_parts(g, parts, 0)
        return _check_valid(g, out, "c = 0 restriction")
    orc = SubdivisionOracle(sm, p_sub)
    ell = p_sub.width
    d = 2 * c * ell * (c * ell + 1)
    td = decomposition_for(g)
    out = compute_partition_cd(g, td, orc.covering, orc, c, d=d, checked=checked)
    tw_sub = decomposition_for(sm.subdivided).width
    out.meta["sub_width"] = ell
    out.meta["formula_bound"] = (4 * c * c * 12 ** c * (c * ell + 1) * ell * ell
                                 * (tw_sub + 1) ** c)
    return out


# robust-power recursions ---------------------------------------------------------

def _precheck_subgraph(g: Graph, pattern: Graph, flags: set[str], what: str) -> None:
    if pattern.n > budgets().pattern_n:
        flags.add("class-unchecked")
        return
    try:
        hit = contains_pattern(g, pattern)
    except PatternTooLarge:
        flags.add("class-unchecked")
        return
    if hit is not None:
        raise ClassViolation(f"graph contains {what}: {sorted(hit.values())}")


def _lift_via_power(g: Graph, td: TreeDecomposition, lower: CTreePartition, c: int,
                    checked: bool, stats: list) -> CTreePartition:
    """c-tree-partition of g using the parts of a partition of its robust power."""
    blocks = [part for part in lower.parts if part]
    if not blocks:
        return CTreePartition((), Graph.empty(0), TreeDecomposition((), ()), c, {})
    beta = Covering.from_blocks(blocks)
    orc = EPOracle(g, beta, c, td)
    out = compute_partition(g, td, beta, orc, c, checked=checked)
    stats.append({"c": c, "gamma": beta.ell, "width": out.width,
                  "max_packing": orc.max_packing, "flags": sorted(orc.flags)})
    return out


def _spider_level(g: Graph, s: int, level: int, checked: bool, stats: list) -> CTreePartition:
    """(level+1)-tree-partition of an S_{s, 2^(level+1) - 1}-free graph."""
    td = decomposition_for(g)
    if level == 0:
        out = degree_partition(g, td, checked)
        stats.append({"c": 1, "width": out.width, "delta": g.max_degree()})
        return out
    tp = 2 ** level - 1
    lam = max(1 + s + s * tp * (2 * tp + 1), td.width + 1)
    power = robust_power(g, lam)
    lower = _spider_level(power, s, level - 1, checked, stats)
    return _lift_via_power(g, td, lower, level + 1, checked, stats)


def spider_free_partition(g: Graph, s: int, t: int, checked: bool = False) -> CTreePartition:
    """(floor(log2 t) + 1)-tree-partition of a graph with no S_{s,t} subgraph."""
    if s < 3 or t < 1:
        raise ValueError("need s >= 3 and t >= 1")
    level = int(math.floor(math.log2(t)))
    flags: set[str] = set()
    _precheck_subgraph(g, generate(FamilySpec("spider", (s, t))), flags, f"S_{{{s},{t}}}")
    stats: list = []
    out = _spider_level(g, s, level, checked, stats)
    out.meta.update({"levels": stats, "s": s, "t": t})
    if flags:
        out.meta["flags"] = sorted(set(out.meta.get("flags", [])) | flags)
    return out


def _path_level(g: Graph, level: int, checked: bool, stats: list) -> CTreePartition:
    """(level-1)-tree-partition of a P_{2^(level+1) - 1}-free graph."""
    if level == 1:
        sizes = [len(x) for x in components(g)]
        out = component_partition_c0(g, max(sizes, default=0))
        stats.append({"c": 0, "width": out.width})
        return out
    td = decomposition_for(g)
    lam = max(3 + (2 ** level - 2) * (2 ** level - 1), td.width + 1)
    power = robust_power(g, lam)
    lower = _path_level(power, level - 1, checked, stats)
    return _lift_via_power(g, td, lower, level - 1, checked, stats)


def path_free_partition(g: Graph, n: int, checked: bool = False) -> CTreePartition:
    """(floor(log2 n) - 1)-tree-partition of a graph with no P_n subgraph."""
    if n < 3:
        raise ValueError("need n >= 3")
    level = int(math.floor(math.log2(n)))
    flags: set[str] = set()
    _precheck_subgraph(g, generate(FamilySpec("path", (n,))), flags, f"P_{n}")
    stats: list = []
    out = _path_level(g, level, checked, stats)
    out.meta.update({"levels": stats, "n_excluded": n})
    if flags:
        out.meta["flags"] = sorted(set(out.meta.get("flags", [])) | flags)
    return out


# excluded subgraphs with a dominant part ----------------------------------------------

def _sub_partition(g: Graph, keep: Sequence[int], build: Callable[[Graph], CTreePartition]
                   ) -> CTreePartition:
    """Run ``build`` on g[keep] and translate its parts back to g's ids."""
    sub, order = g.induced(sorted(keep))
    p = build(sub)
    parts = tuple(frozenset(order[v] for v in part) for part in p.parts)
    return CTreePartition(parts, p.quotient, p.certificate, p.c, p.meta)


def _add_dominant_part(inner: CTreePartition, extra: frozenset[int], c: int,
                       meta: dict) -> CTreePartition:
    if not extra:
        return CTreePartition(inner.parts, inner.quotient, inner.certificate, c, meta)
    m = len(inner.parts)
    edges = list(inner.quotient.edges()) + [(h, m) for h in range(m)]
    H = Graph.from_edges(m + 1, edges)
    if inner.certificate.size:
        td = TreeDecomposition.build([set(b) | {m} for b in inner.certificate.bags],
                                     inner.certificate.tree_edges)
    else:
        td = TreeDecomposition.build([{m}], [])
    return CTreePartition(inner.parts + (extra,), H, td, c, meta)


def ell_h_free_partition(g: Graph, h, ell: int,
                         inner: Callable[[Graph], CTreePartition] | None = None,
                         c_inner: int | None = None) -> CTreePartition:
    """(c+1)-tree-partition of an lH-free graph.

    A greedy maximal packing of copies of h goes into one dominant part; the
    rest is H-free and is handled by ``inner`` (by default: components as
    parts, c = 0).
    """
    hg = h if isinstance(h, Graph) else generate(h)
    packing = greedy_packing(g, hg)
    if len(packing) >= ell:
        raise ClassViolation(f"found {len(packing)} disjoint copies of the pattern")
    packed = frozenset().union(*packing) if packing else frozenset()
    assert len(packed) <= (ell - 1) * hg.n
    if inner is None:
        def inner(b: Graph) -> CTreePartition:
            return component_partition_c0(b, max((len(x) for x in components(b)), default=0))
    rest = [v for v in range(g.n) if v not in packed]
    base = _sub_partition(g, rest, inner)
    c = (base.c if c_inner is None else c_inner) + 1
    meta = {"packing": len(packing), "dominant": len(packed), "inner_width": base.width,
            "bound": max((ell - 1) * hg.n, base.width)}
    return _check_valid(g, _add_dominant_part(base, packed, c, meta), "lH-free")


# excluded induced subgraphs -------------------------------------------------------

def _star(s: int) -> Graph:
    return generate(FamilySpec("star", (s,)))


def _induced_precheck(g: Graph, pattern: Graph, what: str) -> bool:
    if pattern.n > budgets().pattern_n:
        return False
    hit = contains_pattern(g, pattern, "induced")
    if hit is not None:
        raise ClassViolation(f"graph contains an induced {what}: {sorted(hit.values())}")
    return True


def induced_star_free_partition(g: Graph, s: int, td: TreeDecomposition | None = None,
                                checked: bool = False) -> CTreePartition:
    """Tree-partition of a graph with no induced K_{1,s} via the degree pipeline.

    Such graphs have degree <= tw (s-1); the width is at most 24 (tw+1) tw (s-1).
    """
    td = td if td is not None else decomposition_for(g)
    w = max(td.width, 0)
    cap = w * (s - 1)
    for v in range(g.n):
        if g.degree(v) > cap:
            raise DegreeBoundViolated(f"vertex {v} has degree {g.degree(v)} > {cap}")
    out = degree_partition(g, td, checked)
    out.meta["degree_cap"] = cap
    out.meta["class_bound"] = 24 * (w + 1) * cap
    assert out.width <= max(out.meta["class_bound"], out.meta["bound"])
    return out


def induced_star_forest_free_partition(g: Graph, s: int, ell: int,
                                       checked: bool = False) -> CTreePartition:
    """2-tree-partition of a graph with no induced l K_{1,s}."""
    pattern = disjoint_copies(_star(s), ell)
    _induced_precheck(g, pattern, f"{ell}K_{{1,{s}}}")
    packing = greedy_packing(g, _star(s), "induced")
    packed = frozenset().union(*packing) if packing else frozenset()
    rest = [v for v in range(g.n) if v not in packed]
    td = decomposition_for(g)
    w = max(td.width, 0)

    def inner(b: Graph) -> CTreePartition:
        return induced_star_free_partition(b, s, checked=checked)

    base = _sub_partition(g, rest, inner)
    bound = max(24 * (w + 1) * w * (s - 1), len(packing) * (s + 1))
    meta = {"packing": len(packing), "dominant": len(packed), "bound": bound,
            "packing_cap": (w + 1) * (ell - 1)}
    out = _add_dominant_part(base, packed, 2, meta)
    assert out.width <= bound
    return _check_valid(g, out, "induced star-forest")


def induced_p3_forest_partition(g: Graph, k: int) -> CTreePartition:
    """Tree-partition of a graph with no induced k P_3: a star quotient."""
    p3 = generate(FamilySpec("path", (3,)))
    _induced_precheck(g, disjoint_copies(p3, k), f"{k}P_3")
    packing = greedy_packing(g, p3, "induced")
    centre = frozenset().union(*packing) if packing else frozenset()
    rest = [v for v in range(g.n) if v not in centre]
    leaves = components(g, rest)
    for comp in leaves:
        if any(not g.has_edge(a, b) for a in comp for b in comp if a < b):
            raise NonCliqueRemainder(sorted(comp))
    td = decomposition_for(g)
    w = max(td.width, 0)
    parts = list(leaves)
    edges = []
    if centre:
        parts.append(centre)
        edges = [(i, len(leaves)) for i in range(len(leaves))]
    H = Graph.from_edges(len(parts), edges)
    if centre:
        cert = TreeDecomposition.build([{i, len(leaves)} for i in range(len(leaves))]
                                       or [{len(leaves)}],
                                       [(i, i + 1) for i in range(len(leaves) - 1)])
    else:
        cert = TreeDecomposition.build([{i} for i in range(len(leaves))],
                                       [(i, i + 1) for i in range(len(leaves) - 1)])
    bound = max(3 * (k - 1) * (w + 1), w + 1)
    meta = {"packing": len(packing), "bound": bound}
    out = CTreePartition(tuple(parts), H, cert, 1, meta)
    return _check_valid(g, out, "induced P3-forest")


def induced_utw0_partition(g: Graph, mode: str, k: int | None = None) -> CTreePartition:
    """0-tree-partitions: ``mode="edgeless"`` (no induced edgeless graph on k vertices)
    gives a single part; ``mode="p3"`` (no induced P_3) gives the clique components."""
    if g.n == 0:
        return CTreePartition((), Graph.empty(0), TreeDecomposition((), ()), 0, {"bound": 0})
    td = decomposition_for(g)
    w = max(td.width, 0)
    if mode == "edgeless":
        if k is None:
            raise ValueError("edgeless mode needs k")
        _induced_precheck(g, Graph.empty(k), f"edgeless graph on {k} vertices")
        bound = (w + 1) * (k - 1)
        if g.n > bound:
            raise ClassViolation(f"{g.n} vertices exceed (tw+1)(k-1) = {bound}")
        return CTreePartition((frozenset(range(g.n)),), Graph.empty(1),
                              TreeDecomposition.build([{0}], []), 0, {"bound": bound})
    if mode in ("p3", "P<=3"):
        comps = components(g)
        for comp in comps:
            if any(not g.has_edge(a, b) for a in comp for b in comp if a < b):
                raise NonCliqueRemainder(sorted(comp))
        out = component_partition_c0(g, max(len(x) for x in comps))
        out.meta["bound"] = w + 1
        return out
    raise ValueError(f"unknown mode {mode!r}")


def k1t_partition(g: Graph, t: int) -> CTreePartition:
    """Tree-partition of width max(|core|, 2) <= 10t via the suppressed core."""
    sm = suppress_degree_two(g)
    core = sm.original
    if core.n > 10 * t:
        raise CoreTooLarge(f"core has {core.n} vertices > {10 * t}")
    trivial = CTreePartition((frozenset(range(core.n)),) if core.n else (),
                             Graph.empty(1 if core.n else 0),
                             TreeDecomposition.build([{0}], []) if core.n
                             else TreeDecomposition((), ()), 1, {})
    out = subdivide_partition(sm, trivial, 1)
    out.meta.update({"core": core.n, "bound": max(core.n, 2), "class_bound": 10 * t})
    return _check_valid(g, out, "K_{1,t} core")
