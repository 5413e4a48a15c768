import random

import pytest

from conftest import random_graph
from treepart.constructions import (induced_p3_forest_partition, induced_star_forest_free_partition,
                                    induced_star_free_partition, induced_utw0_partition,
                                    ell_h_free_partition, k1t_partition,
                                    original_partition_from_subdivision, path_free_partition,
                                    spider_free_partition, subdivide_partition)
from treepart.errors import (ClassViolation, CoreTooLarge, DegreeBoundViolated,
                             NonCliqueRemainder)
from treepart.graph import Graph, disjoint_copies, generate, subdivide
from treepart.partitioner import CTreePartition
from treepart.patterns import contains_pattern
from treepart.pipelines import degree_partition, resolve_pipeline
from treepart.treewidth import exact_treewidth
from treepart.verify import brute_optimal_partition, validate_partition


def valid(g, p, c=None):
    rep = validate_partition(g, p)
    assert rep.valid, rep.violations[:3]
    if c is not None:
        assert p.c == c
    return p


def union(*gs):
    edges, off = [], 0
    for g in gs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)


# subdivision transforms -------------------------------------------------------------

def test_subdivide_trivial_k4_c2():
    g = generate("complete 4")
    sm = subdivide(g, 1)
    p = CTreePartition.from_parts(g, [range(4)], 2)
    out = valid(sm.subdivided, subdivide_partition(sm, p, 2), 2)
    assert out.width == 4


def test_subdivide_tree_c1(rng):
    for _ in range(10):
        n = rng.randint(2, 12)
        t = Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])
        p = CTreePartition.from_parts(t, [[v] for v in range(n)], 1)
        sm = subdivide(t, {e: rng.randint(0, 4) for e in t.edges()})
        assert valid(sm.subdivided, subdivide_partition(sm, p, 1), 1).width <= 2


def test_subdivide_zero_counts_unchanged():
    g = generate("grid 3 3")
    p = degree_partition(g)
    out = subdivide_partition(subdivide(g, 0), p)
    assert out.parts == p.parts


def test_subdivide_widths_random(rng):
    for _ in range(15):
        g = random_graph(rng, rng.randint(3, 8), 0.5)
        for c in (1, 2):
            ell, p = brute_optimal_partition(g, c)
            sm = subdivide(g, {e: rng.randint(0, 5) for e in g.edges()})
            out = valid(sm.subdivided, subdivide_partition(sm, p, c), c)
            assert out.width <= (ell * ell + ell if c == 1 else max(ell, 1))


def test_original_from_identity_subdivision():
    g = generate("grid 3 4")
    sm = subdivide(g, 0)
    p = degree_partition(g)
    out = valid(g, original_partition_from_subdivision(sm, p, 1))
    assert out.width <= out.meta["formula_bound"]


def test_original_from_k4_subdivision():
    g = generate("complete 4")
    sm = subdivide(g, 1)
    ell, p_sub = brute_optimal_partition(sm.subdivided, 2, max_n=10)
    assert ell == 2
    out = valid(g, original_partition_from_subdivision(sm, p_sub, 2, checked=True), 2)
    tw_sub = exact_treewidth(sm.subdivided)[0]
    assert out.meta["formula_bound"] == 4 * 4 * 144 * (2 * ell + 1) * ell ** 2 * (tw_sub + 1) ** 2
    assert out.width <= out.meta["formula_bound"]


def test_original_from_subdivided_path(rng):
    g = generate("path 6")
    sm = subdivide(g, {e: rng.randint(0, 3) for e in g.edges()})
    p_sub = degree_partition(sm.subdivided)
    valid(g, original_partition_from_subdivision(sm, p_sub, 1), 1)


# robust-power recursions ---------------------------------------------------------------

def test_spider_base_case_is_degree_pipeline():
    g = generate("cycle 30")
    p = valid(g, spider_free_partition(g, 3, 1), 1)
    assert p.width <= 24 * (2 + 1) * 2  # cycles have treewidth 2


def test_spider_p10():
    g = generate("path 10")
    valid(g, spider_free_partition(g, 3, 2), 2)


def test_spider_closure():
    g = generate("ccl 2 4")
    p = valid(g, spider_free_partition(g, 3, 4), 3)
    assert "class-unchecked" in p.meta.get("flags", [])


def test_path_free_examples():
    g = Graph.from_edges(7, [(0, 1), (2, 3), (4, 5)])
    p = valid(g, path_free_partition(g, 3), 0)
    assert p.width <= 2
    valid(generate("ccl 1 5"), path_free_partition(generate("ccl 1 5"), 4), 1)
    valid(generate("ccl 2 3"), path_free_partition(generate("ccl 2 3"), 8), 2)


def test_path_free_rejects_long_path():
    with pytest.raises(ClassViolation):
        path_free_partition(generate("path 6"), 4)


def test_ell_h_free_examples():
    g = union(generate("path 3"), generate("path 2"))
    p = valid(g, ell_h_free_partition(g, "path 3", 2))
    assert p.meta["packing"] == 1 and p.meta["dominant"] == 3
    assert p.meta["dominant"] <= (2 - 1) * 3
    free = Graph.from_edges(4, [(0, 1), (2, 3)])
    q = valid(free, ell_h_free_partition(free, "path 3", 2))
    assert q.meta["packing"] == 0 and all(q.parts)
    with pytest.raises(ClassViolation):
        ell_h_free_partition(disjoint_copies(generate("path 3"), 2), "path 3", 2)


# induced-subgraph classes ----------------------------------------------------------------

def test_induced_star_clique():
    g = generate("complete 7")
    p = valid(g, induced_star_free_partition(g, 2), 1)
    assert p.width <= 24 * 6 * 6


def test_induced_star_violation():
    with pytest.raises((DegreeBoundViolated, ClassViolation)):
        induced_star_free_partition(generate("star 5"), 3)


def test_induced_star_line_graph():
    g = generate("path 4")  # line graph of P5
    valid(g, induced_star_free_partition(g, 3), 1)


def test_induced_star_forest():
    g = generate("complete 6")
    p = valid(g, induced_star_forest_free_partition(g, 3, 2), 2)
    assert p.meta["packing"] == 0
    k26 = generate("complete_bipartite 2 6")
    q = valid(k26, induced_star_forest_free_partition(k26, 3, 2), 2)
    assert q.width <= q.meta["bound"]


def test_induced_p3_forest():
    cliques = union(generate("complete 3"), generate("complete 4"))
    p = valid(cliques, induced_p3_forest_partition(cliques, 2), 1)
    assert p.width == 4
    p3 = generate("path 3")
    q = valid(p3, induced_p3_forest_partition(p3, 2), 1)
    assert len(q.parts) == 1 and q.width == 3
    mix = union(generate("path 3"), generate("complete 3"))
    r = valid(mix, induced_p3_forest_partition(mix, 2), 1)
    assert sorted(map(len, r.parts)) == [3, 3]
    with pytest.raises((NonCliqueRemainder, ClassViolation)):
        induced_p3_forest_partition(disjoint_copies(p3, 2), 2)


def test_induced_utw0():
    g = union(generate("complete 3"), generate("complete 2"))
    p = valid(g, induced_utw0_partition(g, "p3"), 0)
    assert p.width == exact_treewidth(g)[0] + 1
    k5 = generate("complete 5")
    q = valid(k5, induced_utw0_partition(k5, "edgeless", 3), 0)
    assert q.width == 5 <= 5 * 2
    assert induced_utw0_partition(Graph.empty(0), "p3").parts == ()


def test_k1t_examples():
    g = generate("path 40")
    assert valid(g, k1t_partition(g, 3), 1).width <= 2
    sub = subdivide(generate("complete 4"), 1).subdivided
    valid(sub, k1t_partition(sub, 4), 1)
    with pytest.raises(CoreTooLarge):
        k1t_partition(generate("star 50"), 3)


# robust power lemmas -----------------------------------------------------------------------

def test_robust_power_keeps_treewidth(rng):
    from treepart.graph import robust_power
    for _ in range(30):
        g = random_graph(rng, rng.randint(2, 10), rng.uniform(0.2, 0.8))
        w = exact_treewidth(g)[0]
        for lam in (w + 1, w + 2):
            assert exact_treewidth(robust_power(g, lam))[0] <= w


def test_pipelines_by_name():
    g = generate("grid 4 4")
    for name in ("degree", "minor-free:3", "topo:4", "k2t", "path:12", "spider:3,4"):
        try:
            p = resolve_pipeline(name)(g)
        except ClassViolation:
            continue
        valid(g, p)
    with pytest.raises(ValueError):
        resolve_pipeline("nope")
    with pytest.raises(ValueError):
        resolve_pipeline("outer-k:1")(g)
