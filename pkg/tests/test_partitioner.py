import random

import pytest
from hypothesis import given, settings

from conftest import graphs, random_graph
from treepart.coverings import oracle_from_partition, singleton_partition
from treepart.errors import ComponentTooLarge
from treepart.graph import Graph, generate
from treepart.oracles import DegreeOracle, OuterKPlanarOracle, CircularDrawing
from treepart.partitioner import (CTreePartition, component_partition_c0, compute_partition,
                                  compute_partition_cd, format_partition, parse_partition,
                                  partition_problems)
from treepart.treewidth import exact_treewidth, heuristic_td
from treepart.verify import brute_optimal_partition, validate_partition


def test_c0_examples():
    p = component_partition_c0(Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)]), 2)
    assert len(p.parts) == 3 and p.width == 2 and p.c == 0 and p.quotient.m == 0
    assert component_partition_c0(Graph.empty(5), 1).width == 1
    with pytest.raises(ComponentTooLarge):
        component_partition_c0(generate("path 3"), 2)


def test_small_graph_gets_trivial_partition():
    g = generate("cycle 6")
    td = exact_treewidth(g)[1]
    p = compute_partition(g, td, singleton_partition(g), DegreeOracle(g), 1)
    assert len(p.parts) == 1 and p.quotient.n == 1 and p.meta["trivial"]
    assert not partition_problems(g, p)


def test_path20_degree_oracle():
    g = generate("path 20")
    td = exact_treewidth(g)[1]
    p = compute_partition(g, td, singleton_partition(g), DegreeOracle(g), 1, k=2, checked=True)
    assert validate_partition(g, p).valid
    assert p.width <= 96 and p.meta["bound"] == 96


def test_corollary_bound_from_optimal_partition():
    g = generate("gcl 2 3")
    _, opt = brute_optimal_partition(g, 2, max_n=g.n)
    ell = opt.width
    orc = oracle_from_partition(g, opt)
    td = exact_treewidth(g)[1]
    k = td.width + 1
    from treepart.coverings import Covering
    beta = Covering.from_blocks(opt.parts)
    p = compute_partition_cd(g, td, beta, orc, 2, d=2 * ell, checked=True)
    assert validate_partition(g, p).valid
    assert p.width <= 2 * 2 * (2 * ell) * ell * (12 * k) ** 2


def test_degree_cd_reproduces_24k_delta():
    for n in (40, 80, 120):
        edges = [(i, i + 1) for i in range(n - 1)] + [(i, i + 2) for i in range(0, n - 2, 3)]
        g = Graph.from_edges(n, edges)
        td = heuristic_td(g)
        k = td.width + 1
        delta = g.max_degree()
        p = compute_partition_cd(g, td, singleton_partition(g), DegreeOracle(g), 1, d=delta)
        assert p.meta["cd_bound"] == 24 * k * delta
        assert validate_partition(g, p).valid and p.width <= max(24 * k * delta, 8 * k)


def test_edgeless_d1():
    g = Graph.empty(30)
    p = compute_partition_cd(g, None, singleton_partition(g), DegreeOracle(g), 1, d=1)
    assert validate_partition(g, p).valid and p.width <= p.meta["bound"]


def test_outerplanar_fan():
    g = generate("fan 11")
    assert g.n == 12
    order = CircularDrawing(tuple(range(12)))
    td = exact_treewidth(g)[1]
    p = compute_partition_cd(g, td, singleton_partition(g), OuterKPlanarOracle(g, order, 0), 2,
                             d=4, k=3, checked=True)
    assert validate_partition(g, p).valid
    assert p.width <= 2 * 2 * 4 * 1 * 24 ** 2


def test_recursion_on_larger_graph_respects_lemma_bound():
    g = generate("grid 6 14")
    td = heuristic_td(g)
    p = compute_partition(g, td, singleton_partition(g), DegreeOracle(g), 1, checked=True)
    assert len(p.parts) > 1
    assert validate_partition(g, p).valid and p.width <= p.meta["bound"]


def test_determinism():
    g = generate("grid 5 12")
    runs = [compute_partition(g, heuristic_td(g), singleton_partition(g), DegreeOracle(g), 1)
            for _ in range(2)]
    assert runs[0].parts == runs[1].parts
    assert runs[0].quotient == runs[1].quotient


@settings(max_examples=25, deadline=None)
@given(graphs(min_n=1, max_n=14))
def test_degree_partition_always_valid(g):
    td = heuristic_td(g)
    p = compute_partition(g, td, singleton_partition(g), DegreeOracle(g), 1, k=1, checked=True)
    assert validate_partition(g, p).valid
    assert p.width <= p.meta["bound"]


def test_partition_text_roundtrip():
    g = generate("grid 5 10")
    p = compute_partition(g, None, singleton_partition(g), DegreeOracle(g), 1)
    back = parse_partition(format_partition(p))
    assert back.parts == p.parts and back.c == p.c and back.quotient == p.quotient
    assert back.meta["bound"] == p.meta["bound"]
    assert validate_partition(g, back).valid


def test_problems_detect_bad_partitions():
    g = generate("path 4")
    bad = CTreePartition.from_parts(g, [[0, 1], [2, 3]], 1)
    assert not partition_problems(g, bad)
    wrong = CTreePartition(bad.parts, Graph.empty(2), bad.certificate, 1)
    assert any("non-adjacent" in s for s in partition_problems(g, wrong))
    overlap = CTreePartition.from_parts(g, [[0, 1], [1, 2, 3]], 1)
    assert any("parts" in s for s in partition_problems(g, overlap))
