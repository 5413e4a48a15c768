import json
import random

import pytest

from conftest import random_graph
from treepart.errors import TooLarge
from treepart.graph import Graph, components, generate
from treepart.partitioner import CTreePartition, component_partition_c0
from treepart.treewidth import TreeDecomposition
from treepart.pipelines import degree_partition, minor_free_partition
from treepart.verify import (CSV_HEADER, ExperimentRow, brute_min_tpw, brute_min_tpw_labelled,
                             brute_optimal_partition, growth_ratios, load_instance,
                             observation1_audit, rainbow_clique_audit, round_trip,
                             rows_from_csv, rows_to_csv, rows_to_json, run_experiment,
                             validate_partition)


def test_trivial_partition_valid():
    g = generate("grid 3 3")
    p = CTreePartition.from_parts(g, [range(9)], 0)
    rep = validate_partition(g, p)
    assert rep.valid and rep.width == 9 and p.quotient.n == 1


def test_edge_compat_violation():
    g = generate("path 3")
    p = CTreePartition.from_parts(g, [[0], [1], [2]], 1)
    broken = CTreePartition(p.parts, Graph.from_edges(3, [(0, 1)]), p.certificate, 1)
    rep = validate_partition(g, broken)
    assert not rep.valid and rep.violations[0][0] == "edge-compat"


def test_other_violation_kinds():
    g = generate("path 3")
    p = CTreePartition.from_parts(g, [[0, 1], [1, 2]], 1)
    kinds = {k for k, _ in validate_partition(g, p).violations}
    assert "overlap" in kinds
    miss = CTreePartition((frozenset({0, 1}),), Graph.empty(1),
                          TreeDecomposition.build([[0]], []), 1)
    assert ("uncovered", 2) in validate_partition(g, miss).violations
    tri = generate("complete 3")
    over = CTreePartition.from_parts(tri, [[0], [1], [2]], 1)
    assert not validate_partition(tri, over).quotient_tw_ok


def test_brute_tpw_examples(rng):
    for _ in range(5):
        n = rng.randint(2, 7)
        g = Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])
        assert brute_min_tpw(g, 0) == n
    assert brute_min_tpw(generate("gcl 2 2"), 1) > 2
    for n in range(2, 9):
        assert brute_min_tpw(generate(f"path {n}"), 1) == 1


def test_brute_budget():
    with pytest.raises(TooLarge):
        brute_min_tpw(generate("path 12"), 1)


@pytest.mark.parametrize("spec", ["cycle 5", "complete 4", "grid 2 3", "star 4", "path 6"])
def test_two_brute_forces_agree(spec):
    g = generate(spec)
    for c in (0, 1, 2):
        assert brute_min_tpw(g, c) == brute_min_tpw_labelled(g, c)


def test_two_brute_forces_agree_random(rng):
    for _ in range(6):
        g = random_graph(rng, rng.randint(2, 6), 0.5)
        c = rng.randint(0, 2)
        assert brute_min_tpw(g, c) == brute_min_tpw_labelled(g, c)


def test_pipeline_widths_dominate_optimum(rng):
    for _ in range(8):
        g = random_graph(rng, rng.randint(4, 8), 0.4)
        p = degree_partition(g)
        assert brute_min_tpw(g, 1) <= p.width


def test_rainbow_examples():
    assert rainbow_clique_audit(generate("ccl 1 2"), 1, 2)
    assert rainbow_clique_audit(generate("gcl 1 2"), 1, 2)
    res = rainbow_clique_audit(generate("path 2"), 1, 2)
    assert not res and res.counterexample == (0, 0)


def test_observation1(rng):
    for _ in range(10):
        g = random_graph(rng, rng.randint(3, 12), 0.35)
        for p in (degree_partition(g),
                  component_partition_c0(g, max(map(len, components(g))))):
            rep = observation1_audit(g, p)
            assert rep.ok and rep.composed_width <= (p.c + 1) * p.width - 1
    comp = component_partition_c0(Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)]), 3)
    rep = observation1_audit(Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)]), comp)
    assert sorted(map(len, rep.composed.bags)) == [2, 3]


def test_round_trip_small():
    for spec in ("path 5", "cycle 5", "complete 4"):
        for c in (1, 2):
            r = round_trip(generate(spec), c)
            assert r.disjointed and r.valid and r.within_bound


def test_experiment_rows_and_io(tmp_path):
    rows = run_experiment("degree", ["grid 3 3", "rand-deg 20 3 5", "path 30"])
    assert [r.instance for r in rows] == ["grid 3 3", "rand-deg 20 3 5", "path 30"]
    assert all(r.within_bound and not r.flags for r in rows)
    text = rows_to_csv(rows)
    assert text.splitlines()[1] == ",".join(CSV_HEADER)
    back = rows_from_csv(text)
    assert [(r.instance, r.width) for r in back] == [(r.instance, r.width) for r in rows]
    data = json.loads(rows_to_json(rows))
    assert data["schema"] == 1 and len(data["rows"]) == 3


def test_experiment_records_errors():
    rows = run_experiment("k1t:3", ["star 50"])
    assert rows[0].flags == "error:CoreTooLarge"


def test_experiment_degree_random_delta3():
    rows = run_experiment("degree", [f"rand-deg 40 3 {s}" for s in range(5)])
    for r in rows:
        assert r.width <= 24 * r.k * 3


def test_load_instance_variants(tmp_path):
    from treepart.graph import write_graph
    path = tmp_path / "g.txt"
    write_graph(generate("cycle 4"), path)
    assert load_instance(str(path))[1] == generate("cycle 4")
    ident, g, d = load_instance("rand-outer 12 1 3")
    assert d is not None and len(d.order) == 12
    assert load_instance("rand-deg 10 2", seed=4)[1] == load_instance("rand-deg 10 2 4")[1]


def test_growth_ratios():
    r = growth_ratios({2: 8, 4: 64})
    assert r[2] == 2.0 and r[4] == 2.0
