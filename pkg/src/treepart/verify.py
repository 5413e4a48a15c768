"""Independent audits: validation, brute-force optima, witness checks and experiment tables."""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

from .config import budgets
from .coverings import check_cd_disjointed, oracle_from_partition
from .errors import InvalidDecomposition, TooLarge, TreePartError
from .graph import FamilySpec, Graph, generate
from .partitioner import CTreePartition, compute_partition_cd, quotient_of
from .treewidth import (TreeDecomposition, exact_treewidth, treewidth_at_most,
                        treewidth_by_orderings, validate_td)


@dataclass
class ValidationReport:
    valid: bool
    width: int
    quotient_tw_ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_partition(g: Graph, p: CTreePartition) -> ValidationReport:
    """Check parts, edge compatibility with the quotient and the certificate."""
    viol: list[tuple[str, object]] = []
    owner: dict[int, int] = {}
    for h, part in enumerate(p.parts):
        for v in part:
            if not 0 <= v < g.n:
                viol.append(("unknown-vertex", v))
            elif v in owner:
                viol.append(("overlap", (v, owner[v], h)))
            else:
                owner[v] = h
    for v in range(g.n):
        if v not in owner:
            viol.append(("uncovered", v))
    if p.quotient.n != len(p.parts):
        viol.append(("quotient-size", (p.quotient.n, len(p.parts))))
    else:
        for u, v in g.edges():
            a, b = owner.get(u), owner.get(v)
            if a is not None and b is not None and a != b and not p.quotient.has_edge(a, b):
                viol.append(("edge-compat", (u, v, a, b)))
    tw_ok = True
    try:
        w = validate_td(p.quotient, p.certificate)
        if w > p.c:
            tw_ok = False
            viol.append(("certificate-width", w))
    except InvalidDecomposition as exc:
        tw_ok = False
        viol.append(("certificate", (exc.condition, exc.witness)))
    return ValidationReport(not viol, p.width, tw_ok, viol)


# brute force ---------------------------------------------------------------------

def _rg_strings(n: int, cap: int) -> Iterator[list[int]]:
    """Restricted-growth labelings of 0..n-1 with every block of size <= cap."""
    labels = [0] * n
    sizes: list[int] = []

    def rec(i: int):
        if i == n:
            yield labels
            return
        for b in range(len(sizes) + 1):
            if b == len(sizes):
                sizes.append(0)
            if sizes[b] < cap:
                sizes[b] += 1
                labels[i] = b
                yield from rec(i + 1)
                sizes[b] -= 1
            if sizes[b] == 0:
                sizes.pop()

    yield from rec(0)


def _quotient_edges(g: Graph, labels: Sequence[int], upto: int) -> frozenset[tuple[int, int]]:
    out = set()
    for u in range(upto):
        for v in g.adj[u]:
            if v < upto and labels[u] != labels[v]:
                a, b = labels[u], labels[v]
                out.add((min(a, b), max(a, b)))
    return frozenset(out)


def brute_optimal_partition(g: Graph, c: int, max_n: int | None = None
                            ) -> tuple[int, CTreePartition]:
    """Minimum-width c-tree-partition by enumerating set partitions.

    Labels are assigned vertex by vertex; a prefix is abandoned as soon as the
    quotient of the labelled prefix already has treewidth above c (treewidth
    is monotone under subgraphs).
    """
    limit = budgets().min_tpw_n if max_n is None else max_n
    if g.n > limit:
        raise TooLarge(f"n = {g.n} exceeds the brute-force budget {limit}")
    if g.n == 0:
        return 0, CTreePartition((), Graph.empty(0), TreeDecomposition((), ()), c, {})
    memo: dict[frozenset, bool] = {}

    def ok(edges: frozenset, nodes: int) -> bool:
        if edges not in memo:
            memo[edges] = treewidth_at_most(Graph.from_edges(nodes, sorted(edges)), c)
        return memo[edges]

    n = g.n
    for ell in range(1, n + 1):
        labels = [0] * n
        sizes: list[int] = []

        def rec(i: int) -> bool:
            if i == n:
                return True
            for b in range(len(sizes) + 1):
                if b == len(sizes):
                    sizes.append(0)
                if sizes[b] < ell:
                    sizes[b] += 1
                    labels[i] = b
                    if ok(_quotient_edges(g, labels, i + 1), len(sizes)) and rec(i + 1):
                        return True
                    sizes[b] -= 1
                if sizes[b] == 0:
                    sizes.pop()
            return False

        if rec(0):
            parts = [[] for _ in range(max(labels) + 1)]
            for v, b in enumerate(labels):
                parts[b].append(v)
            H = quotient_of(g, [frozenset(x) for x in parts])
            _, td = exact_treewidth(H)
            return ell, CTreePartition(tuple(frozenset(x) for x in parts), H, td, c,
                                       {"bound": ell, "brute": True})
    raise AssertionError("the one-part partition always works")


def brute_min_tpw(g: Graph, c: int, max_n: int | None = None) -> int:
    """Exact c-tree-partition-width (set-partition enumeration, n <= budget)."""
    return brute_optimal_partition(g, c, max_n)[0]


def brute_min_tpw_labelled(g: Graph, c: int, max_n: int = 6) -> int:
    """Second brute force: every map V -> {0..n-1}, quotient treewidth by orderings."""
    if g.n > max_n:
        raise TooLarge(f"n = {g.n} exceeds {max_n}")
    if g.n == 0:
        return 0
    memo: dict[frozenset, int] = {}
    best = g.n
    for labels in product(range(g.n), repeat=g.n):
        counts: dict[int, int] = {}
        for b in labels:
            counts[b] = counts.get(b, 0) + 1
        width = max(counts.values())
        if width >= best:
            continue
        edges = frozenset((min(labels[u], labels[v]), max(labels[u], labels[v]))
                          for u, v in g.edges() if labels[u] != labels[v])
        if edges not in memo:
            memo[edges] = treewidth_by_orderings(Graph.from_edges(g.n, sorted(edges)))
        if memo[edges] <= c:
            best = width
    return best


# lower-bound witnesses ----------------------------------------------------------

@dataclass
class AuditResult:
    ok: bool
    counterexample: tuple | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _cliques(g: Graph, size: int) -> list[tuple[int, ...]]:
    out = []

    def grow(cl: list[int], cand: list[int]):
        if len(cl) == size:
            out.append(tuple(cl))
            return
        for i, v in enumerate(cand):
            grow(cl + [v], [w for w in cand[i + 1:] if g.has_edge(v, w)])

    grow([], list(range(g.n)))
    return out


def rainbow_clique_audit(g: Graph, c: int, ell: int, max_n: int | None = None) -> AuditResult:
    """Does every partition into parts of size <= ell leave a (c+1)-clique with all
    vertices in distinct parts?"""
    limit = budgets().rainbow_n if max_n is None else max_n
    if g.n > limit:
        raise TooLarge(f"n = {g.n} exceeds the rainbow budget {limit}")
    cliques = _cliques(g, c + 1)
    count = 0
    for labels in _rg_strings(g.n, ell):
        count += 1
        if not any(len({labels[v] for v in cl}) == c + 1 for cl in cliques):
            return AuditResult(False, tuple(labels), count)
    return AuditResult(True, None, count)


@dataclass
class Observation1Report:
    ok: bool
    composed: TreeDecomposition
    composed_width: int
    tw: int | None
    limit: int

    def __bool__(self) -> bool:
        return self.ok


def observation1_audit(g: Graph, p: CTreePartition, exact: bool = True) -> Observation1Report:
    """Blow each certificate bag up into the union of its parts and validate the result.

    The composed decomposition has width <= (c+1) width(p) - 1.  With ``exact``
    the true treewidth is computed as well (n within the exact budget).
    """
    bags = [frozenset().union(*(p.parts[h] for h in bag)) if bag else frozenset()
            for bag in p.certificate.bags]
    td = TreeDecomposition.build(bags, p.certificate.tree_edges)
    limit = (p.c + 1) * p.width - 1
    try:
        w = validate_td(g, td) if td.size else (-1 if g.n == 0 else None)
    except InvalidDecomposition:
        return Observation1Report(False, td, td.width, None, limit)
    if w is None:
        return Observation1Report(False, td, -1, None, limit)
    tw = None
    if exact:
        if g.n > budgets().treewidth_n:
            raise TooLarge(f"n = {g.n} exceeds the exact treewidth budget")
        tw = exact_treewidth(g)[0] if g.n else -1
    ok = w <= limit and (tw is None or tw <= limit)
    return Observation1Report(ok, td, w, tw, limit)


# round trip through disjointedness ---------------------------------------------------

@dataclass
class RoundTrip:
    ell: int
    disjointed: bool
    rebuilt: CTreePartition
    valid: bool
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.rebuilt.width <= self.bound


def round_trip(g: Graph, c: int) -> RoundTrip:
    """Optimal partition -> its (c, c l) oracle -> rebuilt partition."""
    ell, p = brute_optimal_partition(g, c)
    orc = oracle_from_partition(g, p)
    report = check_cd_disjointed(g, orc.covering, c, c * ell)
    out = compute_partition_cd(g, None, orc.covering, orc, c, d=c * ell, checked=True)
    k = out.meta["k"]
    bound = 2 * c * (c * ell) * ell * (12 * k) ** c
    return RoundTrip(ell, bool(report), out, validate_partition(g, out).valid, bound)


# experiments ------------------------------------------------------------------------

@dataclass
class ExperimentRow:
    instance: str
    n: int
    k: int | None
    c: int
    ell: int | None
    width: int
    bound: float | None
    flags: str = ""

    @property
    def within_bound(self) -> bool:
        return self.bound is None or self.width <= self.bound


CSV_HEADER = ["instance", "n", "k", "c", "ell", "width", "bound", "flags"]


def load_instance(item, seed: int = 0):
    """(id, graph, drawing-or-None) for a Graph, a file path, a family string or a
    random shorthand: ``rand-deg n delta [seed]`` or ``rand-outer n k [seed]``."""
    from pathlib import Path

    from .graph import read_graph
    from .oracles import random_outer_k_planar

    if isinstance(item, tuple):
        return item if len(item) == 3 else (item[0], item[1], None)
    if isinstance(item, Graph):
        return (f"graph-{item.n}", item, None)
    if isinstance(item, FamilySpec):
        return (str(item), generate(item), None)
    text = str(item).strip()
    words = text.replace("-", " ", 1).split() if text.startswith("rand-") else text.split()
    if words and words[0] == "rand":
        kind = words[1]
        nums = [int(x) for x in words[2:]]
        s = nums[2] if len(nums) > 2 else seed
        rng = random.Random(s)
        if kind == "deg":
            return (text, random_bounded_degree(nums[0], nums[1], rng), None)
        if kind == "outer":
            g, d = random_outer_k_planar(nums[0], nums[1], rng)
            return (text, g, d)
        raise ValueError(f"unknown random family {kind!r}")
    path = Path(text)
    if path.exists():
        return (path.name, read_graph(path), None)
    return (text, generate(FamilySpec.parse(text)), None)


def random_bounded_degree(n: int, delta: int, rng: random.Random,
                          attempts: int | None = None) -> Graph:
    """Random graph with maximum degree <= delta (random edge proposals)."""
    deg = [0] * n
    edges = set()
    for _ in range(attempts if attempts is not None else 3 * n):
        if n < 2:
            break
        u, v = rng.sample(range(n), 2)
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= delta or deg[v] >= delta:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph.from_edges(n, sorted(edges))


def run_experiment(pipeline: str, instances: Iterable, seed: int = 0,
                   checked: bool = False) -> list[ExperimentRow]:
    """Run a named pipeline on each instance; failures become flagged rows."""
    from .pipelines import resolve_pipeline

    run = resolve_pipeline(pipeline)
    rows = []
    for item in instances:
        ident, g, drawing = load_instance(item, seed)
        try:
            p = run(g, drawing=drawing, checked=checked)
        except TreePartError as exc:
            rows.append(ExperimentRow(ident, g.n, None, -1, None, -1, None,
                                      f"error:{type(exc).__name__}"))
            continue
        report = validate_partition(g, p)
        flags = list(p.meta.get("flags", []))
        if not report.valid:
            flags.append("invalid")
        rows.append(ExperimentRow(ident, g.n, p.meta.get("k"), p.c, p.meta.get("ell"),
                                  p.width, p.meta.get("bound"), ";".join(flags)))
    return rows


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    buf.write("# treepart-experiment schema=1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(["" if getattr(r, k) is None else getattr(r, k) for k in CSV_HEADER])
    return buf.getvalue()


def rows_to_json(rows: Sequence[ExperimentRow]) -> str:
    return json.dumps({"schema": 1, "rows": [asdict(r) for r in rows]}, indent=1)


def rows_from_csv(text: str) -> list[ExperimentRow]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        def num(key, conv=int):
            return conv(rec[key]) if rec[key] != "" else None
        out.append(ExperimentRow(rec["instance"], int(rec["n"]), num("k"), int(rec["c"]),
                                 num("ell"), int(rec["width"]), num("bound", float),
                                 rec["flags"]))
    return out


def growth_ratios(widths: dict[int, int]) -> dict[int, float]:
    """width / (k^2 log2 k) per k."""
    return {k: w / (k * k * math.log2(k)) for k, w in sorted(widths.items()) if k >= 2}
