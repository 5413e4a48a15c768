"""c-tree-partitions from disjointed coverings: the main recursion and its wrappers."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coverings import (BlockUnion, Covering, DisjointednessQuery, QOracle, lift_oracle,
                        verify_witness)
from .errors import ComponentTooLarge, OracleViolation
from .graph import Graph, components, format_graph, parse_graph
from .treewidth import (TreeDecomposition, balanced_separator, format_td, parse_td,
                        validate_td)


@dataclass(frozen=True)
class CTreePartition:
    """Parts V_h indexed by the nodes of a quotient H with a width-<=c certificate."""

    parts: tuple[frozenset[int], ...]
    quotient: Graph
    certificate: TreeDecomposition
    c: int
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def width(self) -> int:
        return max((len(p) for p in self.parts), default=0)

    @property
    def part_of(self) -> dict[int, int]:
        return {v: h for h, part in enumerate(self.parts) for v in part}

    @classmethod
    def from_parts(cls, g: Graph, parts: Sequence[Iterable[int]], c: int,
                   certificate: TreeDecomposition | None = None, meta=None) -> "CTreePartition":
        """Use the minimal quotient of ``parts``; certificate computed if not given."""
        from .treewidth import decomposition_for

        parts = tuple(frozenset(p) for p in parts)
        H = quotient_of(g, parts)
        td = certificate if certificate is not None else decomposition_for(H)
        return cls(parts, H, td, c, dict(meta or {}))


def quotient_of(g: Graph, parts: Sequence[frozenset[int]]) -> Graph:
    owner = {v: h for h, p in enumerate(parts) for v in p}
    edges = {(min(owner[u], owner[v]), max(owner[u], owner[v]))
             for u, v in g.edges() if owner[u] != owner[v]}
    return Graph.from_edges(len(parts), sorted(edges))


def partition_problems(g: Graph, p: CTreePartition) -> list[str]:
    """Empty list iff p is a valid c-tree-partition of g."""
    problems = []
    seen: dict[int, int] = {}
    for h, part in enumerate(p.parts):
        for v in part:
            if v in seen:
                problems.append(f"vertex {v} in parts {seen[v]} and {h}")
            seen[v] = h
    missing = set(range(g.n)) - set(seen)
    if missing:
        problems.append(f"vertices {sorted(missing)[:5]} in no part")
    if p.quotient.n != len(p.parts):
        problems.append("quotient size differs from part count")
        return problems
    for u, v in g.edges():
        a, b = seen.get(u), seen.get(v)
        if a is not None and b is not None and a != b and not p.quotient.has_edge(a, b):
            problems.append(f"edge {u}-{v} joins non-adjacent parts {a},{b}")
            break
    try:
        w = validate_td(p.quotient, p.certificate)
        if w > p.c:
            problems.append(f"certificate width {w} exceeds c = {p.c}")
    except Exception as exc:  # InvalidDecomposition
        problems.append(f"certificate invalid: {exc}")
    return problems


# serialization -------------------------------------------------------------

def format_partition(p: CTreePartition) -> str:
    out = ["[parts]"]
    out += [f"{h}: " + " ".join(map(str, sorted(part))) for h, part in enumerate(p.parts)]
    out += ["[quotient]", format_graph(p.quotient).rstrip("\n")]
    out += ["[certificate]", format_td(p.certificate).rstrip("\n")]
    out += ["[meta]", f"c = {p.c}", f"width = {p.width}"]
    for key in sorted(p.meta):
        out.append(f"{key} = {json.dumps(p.meta[key], sort_keys=True)}")
    return "\n".join(out) + "\n"


def parse_partition(text: str) -> CTreePartition:
    sections: dict[str, list[str]] = {}
    cur = None
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            cur = s[1:-1]
            sections[cur] = []
        elif cur is not None and s:
            sections[cur].append(s)
    parts = []
    for row in sections.get("parts", []):
        h, _, rest = row.partition(":")
        assert int(h) == len(parts)
        parts.append(frozenset(int(v) for v in rest.split()))
    H = parse_graph("\n".join(sections["quotient"]))
    td = parse_td("\n".join(sections["certificate"]))
    meta: dict = {}
    c = None
    for row in sections.get("meta", []):
        key, _, val = row.partition("=")
        key, val = key.strip(), val.strip()
        if key == "c":
            c = int(val)
        elif key != "width":
            meta[key] = json.loads(val)
    return CTreePartition(tuple(parts), H, td, int(c), meta)


# Observation 2 ---------------------------------------------------------------

def component_partition_c0(g: Graph, d: int) -> CTreePartition:
    comps = components(g)
    for comp in comps:
        if len(comp) > d:
            raise ComponentTooLarge(sorted(comp))
    td = TreeDecomposition.build([[h] for h in range(len(comps))],
                                 [(h, h + 1) for h in range(len(comps) - 1)])
    return CTreePartition(tuple(comps), Graph.empty(len(comps)), td, 0,
                          {"bound": d, "k": None, "ell": None})


# the recursion -------------------------------------------------------------------

class _Builder:
    """Accumulates parts, quotient edges and certificate bags of one run."""

    def __init__(self, g: Graph, beta: Covering, oracle: QOracle, c: int, k: int,
                 f12k: float | None, checked: bool):
        self.g = g
        self.beta = beta
        self.oracle = oracle
        self.c = c
        self.k = k
        self.f12k = f12k
        self.checked = checked
        self.parts: dict[int, set[int]] = {}
        self.hedges: set[tuple[int, int]] = set()
        self.bags: list[frozenset[int]] = []
        self.tedges: list[tuple[int, int]] = []
        self.next_node = 0
        self.max_q = 0
        self.max_R = 0
        self.case_counts = {0: 0, 1: 0, 2: 0, "small": 0}

    def node(self) -> int:
        self.next_node += 1
        return self.next_node - 1

    def add_part(self, h: int, verts: Iterable[int]) -> None:
        self.parts.setdefault(h, set()).update(verts)

    def clique(self, nodes: Sequence[int]) -> None:
        for i, a in enumerate(nodes):
            self.parts.setdefault(a, set())
            for b in nodes[i + 1:]:
                if a != b:
                    self.hedges.add((min(a, b), max(a, b)))

    def bag(self, nodes: Iterable[int]) -> int:
        self.bags.append(frozenset(nodes))
        return len(self.bags) - 1

    def link(self, a: int, b: int) -> None:
        self.tedges.append((a, b))

    # ------------------------------------------------------------------
    def solve(self, U: frozenset[int], S: list[BlockUnion], R: frozenset[int],
              xs: list[int], y: int) -> int:
        """Partition g[U]; return a certificate bag containing {xs, y}.

        S are c-1 block unions (restricted to U), xs their quotient nodes; the
        part of y receives R minus S.
        """
        k, c = self.k, self.c
        self.max_R = max(self.max_R, len(R))
        S = [s.restrict(U) for s in S]
        residual = []
        seen: frozenset[int] = frozenset()
        for s in S:
            residual.append(s.vertices - seen)
            seen = seen | s.vertices
        Sall = seen
        for x, r in zip(xs, residual):
            self.add_part(x, r)
        K = list(xs) + [y]

        if U <= R | Sall:  # Case 0
            self.case_counts[0] += 1
            self.add_part(y, R - Sall)
            self.clique(K)
            return self.bag(K)

        if len(R) <= 12 * k:  # Case 1
            self.case_counts[1] += 1
            Sc = self.beta.greedy_cover(R, U)
            Sc_res = Sc.vertices - Sall
            self.add_part(y, Sc_res)
            self.clique(K)
            Sfull = S + [Sc]
            xs_full = list(xs) + [y]
            removed = Sall | Sc.vertices
            anchor = None
            for Gj in components(self.g, U - removed):
                if len(Gj) < 4 * k:
                    self.case_counts["small"] += 1
                    z = self.node()
                    self.add_part(z, Gj)
                    self.clique(xs_full + [z])
                    b = self.bag(xs_full + [z])
                else:
                    b = self._case1_component(U, Gj, Sfull, xs_full)
                if anchor is None:
                    anchor = b
                else:
                    self.link(anchor, b)
            if anchor is None:
                anchor = self.bag(K)
            return anchor

        # Case 2
        self.case_counts[2] += 1
        sep = balanced_separator(self.g, self.td_for(U), R, U)
        A, B, C = sep.A, sep.B, sep.C
        b1 = self.solve(A | C, S, (R & A) | C, xs, y)
        b2 = self.solve(B | C, S, (R & B) | C, xs, y)
        self.link(b1, b2)
        return b1

    def td_for(self, U: frozenset[int]) -> TreeDecomposition:
        return self.td.restrict(U)

    def _case1_component(self, U, Gj, Sfull, xs_full) -> int:
        k, c = self.k, self.c
        q = DisjointednessQuery(tuple(Sfull), Gj, U)
        w = self.oracle.query(q)
        Qp = w.Q
        self.max_q = max(self.max_q, len(Qp))
        if self.checked:
            bound = self.oracle.bound(q.t)
            rep = verify_witness(self.g, q, w, bound)
            if not rep.ok:
                raise OracleViolation(rep.reason)
        Qj = set(Qp)
        for v in sorted(Gj):
            if len(Qj) >= 4 * k:
                break
            Qj.add(v)
        Qj = frozenset(Qj)
        A: list[set[int]] = [set() for _ in range(c)]
        for comp, i in w.assignment:
            A[i] |= comp - Qj
        residual = []
        seen: frozenset[int] = frozenset()
        for s in Sfull:
            residual.append(s.vertices - seen)
            seen = seen | s.vertices
        Sunion = seen
        yj = self.node()
        Kplus = list(xs_full) + [yj]
        hub = None
        for i in range(c):
            Ui = frozenset(A[i]) | Qj | (Sunion - residual[i])
            Si = Sfull[:i] + Sfull[i + 1:]
            xi = xs_full[:i] + xs_full[i + 1:]
            a = self.solve(Ui, Si, Qj, xi, yj)
            self.clique(Kplus)
            kb = self.bag(Kplus)
            self.link(a, kb)
            if hub is None:
                hub = kb
            else:
                self.link(hub, kb)
        return hub


def _default_td(g: Graph) -> TreeDecomposition:
    from .treewidth import decomposition_for
    return decomposition_for(g)


def compute_partition(g: Graph, td: TreeDecomposition | None, beta: Covering,
                      oracle: QOracle, c: int, k: int | None = None,
                      checked: bool = False) -> CTreePartition:
    """c-tree-partition of width <= max{12 ell k, 2 c ell f_eff(12k)}.

    For oracles with a declared bound, f_eff(12k) = max(bound(12k), 4k); for
    measured oracles it is max(4k, largest Q returned), which the recursion
    uses in place of f(12k) and which is recorded in ``meta``.
    """
    if c == 0:
        return component_partition_c0(g, max((len(x) for x in components(g)), default=0))
    if c < 1:
        raise ValueError("c must be non-negative")
    if td is None:
        td = _default_td(g)
    if checked:
        validate_td(g, td)
    if k is None:
        k = max(td.width + 1, 1)
    ell = beta.ell
    declared = oracle.bound(12 * k)
    meta = {"k": k, "ell": ell, "oracle": type(oracle).__name__}
    n = g.n
    if n < 4 * k:
        f_eff = max(declared, 4 * k) if declared is not None else 4 * k
        bound = max(12 * ell * k, 2 * c * ell * f_eff)
        td1 = TreeDecomposition.build([[0]], [])
        parts = (frozenset(range(n)),) if n else ()
        H = Graph.empty(len(parts))
        meta.update({"f_eff_12k": f_eff, "bound": bound, "trivial": True, "max_q": 0})
        return CTreePartition(parts, H, td1 if parts else TreeDecomposition((), ()), c, meta)

    b = _Builder(g, beta, oracle, c, k, declared, checked)
    b.td = td
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        R = frozenset(range(4 * k))
        S = [beta.union([min(i, len(beta.blocks) - 1)]) for i in range(c - 1)]
        xs = [b.node() for _ in range(c - 1)]
        y = b.node()
        b.solve(frozenset(range(n)), S, R, xs, y)
    finally:
        sys.setrecursionlimit(limit)

    measured = max(4 * k, b.max_q, b.max_R)
    f_eff = max(declared, 4 * k) if declared is not None else measured
    bound = max(12 * ell * k, 2 * c * ell * f_eff)
    meta.update({"f_eff_12k": f_eff, "bound": bound, "max_q": b.max_q,
                 "cases": {str(key): v for key, v in b.case_counts.items()}})
    if oracle.flags:
        meta["flags"] = sorted(oracle.flags)
    p = _finalize(b, c, meta)
    if checked:
        problems = partition_problems(g, p)
        if problems:
            raise OracleViolation("; ".join(problems))
    return p


def _finalize(b: _Builder, c: int, meta: dict) -> CTreePartition:
    live = sorted(h for h, verts in b.parts.items() if verts)
    index = {h: i for i, h in enumerate(live)}
    parts = tuple(frozenset(b.parts[h]) for h in live)
    edges = sorted({(index[x], index[y]) for x, y in b.hedges if x in index and y in index})
    H = Graph.from_edges(len(live), edges)
    bags = [frozenset(index[h] for h in bag if h in index) for bag in b.bags]
    td = TreeDecomposition.build(bags, b.tedges).compact()
    return CTreePartition(parts, H, td, c, meta)


def compute_partition_cd(g: Graph, td: TreeDecomposition | None, beta: Covering,
                         base: QOracle, c: int, d: float | None = None,
                         k: int | None = None, checked: bool = False) -> CTreePartition:
    """Partition from a single-block (c, d) oracle, lifted to unions (f(t) = d t^c)."""
    oracle = lift_oracle(base, d)
    p = compute_partition(g, td, beta, oracle, c, k, checked)
    kk = p.meta["k"]
    if oracle.d is not None:
        p.meta["cd_bound"] = 2 * c * oracle.d * beta.ell * (12 * kk) ** c
    return p
