"""Ready-made oracle + recursion pipelines for the supported graph classes."""

from __future__ import annotations

from .coverings import singleton_partition
from .graph import Graph
from .oracles import (CircularDrawing, DegreeOracle, K2tOracle, outer_k_planar_oracle,
                      minor_free_oracle, topo_minor_oracle)
from .partitioner import CTreePartition, compute_partition
from .treewidth import TreeDecomposition, decomposition_for


def _td(g: Graph, td: TreeDecomposition | None) -> TreeDecomposition:
    return td if td is not None else decomposition_for(g)


def degree_partition(g: Graph, td: TreeDecomposition | None = None,
                     checked: bool = False) -> CTreePartition:
    """Tree-partition of width at most 24 k Delta via the degree oracle."""
    td = _td(g, td)
    return compute_partition(g, td, singleton_partition(g), DegreeOracle(g), 1,
                             checked=checked)


def minor_free_partition(g: Graph, s: int, td: TreeDecomposition | None = None,
                         checked: bool = False, mode: str = "auto") -> CTreePartition:
    td = _td(g, td)
    return compute_partition(g, td, singleton_partition(g), minor_free_oracle(g, s, td, mode),
                             s, checked=checked)


def topo_minor_partition(g: Graph, p: int, td: TreeDecomposition | None = None,
                         checked: bool = False, mode: str = "auto") -> CTreePartition:
    td = _td(g, td)
    orc = topo_minor_oracle(g, p, td, mode)
    out = compute_partition(g, td, singleton_partition(g), orc, p, checked=checked)
    out.meta["assigned"] = orc.assigned
    out.meta["unassigned"] = orc.unassigned
    return out


def k2t_partition(g: Graph, td: TreeDecomposition | None = None,
                  checked: bool = False) -> CTreePartition:
    td = _td(g, td)
    return compute_partition(g, td, singleton_partition(g), K2tOracle(g), 2, checked=checked)


def outer_k_planar_partition(g: Graph, drawing: CircularDrawing, k: int | None = None,
                             td: TreeDecomposition | None = None,
                             checked: bool = False) -> CTreePartition:
    """2-tree-partition from a weakly outer k-planar drawing (f(t) = (4k+4) t^2)."""
    td = _td(g, td)
    orc = outer_k_planar_oracle(g, drawing, k)
    from .coverings import lift_oracle
    lifted = lift_oracle(orc, 4 * orc.k + 4)
    out = compute_partition(g, td, singleton_partition(g), lifted, 2, checked=checked)
    out.meta["drawing_k"] = orc.k
    # the lifted oracle calls the base _answer directly, so read its cache
    out.meta["max_q_single"] = max((len(q) for q in orc._cache.values()), default=0)
    return out


PIPELINES = ("degree", "minor-free:s", "topo:p", "k2t", "outer-k:k", "spider:s,t", "path:n",
             "induced-star:s", "induced-star-forest:s,l", "induced-p3-forest:k",
             "utw0-edgeless:k", "utw0-p3", "k1t:t")


def resolve_pipeline(name: str):
    """Callable ``run(g, drawing=None, checked=False)`` for a pipeline name like
    ``minor-free:3`` or ``spider:3,2``."""
    from . import constructions as C

    kind, _, arg = name.partition(":")
    nums = [int(x) for x in arg.replace(",", " ").split()] if arg else []

    def need(count: int) -> list[int]:
        if len(nums) != count:
            raise ValueError(f"pipeline {kind!r} takes {count} parameter(s)")
        return nums

    if kind == "degree":
        return lambda g, drawing=None, checked=False: degree_partition(g, checked=checked)
    if kind == "minor-free":
        (s,) = need(1)
        return lambda g, drawing=None, checked=False: minor_free_partition(g, s, checked=checked)
    if kind == "topo":
        (p,) = need(1)
        return lambda g, drawing=None, checked=False: topo_minor_partition(g, p, checked=checked)
    if kind == "k2t":
        return lambda g, drawing=None, checked=False: k2t_partition(g, checked=checked)
    if kind == "outer-k":
        k = nums[0] if nums else None

        def run(g, drawing=None, checked=False):
            if drawing is None:
                raise ValueError("outer-k pipeline needs a circular drawing")
            return outer_k_planar_partition(g, drawing, k, checked=checked)
        return run
    if kind == "spider":
        s, t = need(2)
        return lambda g, drawing=None, checked=False: C.spider_free_partition(g, s, t, checked)
    if kind == "path":
        (n,) = need(1)
        return lambda g, drawing=None, checked=False: C.path_free_partition(g, n, checked)
    if kind == "induced-star":
        (s,) = need(1)
        return lambda g, drawing=None, checked=False: C.induced_star_free_partition(
            g, s, checked=checked)
    if kind == "induced-star-forest":
        s, ell = need(2)
        return lambda g, drawing=None, checked=False: C.induced_star_forest_free_partition(
            g, s, ell, checked)
    if kind == "induced-p3-forest":
        (k,) = need(1)
        return lambda g, drawing=None, checked=False: C.induced_p3_forest_partition(g, k)
    if kind == "utw0-edgeless":
        (k,) = need(1)
        return lambda g, drawing=None, checked=False: C.induced_utw0_partition(g, "edgeless", k)
    if kind == "utw0-p3":
        return lambda g, drawing=None, checked=False: C.induced_utw0_partition(g, "p3")
    if kind == "k1t":
        (t,) = need(1)
        return lambda g, drawing=None, checked=False: C.k1t_partition(g, t)
    raise ValueError(f"unknown pipeline {name!r}; known: {', '.join(PIPELINES)}")
