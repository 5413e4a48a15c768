"""Width against proven bound for the degree and outer-k-planar pipelines.

Random instances per parameter; each row reports the worst width/bound ratio.
"""

from __future__ import annotations

import argparse
import random
from dataclasses import dataclass

from treepart.oracles import random_outer_k_planar
from treepart.pipelines import degree_partition, outer_k_planar_partition
from treepart.verify import random_bounded_degree, validate_partition


@dataclass(frozen=True)
class TableConfig:
    samples: int = 20
    n_max: int = 60
    seed: int = 0


def degree_table(cfg: TableConfig) -> None:
    rng = random.Random(cfg.seed)
    print("degree pipeline: width vs 24 k Delta")
    print(f"{'Delta':>5} {'max width':>9} {'max ratio':>9}")
    for delta in range(1, 5):
        worst_w, worst_r = 0, 0.0
        for _ in range(cfg.samples):
            g = random_bounded_degree(rng.randint(10, cfg.n_max), delta, rng)
            d = max(g.max_degree(), 1)
            p = degree_partition(g)
            assert validate_partition(g, p).valid
            worst_w = max(worst_w, p.width)
            worst_r = max(worst_r, p.width / (24 * p.meta["k"] * d))
        print(f"{delta:>5} {worst_w:>9} {worst_r:>9.3f}")


def outer_table(cfg: TableConfig) -> None:
    rng = random.Random(cfg.seed + 1)
    print("outer-k-planar pipeline: width vs 2 c d l (12k)^c with d = 4k'+4")
    print(f"{'k':>3} {'max width':>9} {'max ratio':>9} {'max |Q|':>8}")
    for kk in range(3):
        worst_w, worst_r, worst_q = 0, 0.0, 0
        for _ in range(cfg.samples):
            g, d = random_outer_k_planar(rng.randint(8, min(cfg.n_max, 40)), kk, rng)
            p = outer_k_planar_partition(g, d, kk)
            assert validate_partition(g, p).valid
            worst_w = max(worst_w, p.width)
            worst_r = max(worst_r, p.width / p.meta["bound"])
            worst_q = max(worst_q, p.meta["max_q_single"])
        print(f"{kk:>3} {worst_w:>9} {worst_r:>9.4f} {worst_q:>8}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=TableConfig.samples)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = TableConfig(samples=a.samples, seed=a.seed)
    degree_table(cfg)
    print()
    outer_table(cfg)
