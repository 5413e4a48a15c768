"""Measured width of the minor-free pipeline on k x k grids against k^2 log k."""

from __future__ import annotations

import argparse
import math
import time
from dataclasses import dataclass

from treepart.graph import generate
from treepart.pipelines import minor_free_partition
from treepart.verify import validate_partition


@dataclass(frozen=True)
class TrendConfig:
    k_min: int = 3
    k_max: int = 8
    s: int = 3
    slack: float = 2.0


def run(cfg: TrendConfig) -> bool:
    print(f"{'k':>3} {'n':>5} {'width':>6} {'bound':>7} {'ratio':>7} {'secs':>6}")
    ratios = {}
    for k in range(cfg.k_min, cfg.k_max + 1):
        g = generate(f"grid {k} {k}")
        t = time.time()
        p = minor_free_partition(g, cfg.s)
        assert validate_partition(g, p).valid
        ratios[k] = p.width / (k * k * math.log2(k))
        print(f"{k:>3} {g.n:>5} {p.width:>6} {p.meta['bound']:>7} {ratios[k]:>7.3f} "
              f"{time.time() - t:>6.2f}")
    first = ratios[cfg.k_min]
    ok = all(r <= cfg.slack * first for r in ratios.values())
    print(f"bounded within {cfg.slack}x of k = {cfg.k_min}: {ok}")
    return ok


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=TrendConfig.k_max)
    ap.add_argument("--s", type=int, default=TrendConfig.s)
    a = ap.parse_args()
    raise SystemExit(0 if run(TrendConfig(k_max=a.k_max, s=a.s)) else 1)
