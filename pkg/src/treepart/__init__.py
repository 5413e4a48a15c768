"""Constructing, certifying and auditing c-tree-partitions of graphs."""

from .config import Budgets, RunConfig, budgets, set_budgets
from .coverings import (Covering, DisjointednessQuery, QOracle, QWitness, brute_min_q,
                        check_cd_disjointed, lift_oracle, oracle_from_partition, raw_query,
                        singleton_partition, verify_witness)
from .ep import EdgeFamily, EPResult, PatternFamily, TerminalFamily, ep_hitting_set
from .errors import TreePartError
from .graph import (FamilySpec, Graph, SubdivisionMap, generate, parse_graph, read_graph,
                    robust_power, subdivide, suppress_degree_two, write_graph, format_graph)
from .oracles import (CircularDrawing, assign_trick, crossing_stats, degree_oracle,
                      k2t_menger_oracle, minor_free_oracle, outer_k_planar_oracle,
                      topo_minor_oracle)
from .partitioner import (CTreePartition, compute_partition, compute_partition_cd,
                          format_partition, parse_partition)
from .patterns import contains_pattern, greedy_packing
from .treewidth import (TreeDecomposition, exact_treewidth, heuristic_td, treewidth_at_most,
                        validate_td)

__version__ = "0.1.0"
