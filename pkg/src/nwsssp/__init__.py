"""Negative-weight single-source shortest path toolkit."""

from .graph import (Graph, INF, DimacsError, load_dimacs, save_dimacs,
                    reversed_graph, clamp_nonnegative, induced_subgraph,
                    apply_potential, reduced_weights, is_valid_potential,
                    graphs_equal)
from .solver import (SolverConfig, SsspResult, Decomposition,
                     NegativeCycleError, NegativeWeightError,
                     PotentialValidityError, dijkstra, lazy_dijkstra,
                     fix_dag_edges, estimate_light_vertices, decompose,
                     restricted_sssp, kosaraju_scc, diameter_upper_bound,
                     solve)
from .baselines import (goldberg_radzik, bellman_ford, karp_min_cycle_mean,
                        is_restricted, CycleMeanResult)

__version__ = "0.1.0"
