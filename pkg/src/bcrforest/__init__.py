"""Exact-rational toolkit for bidirected cut relaxations of Steiner forest.

The package covers the full pipeline at desk scale, all in exact rational
arithmetic:

* instances, solutions, and certificates with text formats and verifiers,
* recursive densest-set contraction rounding half-integral solutions into
  forests within a 16/9 cost factor,
* cost-preserving restructuring (root rerouting, splitting off, reduction)
  and the densest-subgraph machinery behind the rounding bound,
* a single-root reshaping for tree-shaped demands,
* an exact cutting-plane optimizer for both relaxations,
* generators for certified instance families and seeded random corpora.
"""

from .density import (
    densest_subgraph,
    densest_subgraph_bruteforce,
    projection_multigraph,
    structure_violations,
)
from .errors import BcrError
from .flows import FlowNetwork, max_flow
from .forest import brute_force_opt, check_forest, forest_cost, prune
from .generators import (
    gen_figure1,
    gen_gadget,
    gen_lower_bound,
    gen_random_halfintegral,
)
from .lp import solve_forest_bcr, solve_tree_bcr
from .model import (
    Arc,
    Instance,
    demand_graph,
    edge_key,
    format_instance,
    make_instance,
    metric_closure,
    parse_instance,
    same_representation,
    shortest_paths,
    terminals,
)
from .rounding import RATIO_BOUND, check_ratio, round_solution
from .solution import (
    BcrSolution,
    DualCertificate,
    TreeBcrSolution,
    cost,
    format_dual,
    format_solution,
    format_tree_solution,
    is_half_integral,
    parse_dual,
    parse_solution,
    parse_tree_solution,
    tree_cost,
    verify_dual,
    verify_primal,
    verify_tree_bcr,
)
from .steiner import to_tree_bcr
from .structuring import (
    audit_fully_reduced,
    audit_well_structured,
    fully_reduce,
    reroute_steiner_roots,
    well_structure,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BcrError",
    "BcrSolution",
    "DualCertificate",
    "FlowNetwork",
    "Instance",
    "RATIO_BOUND",
    "TreeBcrSolution",
    "audit_fully_reduced",
    "audit_well_structured",
    "brute_force_opt",
    "check_forest",
    "check_ratio",
    "cost",
    "demand_graph",
    "densest_subgraph",
    "densest_subgraph_bruteforce",
    "edge_key",
    "forest_cost",
    "format_dual",
    "format_instance",
    "format_solution",
    "format_tree_solution",
    "fully_reduce",
    "gen_figure1",
    "gen_gadget",
    "gen_lower_bound",
    "gen_random_halfintegral",
    "is_half_integral",
    "make_instance",
    "max_flow",
    "metric_closure",
    "parse_dual",
    "parse_instance",
    "parse_solution",
    "parse_tree_solution",
    "projection_multigraph",
    "prune",
    "reroute_steiner_roots",
    "round_solution",
    "same_representation",
    "shortest_paths",
    "solve_forest_bcr",
    "solve_tree_bcr",
    "structure_violations",
    "terminals",
    "to_tree_bcr",
    "tree_cost",
    "verify_dual",
    "verify_primal",
    "verify_tree_bcr",
    "well_structure",
]
