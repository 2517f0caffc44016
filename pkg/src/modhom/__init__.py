"""modhom — graph homomorphism counting modulo a prime.

Exact and modular homomorphism counters, order-p reduction of target graphs,
a tree dichotomy classifier with machine-checkable certificates, weighted
bipartite independent-set gadgetry, a two-spin gadget search, and the
reductions tying these together — every construction cross-validated against
brute-force oracles in the test suite.
"""

from .errors import BudgetExceededError, InputError, ModhomError
from .graphs import (
    BipartiteGraph,
    DistinguishedGraph,
    Graph,
    Multigraph,
    PartiallyLabelledGraph,
    Permutation,
    analyze_structure,
    are_isomorphic,
    automorphism_group,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    nonisomorphic_trees,
    parse_graph,
    path_graph,
    star_graph,
)
from .counting import (
    HomCount,
    ZpScalar,
    count_homs,
    count_homs_subdivided,
    count_walks,
    enumerate_homs,
    tuple_vector,
)
from .reduction import (
    ReductionStep,
    ReductionTrace,
    find_order_p_automorphism,
    fixed_subgraph,
    reduced_form,
)
from .dichotomy import (
    AbPath,
    Classification,
    CompleteBipartiteDecomposition,
    classify,
    count_homs_polytime,
    find_ab_path,
)
from .wbis import (
    BConstruction,
    BGadget,
    CnfFormula,
    GPhiConstruction,
    SatReductionReport,
    SplitSumReport,
    WbisWeights,
    build_B,
    build_G_phi,
    count_independent_sets,
    count_sat,
    parse_dimacs_cnf,
    select_gadget,
    split_sum_report,
    verify_sat_reduction,
    z_wbis,
    z_wbis_exact,
)
from .spin import (
    GadgetVector,
    SearchOutcome,
    SpinClassification,
    SpinParams,
    SpinWitness,
    assemble_gadget,
    classify_spin,
    component_halves,
    dual_check,
    search_gadget,
    z_spin,
)
from .crossred import (
    CompositeCount,
    ConnBisReport,
    JConstruction,
    P4Report,
    WbisHomsReport,
    build_J,
    connbis_transform,
    count_homs_mod_composite,
    verify_p4_identity,
    verify_wbis_to_homs,
)

__version__ = "0.1.0"

__all__ = [
    "AbPath",
    "BConstruction",
    "BGadget",
    "BipartiteGraph",
    "BudgetExceededError",
    "Classification",
    "CnfFormula",
    "CompleteBipartiteDecomposition",
    "CompositeCount",
    "ConnBisReport",
    "DistinguishedGraph",
    "GPhiConstruction",
    "GadgetVector",
    "Graph",
    "HomCount",
    "InputError",
    "JConstruction",
    "ModhomError",
    "Multigraph",
    "P4Report",
    "PartiallyLabelledGraph",
    "Permutation",
    "ReductionStep",
    "ReductionTrace",
    "SatReductionReport",
    "SearchOutcome",
    "SpinClassification",
    "SpinParams",
    "SpinWitness",
    "SplitSumReport",
    "WbisHomsReport",
    "WbisWeights",
    "ZpScalar",
    "analyze_structure",
    "are_isomorphic",
    "assemble_gadget",
    "automorphism_group",
    "build_B",
    "build_G_phi",
    "build_J",
    "classify",
    "classify_spin",
    "complete_bipartite_graph",
    "complete_graph",
    "component_halves",
    "connbis_transform",
    "count_homs",
    "cycle_graph",
    "count_homs_mod_composite",
    "count_homs_polytime",
    "count_homs_subdivided",
    "count_independent_sets",
    "count_sat",
    "count_walks",
    "dual_check",
    "enumerate_homs",
    "find_ab_path",
    "find_order_p_automorphism",
    "fixed_subgraph",
    "nonisomorphic_trees",
    "parse_dimacs_cnf",
    "parse_graph",
    "path_graph",
    "reduced_form",
    "search_gadget",
    "select_gadget",
    "split_sum_report",
    "star_graph",
    "tuple_vector",
    "verify_p4_identity",
    "verify_sat_reduction",
    "verify_wbis_to_homs",
    "z_spin",
    "z_wbis",
    "z_wbis_exact",
    "__version__",
]
