"""Fixed-element extensions in the guts of exact 3-separations of small matroids."""
from .catalog import graphic_matroid
from .connectivity import (
    Separation,
    connectivity,
    enumerate_exact_3_separations,
    enumerate_exact_k_separations,
    is_exact_3_separation,
    is_exact_k_separation,
    is_modular_pair,
    local_conn,
)
from .errors import *  # noqa: F401,F403
from .extension import (
    ExtensionRequest,
    ExtensionResult,
    GutsFrame,
    ModularCut,
    TreeExtensionPlan,
    Verdict,
    check_guts_extendability,
    enumerate_extensions,
    enumerate_guts_extensions_oracle,
    enumerate_modular_cuts,
    extend_by_modular_cut,
    free_guts_extension,
    generated_modular_cut,
    guts_modular_cut,
    guts_point_extension,
    is_fixed_oracle,
    is_modular_cut,
    tree_multi_extension,
    validate_plan,
)
from .matroid import (
    Matroid,
    MatroidSpec,
    are_clones,
    are_independent_clones,
    build_matroid,
    matroids_equal,
)
from .strands import Bunch, Strand, StrandGraph, bunches, is_complete, special_strands, strand_graph, strands

__version__ = "0.1.0"
