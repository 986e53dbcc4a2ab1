"""Discrete Morse machinery and watershed-cuts on simplicial pseudomanifolds."""

from .complexes import (
    Complex,
    FreePair,
    Pseudomanifold,
    PseudomanifoldViolation,
    Simplex,
    SimplexSet,
    closure,
    d_connected_components,
    elementary_collapse,
    facets,
    free_pairs,
    incidence_components,
    proper_faces,
    simplex,
    star,
    ultimate_d_collapse,
    validate_pseudomanifold,
)
from .forest import (
    DualGraph,
    DualSubgraph,
    ForestDiff,
    MsfCut,
    RelativeForest,
    compare_forests,
    dual_graph,
    induced_forest,
    minima_dual_subgraph,
    msf_cut,
    msf_kruskal_relative,
    to_dot,
    watershed_cut,
)
from .oracles import (
    OracleReport,
    oracle_closed_paths,
    oracle_extension_after_collapse,
    oracle_msf,
    oracle_watershed,
)
from .stackio import (
    GeneratorSpec,
    StackParseError,
    cycle_space,
    generate,
    load_stack,
    parse_stack_text,
    save_stack,
    serialize_stack,
    simplex_boundary_space,
    torus_grid_space,
)
from .stacks import (
    Criticality,
    DmfCertificate,
    DmfViolation,
    GradientPath,
    GradientVectorField,
    Minima,
    StackCertificate,
    StackViolation,
    ValuedComplex,
    basify,
    check_dmf,
    check_stack,
    classify,
    divide,
    enumerate_gradient_paths,
    forman_equivalent,
    gvf,
    has_closed_path,
    is_basic_dmf,
    is_basic_stack,
    is_dmf,
    is_stack,
    k_section,
    minima,
    negate,
    random_basic_stack,
    random_vector_field,
    stack_lowering,
    ultimate_stack_collapse,
)

__version__ = "0.1.0"
