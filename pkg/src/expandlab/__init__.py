"""expandlab: expansion figures for graphs and matrix tuples.

Computes exact graph expansion (edge, vertex, spectral), quantum
expansion and quantum edge expansion of doubly stochastic matrix tuples,
dimension expansion over the complex field and prime fields, and the
constructions connecting them (graphical tuples, fractional unitary
powers, Haar and localized tuples), plus executable suites checking the
inequality web between all of these.
"""

from .constructions import (
    HermitianLog,
    fractional_power,
    graphical_tuple,
    haar_unitary_tuple,
    hermitian_log,
    identity_tuple,
    localized_unitary_tuple,
    sample_localized_unitary,
    tuple_power,
)
from .core import (
    MatrixTuple,
    Restriction,
    Subspace,
    annihilator,
    canonical_basis,
    coordinate_subspace,
    make_tuple,
    numerical_rank,
    random_subspace,
    random_tuple,
    restrict,
    subspace_from_columns,
    subspace_image,
    validate_doubly_stochastic,
    validate_unitary,
)
from .dimension import (
    DimensionReport,
    dimension_edge_estimate,
    dimension_expansion_estimate,
    edge_value,
    enumerate_subspaces,
    exact_expansion_finite_field,
    expansion_value,
    generic_expansion_check,
    subspace_count,
)
from .errors import (
    ConfigError,
    DimensionError,
    ExpandlabError,
    FieldError,
    InternalError,
    RegularityError,
    SamplingError,
    ShapeError,
    SizeLimitError,
    UnsupportedError,
    ValidationError,
    ZeroSubspaceError,
)
from .estimates import ExpansionEstimate
from .fields import COMPLEX, GF2, FieldSpec, prime_field
from .graph import (
    Graph,
    complete_graph,
    cycle_graph,
    edge_expansion,
    expansion_relations_check,
    expansion_report,
    graph_to_permutation_tuple,
    path_graph,
    random_regular_graph,
    spectral_expansion,
    vertex_expansion,
)
from .quantum import (
    QuantumExpansionReport,
    Superoperator,
    apply_adjoint_channel,
    apply_channel,
    cp1_grid_minimum,
    quantum_edge_bracket,
    quantum_edge_value,
    quantum_expansion,
    schatten_edge_bracket,
    schatten_edge_value,
    superoperator_matrix,
    traceless_frame,
)
from .rng import spawn_rng
from .serialize import (
    canonical_json_bytes,
    load_graph,
    load_tuple,
    save_graph,
    save_tuple,
    subspace_from_json,
    subspace_to_json,
    tuple_from_json,
    tuple_to_json,
)
from .verify import (
    SuiteReport,
    coordinate_witness,
    edge_identity_suite,
    graphical_exact_check,
    localized_experiment,
    norm_rank_suite,
    pi_expansion_suite,
    pi_support,
    rank_chain_suite,
    separation_experiment,
    spectral_dimension_check,
    spectrum_lift_check,
    two_vertex_checks,
    witness_suite,
)

__version__ = "0.1.0"
