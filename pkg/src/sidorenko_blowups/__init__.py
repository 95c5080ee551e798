"""Blow-up constructions for Sidorenko's conjecture, with exact density checks."""

from .graphs import (
    BipartiteGraph,
    DegreeProfile,
    GraphError,
    WeightVector,
    alpha_profile,
    blow_up,
    companion_graph,
    degree_profile,
    disjoint_union,
    make_complete_bipartite,
    make_downset,
    make_even_cycle,
    make_mobius,
    make_mr_incidence,
    minimal_blowup_exponent,
    theorem1_applies,
    weighted_edge_count,
)
from .graphon import (
    GraphonError,
    StepGraphon,
    constant_graphon,
    edge_density,
    graphon_from_graph,
    hom_density,
    hom_density_oracle,
    random_graphon,
    rho,
    rooted_density,
    weighted_density,
)
from .hypergraph import HypergraphError, PartiteHypergraph
from .chains import (
    ChainVertexLabel,
    DivisibilityError,
    ProductKernel,
    StepKernel,
    build_G_alpha,
    build_H_alpha,
    chain_betas,
    chain_exponents,
    hyper_density,
    hyper_density_oracle,
    hyper_density_structured,
    product_kernel,
    weak_norming_margin,
)
from .reflection import (
    GroupSpec,
    ReflectionSpec,
    blowup_spec,
    enumerate_cosets,
    galpha_spec,
    halpha_spec,
    hypergraph_blowup,
    partite_isomorphic,
    reflection_hypergraph,
)
from .verify import (
    CHECK_IDS,
    SizeConfig,
    TolerancePolicy,
    VerificationReport,
    negative_control,
    run_check,
    write_report,
)

__version__ = "0.1.0"
