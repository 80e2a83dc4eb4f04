"""Superpositions of Bernoulli random subgraphs: sampling, exact threshold
quantities, and Monte Carlo verification of the connectivity transition."""

from ._kernels import BACKEND, HAVE_NUMBA
from .analytic import (
    DomainError,
    KappaZeroError,
    ThresholdQuantities,
    kappa,
    m_for_c,
    nonisolation_prob,
    p_degree_positive,
    p_pair_degree_positive,
    pair_nonisolation_prob,
    poisson_factorial_moment,
    poisson_pmf,
    qk_bound_a,
    qk_bound_b,
    qk_exact,
    threshold_quantities,
)
from .connectivity import ComponentCensus, DsuState, census
from .experiment import (
    SweepSpec,
    ThresholdPoint,
    Y0PoissonReport,
    points_to_csv,
    points_to_json,
    run_point,
    run_sweep,
    wilson_interval,
    y0_poisson_test,
)
from .laws import (
    CommunityLaw,
    DensityLaw,
    LawValidationError,
    SizeLaw,
    law_from_jsonable,
    law_to_jsonable,
    load_law_file,
    sample_pair,
    validate,
)
from .rng import RandomState, mix64, substream_seed
from .sampler import (
    GraphConfig,
    sample_community_edges,
    sample_graph,
    sample_vertex_subset,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "CommunityLaw",
    "ComponentCensus",
    "DensityLaw",
    "DomainError",
    "DsuState",
    "GraphConfig",
    "KappaZeroError",
    "LawValidationError",
    "RandomState",
    "SizeLaw",
    "SweepSpec",
    "ThresholdPoint",
    "ThresholdQuantities",
    "Y0PoissonReport",
    "census",
    "kappa",
    "law_from_jsonable",
    "law_to_jsonable",
    "load_law_file",
    "m_for_c",
    "mix64",
    "nonisolation_prob",
    "p_degree_positive",
    "p_pair_degree_positive",
    "pair_nonisolation_prob",
    "points_to_csv",
    "points_to_json",
    "poisson_factorial_moment",
    "poisson_pmf",
    "qk_bound_a",
    "qk_bound_b",
    "qk_exact",
    "run_point",
    "run_sweep",
    "sample_community_edges",
    "sample_graph",
    "sample_pair",
    "sample_vertex_subset",
    "substream_seed",
    "threshold_quantities",
    "validate",
    "wilson_interval",
    "y0_poisson_test",
]
