"""Funk/Hilbert simplex geometry and graph-embedding benchmarks.

Closed-form projective distances on the probability simplex, their
isometry to a variation-normed vector space, smooth log-sum-exp
surrogates, coarse-graining, five model geometries with analytic
gradients, seeded dataset generators, an SGD embedding optimizer with
scikit-learn estimator wrappers, a benchmark suite, and raster
renderers for simplex distance fields and Voronoi diagrams.
"""

from .bench import ExperimentSpec, ResultRecord, run_suite, summarize
from .embedding import (
    BATCH_SIZE_CHOICES,
    LEARNING_RATE_RANGE,
    LOSSES,
    EmbeddingConfig,
    EmbeddingDiverged,
    EmbeddingResult,
    ManifoldEmbedding,
    TunedManifoldEmbedding,
    kl_gradient,
    kl_loss,
    random_search,
    sgd_embed,
    stress_gradient,
    stress_loss,
)
from .geometry import (
    aitchison_distance,
    coarse_grain,
    cross_ratio_distance,
    from_log_coordinates,
    funk_distance,
    hilbert_distance,
    lse_funk_upper,
    lse_hilbert_surrogate,
    to_log_coordinates,
    variation_norm,
)
from .graphs import (
    Graph,
    GraphConnectivityError,
    load_graph,
    load_matrix,
    make_barabasi_albert,
    make_erdos_renyi,
    random_points_distance_matrix,
    random_walk_similarity,
    save_graph,
    save_matrix,
    shortest_path_matrix,
)
from .manifolds import (
    MANIFOLDS,
    manifold_distance,
    manifold_distance_grad,
    pairwise_distances,
    to_manifold_point,
)
from .render import distance_field, voronoi_labels, write_pgm, write_ppm
from .seeding import derive_seed, make_rng

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # geometry
    "funk_distance",
    "hilbert_distance",
    "cross_ratio_distance",
    "variation_norm",
    "to_log_coordinates",
    "from_log_coordinates",
    "aitchison_distance",
    "lse_funk_upper",
    "lse_hilbert_surrogate",
    "coarse_grain",
    # manifolds
    "MANIFOLDS",
    "manifold_distance",
    "manifold_distance_grad",
    "pairwise_distances",
    "to_manifold_point",
    # graphs
    "Graph",
    "GraphConnectivityError",
    "make_erdos_renyi",
    "make_barabasi_albert",
    "shortest_path_matrix",
    "random_walk_similarity",
    "random_points_distance_matrix",
    "save_graph",
    "load_graph",
    "save_matrix",
    "load_matrix",
    # embedding
    "LOSSES",
    "LEARNING_RATE_RANGE",
    "BATCH_SIZE_CHOICES",
    "EmbeddingConfig",
    "EmbeddingResult",
    "EmbeddingDiverged",
    "stress_loss",
    "kl_loss",
    "stress_gradient",
    "kl_gradient",
    "sgd_embed",
    "random_search",
    "ManifoldEmbedding",
    "TunedManifoldEmbedding",
    # bench
    "ExperimentSpec",
    "ResultRecord",
    "run_suite",
    "summarize",
    # render
    "distance_field",
    "voronoi_labels",
    "write_pgm",
    "write_ppm",
    # seeding
    "derive_seed",
    "make_rng",
]
