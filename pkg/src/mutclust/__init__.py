"""Size-bounded correlation clustering of cancer mutation profiles.

Pipeline: parse alteration/CNV/expression/network files, build pairwise
positive and negative clustering weights, solve the LP relaxation with
lazy triangle constraints, round the fractional solution into clusters of
at most K+1 genes, and score the result against exclusivity, coverage,
network-distance, and driver benchmarks.
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, InputError
from .evaluate import (
    ClusterReport,
    ContingencyTable,
    cluster_coverage,
    cluster_exclusivity,
    evaluate_clustering,
    fisher_exclusivity_p,
    fisher_point,
    pairwise_distances,
)
from .ingest import (
    AlterationMatrix,
    CnvMatrix,
    ExpressionMatrix,
    GeneCatalog,
    InteractionNetwork,
    MutationMatrix,
    SampleCatalog,
    filter_top_genes,
    merge_cnv,
    zscore,
)
from .lp import FractionalSolution, objective, separate_triangles, solve_lp
from .oracle import ExactResult, solve_exact
from .rounding import (
    Clustering,
    RoundingParams,
    clustering_cost,
    excess_weight,
    round_solution,
    total_excess,
)
from .synth import PlantedInstance, compare_clusterings, make_planted, make_random
from .weights import EdgeWeights, WeightConfig, build_weights

__all__ = [
    "AlterationMatrix",
    "CnvMatrix",
    "ClusterReport",
    "Clustering",
    "ContingencyTable",
    "ConvergenceError",
    "EdgeWeights",
    "ExactResult",
    "ExpressionMatrix",
    "FractionalSolution",
    "GeneCatalog",
    "InputError",
    "InteractionNetwork",
    "MutationMatrix",
    "PlantedInstance",
    "RoundingParams",
    "SampleCatalog",
    "WeightConfig",
    "build_weights",
    "cluster_coverage",
    "cluster_exclusivity",
    "clustering_cost",
    "compare_clusterings",
    "evaluate_clustering",
    "excess_weight",
    "filter_top_genes",
    "fisher_exclusivity_p",
    "fisher_point",
    "make_planted",
    "make_random",
    "merge_cnv",
    "objective",
    "pairwise_distances",
    "round_solution",
    "separate_triangles",
    "solve_exact",
    "solve_lp",
    "total_excess",
    "zscore",
]
