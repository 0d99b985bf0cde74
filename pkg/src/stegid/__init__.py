"""Steganographer identification by feature bagging.

Rank the actors of a media collection by suspicion of steganography:
partition each actor's feature vectors into points, measure point distances
with the unbiased kernel MMD (Euclidean for singletons), score anomalies
with LOF, fuse point ranks into actor scores, and optionally ensemble many
random-subspace sub-models into a final suspicion ranking.
"""

from .bagging import (
    BaggedRanking,
    SubModelSpec,
    detect_bagged,
    fuse_rankings,
    project,
    sample_subspaces,
)
from .corpus import Corpus, Point, corpus_from_rows, normalize, partition
from .detector import (
    ActorRanking,
    RankedTriple,
    detect_single,
    fuse_actor_scores,
    rank_points,
)
from .distance import (
    Kernel,
    LINEAR,
    distance_matrix,
    euclidean,
    kernel_eval,
    mmd_unbiased,
)
from .estimators import FeatureBaggingDetector, MmdLofDetector
from .feature_io import load_features, read_features, write_features
from .harness import (
    ExperimentReport,
    SyntheticConfig,
    TrialResult,
    average_rank,
    generate_trial,
    run_experiment,
    run_trials,
)
from .lof import LofParams, lof_scores

__version__ = "0.1.0"

__all__ = [
    "ActorRanking",
    "BaggedRanking",
    "Corpus",
    "ExperimentReport",
    "FeatureBaggingDetector",
    "Kernel",
    "LINEAR",
    "LofParams",
    "MmdLofDetector",
    "Point",
    "RankedTriple",
    "SubModelSpec",
    "SyntheticConfig",
    "TrialResult",
    "average_rank",
    "corpus_from_rows",
    "detect_bagged",
    "detect_single",
    "distance_matrix",
    "euclidean",
    "fuse_actor_scores",
    "fuse_rankings",
    "generate_trial",
    "kernel_eval",
    "load_features",
    "lof_scores",
    "mmd_unbiased",
    "normalize",
    "partition",
    "project",
    "rank_points",
    "read_features",
    "run_experiment",
    "run_trials",
    "sample_subspaces",
    "write_features",
]
