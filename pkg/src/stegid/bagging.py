"""Feature-bagging ensemble: random subspaces, per-submodel detection, rank fusion.

T sub-models each run the single-model pipeline on a random subset of feature
components with dimension drawn from [ceil(H/2), H-1].  The final score of an
actor averages its reversed rank (n + 1 - rank) over the T sub-model rankings,
so an actor ranked first everywhere scores n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .corpus import Corpus
from .detector import ActorRanking, detect_single
from .distance import Kernel, LINEAR
from .lof import LofParams


@dataclass(frozen=True)
class SubModelSpec:
    """One sub-model: its subspace dimension, component subset, and RNG seed."""

    index: int
    d: int
    components: tuple[int, ...]
    seed: int


@dataclass(frozen=True)
class BaggedRanking:
    """Final fused ranking plus the per-submodel rankings and specs behind it."""

    final: ActorRanking
    submodels: tuple[ActorRanking, ...]
    specs: tuple[SubModelSpec, ...]


def submodel_seed(master_seed: int, index: int) -> int:
    """Deterministically derive sub-model `index`'s seed from the master seed."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_subspaces(H: int, T: int, master_seed: int) -> list[SubModelSpec]:
    """Draw T random subspaces of the H-dimensional feature space.

    Each dimension d_i is uniform on [ceil(H/2), H-1] and the d_i components
    are sampled uniformly without replacement; repeats across sub-models are
    allowed.  Fully determined by the master seed.
    """
    if H < 2:
        raise ValueError(f"H must be >= 2, got {H}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    lo = (H + 1) // 2
    hi = H - 1
    specs = []
    for i in range(T):
        seed = submodel_seed(master_seed, i)
        rng = np.random.default_rng(seed)
        d = int(rng.integers(lo, hi + 1))
        components = np.sort(rng.choice(H, size=d, replace=False))
        specs.append(
            SubModelSpec(
                index=i,
                d=d,
                components=tuple(int(c) for c in components),
                seed=seed,
            )
        )
    return specs


def project(corpus: Corpus, spec: SubModelSpec) -> Corpus:
    """Restrict a corpus to the spec's feature components.

    The number of vectors per actor is unchanged; normalization carries over
    because the preprocessing is per-component.
    """
    for c in spec.components:
        if not 0 <= c < corpus.H:
            raise ValueError(f"component index {c} out of range [0, {corpus.H})")
    if len(set(spec.components)) != len(spec.components):
        raise ValueError("component indices must be distinct")
    selected = corpus.features[:, :, list(spec.components)]
    selected.flags.writeable = False
    return Corpus(selected, normalized=corpus.normalized)


def fuse_rankings(rankings: list[ActorRanking], n: int) -> ActorRanking:
    """Average reversed ranks over sub-model rankings into final scores.

    Each ranking must be a full permutation of the n actors.  An actor at
    1-based rank r in a sub-model contributes (n + 1 - r) / T; output is
    sorted descending with ties broken by ascending actor index.
    """
    if not rankings:
        raise ValueError("need at least one ranking to fuse")
    t = len(rankings)
    reversed_rank_sum = [0] * n
    for ranking in rankings:
        if sorted(ranking.actors) != list(range(n)):
            raise ValueError(
                f"ranking over {ranking.actors} is not a permutation of 0..{n - 1}"
            )
        for rank, actor in enumerate(ranking.actors, start=1):
            reversed_rank_sum[actor] += n + 1 - rank

    scores = [Fraction(s, t) for s in reversed_rank_sum]
    order = sorted(range(n), key=lambda a: (-scores[a], a))
    return ActorRanking(tuple((a, scores[a]) for a in order))


def detect_bagged(
    corpus: Corpus,
    p: int = 1,
    kernel: Kernel = LINEAR,
    lof: LofParams = LofParams(),
    T: int = 16,
    master_seed: int = 0,
) -> BaggedRanking:
    """Run the feature-bagging pipeline on a normalized corpus.

    Samples T random subspaces, runs the single-model detector on each
    projection, and fuses the T rankings into the final actor ranking.
    Deterministic given the master seed.
    """
    if not corpus.normalized:
        raise ValueError("corpus must be normalized before detection")
    specs = sample_subspaces(corpus.H, T, master_seed)
    rankings = [
        detect_single(project(corpus, spec), p, kernel, lof) for spec in specs
    ]
    final = fuse_rankings(rankings, corpus.n)
    return BaggedRanking(final=final, submodels=tuple(rankings), specs=tuple(specs))
