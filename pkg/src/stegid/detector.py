"""Single-model detection pipeline: score points, sort, fuse into actor ranks.

Fusion converts the sorted anomaly triples into per-actor scores: the point at
1-based sorted position j contributes (pn + 1 - j) / p to its actor, so the
actor whose points rank as most anomalous gets the largest score.  Scores are
kept as exact rationals, which makes rank-mass conservation and tie detection
exact rather than float-approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .corpus import Corpus, Point, partition
from .distance import Kernel, LINEAR, distance_matrix
from .lof import LofParams, lof_scores


@dataclass(frozen=True)
class RankedTriple:
    """One point in the sorted anomaly ranking: score u, actor v, point index w."""

    score: float
    actor: int
    point_index: int


@dataclass(frozen=True)
class ActorRanking:
    """Actors ordered most suspicious first, with their fusion scores."""

    entries: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        scores = [s for _, s in self.entries]
        if any(scores[i] < scores[i + 1] for i in range(len(scores) - 1)):
            raise ValueError("entries must be ordered by non-increasing score")
        actors = [a for a, _ in self.entries]
        if len(set(actors)) != len(actors):
            raise ValueError("each actor may appear only once")

    @property
    def actors(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.entries)

    @property
    def scores(self) -> tuple[Fraction, ...]:
        return tuple(s for _, s in self.entries)

    def rank_of(self, actor: int) -> int:
        """1-based position of an actor (1 = most suspicious)."""
        for pos, (a, _) in enumerate(self.entries, start=1):
            if a == actor:
                return pos
        raise KeyError(f"actor {actor} not in ranking")


def rank_points(scores, points: list[Point]) -> list[RankedTriple]:
    """Sort points by anomaly score, descending; ties break by ascending
    actor index, then point index."""
    scores = np.asarray(scores, dtype=np.float64)
    if len(scores) != len(points):
        raise ValueError(
            f"got {len(scores)} scores for {len(points)} points"
        )
    triples = [
        RankedTriple(float(u), pt.actor, pt.point_index)
        for u, pt in zip(scores, points)
    ]
    triples.sort(key=lambda t: (-t.score, t.actor, t.point_index))
    return triples


def fuse_actor_scores(triples: list[RankedTriple], n: int, p: int) -> ActorRanking:
    """Fuse a sorted point ranking into per-actor scores.

    The triple at 1-based position j adds (pn + 1 - j) / p to its actor's
    score; every actor must appear exactly p times.  Output is sorted by
    score descending, ties broken by ascending actor index.
    """
    pn = p * n
    if len(triples) != pn:
        raise ValueError(f"expected {pn} triples, got {len(triples)}")
    weights = [0] * n
    counts = [0] * n
    for j, t in enumerate(triples, start=1):
        if not 0 <= t.actor < n:
            raise ValueError(f"actor index {t.actor} out of range [0, {n})")
        weights[t.actor] += pn + 1 - j
        counts[t.actor] += 1
    for a, c in enumerate(counts):
        if c != p:
            raise ValueError(f"actor {a} appears {c} times, expected {p}")

    scores = [Fraction(w, p) for w in weights]
    order = sorted(range(n), key=lambda a: (-scores[a], a))
    return ActorRanking(tuple((a, scores[a]) for a in order))


def detect_single(
    corpus: Corpus,
    p: int = 1,
    kernel: Kernel = LINEAR,
    lof: LofParams = LofParams(),
) -> ActorRanking:
    """Run the single-model pipeline on a normalized corpus.

    Partition each actor into p points, compute the pairwise distance matrix
    (MMD, or Euclidean when p = m), score points with LOF, sort, and fuse
    into an actor ranking with the most suspicious actor first.
    """
    if not corpus.normalized:
        raise ValueError("corpus must be normalized before detection")
    points = partition(corpus, p)
    d = distance_matrix(points, kernel)
    scores = lof_scores(d, lof)
    triples = rank_points(scores, points)
    return fuse_actor_scores(triples, corpus.n, p)
