"""Actor/feature data model: corpora, normalization, and disjoint point partitioning.

A corpus holds n actors with m feature vectors each (H components per vector).
Every downstream stage consumes either the corpus itself or the "points"
obtained by splitting each actor's vectors into p disjoint, equal-size,
contiguous blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Components whose population std falls below this are frozen to 0 instead of
# being divided by a near-zero scale.
ZERO_VARIANCE_EPS = 1e-12


def _readonly_f64(a, *, ndim: int, name: str) -> np.ndarray:
    """Return `a` as a read-only float64 array, copying only if needed."""
    out = np.asarray(a, dtype=np.float64)
    if out.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {out.shape}")
    if out.flags.writeable:
        out = out.copy(order="C")
        out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Corpus:
    """Feature vectors for n actors, m vectors per actor, H components each.

    `features` has shape (n, m, H) and is stored read-only so corpora can be
    shared freely between pipeline stages and parallel workers.  `normalized`
    records whether per-component zero-mean/unit-variance preprocessing has
    been applied.
    """

    features: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        f = _readonly_f64(self.features, ndim=3, name="features")
        n, m, h = f.shape
        if n < 1 or m < 1 or h < 1:
            raise ValueError("corpus is empty")
        if not np.all(np.isfinite(f)):
            i, r, c = np.argwhere(~np.isfinite(f))[0]
            raise ValueError(
                f"non-finite feature value at actor {i}, row {r}, component {c}"
            )
        object.__setattr__(self, "features", f)

    @property
    def n(self) -> int:
        """Number of actors."""
        return self.features.shape[0]

    @property
    def m(self) -> int:
        """Feature vectors per actor."""
        return self.features.shape[1]

    @property
    def H(self) -> int:
        """Feature dimension."""
        return self.features.shape[2]


@dataclass(frozen=True)
class Point:
    """One disjoint block of q consecutive feature vectors of a single actor."""

    actor: int
    point_index: int
    vectors: np.ndarray  # (q, H') block, read-only

    def __post_init__(self):
        v = _readonly_f64(self.vectors, ndim=2, name="vectors")
        if v.shape[0] < 1:
            raise ValueError("point must hold at least one vector")
        if self.actor < 0 or self.point_index < 0:
            raise ValueError("actor and point_index must be non-negative")
        object.__setattr__(self, "vectors", v)

    @property
    def q(self) -> int:
        return self.vectors.shape[0]


def normalize(corpus: Corpus) -> Corpus:
    """Return the corpus with each feature component shifted/scaled to zero
    mean and unit variance.

    Statistics are computed once, globally, over all n*m vectors (population
    standard deviation).  Components whose std is below ``ZERO_VARIANCE_EPS``
    are set to 0 everywhere rather than rejected, since real steganalysis
    feature sets contain constant bins.
    """
    if corpus.normalized:
        raise ValueError("corpus is already normalized")
    n, m, _ = corpus.features.shape
    if n * m < 2:
        raise ValueError("need at least 2 vectors to normalize")

    rows = corpus.features.reshape(n * m, corpus.H)
    mu = rows.mean(axis=0)
    sigma = np.sqrt(((rows - mu) ** 2).mean(axis=0))
    frozen = sigma < ZERO_VARIANCE_EPS

    out = (corpus.features - mu) / np.where(frozen, 1.0, sigma)
    out[..., frozen] = 0.0
    return Corpus(out, normalized=True)


def partition(corpus: Corpus, p: int) -> list[Point]:
    """Split every actor's m vectors into p disjoint contiguous blocks of
    q = m/p vectors, in stored row order.

    Returns the p*n points ordered actor-major: all points of actor 0 first,
    then actor 1, and so on.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p > corpus.m:
        raise ValueError(f"p={p} exceeds vectors per actor m={corpus.m}")
    if corpus.m % p != 0:
        raise ValueError(f"p={p} does not divide m={corpus.m}")

    q = corpus.m // p
    points = []
    for i in range(corpus.n):
        for j in range(p):
            block = corpus.features[i, j * q : (j + 1) * q, :]
            points.append(Point(actor=i, point_index=j, vectors=block))
    return points


def corpus_from_rows(rows, actor_labels) -> tuple[Corpus, list]:
    """Group a flat (n_samples, H) row matrix into a Corpus by actor label.

    Labels are mapped to dense actor indices in first-appearance order; rows
    keep their appearance order within each actor.  Every actor must
    contribute the same number of rows.

    Returns the corpus and the label list (dense index -> original label).
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError(f"rows must be 2-D, got shape {rows.shape}")
    labels_arr = np.asarray(actor_labels, dtype=object).ravel()
    if len(labels_arr) != rows.shape[0]:
        raise ValueError(
            f"got {rows.shape[0]} rows but {len(labels_arr)} actor labels"
        )
    if rows.shape[0] == 0:
        raise ValueError("no rows given")

    order: list = []
    groups: dict = {}
    for idx, label in enumerate(labels_arr):
        if label not in groups:
            groups[label] = []
            order.append(label)
        groups[label].append(idx)

    counts = {label: len(groups[label]) for label in order}
    m = counts[order[0]]
    for label in order:
        if counts[label] != m:
            raise ValueError(
                f"actor {label!r} has {counts[label]} rows, expected {m}"
            )

    stacked = np.stack([rows[groups[label]] for label in order])
    return Corpus(stacked), order
