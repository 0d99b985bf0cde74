"""Scikit-learn style estimators wrapping the suspicion-ranking pipelines.

Both estimators consume a flat sample matrix X of shape (n_samples,
n_features) together with an actor label per sample, normalize the pooled
features, and rank the actors by suspicion.  They follow the usual estimator
conventions (``get_params``/``set_params``, attributes set by ``fit`` carry a
trailing underscore), so they compose with pipelines and parameter search.

Example:
    >>> det = FeatureBaggingDetector(n_submodels=16, random_state=0)
    >>> det.fit(X, actors)
    >>> det.ranking_[0]          # most suspicious actor label
    >>> det.suspicion_scores_    # scores aligned with det.actor_ids_
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .bagging import detect_bagged
from .corpus import corpus_from_rows, normalize
from .detector import detect_single
from .distance import Kernel
from .lof import LofParams


def _validate_inputs(X, y):
    """Shared input validation: numeric 2-D X plus one actor label per row."""
    X = check_array(X, dtype=np.float64, ensure_min_samples=2)
    if y is None:
        raise ValueError("actor labels are required (pass y)")
    y = np.asarray(y, dtype=object).ravel()
    if len(y) != X.shape[0]:
        raise ValueError(
            f"X has {X.shape[0]} rows but y has {len(y)} labels"
        )
    return X, y


class _ActorRankingEstimator(BaseEstimator):
    """Shared fit plumbing for the actor-ranking detectors."""

    def _kernel(self) -> Kernel:
        return Kernel(self.kernel, self.gamma)

    def _lof(self) -> LofParams:
        return LofParams(self.n_neighbors)

    def _store_ranking(self, labels, ranking) -> None:
        scores = np.empty(len(labels))
        for actor, score in ranking.entries:
            scores[actor] = float(score)
        self.actor_ids_ = np.asarray(labels, dtype=object)
        self.suspicion_scores_ = scores
        self.ranking_ = np.asarray(
            [labels[a] for a in ranking.actors], dtype=object
        )

    def fit_predict(self, X, y):
        """Fit and return the actor labels ordered most suspicious first."""
        return self.fit(X, y).ranking_


class MmdLofDetector(_ActorRankingEstimator):
    """Single-model steganographer detector on the full feature space.

    Groups samples by actor, normalizes every feature component to zero mean
    and unit variance over the pooled corpus, splits each actor into
    ``points_per_actor`` vector sets, measures pairwise set distances with
    the unbiased MMD (Euclidean when sets are singletons), scores sets with
    LOF, and fuses the set ranking into per-actor suspicion scores.

    Parameters
    ----------
    points_per_actor : int, default=1
        Number of disjoint vector sets per actor; must divide the per-actor
        sample count.
    n_neighbors : int, default=10
        LOF neighborhood size.
    kernel : {"linear", "gaussian"}, default="linear"
        Kernel for the MMD estimate.
    gamma : float, optional
        Gaussian bandwidth; defaults to 1 / feature dimension.

    Attributes
    ----------
    actor_ids_ : ndarray of object
        Unique actor labels in first-appearance order.
    suspicion_scores_ : ndarray of float
        Fusion score per actor, aligned with ``actor_ids_``.
    ranking_ : ndarray of object
        Actor labels ordered most suspicious first.
    """

    def __init__(self, points_per_actor=1, n_neighbors=10,
                 kernel="linear", gamma=None):
        self.points_per_actor = points_per_actor
        self.n_neighbors = n_neighbors
        self.kernel = kernel
        self.gamma = gamma

    def fit(self, X, y):
        X, y = _validate_inputs(X, y)
        corpus, labels = corpus_from_rows(X, y)
        ranking = detect_single(
            normalize(corpus), self.points_per_actor,
            self._kernel(), self._lof(),
        )
        self._store_ranking(labels, ranking)
        return self


class FeatureBaggingDetector(_ActorRankingEstimator):
    """Random-subspace ensemble steganographer detector.

    Runs ``n_submodels`` copies of the single-model pipeline, each on a
    random feature subspace with dimension drawn from [ceil(H/2), H-1], and
    averages the reversed actor ranks across sub-models into the final
    suspicion scores.

    Parameters
    ----------
    n_submodels : int, default=16
        Ensemble size.
    points_per_actor, n_neighbors, kernel, gamma
        As in :class:`MmdLofDetector`.
    random_state : int, default=0
        Master seed; sub-model subspaces derive from it deterministically.

    Attributes
    ----------
    actor_ids_, suspicion_scores_, ranking_
        As in :class:`MmdLofDetector`.
    submodel_rankings_ : list of ndarray
        Per-submodel actor label rankings.
    subspaces_ : list of SubModelSpec
        The sampled subspace specs (dimension, components, derived seed).
    """

    def __init__(self, n_submodels=16, points_per_actor=1, n_neighbors=10,
                 kernel="linear", gamma=None, random_state=0):
        self.n_submodels = n_submodels
        self.points_per_actor = points_per_actor
        self.n_neighbors = n_neighbors
        self.kernel = kernel
        self.gamma = gamma
        self.random_state = random_state

    def fit(self, X, y):
        X, y = _validate_inputs(X, y)
        corpus, labels = corpus_from_rows(X, y)
        bagged = detect_bagged(
            normalize(corpus), self.points_per_actor, self._kernel(),
            self._lof(), self.n_submodels, self.random_state,
        )
        self._store_ranking(labels, bagged.final)
        self.submodel_rankings_ = [
            np.asarray([labels[a] for a in r.actors], dtype=object)
            for r in bagged.submodels
        ]
        self.subspaces_ = list(bagged.specs)
        return self
