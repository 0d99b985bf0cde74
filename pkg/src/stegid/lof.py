"""Local outlier factor scoring over a precomputed distance matrix.

Follows the classical definition: the k-distance neighborhood N_k(o) contains
every point within the k-th nearest-neighbor distance (ties included, so
|N_k(o)| >= k), reachability distances are max(k-distance(p), d(o, p)), and
LOF(o) is the mean ratio of the neighbors' local reachability density to
o's own.  A small epsilon keeps densities finite when duplicated points
produce zero reachability sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LRD_EPS = 1e-12


@dataclass(frozen=True)
class LofParams:
    """Neighborhood size for LOF."""

    k: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def check_distance_matrix(d: np.ndarray) -> np.ndarray:
    """Validate a square, finite, non-negative, exactly symmetric matrix with
    a zero diagonal; returns it as float64."""
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("distance matrix contains non-finite entries")
    if np.any(d < 0):
        raise ValueError("distance matrix contains negative entries")
    if not np.array_equal(d, d.T):
        raise ValueError("distance matrix is not symmetric")
    if np.any(np.diagonal(d) != 0):
        raise ValueError("distance matrix diagonal must be zero")
    return d


def lof_scores(d: np.ndarray, params: LofParams = LofParams()) -> np.ndarray:
    """LOF score per point, from an (N, N) distance matrix.

    Requires N >= k + 1 so every point has k neighbors to rank against.
    Scores near 1 mean locally typical density; larger values mean the point
    sits in a sparser region than its neighbors.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    k = params.k
    if n < k + 1:
        raise ValueError(f"need at least k+1={k + 1} points, got {n}")

    masked = d.copy()
    np.fill_diagonal(masked, np.inf)
    kdist = np.sort(masked, axis=1)[:, k - 1]

    nbr = masked <= kdist[:, None]  # nbr[o, p]: p is in N_k(o)
    cnt = nbr.sum(axis=1)

    reach = np.maximum(kdist[None, :], d)  # reach[o, p] = max(kdist(p), d(o, p))
    reach_sum = (reach * nbr).sum(axis=1)
    lrd = cnt / (reach_sum + LRD_EPS)

    lof = (nbr * lrd[None, :]).sum(axis=1) / (cnt * lrd)
    return lof
