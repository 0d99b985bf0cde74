"""Kernels, the unbiased MMD distance between vector sets, and distance matrices.

The distance between two points (sets of q feature vectors each) is the
square root of the unbiased MMD estimate

    S = (1 / (q^2 - q)) * sum_{i != j} h[i, j],
    h[i, j] = k(x_i, x_j) + k(y_i, y_j) - k(x_i, y_j) - k(x_j, y_i),

clamped at zero before the root: the unbiased estimate can dip negative and
the downstream outlier scorer requires non-negative distances.  Singleton
points (q = 1) fall back to the Euclidean metric, since the estimator's
pair sum is empty there.

All reductions go through ``np.einsum``/elementwise sums rather than BLAS
matrix products, so results are bit-identical regardless of the BLAS thread
count the process happens to run with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Point

KERNEL_KINDS = ("linear", "gaussian")


@dataclass(frozen=True)
class Kernel:
    """Kernel choice: ``linear`` (dot product, the recommended default) or
    ``gaussian`` with exp(-gamma * ||x - y||^2).

    ``gamma=None`` on a gaussian kernel means "1 / current feature dimension",
    resolved where the data dimension is known; this keeps exponents O(1) on
    normalized features.
    """

    kind: str = "linear"
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "linear" and self.gamma is not None:
            raise ValueError("gamma is only valid for the gaussian kernel")
        if self.gamma is not None and not (
            math.isfinite(self.gamma) and self.gamma > 0
        ):
            raise ValueError(f"gamma must be a positive real, got {self.gamma}")


LINEAR = Kernel("linear")


def _gamma_for(kernel: Kernel, dim: int) -> float:
    return kernel.gamma if kernel.gamma is not None else 1.0 / dim


def _as_vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    return v


def kernel_eval(kernel: Kernel, x, y) -> float:
    """Evaluate the kernel on a single pair of vectors."""
    xv = _as_vector(x, "x")
    yv = _as_vector(y, "y")
    if xv.shape != yv.shape:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    if kernel.kind == "linear":
        return float((xv * yv).sum())
    g = _gamma_for(kernel, xv.shape[0])
    return float(np.exp(-g * ((xv - yv) ** 2).sum()))


def euclidean(x, y) -> float:
    """L2 norm of the difference of two vectors."""
    xv = _as_vector(x, "x")
    yv = _as_vector(y, "y")
    if xv.shape != yv.shape:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    return float(np.sqrt(((xv - yv) ** 2).sum()))


def _gram(kernel: Kernel, a: np.ndarray, b: np.ndarray, gamma: float | None):
    """Pairwise kernel matrix between the rows of `a` and `b`."""
    dots = np.einsum("ik,jk->ij", a, b)
    if kernel.kind == "linear":
        return dots
    sq_a = (a**2).sum(axis=1)
    sq_b = (b**2).sum(axis=1)
    d2 = np.maximum(sq_a[:, None] + sq_b[None, :] - 2.0 * dots, 0.0)
    return np.exp(-gamma * d2)


def _offdiag_sum(k: np.ndarray) -> float:
    return float(k.sum() - np.trace(k))


def _mmd_sq_from_grams(kxx, kyy, kxy, q: int) -> float:
    return (
        _offdiag_sum(kxx)
        + _offdiag_sum(kyy)
        - 2.0 * (float(kxy.sum()) - float(np.trace(kxy)))
    ) / (q * q - q)


def mmd_unbiased(kernel: Kernel, x, y) -> float:
    """Unbiased MMD estimate between two equally sized sets of vectors.

    `x` and `y` are (q, dim) arrays with q >= 2.  The i-th vector of `x` is
    paired with the i-th vector of `y` in the cross terms, i.e. stored order
    defines the pairing.  Returns sqrt(max(S, 0)).
    """
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.ndim != 2 or yv.ndim != 2:
        raise ValueError("x and y must be 2-D (q, dim) arrays")
    q = xv.shape[0]
    if yv.shape[0] != q:
        raise ValueError(f"|X|={q} and |Y|={yv.shape[0]} must be equal")
    if q < 2:
        raise ValueError(
            "unbiased MMD is undefined for singleton sets (q < 2); "
            "use euclidean() instead"
        )
    if xv.shape[1] != yv.shape[1]:
        raise ValueError(
            f"dimension mismatch: {xv.shape[1]} vs {yv.shape[1]}"
        )
    gamma = _gamma_for(kernel, xv.shape[1]) if kernel.kind == "gaussian" else None
    kxx = _gram(kernel, xv, xv, gamma)
    kyy = _gram(kernel, yv, yv, gamma)
    kxy = _gram(kernel, xv, yv, gamma)
    s = _mmd_sq_from_grams(kxx, kyy, kxy, q)
    return float(np.sqrt(max(s, 0.0)))


def _symmetrized(d: np.ndarray) -> np.ndarray:
    """Mirror the strict upper triangle so d[i,j] == d[j,i] holds exactly."""
    upper = np.triu(d, 1)
    out = upper + upper.T
    np.fill_diagonal(out, 0.0)
    return out


def _euclidean_matrix(rows: np.ndarray) -> np.ndarray:
    sq = (rows**2).sum(axis=1)
    dots = np.einsum("ik,jk->ij", rows, rows)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * dots, 0.0)
    return _symmetrized(np.sqrt(d2))


def _linear_mmd_matrix(stack: np.ndarray) -> np.ndarray:
    # For the linear kernel every block sum reduces to sums of dot products,
    # so the whole matrix comes from two small Gram-style contractions.
    n_points, q, dim = stack.shape
    sums = stack.sum(axis=1)
    totals = np.einsum("ih,jh->ij", sums, sums)  # sum_ij k(a_i, b_j)
    flat = np.ascontiguousarray(stack.reshape(n_points, q * dim))
    traces = np.einsum("ak,bk->ab", flat, flat)  # sum_i k(a_i, b_i)
    off = np.diagonal(totals) - np.diagonal(traces)
    s = (off[:, None] + off[None, :] - 2.0 * (totals - traces)) / (q * q - q)
    return _symmetrized(np.sqrt(np.maximum(s, 0.0)))


def _gaussian_mmd_matrix(stack: np.ndarray, gamma: float) -> np.ndarray:
    n_points, q, _ = stack.shape
    kernel = Kernel("gaussian", gamma)
    offs = np.empty(n_points)
    for a in range(n_points):
        offs[a] = _offdiag_sum(_gram(kernel, stack[a], stack[a], gamma))
    d = np.zeros((n_points, n_points))
    denom = q * q - q
    for a in range(n_points):
        for b in range(a + 1, n_points):
            kab = _gram(kernel, stack[a], stack[b], gamma)
            s = (offs[a] + offs[b] - 2.0 * (float(kab.sum()) - float(np.trace(kab)))) / denom
            d[a, b] = d[b, a] = math.sqrt(max(s, 0.0))
    return d


def distance_matrix(points: list[Point], kernel: Kernel = LINEAR) -> np.ndarray:
    """Symmetric pairwise distance matrix over a list of points.

    Uses the unbiased MMD when points hold q >= 2 vectors and the Euclidean
    metric between the single vectors when q == 1.  The result has an exactly
    zero diagonal and exact symmetry (each unordered pair is evaluated once).
    """
    if not points:
        raise ValueError("no points given")
    qs = {p.vectors.shape[0] for p in points}
    if len(qs) != 1:
        raise ValueError(f"points have mixed sizes q={sorted(qs)}")
    dims = {p.vectors.shape[1] for p in points}
    if len(dims) != 1:
        raise ValueError(f"points have mixed dimensions {sorted(dims)}")
    (q,) = qs
    (dim,) = dims

    stack = np.stack([p.vectors for p in points])
    if q == 1:
        return _euclidean_matrix(stack[:, 0, :])
    if kernel.kind == "linear":
        return _linear_mmd_matrix(stack)
    return _gaussian_mmd_matrix(stack, _gamma_for(kernel, dim))
