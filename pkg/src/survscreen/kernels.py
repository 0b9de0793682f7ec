"""Kernel functions, Gram matrices, and the empirical HSIC estimator.

The Hilbert-Schmidt independence criterion between samples ``u`` and ``v``
is estimated here in its biased V-statistic form

    HSIC(u, v) = (n-1)^-2 * tr(K H L H)

where ``K`` and ``L`` are the Gram matrices of ``u`` and ``v`` and
``H = I - J/n`` is the centering matrix.  The trace is evaluated as the
Frobenius inner product <K, HLH>, so the expensive centering of the
response Gram can be done once and reused against many covariate Grams
at O(n^2) each instead of O(n^3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KERNEL_FAMILIES = ("gaussian", "linear", "laplacian")

#: Hard ceiling on sample count so a dense Gram cannot exhaust memory.
DEFAULT_MAX_SAMPLES = 10_000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus bandwidth.

    gaussian:  k(x, y) = exp(-||x - y||^2 / (2 gamma^2))
    laplacian: k(x, y) = exp(-||x - y||_1 / gamma)
    linear:    k(x, y) = <x, y>          (gamma unused)
    """

    family: str = "gaussian"
    gamma: float = 2.0

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(
                f"unknown kernel family {self.family!r}; expected one of {KERNEL_FAMILIES}"
            )
        if self.family in ("gaussian", "laplacian"):
            gamma = float(self.gamma)
            if not np.isfinite(gamma) or gamma <= 0.0:
                raise ValueError(f"bandwidth gamma must be a positive real, got {self.gamma}")


#: The default used throughout: Gaussian with bandwidth 2 on every side.
GAUSSIAN_DEFAULT = KernelSpec("gaussian", 2.0)


def _as_points(x) -> np.ndarray:
    """Coerce input to an (n, d) float64 array; 1-d input becomes (n, 1)."""
    pts = np.asarray(x, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise ValueError(f"points must be a 1-d or 2-d array, got ndim={pts.ndim}")
    return pts


def _gram_unchecked(pts: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Gram matrix of validated (n, d) points. Symmetric by construction."""
    n = pts.shape[0]
    if spec.family == "linear":
        k = pts @ pts.T
        # dgemm output is not guaranteed entrywise symmetric
        return (k + k.T) / 2.0
    # Accumulate per-dimension so (i, j) and (j, i) see identical float ops.
    acc = np.zeros((n, n))
    if spec.family == "gaussian":
        for d in range(pts.shape[1]):
            diff = pts[:, d][:, None] - pts[:, d][None, :]
            acc += diff * diff
        acc *= -1.0 / (2.0 * spec.gamma * spec.gamma)
    else:  # laplacian
        for d in range(pts.shape[1]):
            acc += np.abs(pts[:, d][:, None] - pts[:, d][None, :])
        acc *= -1.0 / spec.gamma
    np.exp(acc, out=acc)
    return acc


def gram(points, spec: KernelSpec = GAUSSIAN_DEFAULT, *, max_samples: int = DEFAULT_MAX_SAMPLES) -> np.ndarray:
    """Pairwise kernel matrix K[i, j] = k(points[i], points[j]).

    Accepts an (n,) or (n, d) array of points. Raises ValueError on
    non-finite coordinates, fewer than two points, or n above
    ``max_samples``.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 samples to form a Gram matrix, got {n}")
    if n > max_samples:
        raise ValueError(f"n={n} exceeds the Gram matrix sample cap of {max_samples}")
    if not np.isfinite(pts).all():
        raise ValueError("points contain NaN or infinite coordinates")
    return _gram_unchecked(pts, spec)


def center(L: np.ndarray) -> np.ndarray:
    """Center a Gram matrix in feature space: returns H L H.

    Equivalent to subtracting row means, column means, and adding back the
    grand mean. Rows and columns of the result sum to zero (within
    roundoff), and centering is idempotent.
    """
    L = np.asarray(L, dtype=np.float64)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {L.shape}")
    row_mean = L.mean(axis=1, keepdims=True)
    col_mean = L.mean(axis=0, keepdims=True)
    grand_mean = L.mean()
    return L - row_mean - col_mean + grand_mean


def hsic(K: np.ndarray, Lc: np.ndarray, *, clamp: bool = True) -> float:
    """Empirical HSIC from a Gram matrix and a pre-centered Gram matrix.

    Computes (n-1)^-2 * <K, Lc>_F, which equals (n-1)^-2 tr(K H L H) when
    ``Lc = center(L)``. For PSD kernels the value is nonnegative up to
    roundoff; with ``clamp`` (the default) tiny negatives are clamped to 0.
    """
    K = np.asarray(K, dtype=np.float64)
    Lc = np.asarray(Lc, dtype=np.float64)
    if K.shape != Lc.shape or K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"Gram matrix shapes do not match: {K.shape} vs {Lc.shape}")
    n = K.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 samples, got n={n}")
    value = float(np.vdot(K, Lc)) / ((n - 1) * (n - 1))
    if clamp and value < 0.0:
        return 0.0
    return value


def hsic_pair(
    u,
    v,
    spec_u: KernelSpec = GAUSSIAN_DEFAULT,
    spec_v: KernelSpec = GAUSSIAN_DEFAULT,
    *,
    clamp: bool = True,
) -> float:
    """Empirical HSIC between two aligned samples.

    ``u`` and ``v`` are (n,) or (n, d) arrays with one row per subject.
    """
    pu = _as_points(u)
    pv = _as_points(v)
    if pu.shape[0] != pv.shape[0]:
        raise ValueError(f"sample sizes differ: {pu.shape[0]} vs {pv.shape[0]}")
    return hsic(gram(pu, spec_u), center(gram(pv, spec_v)), clamp=clamp)
