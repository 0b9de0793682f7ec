"""Marginal utility screening for right-censored survival responses.

The observed pair (time, status) is standardized marginally into a
two-column response; each covariate's utility is its empirical HSIC
against that response. Covariates are ranked by decreasing utility and
the top ``d_n`` form the selected set. A distance-correlation utility is
provided as an optional baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateStatusError, DegenerateTimesError, ValidationError
from .kernels import GAUSSIAN_DEFAULT, KernelSpec, _gram_unchecked, center, gram, hsic


@dataclass
class SurvivalDataset:
    """n subjects of (observed time, event status) plus an n x p covariate matrix.

    ``status`` is 1 when the event was observed, 0 when censored.
    """

    times: np.ndarray
    status: np.ndarray
    covariates: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        status = np.asarray(self.status)
        self.covariates = np.asarray(self.covariates, dtype=np.float64)
        if self.times.ndim != 1:
            raise ValidationError("times must be a 1-d vector")
        if status.ndim != 1 or self.covariates.ndim != 2:
            raise ValidationError("status must be 1-d and covariates 2-d")
        n = self.times.shape[0]
        if status.shape[0] != n or self.covariates.shape[0] != n:
            raise ValidationError(
                f"inconsistent lengths: {n} times, {status.shape[0]} status, "
                f"{self.covariates.shape[0]} covariate rows"
            )
        if n < 3:
            raise ValidationError(f"need at least 3 subjects, got {n}")
        if not np.isfinite(self.times).all() or (self.times < 0).any():
            raise ValidationError("times must be finite and nonnegative")
        if not np.isin(status, (0, 1)).all():
            raise ValidationError("status entries must be exactly 0 or 1")
        self.status = status.astype(np.int8)
        if not np.isfinite(self.covariates).all():
            raise ValidationError("covariates contain NaN or infinite values")

    @property
    def n(self) -> int:
        return self.times.shape[0]

    @property
    def p(self) -> int:
        return self.covariates.shape[1]


@dataclass
class StandardizedResponse:
    """Two-column response (time, status), each centered and scaled to unit sd."""

    y: np.ndarray
    mu_x: float
    sd_x: float
    mu_d: float
    sd_d: float


@dataclass
class ScreenResult:
    """Per-covariate utilities plus the induced ranking and selection.

    ``ranking`` is a permutation of 0..p-1 ordered by decreasing utility
    (ties broken by ascending covariate index); ``selected`` is its first
    ``d_n`` entries.
    """

    omega: np.ndarray
    ranking: np.ndarray
    selected: np.ndarray
    d_n: int
    spec_z: KernelSpec = field(default=GAUSSIAN_DEFAULT)
    spec_y: KernelSpec = field(default=GAUSSIAN_DEFAULT)


def standardize(times, status) -> StandardizedResponse:
    """Standardize (time, status) marginally with sample moments (ddof=1).

    Raises DegenerateTimesError when times have zero variance and
    DegenerateStatusError when everyone is censored or everyone an event.
    """
    times = np.asarray(times, dtype=np.float64)
    status = np.asarray(status, dtype=np.float64)
    if times.ndim != 1 or status.ndim != 1 or times.shape != status.shape:
        raise ValueError("times and status must be 1-d vectors of equal length")
    n = times.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 subjects to standardize, got {n}")
    mu_x = float(times.mean())
    sd_x = float(times.std(ddof=1))
    mu_d = float(status.mean())
    sd_d = float(status.std(ddof=1))
    if not np.isfinite(sd_x) or sd_x <= 0.0:
        raise DegenerateTimesError("observed times have zero variance")
    if sd_d <= 0.0:
        raise DegenerateStatusError(
            "status has zero variance (all subjects censored or all events)"
        )
    y = np.column_stack(((times - mu_x) / sd_x, (status - mu_d) / sd_d))
    return StandardizedResponse(y=y, mu_x=mu_x, sd_x=sd_x, mu_d=mu_d, sd_d=sd_d)


def default_cutoff(n: int) -> int:
    """Model-size cutoff d_n = floor(n / ln n), at least 1."""
    if n < 3:
        raise ValueError(f"cutoff needs n >= 3, got {n}")
    return max(1, math.floor(n / math.log(n)))


def standardize_columns(Z: np.ndarray) -> np.ndarray:
    """Center each column and scale to unit sd; zero-variance columns stay centered."""
    Z = np.asarray(Z, dtype=np.float64)
    mu = Z.mean(axis=0)
    sd = Z.std(axis=0, ddof=1)
    out = Z - mu
    nonzero = sd > 0
    out[:, nonzero] /= sd[nonzero]
    return out


def screen(
    data: SurvivalDataset,
    spec_z: KernelSpec = GAUSSIAN_DEFAULT,
    spec_y: KernelSpec = GAUSSIAN_DEFAULT,
    d_n: int | None = None,
    *,
    standardize_covariates: bool = False,
) -> ScreenResult:
    """Rank covariates by HSIC against the standardized censored response.

    Each covariate column is treated as a 1-d sample and scored against the
    shared centered response Gram, so the per-covariate cost is O(n^2).
    ``d_n`` defaults to ``default_cutoff(n)``. Covariates are used on their
    raw scale unless ``standardize_covariates`` is set.

    The utility computations are independent given the read-only centered
    response Gram; results land at fixed positions, so any parallel split
    over columns reproduces the serial output bit for bit.
    """
    p = data.p
    if p == 0:
        raise ValueError("covariate matrix has zero columns")
    if d_n is not None and not 1 <= d_n <= p:
        raise ValueError(f"d_n must be in 1..{p}, got {d_n}")
    response = standardize(data.times, data.status)
    Lc = center(gram(response.y, spec_y))
    Z = standardize_columns(data.covariates) if standardize_covariates else data.covariates

    omega = np.empty(p)
    for k in range(p):
        K = _gram_unchecked(Z[:, k][:, None], spec_z)
        omega[k] = hsic(K, Lc)

    ranking = np.argsort(-omega, kind="stable")
    d = default_cutoff(data.n) if d_n is None else d_n
    d = min(d, p)
    return ScreenResult(
        omega=omega,
        ranking=ranking,
        selected=ranking[:d].copy(),
        d_n=d,
        spec_z=spec_z,
        spec_y=spec_y,
    )


def _distance_matrix_1d(col: np.ndarray) -> np.ndarray:
    return np.abs(col[:, None] - col[None, :])


def _distance_matrix_rows(y: np.ndarray) -> np.ndarray:
    acc = np.zeros((y.shape[0], y.shape[0]))
    for d in range(y.shape[1]):
        diff = y[:, d][:, None] - y[:, d][None, :]
        acc += diff * diff
    return np.sqrt(acc)


def dc_utility(data: SurvivalDataset, *, standardize_covariates: bool = False) -> np.ndarray:
    """Distance correlation of each covariate with the standardized response.

    Biased V-statistic estimator: double-center the pairwise Euclidean
    distance matrices and combine their Frobenius means. Returns values in
    [0, 1]; covariates with zero distance variance score 0.
    """
    if data.p == 0:
        raise ValueError("covariate matrix has zero columns")
    response = standardize(data.times, data.status)
    B = center(_distance_matrix_rows(response.y))
    n = data.n
    dvar_y = float(np.vdot(B, B)) / (n * n)
    Z = standardize_columns(data.covariates) if standardize_covariates else data.covariates

    values = np.empty(data.p)
    for k in range(data.p):
        A = center(_distance_matrix_1d(Z[:, k]))
        dvar_x = float(np.vdot(A, A)) / (n * n)
        if dvar_x <= 0.0 or dvar_y <= 0.0:
            values[k] = 0.0
            continue
        dcov2 = float(np.vdot(A, B)) / (n * n)
        r2 = dcov2 / math.sqrt(dvar_x * dvar_y)
        values[k] = math.sqrt(min(max(r2, 0.0), 1.0))
    return values
