"""Squared-exponential GP covariance over the time grid.

The working covariance is K + jitter*I with K_ij = exp(-kappa (t_i-t_j)^2);
sampling and precision solves both go through its Cholesky factor so the
prior used for sampling and the precision used in full conditionals are
exactly consistent.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular

from .errors import DataError, NumericalError

_MAX_JITTER = 1e-4


@dataclass(frozen=True)
class KernelConfig:
    kappa: float
    jitter: float = 1e-8

    def __post_init__(self):
        if not (self.kappa > 0):
            raise DataError("kappa must be positive")
        if self.jitter < 0:
            raise DataError("jitter must be nonnegative")


class CovarianceFactor:
    """T x T squared-exponential covariance and its lower Cholesky factor."""

    def __init__(self, grid, matrix, chol, jitter):
        self.grid = grid
        self.matrix = matrix
        self.chol = chol
        self.jitter = jitter
        self.matrix.setflags(write=False)
        self.chol.setflags(write=False)

    @property
    def T(self):
        return self.grid.T

    def inverse(self):
        """Dense K^{-1} (cached)."""
        inv = getattr(self, "_inv", None)
        if inv is None:
            inv = cho_solve((self.chol, True), np.eye(self.T))
            inv = 0.5 * (inv + inv.T)
            self._inv = inv
        return inv


def build_covariance(grid, cfg):
    """Factorize exp(-kappa d^2) + jitter*I, escalating jitter up to 1e-4."""
    t = grid.times
    d2 = (t[:, None] - t[None, :]) ** 2
    base = np.exp(-cfg.kappa * d2)
    jitter = cfg.jitter
    while True:
        K = base + jitter * np.eye(grid.T)
        try:
            L = cholesky(K, lower=True)
            return CovarianceFactor(grid, K, L, jitter)
        except np.linalg.LinAlgError:
            pass
        jitter = max(jitter, 1e-8) * 10.0
        if jitter > _MAX_JITTER:
            raise NumericalError(
                f"covariance factorization failed at jitter {_MAX_JITTER}"
            )


def sample_gp(factor, scale, rng):
    """One trajectory scale * L @ eps, eps ~ N(0, I); covariance scale^2 K."""
    if not (scale > 0):
        raise DataError("scale must be positive")
    eps = rng.standard_normal(factor.T)
    return scale * (factor.chol @ eps)


def solve_with_precision(factor, rhs):
    """K^{-1} rhs via two triangular solves."""
    rhs = np.asarray(rhs, dtype=float)
    y = solve_triangular(factor.chol, rhs, lower=True)
    return solve_triangular(factor.chol.T, y, lower=False)


def quad_form(factor, x):
    """x' K^{-1} x for a vector, or the sum over columns of a matrix."""
    y = solve_triangular(factor.chol, np.asarray(x, dtype=float), lower=True)
    return float((y * y).sum())
