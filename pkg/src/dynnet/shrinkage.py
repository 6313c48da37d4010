"""Multiplicative gamma process over latent-dimension scales.

tau_h = prod_{k<=h} theta_k with theta_1 ~ Ga(a1, 1) and
theta_k ~ Ga(a2, 1) for k >= 2; tau_h^{-1} scales the GP prior variance
of every coordinate trajectory in dimension h.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DataError, NumericalError


@dataclass(frozen=True)
class ShrinkageState:
    a1: float
    a2: float
    thetas: np.ndarray  # (H*,)

    def __post_init__(self):
        if not (self.a1 > 0 and self.a2 > 0):
            raise DataError("a1 and a2 must be positive")
        th = np.asarray(self.thetas, dtype=float)
        if th.ndim != 1 or th.size < 1 or not np.all(th > 0):
            raise DataError("thetas must be a 1-d array of positive values")
        object.__setattr__(self, "thetas", th)
        th.setflags(write=False)

    @property
    def H(self):
        return self.thetas.size

    @property
    def taus(self):
        return np.cumprod(self.thetas)


def sample_prior(a1, a2, H_star, rng):
    if H_star < 1:
        raise DataError("H_star must be at least 1")
    thetas = np.empty(H_star)
    thetas[0] = rng.gamma(a1, 1.0)
    if H_star > 1:
        thetas[1:] = rng.gamma(a2, 1.0, size=H_star - 1)
    return ShrinkageState(a1, a2, thetas)


def coordinate_quad_forms(coords, cov):
    """q_h = sum_i x_ih' K^{-1} x_ih, one value per latent dimension."""
    V, H, T = coords.shape
    flat = coords.reshape(V * H, T).T  # (T, V*H)
    y = solve_triangular(cov.chol, flat, lower=True)
    q = (y * y).sum(axis=0).reshape(V, H).sum(axis=0)
    if not np.all(np.isfinite(q)):
        raise NumericalError("non-finite quadratic form in shrinkage update")
    return q


def update_thetas(state, coords, cov, rng, literal_rate=False):
    """Gibbs update of all theta_h from their gamma full conditionals.

    The rate for theta_h sums tau_l^{(-h)} q_l over l >= h (terms with
    l < h do not involve theta_h); ``literal_rate`` restores the sum over
    all l for comparison.
    """
    V, H, T = coords.shape
    if H != state.H:
        raise DataError("coordinate array does not match shrinkage truncation")
    q = coordinate_quad_forms(coords, cov)
    thetas = state.thetas.copy()
    for h in range(H):
        shape = (state.a1 if h == 0 else state.a2) + V * T * (H - h) / 2.0
        tau_minus = np.cumprod(np.where(np.arange(H) == h, 1.0, thetas))
        lo = 0 if literal_rate else h
        rate = 1.0 + 0.5 * float(tau_minus[lo:] @ q[lo:])
        thetas[h] = rng.gamma(shape, 1.0 / rate)
    return ShrinkageState(state.a1, state.a2, thetas)
