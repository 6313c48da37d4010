"""Synthetic dynamic networks drawn from the model, plus the independent
per-pair baseline fit used for comparison.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError
from .gibbs import GibbsConfig, run_chain
from .gp_kernel import KernelConfig, build_covariance, sample_gp
from .latent_model import edge_probability
from .net_data import DynamicNetwork, TimeGrid, n_pairs, pair_arrays


@dataclass(frozen=True)
class GeneratorSpec:
    V: int
    T: int
    H_true: int
    kappa_mu: float
    kappa_x: float
    seed: int = 0
    jitter: float = 1e-8

    def __post_init__(self):
        if self.V < 2:
            raise DataError("need at least 2 nodes")
        if self.H_true < 1:
            raise DataError("H_true must be at least 1")
        if self.T < 1:
            raise DataError("T must be at least 1")


def generate(spec):
    """Draw (network, true pi series, true mu trajectory) from the model.

    mu ~ GP(0, c_mu); each coordinate trajectory ~ GP(0, c_x) at unit
    scale; y ~ Bern(logistic(mu + x_i'x_j)) independently per slot.
    Returns pi as a (P, T) array over stored pairs.
    """
    rng = np.random.default_rng(spec.seed)
    grid = TimeGrid(np.arange(1.0, spec.T + 1.0))
    cov_mu = build_covariance(grid, KernelConfig(spec.kappa_mu, spec.jitter))
    cov_x = build_covariance(grid, KernelConfig(spec.kappa_x, spec.jitter))
    mu = sample_gp(cov_mu, 1.0, rng)
    coords = np.empty((spec.V, spec.H_true, spec.T))
    for i in range(spec.V):
        for h in range(spec.H_true):
            coords[i, h] = sample_gp(cov_x, 1.0, rng)
    i_idx, j_idx = pair_arrays(spec.V)
    s = mu[None, :] + np.einsum("pht,pht->pt", coords[i_idx], coords[j_idx])
    pi = edge_probability(s)
    y = (rng.random(pi.shape) < pi).astype(np.int8)
    observed = np.ones_like(y, dtype=bool)
    net = DynamicNetwork(spec.V, grid, y, observed)
    return net, pi, mu


def independent_baseline_fit(net, cfg):
    """Fit each pair's time series on its own: a GP-logistic regression
    with the baseline trajectory only, no latent coordinates.

    Returns a list of per-pair ChainOutput objects in pair order.
    """
    pair_cfg = GibbsConfig(
        h_star=0,
        kappa_mu=cfg.kappa_mu,
        kappa_x=cfg.kappa_x,
        a1=cfg.a1,
        a2=cfg.a2,
        n_iter=cfg.n_iter,
        burn_in=cfg.burn_in,
        thin=cfg.thin,
        seed=cfg.seed,
        jitter=cfg.jitter,
    )
    outputs = []
    for p in range(net.P):
        sub = DynamicNetwork(
            2,
            net.grid,
            net.y[p : p + 1],
            net.observed[p : p + 1],
        )
        pcfg = replace(pair_cfg, seed=cfg.seed + p + 1)
        outputs.append(run_chain(sub, pcfg))
    return outputs
