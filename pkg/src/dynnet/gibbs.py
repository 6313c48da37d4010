"""Five-step block Gibbs sampler: Polya-Gamma augmentation, baseline and
coordinate Gaussian block updates, shrinkage gamma updates, and
missing-value imputation / forward prediction.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular

from . import polya_gamma, shrinkage
from .errors import DataError, NumericalError
from .gp_kernel import KernelConfig, build_covariance, sample_gp
from .latent_model import (
    LatentState,
    edge_probability,
    node_design_matrix,
    pair_products,
)
from .net_data import DynamicNetwork, TimeGrid, pair_arrays, pair_index


@dataclass(frozen=True)
class GibbsConfig:
    h_star: int
    kappa_mu: float
    kappa_x: float
    a1: float
    a2: float
    n_iter: int
    burn_in: int
    thin: int = 1
    seed: int = 0
    jitter: float = 1e-8
    literal_step4_rate: bool = False

    def __post_init__(self):
        if self.h_star < 0:
            raise DataError("h_star must be nonnegative")
        if not (0 <= self.burn_in < self.n_iter):
            raise DataError("require 0 <= burn_in < n_iter")
        if self.thin < 1:
            raise DataError("thin must be at least 1")
        for name in ("kappa_mu", "kappa_x", "a1", "a2"):
            if not (getattr(self, name) > 0):
                raise DataError(f"{name} must be positive")


@dataclass
class ChainOutput:
    """Retained post-burn-in draws; slot axis follows net_data pair order."""

    times: np.ndarray         # (T,)
    V: int
    pi: np.ndarray            # (D, P, T)
    mu: np.ndarray            # (D, T)
    tau: np.ndarray           # (D, H*)
    imputed: np.ndarray       # (D, M) 0/1 draws for missing slots
    missing_slots: list       # M tuples (pair_index, time_index)
    config: GibbsConfig = None

    @property
    def n_draws(self):
        return self.pi.shape[0]


class GibbsSampler:
    """Owns the chain state; one instance per run."""

    def __init__(self, net, cfg, rng=None):
        self.net = net
        self.cfg = cfg
        self.rng = rng if rng is not None else np.random.default_rng(cfg.seed)
        self.cov_mu = build_covariance(
            net.grid, KernelConfig(cfg.kappa_mu, cfg.jitter)
        )
        self.cov_x = build_covariance(
            net.grid, KernelConfig(cfg.kappa_x, cfg.jitter)
        )
        self.i_idx, self.j_idx = pair_arrays(net.V)
        miss_p, miss_k = np.nonzero(~net.observed)
        self.missing_slots = list(zip(miss_p.tolist(), miss_k.tolist()))
        # partner pair indices per node, ascending partner order
        self._node_pairs = [
            np.array([pair_index(v, j, net.V) for j in range(net.V) if j != v])
            for v in range(net.V)
        ]
        self._init_state()

    def _init_state(self):
        """Draw the initial state from the priors; missing y uniform 0/1."""
        cfg, rng, net = self.cfg, self.rng, self.net
        T, V, H = net.T, net.V, cfg.h_star
        mu = sample_gp(self.cov_mu, 1.0, rng)
        if H > 0:
            shrink = shrinkage.sample_prior(cfg.a1, cfg.a2, H, rng)
            scales = shrink.taus ** -0.5
            coords = np.empty((V, H, T))
            for i in range(V):
                for h in range(H):
                    coords[i, h] = sample_gp(self.cov_x, scales[h], rng)
        else:
            shrink = None
            coords = np.zeros((V, 0, T))
        omega = np.full((net.P, T), 0.25)
        self.state = LatentState(mu, coords, shrink, omega)
        self.y_complete = net.y.astype(float)
        for p, k in self.missing_slots:
            self.y_complete[p, k] = float(rng.integers(0, 2))

    # -- step 1 ----------------------------------------------------------
    def update_omega(self):
        """omega_{ij,t} ~ PG(1, s_ij(t)) for every slot (imputed included)."""
        s = self.state.mu[None, :] + pair_products(self.state.coords)
        self.state.omega = polya_gamma.sample_pg1(s, self.rng)

    def _whitened_draw(self, C, A, b, what):
        """Draw from N(P^{-1} b, P^{-1}) with P = A + (C C')^{-1}.

        C is a (lower-triangular) factor of the prior covariance. Working
        in whitened coordinates u = C^{-1} x keeps the effective precision
        I + C'AC well conditioned even when the GP prior is near-singular.
        """
        n = b.size
        M = C.T @ A @ C
        M[np.diag_indices(n)] += 1.0
        try:
            L = cholesky(M, lower=True)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"{what} precision not factorizable") from exc
        mean_u = cho_solve((L, True), C.T @ b)
        eps = self.rng.standard_normal(n)
        return C @ (mean_u + solve_triangular(L.T, eps, lower=False))

    # -- step 2 ----------------------------------------------------------
    def update_mu(self):
        """Gaussian block update of the baseline trajectory."""
        st = self.state
        prod = pair_products(st.coords)
        w = st.omega.sum(axis=0)
        r = (self.y_complete - 0.5 - st.omega * prod).sum(axis=0)
        st.mu = self._whitened_draw(self.cov_mu.chol, np.diag(w), r, "baseline")

    # -- step 3 ----------------------------------------------------------
    def update_node(self, v):
        """Gaussian block update of node v's vectorized trajectories."""
        st = self.state
        H, T = st.H, self.net.T
        if H == 0:
            return
        design = node_design_matrix(st, self.net, v, y=self.y_complete)
        om = st.omega[self._node_pairs[v]].ravel()
        A = (design.X * om[:, None]).T @ design.X
        b = design.X.T @ design.response
        C = np.kron(np.diag(design.taus ** -0.5), self.cov_x.chol)
        beta = self._whitened_draw(C, A, b, f"node {v} coordinate")
        st.coords[v] = beta.reshape(H, T)

    def update_coordinates(self):
        for v in range(self.net.V):
            self.update_node(v)

    # -- step 4 ----------------------------------------------------------
    def update_shrinkage(self):
        if self.state.H == 0:
            return
        self.state.shrink = shrinkage.update_thetas(
            self.state.shrink,
            self.state.coords,
            self.cov_x,
            self.rng,
            literal_rate=self.cfg.literal_step4_rate,
        )

    # -- step 5 ----------------------------------------------------------
    def impute_missing(self):
        """Redraw every missing y from Bern(pi) at the current state."""
        if not self.missing_slots:
            return
        st = self.state
        s = st.mu[None, :] + pair_products(st.coords)
        for p, k in self.missing_slots:
            pi = edge_probability(s[p, k])
            self.y_complete[p, k] = float(self.rng.random() < pi)

    def sweep(self):
        self.update_omega()
        self.update_mu()
        self.update_coordinates()
        self.update_shrinkage()
        self.impute_missing()

    def current_pi(self):
        st = self.state
        return edge_probability(st.mu[None, :] + pair_products(st.coords))

    def run(self):
        cfg = self.cfg
        n_keep = (cfg.n_iter - cfg.burn_in) // cfg.thin
        T, P, H = self.net.T, self.net.P, cfg.h_star
        pi = np.empty((n_keep, P, T))
        mu = np.empty((n_keep, T))
        tau = np.empty((n_keep, max(H, 1)))
        imputed = np.empty((n_keep, len(self.missing_slots)))
        d = 0
        for it in range(cfg.n_iter):
            try:
                self.sweep()
            except NumericalError as exc:
                raise NumericalError(f"sweep {it}: {exc}") from exc
            if it >= cfg.burn_in and (it - cfg.burn_in + 1) % cfg.thin == 0:
                pi[d] = self.current_pi()
                mu[d] = self.state.mu
                tau[d] = self.state.shrink.taus if H > 0 else 1.0
                for m, (p, k) in enumerate(self.missing_slots):
                    imputed[d, m] = self.y_complete[p, k]
                d += 1
        assert d == n_keep
        return ChainOutput(
            times=self.net.grid.times,
            V=self.net.V,
            pi=pi,
            mu=mu,
            tau=tau,
            imputed=imputed,
            missing_slots=list(self.missing_slots),
            config=cfg,
        )


def run_chain(net, cfg):
    """Run the full sampler on a network and return retained draws."""
    if net.P * net.T == 0:
        raise DataError("empty network")
    return GibbsSampler(net, cfg).run()


def predict_next(net, cfg, t_new):
    """Append a fully-missing matrix at t_new and run the chain on the
    extended grid; draws at the final index are the predictive draws."""
    if not (t_new > net.grid.times[-1]):
        raise DataError("t_new must lie beyond the observed grid")
    grid = TimeGrid(np.append(net.grid.times, t_new))
    y = np.hstack([net.y, np.zeros((net.P, 1), dtype=np.int8)])
    observed = np.hstack([net.observed, np.zeros((net.P, 1), dtype=bool)])
    extended = DynamicNetwork(net.V, grid, y, observed, net.node_labels)
    return run_chain(extended, cfg)
