"""Deterministic model core: similarity construction, logistic link,
likelihood, the eigendecomposition factorization oracle and the node-wise
design matrix used by the coordinate block update.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DataError
from .net_data import pair_arrays, pair_index


@dataclass
class LatentState:
    """Full sampler state.

    mu: (T,) baseline trajectory.
    coords: (V, H*, T) coordinate trajectories x_ih(t).
    shrink: ShrinkageState.
    omega: (P, T) Polya-Gamma augmentation values, strictly positive.
    """

    mu: np.ndarray
    coords: np.ndarray
    shrink: object
    omega: np.ndarray

    @property
    def V(self):
        return self.coords.shape[0]

    @property
    def H(self):
        return self.coords.shape[1]

    @property
    def T(self):
        return self.coords.shape[2]


def pair_products(coords):
    """(P, T) array of x_i(t)'x_j(t) over stored pairs i > j."""
    V = coords.shape[0]
    i_idx, j_idx = pair_arrays(V)
    return np.einsum("pht,pht->pt", coords[i_idx], coords[j_idx])


def similarity(state, t_index=None):
    """s_ij = mu(t) + x_i(t)'x_j(t) over stored pairs.

    Returns the (P,) vector at one time index, or the full (P, T) array
    when ``t_index`` is None.
    """
    s = state.mu[None, :] + pair_products(state.coords)
    if t_index is None:
        return s
    return s[:, t_index]


def edge_probability(s):
    """Stable logistic 1 / (1 + exp(-s)); elementwise on arrays."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    pos = s >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-s[pos]))
    es = np.exp(s[~pos])
    out[~pos] = es / (1.0 + es)
    if out.ndim == 0:
        return float(out)
    return out


def log_likelihood(state, net):
    """Bernoulli log likelihood over observed slots; missing slots
    contribute zero."""
    s = similarity(state)
    if s.shape != net.y.shape:
        raise DataError("state dimensions do not match network")
    obs = net.observed
    sv = s[obs]
    yv = net.y[obs].astype(float)
    # y*log(pi) + (1-y)*log(1-pi) = y*s - log(1+exp(s)), stably
    return float((yv * sv - np.logaddexp(0.0, sv)).sum())


def exact_factorization(S, H):
    """Coordinate matrix X (V x H) with X X' = S for symmetric PSD S.

    Constructive eigendecomposition route: X = [P diag(sqrt(lam)) | 0].
    Eigenvalues below -1e-10 * ||S||_2 raise a domain error; small
    negatives are clipped to zero.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DataError("S must be square")
    if not np.allclose(S, S.T, atol=1e-12):
        raise DataError("S must be symmetric")
    V = S.shape[0]
    if H < V:
        raise DataError("need H >= V for the exact factorization")
    lam, P = np.linalg.eigh(S)
    norm = float(np.abs(lam).max()) if V else 0.0
    if lam.min() < -1e-10 * max(norm, 1.0):
        raise DataError("S has a significantly negative eigenvalue")
    lam = np.clip(lam, 0.0, None)
    X = np.zeros((V, H))
    X[:, :V] = P * np.sqrt(lam)[None, :]
    return X


class NodeDesign(NamedTuple):
    """Design for one node's coordinate block update.

    ``beta`` (the vectorized trajectories of the node, dimension-major)
    has prior N(0, diag(1/taus) kron K_x); K_x is owned by the caller.
    ``slots`` lists the (pair, time) index of each kept row.
    """

    X: np.ndarray        # (rows, H*T) regressors
    response: np.ndarray  # y - 1/2 - omega * mu per row
    taus: np.ndarray
    slots: list


def node_design_matrix(state, net, v, y=None):
    """Build the regressor matrix for node v's coordinate update.

    Rows stack the V-1 partners j != v (ascending) by time; the row for
    (partner j, time k) holds x_jh(t_k) at column h*T + k, so that
    X @ beta equals the linear predictor minus mu. Rows whose slot is
    missing are dropped unless ``y`` supplies a completed (P, T) array.
    """
    V, H, T = state.coords.shape
    if not (0 <= v < V):
        raise DataError(f"node index {v} out of range")
    partners = [j for j in range(V) if j != v]
    y_full = net.y if y is None else y
    col = np.arange(H)[None, :] * T + np.arange(T)[:, None]  # (T, H)

    blocks = []
    resp = []
    slots = []
    for j in partners:
        p = pair_index(v, j, V)
        block = np.zeros((T, H * T))
        block[np.arange(T)[:, None], col] = state.coords[j].T
        # offset enters the Gaussianized response scaled by omega
        r = y_full[p] - 0.5 - state.omega[p] * state.mu
        if y is None:
            keep = net.observed[p]
            block = block[keep]
            r = r[keep]
            ks = np.nonzero(keep)[0]
        else:
            ks = np.arange(T)
        blocks.append(block)
        resp.append(r)
        slots.extend((p, int(k)) for k in ks)
    X_tilde = np.vstack(blocks) if blocks else np.zeros((0, H * T))
    return NodeDesign(X_tilde, np.concatenate(resp), state.shrink.taus, slots)
