"""Posterior summarization: effective sample size, HPD intervals,
ROC/AUC, and time-averaged network weight tables.
"""

import warnings

import numpy as np
from scipy.stats import rankdata

from .errors import DataError
from .net_data import pair_arrays


def _autocorr(x):
    """Autocorrelation function via FFT, lags 0..N-1."""
    n = x.size
    x = x - x.mean()
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, m)
    acov = np.fft.irfft(f * np.conjugate(f), m)[:n].real
    return acov / acov[0]


def effective_sample_size(trace):
    """N / (1 + 2 sum rho_k), truncated by the initial-positive-sequence
    rule on paired autocorrelations; capped at N."""
    trace = np.asarray(trace, dtype=float)
    n = trace.size
    if n < 10:
        raise DataError("need at least 10 draws for ESS")
    if np.ptp(trace) == 0.0:
        warnings.warn("constant trace; ESS defined as N", RuntimeWarning)
        return float(n)
    rho = _autocorr(trace)
    tau = 1.0
    k = 1
    while k + 1 < n:
        pair = rho[k] + rho[k + 1]
        if pair < 0:
            break
        tau += 2.0 * pair
        k += 2
    return float(min(n, n / tau))


def hpd_interval(trace, level=0.95):
    """Shortest contiguous interval holding ceil(level * N) sorted draws."""
    trace = np.sort(np.asarray(trace, dtype=float))
    n = trace.size
    if n < 20:
        raise DataError("need at least 20 draws for an HPD interval")
    m = int(np.ceil(level * n))
    widths = trace[m - 1 :] - trace[: n - m + 1]
    lo = int(np.argmin(widths))
    return float(trace[lo]), float(trace[lo + m - 1])


def roc_auc(scores, labels):
    """ROC points at every distinct threshold and the rank-statistic AUC
    (ties averaged)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC requires both classes present")

    ranks = rankdata(scores)
    auc = (ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    tp = np.cumsum(labels[order] == 1)
    fp = np.cumsum(labels[order] == 0)
    # keep the last row of each tied-score block
    last = np.nonzero(np.diff(sorted_scores, append=-np.inf))[0]
    points = [(np.inf, 0.0, 0.0)]
    for idx in last:
        points.append(
            (float(sorted_scores[idx]), fp[idx] / n_neg, tp[idx] / n_pos)
        )
    return points, float(auc)


def aggregate_network_weights(pi_draws, times, t_window):
    """V x V symmetric table of posterior-mean pi averaged over the
    window [t_window[0], t_window[1]] (inclusive, in time units)."""
    lo, hi = t_window
    sel = (times >= lo) & (times <= hi)
    if not sel.any():
        raise DataError("empty time window")
    slot_means = pi_draws[:, :, sel].mean(axis=(0, 2))  # (P,)
    P = slot_means.size
    V = int((1 + np.sqrt(1 + 8 * P)) / 2)
    i_idx, j_idx = pair_arrays(V)
    W = np.zeros((V, V))
    W[i_idx, j_idx] = slot_means
    W[j_idx, i_idx] = slot_means
    return W


def pi_posterior_mean(chain):
    return chain.pi.mean(axis=0)


def pi_hpd(chain, level=0.95):
    """(P, T, 2) array of pointwise HPD bounds for pi."""
    D, P, T = chain.pi.shape
    out = np.empty((P, T, 2))
    for p in range(P):
        for k in range(T):
            out[p, k] = hpd_interval(chain.pi[:, p, k], level)
    return out
