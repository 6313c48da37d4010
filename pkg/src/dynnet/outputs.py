"""CSV / manifest writers for CLI results.

All tables use 1-based node ids to match the network CSV format.
"""

import csv
import hashlib
import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import hpd_interval, pi_posterior_mean
from .net_data import pair_arrays


def _fmt(x):
    return repr(float(x))


def write_pi_mean(chain, path):
    mean = pi_posterior_mean(chain)  # (P, T)
    i_idx, j_idx = pair_arrays(chain.V)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "i", "j", "mean"])
        for k, t in enumerate(chain.times):
            for p in range(mean.shape[0]):
                w.writerow([_fmt(t), i_idx[p] + 1, j_idx[p] + 1, _fmt(mean[p, k])])


def write_pi_hpd(chain, path, level=0.95):
    i_idx, j_idx = pair_arrays(chain.V)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "i", "j", "lower", "upper"])
        for k, t in enumerate(chain.times):
            for p in range(chain.pi.shape[1]):
                lo, hi = hpd_interval(chain.pi[:, p, k], level)
                w.writerow([_fmt(t), i_idx[p] + 1, j_idx[p] + 1, _fmt(lo), _fmt(hi)])


def write_mu_trace(chain, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["draw", "t", "value"])
        for d in range(chain.n_draws):
            for k, t in enumerate(chain.times):
                w.writerow([d + 1, _fmt(t), _fmt(chain.mu[d, k])])


def write_tau_mean(chain, path):
    inv_tau = (1.0 / chain.tau).mean(axis=0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["h", "mean_inverse_tau"])
        for h, v in enumerate(inv_tau):
            w.writerow([h + 1, _fmt(v)])


def write_imputations(chain, path):
    i_idx, j_idx = pair_arrays(chain.V)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "i", "j", "posterior_mean"])
        if chain.missing_slots:
            means = chain.imputed.mean(axis=0)
            for m, (p, k) in enumerate(chain.missing_slots):
                w.writerow(
                    [
                        _fmt(chain.times[k]),
                        i_idx[p] + 1,
                        j_idx[p] + 1,
                        _fmt(means[m]),
                    ]
                )


def write_truth_pi(times, V, pi, path):
    i_idx, j_idx = pair_arrays(V)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "i", "j", "value"])
        for k, t in enumerate(times):
            for p in range(pi.shape[0]):
                w.writerow([_fmt(t), i_idx[p] + 1, j_idx[p] + 1, _fmt(pi[p, k])])


def write_truth_mu(times, mu, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "value"])
        for k, t in enumerate(times):
            w.writerow([_fmt(t), _fmt(mu[k])])


def write_roc(points, auc, roc_path, auc_path):
    with open(roc_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["threshold", "fpr", "tpr"])
        for thr, fpr, tpr in points:
            w.writerow(["inf" if np.isinf(thr) else _fmt(thr), _fmt(fpr), _fmt(tpr)])
    Path(auc_path).write_text(f"{auc:.6f}\n")


def write_network_weights(W, path, labels=None):
    V = W.shape[0]
    i_idx, j_idx = pair_arrays(V)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "weight"])
        for p in range(i_idx.size):
            w.writerow([i_idx[p] + 1, j_idx[p] + 1, _fmt(W[i_idx[p], j_idx[p]])])


def write_ess(rows, path):
    """rows: iterable of (quantity_name, ess)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "ess"])
        for name, val in rows:
            w.writerow([name, _fmt(val)])


def config_hash(config):
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def write_manifest(outdir, command, config, seed, inputs, started):
    manifest = {
        "command": command,
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "inputs": [str(p) for p in inputs],
        "output_dir": str(outdir),
        "wall_clock_sec": round(time.monotonic() - started, 3),
        "version": __version__,
    }
    path = Path(outdir) / "run_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest
