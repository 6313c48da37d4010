"""Exact PG(1, c) sampling and moments.

The sampler backend is selected at import: the compiled extension
(``dynnet._pg_core``) when present, otherwise the pure-Python twin
(``dynnet._pg_py``). Both consume the Generator's uniform stream in the
same order and produce identical draws.
"""

import math

import numpy as np

from . import _pg_py

try:
    from . import _pg_core
    _DEFAULT_BACKEND = "compiled"
except ImportError:
    _pg_core = None
    _DEFAULT_BACKEND = "python"

_KERNELS = {"python": _pg_py}
if _pg_core is not None:
    _KERNELS["compiled"] = _pg_core


def available_backends():
    return sorted(_KERNELS)


def active_backend():
    return _DEFAULT_BACKEND


def sample_pg1(c, rng, backend=None):
    """Draw PG(1, c) variates.

    ``c`` may be a scalar or an array; the result matches its shape.
    PG(1, c) depends on c only through c**2, so the sign of c is ignored.
    """
    kernel = _KERNELS[backend or _DEFAULT_BACKEND]
    arr = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("PG(1, c) requires finite c")
    flat = np.ascontiguousarray(arr.reshape(-1))
    out = np.empty(flat.shape[0])
    kernel.sample_pg1_array(rng, flat, out)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def pg_mean(c):
    """E[PG(1, c)] = tanh(c/2) / (2c), with the c -> 0 limit 1/4."""
    c = float(c)
    if not math.isfinite(c):
        raise ValueError("pg_mean requires finite c")
    if abs(c) < 1e-6:
        return 0.25
    return math.tanh(c / 2.0) / (2.0 * c)


def series_oracle_draws(c, n, rng, terms=200):
    """Independent test oracle: truncated sum-of-gammas representation.

    omega = (1 / (2 pi^2)) * sum_k g_k / ((k - 1/2)^2 + c^2 / (4 pi^2)),
    g_k ~ Exp(1), truncated at ``terms`` terms. Used only to cross-check
    the rejection sampler; deliberately independent of it.
    """
    k = np.arange(1, terms + 1)
    denom = (k - 0.5) ** 2 + c * c / (4.0 * math.pi ** 2)
    g = rng.standard_exponential(size=(n, terms))
    return (g / denom).sum(axis=1) / (2.0 * math.pi ** 2)
