"""Pure-Python Polya-Gamma PG(1, c) kernel.

Exact alternating-series rejection sampler on the tilted Jacobi density
(Devroye-style). All randomness is derived from uniform doubles pulled one
at a time from the supplied numpy Generator, so the compiled kernel in
``_pg_core`` can reproduce the exact same draw sequence from the same
bit stream.
"""

import math

_TRUNC = 0.64
_SQRT2 = math.sqrt(2.0)


def _norm_cdf(x):
    return 0.5 * math.erfc(-x / _SQRT2)


def _expo(u):
    # u in [0, 1); -log(1-u) is Exp(1)
    return -math.log1p(-u())


def _normal(u):
    # Box-Muller, second variate discarded to keep per-call stream fixed
    return math.sqrt(2.0 * _expo(u)) * math.cos(2.0 * math.pi * u())


def _mass_texpon(z):
    # probability of proposing from the truncated-exponential branch
    t = _TRUNC
    fz = math.pi * math.pi / 8.0 + z * z / 2.0
    b = math.sqrt(1.0 / t) * (t * z - 1.0)
    a = -math.sqrt(1.0 / t) * (t * z + 1.0)
    x0 = math.log(fz) + fz * t
    cb = _norm_cdf(b)
    ca = _norm_cdf(a)
    xb = x0 - z + (math.log(cb) if cb > 0.0 else -math.inf)
    xa = x0 + z + (math.log(ca) if ca > 0.0 else -math.inf)
    qdivp = 4.0 / math.pi * (math.exp(xb) + math.exp(xa))
    return 1.0 / (1.0 + qdivp)


def _rtigauss(z, u):
    # inverse-Gaussian IG(1/z, 1) truncated to (0, TRUNC)
    t = _TRUNC
    x = t + 1.0
    if z < 1.0 / t:
        alpha = 0.0
        while u() > alpha:
            e1 = _expo(u)
            e2 = _expo(u)
            while e1 * e1 > 2.0 * e2 / t:
                e1 = _expo(u)
                e2 = _expo(u)
            x = t / ((1.0 + t * e1) * (1.0 + t * e1))
            alpha = math.exp(-0.5 * z * z * x)
    else:
        mu = 1.0 / z
        while x > t:
            y = _normal(u)
            y = y * y
            mu_y = mu * y
            x = mu + 0.5 * mu * mu_y - 0.5 * mu * math.sqrt(4.0 * mu_y + mu_y * mu_y)
            if u() > mu / (mu + x):
                x = mu * mu / x
    return x


def _acoef(n, x):
    # n-th alternating-series coefficient of the Jacobi density
    t = _TRUNC
    np5 = n + 0.5
    if x > t:
        return math.pi * np5 * math.exp(-np5 * np5 * math.pi * math.pi * x / 2.0)
    return (2.0 / (math.pi * x)) ** 1.5 * math.pi * np5 * math.exp(-2.0 * np5 * np5 / x)


def _draw_pg1(c, u):
    z = abs(c) / 2.0
    fz = math.pi * math.pi / 8.0 + z * z / 2.0
    p_texp = _mass_texpon(z)
    while True:
        if u() < p_texp:
            x = _TRUNC + _expo(u) / fz
        else:
            x = _rtigauss(z, u)
        s = _acoef(0, x)
        y = u() * s
        n = 0
        while True:
            n += 1
            if n % 2 == 1:
                s -= _acoef(n, x)
                if y <= s:
                    return x / 4.0
            else:
                s += _acoef(n, x)
                if y > s:
                    break


def sample_pg1_array(gen, c, out):
    """Fill ``out`` with PG(1, c[i]) draws using Generator ``gen``."""
    u = lambda: gen.random()
    for i in range(c.shape[0]):
        out[i] = _draw_pg1(c[i], u)
    return out
