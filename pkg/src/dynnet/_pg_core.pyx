# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Polya-Gamma PG(1, c) kernel.

Mirrors ``_pg_py`` operation for operation: it pulls uniform doubles from
the numpy BitGenerator in exactly the same order, so both backends emit
bit-identical draw sequences from the same seeded Generator.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport M_PI, cos, erfc, exp, fabs, log, log1p, sqrt
from numpy.random cimport bitgen_t

cdef double TRUNC = 0.64
cdef double SQRT2 = 1.4142135623730951


cdef inline double _u(bitgen_t *bg) noexcept nogil:
    return bg.next_double(bg.state)


cdef inline double _expo(bitgen_t *bg) noexcept nogil:
    return -log1p(-_u(bg))


cdef inline double _normal(bitgen_t *bg) noexcept nogil:
    return sqrt(2.0 * _expo(bg)) * cos(2.0 * M_PI * _u(bg))


cdef inline double _norm_cdf(double x) noexcept nogil:
    return 0.5 * erfc(-x / SQRT2)


cdef double _mass_texpon(double z) noexcept nogil:
    cdef double t = TRUNC
    cdef double fz = M_PI * M_PI / 8.0 + z * z / 2.0
    cdef double b = sqrt(1.0 / t) * (t * z - 1.0)
    cdef double a = -sqrt(1.0 / t) * (t * z + 1.0)
    cdef double x0 = log(fz) + fz * t
    cdef double cb = _norm_cdf(b)
    cdef double ca = _norm_cdf(a)
    cdef double xb, xa, qdivp
    xb = x0 - z + log(cb)
    xa = x0 + z + log(ca)
    qdivp = 4.0 / M_PI * (exp(xb) + exp(xa))
    return 1.0 / (1.0 + qdivp)


cdef double _rtigauss(double z, bitgen_t *bg) noexcept nogil:
    cdef double t = TRUNC
    cdef double x = t + 1.0
    cdef double alpha, e1, e2, mu, y, mu_y
    if z < 1.0 / t:
        alpha = 0.0
        while _u(bg) > alpha:
            e1 = _expo(bg)
            e2 = _expo(bg)
            while e1 * e1 > 2.0 * e2 / t:
                e1 = _expo(bg)
                e2 = _expo(bg)
            x = t / ((1.0 + t * e1) * (1.0 + t * e1))
            alpha = exp(-0.5 * z * z * x)
    else:
        mu = 1.0 / z
        while x > t:
            y = _normal(bg)
            y = y * y
            mu_y = mu * y
            x = mu + 0.5 * mu * mu_y - 0.5 * mu * sqrt(4.0 * mu_y + mu_y * mu_y)
            if _u(bg) > mu / (mu + x):
                x = mu * mu / x
    return x


cdef double _acoef(int n, double x) noexcept nogil:
    cdef double t = TRUNC
    cdef double np5 = n + 0.5
    if x > t:
        return M_PI * np5 * exp(-np5 * np5 * M_PI * M_PI * x / 2.0)
    return (2.0 / (M_PI * x)) ** 1.5 * M_PI * np5 * exp(-2.0 * np5 * np5 / x)


cdef double _draw_pg1(double c, bitgen_t *bg) noexcept nogil:
    cdef double z = fabs(c) / 2.0
    cdef double fz = M_PI * M_PI / 8.0 + z * z / 2.0
    cdef double p_texp = _mass_texpon(z)
    cdef double x, s, y
    cdef int n
    while True:
        if _u(bg) < p_texp:
            x = TRUNC + _expo(bg) / fz
        else:
            x = _rtigauss(z, bg)
        s = _acoef(0, x)
        y = _u(bg) * s
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


def sample_pg1_array(gen, double[::1] c, double[::1] out):
    """Fill ``out`` with PG(1, c[i]) draws using Generator ``gen``."""
    cdef bitgen_t *bg
    cdef Py_ssize_t i, n = c.shape[0]
    capsule = gen.bit_generator.capsule
    bg = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")
    with gen.bit_generator.lock:
        for i in range(n):
            out[i] = _draw_pg1(c[i], bg)
    return np.asarray(out)
