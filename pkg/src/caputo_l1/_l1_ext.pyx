# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled L1 history sums.

Both entry points share :c:func:`_node`, a Neumaier-compensated dot product
taken in a fixed order, so a node has the same bits in either call.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _node(const double[::1] b, const double[::1] d, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0, c = 0.0, x, t
    cdef Py_ssize_t j
    for j in range(n):
        x = b[j] * d[n - 1 - j]
        t = s + x
        if (s if s >= 0 else -s) >= (x if x >= 0 else -x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def history_sum(const double[::1] b, const double[::1] d, Py_ssize_t n):
    """Return ``sum_{j<n} b[j] * d[n-1-j]``."""
    return _node(b, d, n)


def history_sums(const double[::1] b, const double[::1] d):
    """Return ``history_sum(b, d, n)`` for ``n = 1..len(d)``."""
    cdef Py_ssize_t m = d.shape[0], n
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for n in range(1, m + 1):
            o[n - 1] = _node(b, d, n)
    return out
