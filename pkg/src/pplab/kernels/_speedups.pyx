# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel; mirrors pplab.kernels._fallback statement for
statement (same arithmetic order, no FP contraction) so results are
bit-identical to the pure-Python backend."""

import numpy as np


def simulate_packed(int[::1] codes, double[::1] p1, double[::1] p2, double[::1] p3,
                    double x0, double xm1, Py_ssize_t steps,
                    double stop_below, double overflow_limit):
    cdef Py_ssize_t k = codes.shape[0]
    out_arr = np.empty(steps, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double prev = xm1
    cdef double cur = x0
    cdef double f, nxt
    cdef Py_ssize_t idx = k - 1  # slot of the coefficient for index 0
    cdef Py_ssize_t m = 0
    cdef Py_ssize_t j
    cdef int code
    cdef int status = 0
    with nogil:
        for j in range(steps):
            code = codes[idx]
            if code == 0:
                f = p1[idx] / (1.0 + prev)
            elif code == 1:
                f = p1[idx] / (1.0 + (p1[idx] - 1.0) * prev / p2[idx])
            else:
                f = p1[idx] / (1.0 + p2[idx] * prev / (1.0 + p3[idx] * prev))
            nxt = cur * f
            out[m] = nxt
            m += 1
            prev = cur
            cur = nxt
            idx += 1
            if idx == k:
                idx = 0
            if nxt > overflow_limit:
                status = 1
                break
            if nxt <= 0.0:
                status = 2
                break
            if nxt < stop_below:
                break
    return out_arr[:m], status
