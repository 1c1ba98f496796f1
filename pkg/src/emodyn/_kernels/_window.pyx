# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled window kernel.  Sums each window left to right in double
precision so results match the pure-Python fallback bit for bit."""


def fill_window_states(const double[::1] scores,
                       const unsigned char[::1] matched,
                       Py_ssize_t window,
                       Py_ssize_t step,
                       const unsigned char[::1] valid,
                       long long[::1] out_idx,
                       double[::1] out_val):
    cdef Py_ssize_t n_pos = valid.shape[0]
    cdef Py_ssize_t p, i, j, k, m = 0
    cdef double total
    for p in range(n_pos):
        if not valid[p]:
            continue
        i = p * step
        total = 0.0
        k = 0
        for j in range(i, i + window):
            if matched[j]:
                total += scores[j]
                k += 1
        if k:
            out_idx[m] = i
            out_val[m] = total / k
            m += 1
    return m
