# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel for the plug-in transfer-entropy sum.

Contract matches cascadeflow._reference.te_from_digits: base-3 digit arrays
in, (bits, n_samples) out, cells summed in ascending key order. Two paths:
a dense count table when 3**(k+2) is small enough, a sort-and-group path
for deep histories. Both visit cells in the same order, so the paths agree
to float rounding.
"""

from libc.math cimport log2

import numpy as np

# dense count tables up to 3**12 cells (k <= 10), ~4 MiB of int64
DEF DENSE_CAP = 531441


def te_from_digits(src, tgt, k):
    """Plug-in transfer entropy in bits and the sample count L - k."""
    cdef long[::1] sx = np.ascontiguousarray(src, dtype=np.int64)
    cdef long[::1] sy = np.ascontiguousarray(tgt, dtype=np.int64)
    cdef Py_ssize_t length = sy.shape[0]
    cdef long kk = k
    cdef long n = length - kk
    n_states = 3 ** (int(k) + 2)  # Python int; fits int64 for k <= 37
    if n_states <= DENSE_CAP:
        return _te_dense(sx, sy, kk, <long> n_states, n), n
    return _te_sparse(sx, sy, kk, n), n


cdef double _te_dense(long[::1] sx, long[::1] sy, long k, long n_states, long n):
    cdef long[::1] c_full = np.zeros(n_states, dtype=np.int64)
    cdef long[::1] c_h = np.zeros(n_states // 9, dtype=np.int64)
    cdef long[::1] c_hs = np.zeros(n_states // 3, dtype=np.int64)
    cdef long[::1] c_nh = np.zeros(n_states // 3, dtype=np.int64)
    cdef Py_ssize_t length = sy.shape[0]
    cdef Py_ssize_t j, t
    cdef long h = 0, top = 1, key, c, hh
    cdef double total = 0.0, comp = 0.0, term, acc, dn = <double> n

    with nogil:
        for t in range(k - 1):
            top *= 3
        for t in range(k):
            h = h * 3 + sy[t]
        # h now encodes sy[0..k-1] with sy[k-1] in the low digit
        for j in range(k, length):
            key = h * 9 + sx[j - 1] * 3 + sy[j]
            c_full[key] += 1
            c_h[h] += 1
            c_hs[h * 3 + sx[j - 1]] += 1
            c_nh[h * 3 + sy[j]] += 1
            h = (h - sy[j - k] * top) * 3 + sy[j]
        for key in range(n_states):
            c = c_full[key]
            if c > 0:
                hh = key / 9
                # Kahan-compensated sum keeps rounding flat in the cell count
                term = (c / dn) * log2(
                    (<double> (c * c_h[hh]))
                    / (<double> (c_nh[hh * 3 + key % 3] * c_hs[key / 3]))
                ) - comp
                acc = total + term
                comp = (acc - total) - term
                total = acc
    return total if total > 0.0 else 0.0


cdef double _te_sparse(long[::1] sx, long[::1] sy, long k, long n):
    cdef Py_ssize_t length = sy.shape[0]
    keys_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] keys = keys_arr
    cdef Py_ssize_t j, t
    cdef long h = 0, top = 1

    with nogil:
        for t in range(k - 1):
            top *= 3
        for t in range(k):
            h = h * 3 + sy[t]
        for j in range(k, length):
            keys[j - k] = h * 9 + sx[j - 1] * 3 + sy[j]
            h = (h - sy[j - k] * top) * 3 + sy[j]

    sorted_arr = np.sort(keys_arr)
    cdef long[::1] skeys = sorted_arr
    cells_arr = np.empty(n, dtype=np.int64)
    cnt_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] cells = cells_arr
    cdef long[::1] cnt = cnt_arr
    cdef Py_ssize_t n_cells = 0
    cdef long cur, run

    with nogil:
        cur = skeys[0]
        run = 1
        for j in range(1, n):
            if skeys[j] == cur:
                run += 1
            else:
                cells[n_cells] = cur
                cnt[n_cells] = run
                n_cells += 1
                cur = skeys[j]
                run = 1
        cells[n_cells] = cur
        cnt[n_cells] = run
        n_cells += 1

    c_h_arr = np.empty(n_cells, dtype=np.int64)
    c_hs_arr = np.empty(n_cells, dtype=np.int64)
    cdef long[::1] c_h = c_h_arr
    cdef long[::1] c_hs = c_hs_arr
    with nogil:
        _group_sums(cells, cnt, n_cells, 9, c_h)
        _group_sums(cells, cnt, n_cells, 3, c_hs)

    # (next, history) ids are not contiguous under the full-key order;
    # regroup the (few) cells through a stable argsort
    nh_arr = (cells_arr[:n_cells] // 9) * 3 + cells_arr[:n_cells] % 3
    order_arr = np.argsort(nh_arr, kind="stable").astype(np.int64)
    cdef long[::1] nh = nh_arr
    cdef long[::1] order = order_arr
    c_nh_arr = np.empty(n_cells, dtype=np.int64)
    cdef long[::1] c_nh = c_nh_arr
    cdef Py_ssize_t a, b
    cdef long total_run
    cdef double total = 0.0, comp = 0.0, term, acc, dn = <double> n

    with nogil:
        a = 0
        while a < n_cells:
            b = a
            total_run = 0
            while b < n_cells and nh[order[b]] == nh[order[a]]:
                total_run += cnt[order[b]]
                b += 1
            for t in range(a, b):
                c_nh[order[t]] = total_run
            a = b
        for j in range(n_cells):
            term = (cnt[j] / dn) * log2(
                (<double> (cnt[j] * c_h[j])) / (<double> (c_nh[j] * c_hs[j]))
            ) - comp
            acc = total + term
            comp = (acc - total) - term
            total = acc
    return total if total > 0.0 else 0.0


cdef void _group_sums(long[::1] cells, long[::1] cnt, Py_ssize_t n_cells,
                      long divisor, long[::1] out) noexcept nogil:
    """Per-cell totals grouped by cells[i] // divisor (contiguous runs)."""
    cdef Py_ssize_t a = 0, b, t
    cdef long gid, acc
    while a < n_cells:
        gid = cells[a] / divisor
        acc = 0
        b = a
        while b < n_cells and cells[b] / divisor == gid:
            acc += cnt[b]
            b += 1
        for t in range(a, b):
            out[t] = acc
        a = b
