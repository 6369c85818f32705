# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled DP kernel.

Contract and preconditions are documented in _pycore; this version keeps
memory flat (no per-shape cost tables) and evaluates bead costs inline with
scalar loops. Target-side group data is hoisted per group height, source-side
per lattice row, so each (cell, shape) step costs a handful of length-dim
dot products.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, log2, sqrt

cnp.import_array()


cdef inline double _clamp01(double x) noexcept nogil:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


cdef inline double _row_group_cos(
    double[:, ::1] rows, int r, double rnorm,
    double[:, :, ::1] gvec, int dy, int j, double gnorm, int dim,
) noexcept nogil:
    cdef double s = 0.0
    cdef int t
    if rnorm == 0.0 or gnorm == 0.0:
        return 0.0
    for t in range(dim):
        s += rows[r, t] * gvec[dy, j, t]
    return _clamp01(s / (rnorm * gnorm))


cdef inline double _group_row_cos(
    double[:, ::1] gvec, int dx, double gnorm,
    double[:, ::1] rows, int r, double rnorm, int dim,
) noexcept nogil:
    cdef double s = 0.0
    cdef int t
    if rnorm == 0.0 or gnorm == 0.0:
        return 0.0
    for t in range(dim):
        s += gvec[dx, t] * rows[r, t]
    return _clamp01(s / (rnorm * gnorm))


def solve_rectangle(
    double[:, ::1] src_prefix,
    double[:, ::1] tgt_prefix,
    double[:, ::1] src_rows,
    double[:, ::1] tgt_rows,
    cnp.int64_t[::1] src_char_prefix,
    cnp.int64_t[::1] tgt_char_prefix,
    int x0,
    int x1,
    int y0,
    int y1,
    int[:, ::1] shapes,
    double c,
    double p,
    double w,
    double char_ratio,
    double length_slope,
    double empty_bead_cost,
):
    cdef int m = x1 - x0
    cdef int n = y1 - y0
    cdef int dim = src_prefix.shape[1]
    cdef int n_src = src_rows.shape[0]
    cdef int n_tgt = tgt_rows.shape[0]
    cdef int n_shapes = shapes.shape[0]
    cdef int max_dx = 1, max_dy = 1
    cdef int i, j, k, t, dx, dy, pi, pj, r

    for k in range(n_shapes):
        if shapes[k, 0] > max_dx:
            max_dx = shapes[k, 0]
        if shapes[k, 1] > max_dy:
            max_dy = shapes[k, 1]

    # target groups ending at node j, one slab per group height
    tgt_vec_arr = np.zeros((max_dy + 1, n + 1, dim), dtype=np.float64)
    tgt_norm_arr = np.zeros((max_dy + 1, n + 1), dtype=np.float64)
    tgt_len_arr = np.zeros((max_dy + 1, n + 1), dtype=np.float64)
    cdef double[:, :, ::1] tv = tgt_vec_arr
    cdef double[:, ::1] tn = tgt_norm_arr
    cdef double[:, ::1] tl = tgt_len_arr
    cdef double acc
    for dy in range(1, max_dy + 1):
        for j in range(dy, n + 1):
            acc = 0.0
            for t in range(dim):
                tv[dy, j, t] = tgt_prefix[y0 + j, t] - tgt_prefix[y0 + j - dy, t]
                acc += tv[dy, j, t] * tv[dy, j, t]
            tn[dy, j] = sqrt(acc)
            tl[dy, j] = (tgt_char_prefix[y0 + j] - tgt_char_prefix[y0 + j - dy]) / char_ratio

    # norms of the individual rows the neighbour terms can touch
    src_rn_arr = np.zeros(m + 2, dtype=np.float64)
    tgt_rn_arr = np.zeros(n + 2, dtype=np.float64)
    cdef double[::1] srn = src_rn_arr
    cdef double[::1] trn = tgt_rn_arr
    for i in range(m + 2):
        r = x0 - 1 + i
        if 0 <= r < n_src:
            acc = 0.0
            for t in range(dim):
                acc += src_rows[r, t] * src_rows[r, t]
            srn[i] = sqrt(acc)
    for j in range(n + 2):
        r = y0 - 1 + j
        if 0 <= r < n_tgt:
            acc = 0.0
            for t in range(dim):
                acc += tgt_rows[r, t] * tgt_rows[r, t]
            trn[j] = sqrt(acc)

    # source groups ending at the current lattice row, refreshed per i
    src_vec_arr = np.zeros((max_dx + 1, dim), dtype=np.float64)
    src_norm_arr = np.zeros(max_dx + 1, dtype=np.float64)
    src_len_arr = np.zeros(max_dx + 1, dtype=np.float64)
    cdef double[:, ::1] sv = src_vec_arr
    cdef double[::1] sn = src_norm_arr
    cdef double[::1] sl = src_len_arr

    dp_arr = np.full((m + 1, n + 1), INFINITY, dtype=np.float64)
    beads_arr = np.zeros((m + 1, n + 1), dtype=np.int64)
    bp_arr = np.full((m + 1, n + 1), -1, dtype=np.int8)
    cdef double[:, ::1] dp = dp_arr
    cdef cnp.int64_t[:, ::1] nbeads = beads_arr
    cdef cnp.int8_t[:, ::1] bp = bp_arr
    dp[0, 0] = 0.0

    cdef double best, cand, base, step, dot, d_e, nsim, lt, ls, lmin, lmax, dl, dd, gnorm
    cdef cnp.int64_t best_beads, nb
    cdef int best_k

    for i in range(m + 1):
        for dx in range(1, max_dx + 1):
            if dx > i:
                break
            acc = 0.0
            for t in range(dim):
                sv[dx, t] = src_prefix[x0 + i, t] - src_prefix[x0 + i - dx, t]
                acc += sv[dx, t] * sv[dx, t]
            sn[dx] = sqrt(acc)
            sl[dx] = <double> (src_char_prefix[x0 + i] - src_char_prefix[x0 + i - dx])

        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best = INFINITY
            best_beads = -1
            best_k = -1
            for k in range(n_shapes):
                dx = shapes[k, 0]
                dy = shapes[k, 1]
                pi = i - dx
                pj = j - dy
                if pi < 0 or pj < 0:
                    continue
                base = dp[pi, pj]
                if base == INFINITY:
                    continue
                if dx == 0 or dy == 0:
                    step = empty_bead_cost
                else:
                    dot = 0.0
                    for t in range(dim):
                        dot += sv[dx, t] * tv[dy, j, t]
                    gnorm = sn[dx] * tn[dy, j]
                    d_e = 1.0 - (_clamp01(dot / gnorm) if gnorm > 0.0 else 0.0)

                    nsim = 0.0
                    r = x0 + i - dx - 1
                    if 0 <= r < n_src:
                        nsim += _row_group_cos(src_rows, r, srn[r - x0 + 1], tv, dy, j, tn[dy, j], dim)
                    r = x0 + i
                    if r < n_src:
                        nsim += _row_group_cos(src_rows, r, srn[r - x0 + 1], tv, dy, j, tn[dy, j], dim)
                    r = y0 + j - dy - 1
                    if 0 <= r < n_tgt:
                        nsim += _group_row_cos(sv, dx, sn[dx], tgt_rows, r, trn[r - y0 + 1], dim)
                    r = y0 + j
                    if r < n_tgt:
                        nsim += _group_row_cos(sv, dx, sn[dx], tgt_rows, r, trn[r - y0 + 1], dim)
                    nsim /= 4.0

                    ls = sl[dx]
                    lt = tl[dy, j]
                    if ls <= lt:
                        lmin = ls
                        lmax = lt
                    else:
                        lmin = lt
                        lmax = ls
                    dl = 1.0 - length_slope * log2(1.0 + lmin / lmax)
                    dd = _clamp01((1.0 - w) * (d_e + c * nsim + p * (dx + dy)) + w * dl)
                    step = dd * (dx + dy)

                cand = base + step
                nb = nbeads[pi, pj] + 1
                if cand < best or (cand == best and nb < best_beads):
                    best = cand
                    best_beads = nb
                    best_k = k
            if best_k >= 0:
                dp[i, j] = best
                nbeads[i, j] = best_beads
                bp[i, j] = best_k

    return bp_arr, bool(dp[m, n] != INFINITY)
