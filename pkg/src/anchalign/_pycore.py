"""Pure-python DP kernel.

Same contract as the compiled extension (see _core.pyx): given prefix-sum
matrices, the raw normalized rows, character prefixes, a half-open rectangle
[x0,x1) x [y0,y1) and the permitted shape table, fill the DP lattice and
return the backpointer grid plus a feasibility flag.

Bead costs for every shape are materialized as vectorized tables up front
(memory O(m*n) per shape), then a scalar scan picks the cheapest tiling.
Intended for environments without a working compiler; the compiled kernel
is the production path.

Preconditions (enforced by the caller, not re-checked here): rows are the
documents' sentence embeddings, char prefixes are nonnegative and strictly
increasing across any non-degenerate rectangle being solved.
"""

from __future__ import annotations

import numpy as np


def _neigh_rows_vs_groups(rows, idx, groups, group_norms, n_rows):
    """Clamped cosines of rows[idx[t]] against every group vector; rows with
    out-of-document indices contribute 0."""
    valid = (idx >= 0) & (idx < n_rows)
    picked = np.zeros((idx.shape[0], rows.shape[1]), dtype=np.float64)
    picked[valid] = rows[idx[valid]]
    pn = np.linalg.norm(picked, axis=1)
    denom = np.outer(pn, group_norms)
    cos = np.divide(
        picked @ groups.T, denom, out=np.zeros((idx.shape[0], groups.shape[0])), where=denom > 0
    )
    return np.clip(cos, 0.0, 1.0)


def _cost_table(
    src_prefix,
    tgt_prefix,
    src_rows,
    tgt_rows,
    src_char_prefix,
    tgt_char_prefix,
    x0,
    y0,
    m,
    n,
    dx,
    dy,
    c,
    p,
    w,
    char_ratio,
    length_slope,
):
    """table[pi, pj] = cost of the (dx, dy) bead starting at node (pi, pj)."""
    vs = src_prefix[x0 + dx : x0 + m + 1] - src_prefix[x0 : x0 + m - dx + 1]
    vt = tgt_prefix[y0 + dy : y0 + n + 1] - tgt_prefix[y0 : y0 + n - dy + 1]
    ns = np.linalg.norm(vs, axis=1)
    nt = np.linalg.norm(vt, axis=1)
    denom = np.outer(ns, nt)
    cos = np.divide(vs @ vt.T, denom, out=np.zeros((vs.shape[0], vt.shape[0])), where=denom > 0)
    d_e = 1.0 - np.clip(cos, 0.0, 1.0)

    n_src = src_rows.shape[0]
    n_tgt = tgt_rows.shape[0]
    prec_s = np.arange(x0 - 1, x0 + m - dx)
    succ_s = np.arange(x0 + dx, x0 + m + 1)
    prec_t = np.arange(y0 - 1, y0 + n - dy)
    succ_t = np.arange(y0 + dy, y0 + n + 1)
    n_sim = _neigh_rows_vs_groups(src_rows, prec_s, vt, nt, n_src)
    n_sim += _neigh_rows_vs_groups(src_rows, succ_s, vt, nt, n_src)
    n_sim += _neigh_rows_vs_groups(tgt_rows, prec_t, vs, ns, n_tgt).T
    n_sim += _neigh_rows_vs_groups(tgt_rows, succ_t, vs, ns, n_tgt).T
    n_sim /= 4.0

    d2 = d_e + c * n_sim + p * (dx + dy)

    ls = (src_char_prefix[x0 + dx : x0 + m + 1] - src_char_prefix[x0 : x0 + m - dx + 1]).astype(
        np.float64
    )
    lt = (tgt_char_prefix[y0 + dy : y0 + n + 1] - tgt_char_prefix[y0 : y0 + n - dy + 1]).astype(
        np.float64
    ) / char_ratio
    lmin = np.minimum.outer(ls, lt)
    lmax = np.maximum.outer(ls, lt)
    dl = 1.0 - length_slope * np.log2(1.0 + lmin / lmax)

    d = np.clip((1.0 - w) * d2 + w * dl, 0.0, 1.0)
    return d * (dx + dy)


def solve_rectangle(
    src_prefix,
    tgt_prefix,
    src_rows,
    tgt_rows,
    src_char_prefix,
    tgt_char_prefix,
    x0,
    x1,
    y0,
    y1,
    shapes,
    c,
    p,
    w,
    char_ratio,
    length_slope,
    empty_bead_cost,
):
    m = x1 - x0
    n = y1 - y0
    n_shapes = shapes.shape[0]
    steps = [(int(shapes[k, 0]), int(shapes[k, 1])) for k in range(n_shapes)]

    tables: list = []
    for dx, dy in steps:
        if dx == 0 or dy == 0 or dx > m or dy > n:
            # empty shapes cost a constant; oversize shapes are unreachable
            tables.append(None)
            continue
        tables.append(
            _cost_table(
                src_prefix,
                tgt_prefix,
                src_rows,
                tgt_rows,
                src_char_prefix,
                tgt_char_prefix,
                x0,
                y0,
                m,
                n,
                dx,
                dy,
                c,
                p,
                w,
                char_ratio,
                length_slope,
            )
        )

    inf = np.inf
    dp = np.full((m + 1, n + 1), inf, dtype=np.float64)
    nbeads = np.zeros((m + 1, n + 1), dtype=np.int64)
    bp = np.full((m + 1, n + 1), -1, dtype=np.int8)
    dp[0, 0] = 0.0

    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            best_beads = -1
            best_k = -1
            for k, (dx, dy) in enumerate(steps):
                pi = i - dx
                pj = j - dy
                if pi < 0 or pj < 0:
                    continue
                base = dp[pi, pj]
                if base == inf:
                    continue
                table = tables[k]
                step_cost = empty_bead_cost if table is None else table[pi, pj]
                cand = base + step_cost
                beads = nbeads[pi, pj] + 1
                if cand < best or (cand == best and beads < best_beads):
                    best = cand
                    best_beads = beads
                    best_k = k
            if best_k >= 0:
                dp[i, j] = best
                nbeads[i, j] = best_beads
                bp[i, j] = best_k

    return bp, bool(np.isfinite(dp[m, n]))
