"""Composite bead cost.

A bead pairs a contiguous source group with a contiguous target group
(one side may be empty). Its cost blends the cosine distance of the summed
group vectors, the similarity of the groups to each other's surrounding
sentences (discourages sliding the path past the right match), a size
penalty, and a character-length ratio term, then scales by the total
sentence count so per-sentence averages stay comparable across shapes.

Empty beads bypass all of that and take a flat cost.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import IllegalShapeError, ZeroLengthError


def clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def cos01(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine clamped to [0, 1]; zero vectors count as unrelated (0)."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return clamp01(float(np.dot(a, b)) / (na * nb))


def d_embed(g_src: np.ndarray, g_tgt: np.ndarray) -> float:
    return 1.0 - cos01(g_src, g_tgt)


def neighbour_sim(g_src, g_tgt, prec_src, succ_src, prec_tgt, succ_tgt) -> float:
    """Mean similarity of each group to the single sentences flanking the
    other group. Missing neighbours (document edge) contribute 0; the
    denominator stays 4 so edge beads are never advantaged."""
    total = 0.0
    if prec_src is not None:
        total += cos01(prec_src, g_tgt)
    if succ_src is not None:
        total += cos01(succ_src, g_tgt)
    if prec_tgt is not None:
        total += cos01(g_src, prec_tgt)
    if succ_tgt is not None:
        total += cos01(g_src, succ_tgt)
    return total / 4.0


def d_embed_prime(g_src, g_tgt, prec_src, succ_src, prec_tgt, succ_tgt, c: float) -> float:
    return d_embed(g_src, g_tgt) + c * neighbour_sim(
        g_src, g_tgt, prec_src, succ_src, prec_tgt, succ_tgt
    )


def d_embed_double_prime(
    g_src, g_tgt, prec_src, succ_src, prec_tgt, succ_tgt, c: float, p: float, m: int, n: int
) -> float:
    return d_embed_prime(g_src, g_tgt, prec_src, succ_src, prec_tgt, succ_tgt, c) + p * (m + n)


def d_length(len_src: float, len_tgt: float, char_ratio: float, length_slope: float = 1.0) -> float:
    """Length-ratio distance; the target length is first normalized by the
    document-level character ratio so systematically longer languages do
    not register as mismatches."""
    if len_src <= 0 or len_tgt <= 0:
        raise ZeroLengthError(f"group lengths must be > 0, got {len_src} and {len_tgt}")
    lt = len_tgt / char_ratio
    lo, hi = (len_src, lt) if len_src <= lt else (lt, len_src)
    return 1.0 - length_slope * math.log2(1.0 + lo / hi)


def legal_shape(m: int, n: int, max_group_size: int, allow22: bool, allow_empty: bool) -> bool:
    if m == 0 and n == 0:
        return False
    if m == 0 or n == 0:
        return allow_empty and m + n == 1
    if m == 1:
        return n <= max_group_size
    if n == 1:
        return m <= max_group_size
    if m == 2 and n == 2:
        return allow22
    return False


def shape_table(max_group_size: int, allow22: bool, allow_empty: bool) -> np.ndarray:
    """Permitted (srcSize, tgtSize) steps in tie-break preference order:
    1-1 first, then widening 1-n/n-1 pairs, 2-2 if enabled, empties last."""
    shapes = [(1, 1)]
    for s in range(2, max_group_size + 1):
        shapes.append((1, s))
        shapes.append((s, 1))
    if allow22 and max_group_size >= 2:
        shapes.append((2, 2))
    if allow_empty:
        shapes.append((1, 0))
        shapes.append((0, 1))
    return np.asarray(shapes, dtype=np.int32)


class BeadEvaluator:
    """Per-bead cost over two documents, O(dim) per call.

    Holds prefix sums of the embedding rows and of the character lengths so
    any contiguous group vector or group length is two lookups. This is the
    reference implementation the DP kernels are checked against, and the one
    used to (re)price beads after backtracking.
    """

    def __init__(
        self,
        src_emb: np.ndarray,
        tgt_emb: np.ndarray,
        src_char_lengths: np.ndarray,
        tgt_char_lengths: np.ndarray,
        *,
        c: float,
        p: float,
        w: float,
        char_ratio: float,
        length_slope: float = 1.0,
        empty_bead_cost: float = 1.0,
        max_group_size: int = 4,
        allow22: bool = False,
        allow_empty: bool = True,
    ):
        self.src_emb = np.ascontiguousarray(src_emb, dtype=np.float64)
        self.tgt_emb = np.ascontiguousarray(tgt_emb, dtype=np.float64)
        self.src_prefix = _row_prefix(self.src_emb)
        self.tgt_prefix = _row_prefix(self.tgt_emb)
        self.src_char_prefix = _char_prefix(src_char_lengths)
        self.tgt_char_prefix = _char_prefix(tgt_char_lengths)
        self.c = c
        self.p = p
        self.w = w
        self.char_ratio = char_ratio
        self.length_slope = length_slope
        self.empty_bead_cost = empty_bead_cost
        self.max_group_size = max_group_size
        self.allow22 = allow22
        self.allow_empty = allow_empty

    def check_shape(self, m: int, n: int) -> None:
        if not legal_shape(m, n, self.max_group_size, self.allow22, self.allow_empty):
            raise IllegalShapeError(f"bead shape {m}-{n} is not permitted")

    def cost(self, x0: int, x1: int, y0: int, y1: int) -> float:
        """d_final for the bead src[x0:x1] x tgt[y0:y1] (half-open ranges)."""
        m = x1 - x0
        n = y1 - y0
        self.check_shape(m, n)
        if m == 0 or n == 0:
            return self.empty_bead_cost * (m + n)

        g_src = self.src_prefix[x1] - self.src_prefix[x0]
        g_tgt = self.tgt_prefix[y1] - self.tgt_prefix[y0]
        prec_src = self.src_emb[x0 - 1] if x0 > 0 else None
        succ_src = self.src_emb[x1] if x1 < self.src_emb.shape[0] else None
        prec_tgt = self.tgt_emb[y0 - 1] if y0 > 0 else None
        succ_tgt = self.tgt_emb[y1] if y1 < self.tgt_emb.shape[0] else None

        d2 = (
            d_embed(g_src, g_tgt)
            + self.c * neighbour_sim(g_src, g_tgt, prec_src, succ_src, prec_tgt, succ_tgt)
            + self.p * (m + n)
        )
        len_src = int(self.src_char_prefix[x1] - self.src_char_prefix[x0])
        len_tgt = int(self.tgt_char_prefix[y1] - self.tgt_char_prefix[y0])
        if len_src == 0:
            raise ZeroLengthError(f"source group [{x0},{x1}) has no characters")
        if len_tgt == 0:
            raise ZeroLengthError(f"target group [{y0},{y1}) has no characters")
        dl = d_length(len_src, len_tgt, self.char_ratio, self.length_slope)
        d = clamp01((1.0 - self.w) * d2 + self.w * dl)
        return d * (m + n)


def _row_prefix(m: np.ndarray) -> np.ndarray:
    out = np.zeros((m.shape[0] + 1, m.shape[1]), dtype=np.float64)
    np.cumsum(m, axis=0, out=out[1:])
    return out


def _char_prefix(lengths) -> np.ndarray:
    arr = np.asarray(lengths, dtype=np.int64)
    out = np.zeros(arr.shape[0] + 1, dtype=np.int64)
    np.cumsum(arr, out=out[1:])
    return out
