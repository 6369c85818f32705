"""Anchor-guided dynamic programming alignment.

Retained anchors act as waypoints the path must pass through; the DP kernel
only ever solves the small rectangles between consecutive waypoints, which
is what keeps total work near-linear when anchors are dense.

Index conventions in this module: all sentence ranges are half-open.
Interval records (from the intervals module) carry inclusive anchor-tight
bounds and are converted on entry.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .anchors import AnchorPoint, extract_anchors, extract_candidates, similarity_matrix
from .config import AlignConfig
from .costs import BeadEvaluator, shape_table
from .embeddings import SentenceDoc, l2_normalize
from .errors import NoPathError, RowCountMismatchError, ZeroLengthError
from .intervals import (
    AlignableInterval,
    RatioEstimates,
    adaptive_pass,
    detect_intervals,
    extend_bounds,
    initial_ratios,
)


@dataclass(frozen=True)
class Bead:
    """One alignment unit; ranges are half-open document indices."""

    src_start: int
    src_end: int
    tgt_start: int
    tgt_end: int
    cost: float

    @property
    def src_indices(self) -> list[int]:
        return list(range(self.src_start, self.src_end))

    @property
    def tgt_indices(self) -> list[int]:
        return list(range(self.tgt_start, self.tgt_end))


@dataclass
class AlignmentPath:
    beads: list[Bead]
    total_cost: float
    avg_score: float
    rect: tuple[int, int, int, int]  # half-open (x_lo, x_hi, y_lo, y_hi)


@dataclass
class DocumentAlignment:
    anchors: list[AnchorPoint]
    intervals: list[AlignableInterval]
    results: list[tuple[AlignableInterval, AlignmentPath]]
    ratios: RatioEstimates
    avg_score: float
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def beads(self) -> list[Bead]:
        return [b for _, path in self.results for b in path.beads]


def _check_no_empty_sentences(ev: BeadEvaluator, x_lo, x_hi, y_lo, y_hi) -> None:
    """Both sides non-degenerate means every sentence in the rectangle gets
    priced by d_length at some point; zero-length sentences cannot be."""
    src_lens = np.diff(ev.src_char_prefix[x_lo : x_hi + 1])
    if src_lens.size and src_lens.min() == 0:
        bad = x_lo + int(np.argmin(src_lens))
        raise ZeroLengthError(f"source sentence {bad} has no characters")
    tgt_lens = np.diff(ev.tgt_char_prefix[y_lo : y_hi + 1])
    if tgt_lens.size and tgt_lens.min() == 0:
        bad = y_lo + int(np.argmin(tgt_lens))
        raise ZeroLengthError(f"target sentence {bad} has no characters")


def dp_segment(
    ev: BeadEvaluator,
    shapes: np.ndarray,
    x_lo: int,
    x_hi: int,
    y_lo: int,
    y_hi: int,
    kernel=None,
) -> list[Bead]:
    """Optimal bead tiling of src[x_lo:x_hi] x tgt[y_lo:y_hi]."""
    if kernel is None:
        kernel = kernels.get_kernel()
    m = x_hi - x_lo
    n = y_hi - y_lo
    if m == 0 and n == 0:
        return []
    if m > 0 and n > 0:
        _check_no_empty_sentences(ev, x_lo, x_hi, y_lo, y_hi)
    bp, feasible = kernel.solve_rectangle(
        ev.src_prefix,
        ev.tgt_prefix,
        ev.src_emb,
        ev.tgt_emb,
        ev.src_char_prefix,
        ev.tgt_char_prefix,
        x_lo,
        x_hi,
        y_lo,
        y_hi,
        shapes,
        ev.c,
        ev.p,
        ev.w,
        ev.char_ratio,
        ev.length_slope,
        ev.empty_bead_cost,
    )
    if not feasible:
        raise NoPathError(f"no legal bead tiling for a {m}x{n} rectangle at ({x_lo},{y_lo})")

    rev: list[Bead] = []
    i, j = m, n
    while i > 0 or j > 0:
        k = int(bp[i, j])
        if k < 0:
            raise NoPathError(f"broken backtrack at node ({i},{j})")
        dx = int(shapes[k, 0])
        dy = int(shapes[k, 1])
        sx0, sx1 = x_lo + i - dx, x_lo + i
        sy0, sy1 = y_lo + j - dy, y_lo + j
        # recompute through the reference evaluator so reported costs are
        # backend-independent and sum exactly to the path total
        cost = ev.cost(sx0, sx1, sy0, sy1)
        rev.append(Bead(sx0, sx1, sy0, sy1, cost))
        i -= dx
        j -= dy
    rev.reverse()
    return rev


def _waypoints(anchors, rect, sent_ratio: float, local_diag_beam: float):
    """Anchors retained as mandatory pass-through nodes.

    Walking in source order, an anchor is kept only if it stays monotone
    with the previous retained node and within the beam around the diagonal
    through it; the rectangle origin seeds the walk.
    """
    x_lo, x_hi, y_lo, y_hi = rect
    px, py = x_lo, y_lo
    kept = []
    for a in anchors:
        if not (x_lo <= a.x < x_hi and y_lo <= a.y < y_hi):
            continue
        if a.x < px or a.y < py or (a.x == px and a.y == py):
            continue
        if abs(a.y - (py + (a.x - px) * sent_ratio)) > local_diag_beam:
            continue
        kept.append((a.x, a.y))
        px, py = a.x, a.y
    return kept


def align_interval(
    ev: BeadEvaluator,
    shapes: np.ndarray,
    rect: tuple[int, int, int, int],
    anchors,
    sent_ratio: float,
    local_diag_beam: float,
    kernel=None,
) -> AlignmentPath:
    """Solve one rectangle (half-open bounds) segment by segment between
    waypoints and concatenate the bead runs."""
    x_lo, x_hi, y_lo, y_hi = rect
    nodes = [(x_lo, y_lo)]
    nodes += _waypoints(anchors, rect, sent_ratio, local_diag_beam)
    nodes.append((x_hi, y_hi))
    beads: list[Bead] = []
    for (ax, ay), (bx, by) in zip(nodes, nodes[1:]):
        beads.extend(dp_segment(ev, shapes, ax, bx, ay, by, kernel=kernel))
    total = sum(b.cost for b in beads)
    denom = (x_hi - x_lo) + (y_hi - y_lo)
    return AlignmentPath(
        beads=beads,
        total_cost=total,
        avg_score=total / denom if denom else 0.0,
        rect=rect,
    )


def whole_document_interval(anchors, n_src: int, n_tgt: int) -> AlignableInterval:
    return AlignableInterval(
        x_start=0,
        x_end=n_src - 1,
        y_start=0,
        y_end=n_tgt - 1,
        anchors=tuple(anchors),
    )


def align_documents(
    src_doc: SentenceDoc,
    tgt_doc: SentenceDoc,
    src_emb: np.ndarray,
    tgt_emb: np.ndarray,
    cfg: AlignConfig | None = None,
    kernel=None,
) -> DocumentAlignment:
    if cfg is None:
        cfg = AlignConfig()
    if kernel is None:
        kernel = kernels.get_kernel()
    if src_emb.shape[0] != len(src_doc):
        raise RowCountMismatchError(
            f"source: {src_emb.shape[0]} embedding rows for {len(src_doc)} sentences"
        )
    if tgt_emb.shape[0] != len(tgt_doc):
        raise RowCountMismatchError(
            f"target: {tgt_emb.shape[0]} embedding rows for {len(tgt_doc)} sentences"
        )

    n_src, n_tgt = len(src_doc), len(tgt_doc)
    timings = {"similarity": 0.0, "anchoring": 0.0, "intervals": 0.0, "dp": 0.0}
    if n_src == 0 or n_tgt == 0:
        return DocumentAlignment(
            anchors=[],
            intervals=[],
            results=[],
            ratios=RatioEstimates(1.0, 1.0),
            avg_score=0.0,
            timings=timings,
        )

    t0 = time.perf_counter()
    sim = similarity_matrix(l2_normalize(src_emb), l2_normalize(tgt_emb))
    candidates = extract_candidates(sim, cfg.k, cfg.margin_threshold, cfg.cos_threshold)
    timings["similarity"] = time.perf_counter() - t0

    ratios = initial_ratios(src_doc, tgt_doc, cfg)
    t0 = time.perf_counter()
    anchors = extract_anchors(
        sim,
        k=cfg.k,
        margin_threshold=cfg.margin_threshold,
        cos_threshold=cfg.cos_threshold,
        delta_x=cfg.delta_x,
        delta_y=cfg.delta_y,
        sent_ratio=ratios.sent_ratio,
        min_density_ratio=cfg.min_density_ratio,
        candidates=candidates,
    )
    timings["anchoring"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    intervals: list[AlignableInterval] = []
    if cfg.detect_intervals:
        intervals = detect_intervals(
            anchors,
            sent_ratio=ratios.sent_ratio,
            deviation_ignore_threshold=cfg.deviation_ignore_threshold,
            max_dist_to_the_diagonal=cfg.max_dist_to_the_diagonal,
            max_gap_size=cfg.max_gap_size,
            min_horizontal_density=cfg.min_horizontal_density,
            min_density_ratio=cfg.min_density_ratio,
        )
        if cfg.adaptive:
            anchors, intervals, ratios = adaptive_pass(
                sim, src_doc, tgt_doc, cfg, candidates, first_pass=(anchors, intervals)
            )
    timings["intervals"] = time.perf_counter() - t0

    ev = BeadEvaluator(
        l2_normalize(src_emb),
        l2_normalize(tgt_emb),
        src_doc.char_lengths,
        tgt_doc.char_lengths,
        c=cfg.c,
        p=cfg.p,
        w=cfg.w,
        char_ratio=ratios.char_ratio,
        length_slope=cfg.length_slope,
        empty_bead_cost=cfg.empty_bead_cost,
        max_group_size=cfg.max_group_size,
        allow22=cfg.allow22,
        allow_empty=cfg.allow_empty,
    )
    shapes = shape_table(cfg.max_group_size, cfg.allow22, cfg.allow_empty)

    t0 = time.perf_counter()
    if intervals:
        rects = [
            (lo, hi + 1, tlo, thi + 1)
            for lo, hi, tlo, thi in extend_bounds(intervals, n_src, n_tgt)
        ]
        jobs = list(zip(intervals, rects))
    else:
        # no detection requested, or nothing detected: span both documents
        whole = whole_document_interval(anchors, n_src, n_tgt)
        jobs = [(whole, (0, n_src, 0, n_tgt))]

    def solve(job):
        iv, rect = job
        return iv, align_interval(
            ev, shapes, rect, iv.anchors, ratios.sent_ratio, cfg.local_diag_beam, kernel=kernel
        )

    if cfg.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(solve, jobs))
    else:
        results = [solve(job) for job in jobs]
    timings["dp"] = time.perf_counter() - t0

    total_cost = sum(path.total_cost for _, path in results)
    total_sents = sum(
        (r[1].rect[1] - r[1].rect[0]) + (r[1].rect[3] - r[1].rect[2]) for r in results
    )
    return DocumentAlignment(
        anchors=anchors,
        intervals=intervals,
        results=results,
        ratios=ratios,
        avg_score=total_cost / total_sents if total_sents else 0.0,
        timings=timings,
    )
