"""Alignable interval detection.

The anchor sequence (sorted by source index) is segmented by a small state
machine: points that stay close to the local diagonal extend the current
interval, points that deviate either open a new interval, get dropped as
noise, or close the interval. Intervals that end up too small or too sparse
are discarded. The detected intervals also drive the optional adaptive
re-estimation of the sentence-count and character-count ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .anchors import AnchorPoint, extract_anchors
from .errors import EmptyIntervalsError


@dataclass(frozen=True)
class AlignableInterval:
    """Anchor-tight bounding box: [x_start, x_end] x [y_start, y_end] are the
    coordinates of the first and last anchor, not the DP search rectangle
    (see extend_bounds for that)."""

    x_start: int
    x_end: int
    y_start: int
    y_end: int
    anchors: tuple[AnchorPoint, ...]

    @property
    def horizontal_density(self) -> float:
        return len(self.anchors) / (self.x_end - self.x_start + 1)


@dataclass(frozen=True)
class RatioEstimates:
    sent_ratio: float
    char_ratio: float


def deviation(curr, prev, sent_ratio: float) -> float:
    """Vertical distance of curr from the diagonal through prev."""
    return abs(curr.y - (prev.y + (curr.x - prev.x) * sent_ratio))


def _monotonic(ys) -> bool:
    return all(a < b for a, b in zip(ys, ys[1:]))


def drop_monotonicity_breaks(anchors: list[AnchorPoint]) -> list[AnchorPoint]:
    """Remove points that break y-monotonicity while their surviving window
    of up to two predecessors and two successors is itself monotonic.

    Windows are taken over the original list positions and truncated at the
    ends; the rule needs at least one neighbor on each side to apply.
    """
    kept = []
    for i, a in enumerate(anchors):
        preds = anchors[max(0, i - 2) : i]
        succs = anchors[i + 1 : i + 3]
        if preds and succs:
            around = [q.y for q in preds] + [q.y for q in succs]
            window = [q.y for q in preds] + [a.y] + [q.y for q in succs]
            if _monotonic(around) and not _monotonic(window):
                continue
        kept.append(a)
    return kept


def detect_intervals(
    anchors: list[AnchorPoint],
    sent_ratio: float,
    deviation_ignore_threshold: float,
    max_dist_to_the_diagonal: float,
    max_gap_size: float,
    min_horizontal_density: float,
    min_density_ratio: float,
) -> list[AlignableInterval]:
    pts = drop_monotonicity_breaks(anchors)
    groups: list[list[AnchorPoint]] = []
    current: list[AnchorPoint] = []
    for idx, p in enumerate(pts):
        if not current:
            current.append(p)
            continue
        prev = current[-1]
        dev = deviation(p, prev, sent_ratio)
        if (dev > deviation_ignore_threshold or p.y < prev.y) and p.density_ratio < min_density_ratio:
            continue
        if dev < max_dist_to_the_diagonal and p.y > prev.y:
            current.append(p)
            continue
        # p deviates: it opens a new interval only if it looks like the
        # start of a fresh run (aligned with its successor) or sits beyond
        # a large gap with strong local support
        succ = pts[idx + 1] if idx + 1 < len(pts) else None
        starts_run = (
            succ is not None
            and deviation(succ, p, sent_ratio) < max_dist_to_the_diagonal
            and p.density_ratio > min_density_ratio
        )
        after_gap = (
            math.hypot(p.x - prev.x, p.y - prev.y) > max_gap_size
            and p.density_ratio > 1.5 * min_density_ratio
        )
        if starts_run or after_gap:
            groups.append(current)
            current = [p]
        # otherwise p is dropped and the interval stays open
    if current:
        groups.append(current)

    out = []
    for g in groups:
        if len(g) < 2:
            continue
        density = len(g) / (g[-1].x - g[0].x + 1)
        if density < min_horizontal_density:
            continue
        out.append(
            AlignableInterval(
                x_start=g[0].x,
                x_end=g[-1].x,
                y_start=g[0].y,
                y_end=g[-1].y,
                anchors=tuple(g),
            )
        )
    return _resolve_target_overlaps(out)


def _resolve_target_overlaps(intervals: list[AlignableInterval]) -> list[AlignableInterval]:
    """Source ranges are disjoint by construction; target ranges are not when
    the automaton opens a new interval over already-covered y. Keep the
    better-supported interval (more anchors, then leftmost)."""
    order = sorted(intervals, key=lambda iv: (-len(iv.anchors), iv.x_start))
    kept: list[AlignableInterval] = []
    for iv in order:
        if any(iv.y_start <= kv.y_end and kv.y_start <= iv.y_end for kv in kept):
            continue
        kept.append(iv)
    kept.sort(key=lambda iv: iv.x_start)
    return kept


def extend_bounds(
    intervals: list[AlignableInterval], n_src: int, n_tgt: int
) -> list[tuple[int, int, int, int]]:
    """DP search rectangles: tight interval boxes stretched to the midpoint
    between adjacent intervals (document bounds at the extremes) so sentences
    that carry no anchor still fall into exactly one rectangle.

    Returned in the same order as `intervals`; x extensions follow source
    order, y extensions follow target order.
    """
    n = len(intervals)
    if n == 0:
        return []
    x_lo = [0] * n
    x_hi = [0] * n
    for i, iv in enumerate(intervals):
        x_lo[i] = 0 if i == 0 else (intervals[i - 1].x_end + iv.x_start) // 2 + 1
        x_hi[i] = n_src - 1 if i == n - 1 else (iv.x_end + intervals[i + 1].x_start) // 2

    by_y = sorted(range(n), key=lambda t: intervals[t].y_start)
    y_lo = [0] * n
    y_hi = [0] * n
    for pos, t in enumerate(by_y):
        iv = intervals[t]
        if pos == 0:
            y_lo[t] = 0
        else:
            y_lo[t] = (intervals[by_y[pos - 1]].y_end + iv.y_start) // 2 + 1
        if pos == n - 1:
            y_hi[t] = n_tgt - 1
        else:
            y_hi[t] = (iv.y_end + intervals[by_y[pos + 1]].y_start) // 2

    return [(x_lo[i], x_hi[i], y_lo[i], y_hi[i]) for i in range(n)]


def estimate_ratios(intervals, src_doc, tgt_doc) -> RatioEstimates:
    """Ratios over the anchored regions only, so unmatched bulk (deleted
    chapters, extra front matter) stops skewing the diagonal slope."""
    if not intervals:
        raise EmptyIntervalsError("no alignable intervals to estimate ratios from")
    src_sents = sum(iv.x_end - iv.x_start + 1 for iv in intervals)
    tgt_sents = sum(iv.y_end - iv.y_start + 1 for iv in intervals)
    src_chars = sum(int(src_doc.char_lengths[iv.x_start : iv.x_end + 1].sum()) for iv in intervals)
    tgt_chars = sum(int(tgt_doc.char_lengths[iv.y_start : iv.y_end + 1].sum()) for iv in intervals)
    if src_chars == 0 or tgt_chars == 0:
        raise EmptyIntervalsError("aligned regions contain no characters")
    return RatioEstimates(sent_ratio=tgt_sents / src_sents, char_ratio=tgt_chars / src_chars)


def initial_ratios(src_doc, tgt_doc, cfg) -> RatioEstimates:
    sent = cfg.sent_ratio if cfg.sent_ratio is not None else len(tgt_doc) / len(src_doc)
    if cfg.char_ratio is not None:
        char = cfg.char_ratio
    elif src_doc.total_chars > 0:
        char = tgt_doc.total_chars / src_doc.total_chars
    else:
        char = 1.0
    return RatioEstimates(sent_ratio=sent, char_ratio=char)


def _one_pass(sim, cfg, ratios: RatioEstimates, candidates):
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
    ivs = detect_intervals(
        anchors,
        sent_ratio=ratios.sent_ratio,
        deviation_ignore_threshold=cfg.deviation_ignore_threshold,
        max_dist_to_the_diagonal=cfg.max_dist_to_the_diagonal,
        max_gap_size=cfg.max_gap_size,
        min_horizontal_density=cfg.min_horizontal_density,
        min_density_ratio=cfg.min_density_ratio,
    )
    return anchors, ivs


def adaptive_pass(sim, src_doc, tgt_doc, cfg, candidates, first_pass=None):
    """Two-pass detection: run with document-level ratios, re-estimate the
    ratios from the detected intervals, run once more. User-supplied ratio
    overrides stay pinned through both passes. Candidate extraction does not
    depend on the ratios, so the caller's candidate list is reused verbatim,
    and a caller that already ran pass 1 can hand in its (anchors, intervals).

    A pass 1 with no intervals falls back to non-adaptive behavior; a pass 2
    with no intervals returns the pass 1 results unchanged.
    """
    ratios0 = initial_ratios(src_doc, tgt_doc, cfg)
    if first_pass is not None:
        anchors1, intervals1 = first_pass
    else:
        anchors1, intervals1 = _one_pass(sim, cfg, ratios0, candidates)
    if not intervals1:
        return anchors1, [], ratios0
    try:
        est = estimate_ratios(intervals1, src_doc, tgt_doc)
    except EmptyIntervalsError:
        return anchors1, intervals1, ratios0
    ratios1 = RatioEstimates(
        sent_ratio=cfg.sent_ratio if cfg.sent_ratio is not None else est.sent_ratio,
        char_ratio=cfg.char_ratio if cfg.char_ratio is not None else est.char_ratio,
    )
    anchors2, intervals2 = _one_pass(sim, cfg, ratios1, candidates)
    if not intervals2:
        return anchors1, intervals1, ratios0
    return anchors2, intervals2, ratios1
