"""Anchor point extraction.

From the cosine similarity matrix between the two documents, keep points
that are mutually among each other's k best, pass a margin and an absolute
cosine threshold, sit in a locally dense zone parallel to the expected
diagonal, and do not share a row or column with a denser point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatchError


@dataclass(frozen=True)
class CandidatePoint:
    x: int
    y: int
    sim: float


@dataclass(frozen=True)
class AnchorPoint:
    x: int
    y: int
    sim: float
    density_ratio: float


def similarity_matrix(src: np.ndarray, tgt: np.ndarray) -> np.ndarray:
    if src.shape[1] != tgt.shape[1]:
        raise DimMismatchError(
            f"embedding dims differ: source {src.shape[1]}, target {tgt.shape[1]}"
        )
    return np.asarray(src, dtype=np.float64) @ np.asarray(tgt, dtype=np.float64).T


def _k_best_of_rows(sim: np.ndarray, k: int, margin_threshold: float, cos_threshold: float):
    """Per-row candidate index lists after the margin and threshold cuts.

    The margin cut compares the two best values of the row and, when the gap
    is below the threshold, rejects the whole row. It is skipped when the row
    has fewer than two candidates (no runner-up to compare against). Ties in
    the k-best selection break toward the lower column index.
    """
    n_rows, n_cols = sim.shape
    kk = min(k, n_cols)
    out: list[list[int]] = []
    if kk == n_cols:
        top = np.argsort(-sim, axis=1, kind="stable")
    else:
        part = np.argpartition(-sim, kk - 1, axis=1)[:, :kk]
        vals = np.take_along_axis(sim, part, axis=1)
        order = np.argsort(-vals, axis=1, kind="stable")
        top = np.take_along_axis(part, order, axis=1)

    for i in range(n_rows):
        row = sim[i]
        idx = top[i].tolist()
        # argpartition can split a tie across the k boundary arbitrarily;
        # rebuild the selection with the documented (-sim, index) order
        if kk < n_cols:
            cut = row[idx[-1]]
            if np.count_nonzero(row >= cut) > kk:
                full = sorted(range(n_cols), key=lambda j: (-row[j], j))
                idx = full[:kk]
            else:
                idx = sorted(idx, key=lambda j: (-row[j], j))
        else:
            idx = sorted(idx, key=lambda j: (-row[j], j))
        if len(idx) >= 2 and row[idx[0]] - row[idx[1]] < margin_threshold:
            out.append([])
            continue
        out.append([j for j in idx if row[j] > cos_threshold])
    return out


def k_best_rows(sim: np.ndarray, k: int, margin_threshold: float, cos_threshold: float):
    return _k_best_of_rows(np.asarray(sim, dtype=np.float64), k, margin_threshold, cos_threshold)


def k_best_cols(sim: np.ndarray, k: int, margin_threshold: float, cos_threshold: float):
    return _k_best_of_rows(np.asarray(sim, dtype=np.float64).T, k, margin_threshold, cos_threshold)


def mutual_candidates(sim: np.ndarray, rows_best, cols_best) -> list[CandidatePoint]:
    """Points (x, y) present in both directions, sorted by (x, y)."""
    col_sets = [set(c) for c in cols_best]
    points = []
    for x, cand in enumerate(rows_best):
        for y in cand:
            if x in col_sets[y]:
                points.append(CandidatePoint(x=x, y=int(y), sim=float(sim[x, y])))
    points.sort(key=lambda p: (p.x, p.y))
    return points


def _zone_bounds(px: int, py: int, u: int, delta_x: float, delta_y: float, sent_ratio: float):
    c = py + (u - px) * sent_ratio
    return math.floor(c - delta_y / 2.0), math.floor(c + delta_y / 2.0)


def local_density_ratio(
    p: CandidatePoint,
    occupied: np.ndarray,
    n_candidates: int,
    n_src: int,
    n_tgt: int,
    delta_x: float,
    delta_y: float,
    sent_ratio: float,
) -> float:
    """Density of candidates in a slanted zone around p, relative to the
    whole-matrix average density.

    The zone follows the expected diagonal: one column of cells per source
    index u within deltaX/2 of p.x, each column spanning deltaY around the
    line through p with slope sentRatio. Cell windows are discretized with
    floor() at both ends, then clipped to the matrix; density is normalized
    by the clipped cell count so edge points are not penalized.
    """
    u_lo = max(0, math.floor(p.x - delta_x / 2.0))
    u_hi = min(n_src - 1, math.floor(p.x + delta_x / 2.0))
    cells = 0
    hits = 0
    for u in range(u_lo, u_hi + 1):
        v_lo, v_hi = _zone_bounds(p.x, p.y, u, delta_x, delta_y, sent_ratio)
        v_lo = max(0, v_lo)
        v_hi = min(n_tgt - 1, v_hi)
        if v_hi < v_lo:
            continue
        cells += v_hi - v_lo + 1
        row = occupied[u]
        hits += int(np.count_nonzero(row[v_lo : v_hi + 1]))
    if cells == 0:
        return 0.0
    zone_density = hits / cells
    avg_density = n_candidates / (n_src * n_tgt)
    return zone_density / avg_density


def _occupancy(cands: list[CandidatePoint], n_src: int, n_tgt: int) -> np.ndarray:
    occupied = np.zeros((n_src, n_tgt), dtype=bool)
    for q in cands:
        occupied[q.x, q.y] = True
    return occupied


def density_ratios(
    cands: list[CandidatePoint],
    n_src: int,
    n_tgt: int,
    delta_x: float,
    delta_y: float,
    sent_ratio: float,
) -> list[float]:
    """Ratio for every candidate against the full (unfiltered) cloud."""
    occupied = _occupancy(cands, n_src, n_tgt)
    return [
        local_density_ratio(p, occupied, len(cands), n_src, n_tgt, delta_x, delta_y, sent_ratio)
        for p in cands
    ]


def density_filter(
    cands: list[CandidatePoint],
    n_src: int,
    n_tgt: int,
    delta_x: float,
    delta_y: float,
    sent_ratio: float,
    min_density_ratio: float,
) -> list[AnchorPoint]:
    ratios = density_ratios(cands, n_src, n_tgt, delta_x, delta_y, sent_ratio)
    return [
        AnchorPoint(x=p.x, y=p.y, sim=p.sim, density_ratio=r)
        for p, r in zip(cands, ratios)
        if r >= min_density_ratio
    ]


def resolve_conflicts(anchors: list[AnchorPoint]) -> list[AnchorPoint]:
    """Keep at most one anchor per row and per column, preferring density.

    Points are processed in descending densityRatio, ties by ascending
    (x, y); a point is accepted only if no accepted point shares its row
    or column. The survivors come back sorted by x.
    """
    order = sorted(anchors, key=lambda a: (-a.density_ratio, a.x, a.y))
    used_x: set[int] = set()
    used_y: set[int] = set()
    kept = []
    for a in order:
        if a.x in used_x or a.y in used_y:
            continue
        used_x.add(a.x)
        used_y.add(a.y)
        kept.append(a)
    kept.sort(key=lambda a: a.x)
    return kept


def extract_candidates(sim: np.ndarray, k: int, margin_threshold: float, cos_threshold: float):
    rows_best = k_best_rows(sim, k, margin_threshold, cos_threshold)
    cols_best = k_best_cols(sim, k, margin_threshold, cos_threshold)
    return mutual_candidates(sim, rows_best, cols_best)


def extract_anchors(
    sim: np.ndarray,
    k: int,
    margin_threshold: float,
    cos_threshold: float,
    delta_x: float,
    delta_y: float,
    sent_ratio: float,
    min_density_ratio: float,
    candidates: list[CandidatePoint] | None = None,
) -> list[AnchorPoint]:
    """Full anchor pipeline; pass precomputed candidates to skip the k-best
    stage (it does not depend on sentRatio, so adaptive re-runs reuse it)."""
    n_src, n_tgt = sim.shape
    if candidates is None:
        candidates = extract_candidates(sim, k, margin_threshold, cos_threshold)
    dense = density_filter(
        candidates, n_src, n_tgt, delta_x, delta_y, sent_ratio, min_density_ratio
    )
    return resolve_conflicts(dense)
