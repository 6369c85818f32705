"""Shared fixtures and independent oracles.

The oracles deliberately avoid the library's own DP and selection code:
the tiling oracle enumerates every bead tiling recursively, the mutual
k-best oracle re-derives candidates with plain sorted() comprehensions.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from anchalign import kernels
from anchalign.costs import BeadEvaluator
from anchalign.embeddings import SentenceDoc

KERNELS = [("python", kernels.python_kernel)]
if kernels.HAVE_COMPILED:
    KERNELS.append(("compiled", kernels.compiled_kernel))


@pytest.fixture(params=[k for _, k in KERNELS], ids=[name for name, _ in KERNELS])
def kernel(request):
    return request.param


def unit_rows(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    m = rng.normal(size=(n, dim))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def max_offdiag_cos(rows: np.ndarray) -> float:
    sim = rows @ rows.T
    np.fill_diagonal(sim, -np.inf)
    return float(np.abs(sim[np.isfinite(sim)]).max()) if rows.shape[0] > 1 else 0.0


def separated_unit_rows(seed: int, n: int, dim: int, bound: float) -> np.ndarray:
    """Unit rows whose pairwise |cos| stays under `bound`; reseeds until the
    draw satisfies it so tests stay deterministic."""
    for attempt in range(50):
        rows = unit_rows(np.random.default_rng(seed + attempt), n, dim)
        if max_offdiag_cos(rows) < bound:
            return rows
    raise AssertionError(f"no separated draw found for n={n}, dim={dim}, bound={bound}")


def make_doc(lengths) -> SentenceDoc:
    sentences = ["x" * int(w) for w in lengths]
    return SentenceDoc(sentences=sentences, char_lengths=np.asarray(lengths, dtype=np.int64))


def random_lengths(rng: np.random.Generator, n: int, lo: int = 5, hi: int = 60):
    return rng.integers(lo, hi + 1, size=n).tolist()


def make_evaluator(rng: np.random.Generator, n_src: int, n_tgt: int, dim: int, **kw) -> BeadEvaluator:
    params = dict(c=0.6, p=0.06, w=0.33, char_ratio=1.0)
    params.update(kw)
    return BeadEvaluator(
        unit_rows(rng, n_src, dim),
        unit_rows(rng, n_tgt, dim),
        rng.integers(1, 51, size=n_src),
        rng.integers(1, 51, size=n_tgt),
        **params,
    )


def step_list(max_group_size: int, allow22: bool, allow_empty: bool) -> list[tuple[int, int]]:
    steps = [(1, 1)]
    for s in range(2, max_group_size + 1):
        steps += [(1, s), (s, 1)]
    if allow22 and max_group_size >= 2:
        steps.append((2, 2))
    if allow_empty:
        steps += [(1, 0), (0, 1)]
    return steps


def min_tiling_cost(ev: BeadEvaluator, steps, rect) -> float | None:
    """Exhaustive minimum over every bead tiling of the rectangle.

    Depth-first enumeration from the far corner back to the origin; the
    `acc >= best` cut is sound because bead costs are nonnegative. Returns
    None when no tiling exists.
    """
    x_lo, x_hi, y_lo, y_hi = rect
    m, n = x_hi - x_lo, y_hi - y_lo
    cache: dict[tuple[int, int, int, int], float] = {}

    def bead_cost(pi: int, pj: int, dx: int, dy: int) -> float:
        key = (pi, pj, dx, dy)
        if key not in cache:
            cache[key] = ev.cost(x_lo + pi, x_lo + pi + dx, y_lo + pj, y_lo + pj + dy)
        return cache[key]

    best = math.inf

    def walk(i: int, j: int, acc: float) -> None:
        nonlocal best
        if acc >= best:
            return
        if i == 0 and j == 0:
            best = acc
            return
        for dx, dy in steps:
            pi, pj = i - dx, j - dy
            if pi >= 0 and pj >= 0:
                walk(pi, pj, acc + bead_cost(pi, pj, dx, dy))

    walk(m, n, 0.0)
    return None if math.isinf(best) else best


def brute_force_mutual(sim: np.ndarray, k: int, margin: float, cos_threshold: float) -> set:
    """Mutual k-best pairs by direct definition, one sorted() per row/column."""

    def k_best(vec) -> set[int]:
        order = sorted(range(len(vec)), key=lambda j: (-vec[j], j))[:k]
        if len(order) >= 2 and vec[order[0]] - vec[order[1]] < margin:
            return set()
        return {j for j in order if vec[j] > cos_threshold}

    rows = [k_best(sim[i]) for i in range(sim.shape[0])]
    cols = [k_best(sim[:, j]) for j in range(sim.shape[1])]
    return {(i, j) for i in range(sim.shape[0]) for j in rows[i] if i in cols[j]}


def _diagonal_continuations(sel, block_size: int, separation_rows: float) -> bool:
    """True when some source-consecutive pair of selected blocks sits close
    to the continuation of the first block's diagonal in the target.

    Such a placement makes merging the two blocks the geometrically correct
    reading for any slope near 1 (the corpus is never scaled), so the gold
    block mapping would be ill-defined as an interval oracle.
    """
    pos = {int(b): t for t, b in enumerate(sel)}
    ordered = sorted(pos)
    for b1, b2 in zip(ordered, ordered[1:]):
        dt = pos[b2] - pos[b1]
        if dt < 1:
            continue
        dx = (b2 - b1 - 1) * block_size + 1
        dy = (dt - 1) * block_size + 1
        if 0.85 * dx - separation_rows <= dy <= 1.15 * dx + separation_rows:
            return True
    return False


def block_bitext(
    seed: int,
    n_blocks: int,
    block_size: int,
    n_selected: int,
    dim: int,
    src_noise: float = 0.35,
    tgt_noise: float = 0.25,
    separation_rows: float | None = None,
):
    """Synthetic bitext with a known block mapping.

    The source is n_blocks topical blocks of block_size sentences each,
    jittered around orthonormal block centroids (orthogonality keeps
    cross-block similarities down to pure noise). The target keeps
    n_selected blocks in shuffled order (never two source-order consecutive
    blocks adjacent in the target, so block boundaries cannot legitimately
    merge); each target sentence is a noisy copy of its source counterpart.
    Returns (src_rows, tgt_rows, selected_block_ids).

    separation_rows additionally resamples the shuffle until no selected
    block lands within that many rows of its source-order predecessor's
    diagonal continuation; required when the block mapping serves as a
    detection oracle, since such placements are legitimately mergeable.
    """
    assert n_blocks <= dim
    rng = np.random.default_rng(seed)
    centroids = np.linalg.qr(rng.normal(size=(dim, n_blocks)))[0].T
    src = np.repeat(centroids, block_size, axis=0)
    src = src + src_noise * unit_rows(rng, n_blocks * block_size, dim)
    src /= np.linalg.norm(src, axis=1, keepdims=True)

    for _ in range(2000):
        sel = rng.permutation(n_blocks)[:n_selected]
        if any(int(b) + 1 == int(a) for b, a in zip(sel, sel[1:])):
            continue
        if separation_rows is not None and _diagonal_continuations(
            sel, block_size, separation_rows
        ):
            continue
        break
    else:
        raise AssertionError("no admissible block shuffle found")
    tgt_src_rows = np.concatenate([np.arange(b * block_size, (b + 1) * block_size) for b in sel])
    tgt = src[tgt_src_rows] + tgt_noise * unit_rows(rng, n_selected * block_size, dim)
    tgt /= np.linalg.norm(tgt, axis=1, keepdims=True)
    return src, tgt, [int(b) for b in sel]
