"""Bead cost components and the composed evaluator."""

import math

import numpy as np
import pytest

from anchalign.costs import (
    BeadEvaluator,
    clamp01,
    cos01,
    d_embed,
    d_embed_double_prime,
    d_embed_prime,
    d_length,
    legal_shape,
    neighbour_sim,
    shape_table,
)
from anchalign.errors import IllegalShapeError, ZeroLengthError
from conftest import make_evaluator, unit_rows


def test_clamp01():
    assert clamp01(-0.5) == 0.0
    assert clamp01(0.0) == 0.0
    assert clamp01(0.7) == 0.7
    assert clamp01(1.0) == 1.0
    assert clamp01(3.2) == 1.0


def test_cos01_clamps_and_handles_zero_vectors():
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    assert cos01(e1, e1) == pytest.approx(1.0)
    assert cos01(e1, e2) == pytest.approx(0.0)
    assert cos01(e1, -e1) == 0.0  # negative cosine clamps to 0
    assert cos01(e1, np.zeros(2)) == 0.0
    assert cos01(3.0 * e1, 0.5 * e1) == pytest.approx(1.0)  # scale-invariant


def test_d_embed_extremes():
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    assert d_embed(e1, e1) == pytest.approx(0.0)
    assert d_embed(e1, e2) == pytest.approx(1.0)
    assert d_embed(e1, -e1) == pytest.approx(1.0)


def test_neighbour_sim_fixed_denominator():
    g = np.array([1.0, 0.0])
    # cosines 0.8 and 0.4 against the target group; target-side neighbours
    # missing: (0.8 + 0.4 + 0 + 0) / 4 = 0.3
    prec = np.array([0.8, 0.6])
    succ = np.array([0.4, math.sqrt(1 - 0.16)])
    got = neighbour_sim(g, g, prec, succ, None, None)
    assert got == pytest.approx(0.3, abs=1e-9)
    assert neighbour_sim(g, g, None, None, None, None) == 0.0
    # all four present and identical to the groups: 4 * 1.0 / 4
    assert neighbour_sim(g, g, g, g, g, g) == pytest.approx(1.0)


def test_d_embed_prime_composition():
    rng = np.random.default_rng(1)
    g_src, g_tgt, ps, ss, pt, st = (unit_rows(rng, 1, 6)[0] for _ in range(6))
    base = d_embed(g_src, g_tgt)
    nsim = neighbour_sim(g_src, g_tgt, ps, ss, pt, st)
    for c in (0.0, 0.6, 1.0):
        got = d_embed_prime(g_src, g_tgt, ps, ss, pt, st, c)
        assert got == pytest.approx(base + c * nsim, abs=1e-12)
    got = d_embed_double_prime(g_src, g_tgt, ps, ss, pt, st, 0.6, 0.06, 2, 3)
    assert got == pytest.approx(base + 0.6 * nsim + 0.06 * 5, abs=1e-12)


def test_d_length_values():
    assert d_length(120, 120, 1.0) == pytest.approx(0.0, abs=1e-12)
    assert d_length(60, 120, 2.0) == pytest.approx(0.0, abs=1e-12)  # ratio-normalized
    # 100 vs 300 at charRatio 2: 1 - log2(1 + 100/150)
    assert d_length(100, 300, 2.0) == pytest.approx(1.0 - math.log2(5 / 3), abs=1e-12)
    assert d_length(100, 300, 2.0) == pytest.approx(0.2630344058337938, abs=1e-9)
    # symmetric in the normalized lengths
    assert d_length(150, 100, 1.0) == pytest.approx(d_length(100, 150, 1.0), abs=1e-12)
    # extreme mismatch approaches 1
    assert d_length(1, 10**9, 1.0) == pytest.approx(1.0, abs=1e-6)
    # slope scales the distance
    assert d_length(100, 300, 2.0, length_slope=0.5) == pytest.approx(
        1.0 - 0.5 * math.log2(5 / 3), abs=1e-12
    )


def test_d_length_rejects_zero_lengths():
    with pytest.raises(ZeroLengthError):
        d_length(0, 10, 1.0)
    with pytest.raises(ZeroLengthError):
        d_length(10, 0, 1.0)


def test_legal_shapes_default_catalogue():
    legal = {(m, n) for m in range(6) for n in range(6) if legal_shape(m, n, 4, False, True)}
    assert legal == {
        (1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (1, 0), (0, 1),
    }
    assert not legal_shape(0, 0, 4, False, True)
    assert not legal_shape(2, 2, 4, False, True)
    assert legal_shape(2, 2, 4, True, True)
    assert not legal_shape(1, 0, 4, False, False)
    assert not legal_shape(1, 5, 4, False, True)
    assert legal_shape(1, 2, 2, False, False)
    assert not legal_shape(3, 1, 2, False, False)


def test_shape_table_rank_order():
    table = shape_table(4, False, True)
    assert [tuple(r) for r in table] == [
        (1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (1, 0), (0, 1),
    ]
    with22 = shape_table(3, True, False)
    assert [tuple(r) for r in with22] == [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)]
    assert shape_table(1, True, False).tolist() == [[1, 1]]


def _lone_pair_evaluator(**kw):
    v = np.array([[0.6, 0.8]])
    params = dict(c=0.6, p=0.06, w=0.33, char_ratio=1.0)
    params.update(kw)
    return BeadEvaluator(v, v, np.array([10]), np.array([10]), **params)


def test_perfect_isolated_1_1_bead_cost():
    # identical vectors, equal lengths, no neighbours:
    # d = (1-w) * (0 + 0 + p*2) + w * 0 = 0.67 * 0.12, scaled by 2 sentences
    ev = _lone_pair_evaluator()
    assert ev.cost(0, 1, 0, 1) == pytest.approx(0.1608, abs=1e-9)


def test_empty_bead_flat_cost():
    ev = _lone_pair_evaluator()
    assert ev.cost(0, 1, 0, 0) == 1.0
    assert ev.cost(0, 0, 0, 1) == 1.0
    half = _lone_pair_evaluator(empty_bead_cost=0.5)
    assert half.cost(0, 1, 0, 0) == 0.5


def test_cost_clamps_at_size_sum():
    # orthogonal groups with perfectly matched neighbours drive the blended
    # distance past 1; the clamp caps the bead at m+n
    src = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    tgt = np.array([[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    ev = BeadEvaluator(
        src, tgt, np.array([10, 10, 10]), np.array([10, 10, 10]),
        c=1.0, p=0.2, w=0.33, char_ratio=1.0,
    )
    assert ev.cost(1, 2, 1, 2) == pytest.approx(2.0, abs=1e-12)


def test_cost_rejects_illegal_shapes():
    rng = np.random.default_rng(2)
    ev = make_evaluator(rng, 8, 8, 6)
    with pytest.raises(IllegalShapeError):
        ev.cost(0, 2, 0, 2)  # 2-2 disabled by default
    with pytest.raises(IllegalShapeError):
        ev.cost(0, 5, 0, 1)  # exceeds max group size
    with pytest.raises(IllegalShapeError):
        ev.cost(0, 0, 0, 0)
    with pytest.raises(IllegalShapeError):
        ev.cost(0, 3, 0, 2)
    strict = make_evaluator(rng, 8, 8, 6, allow_empty=False)
    with pytest.raises(IllegalShapeError):
        strict.cost(0, 1, 0, 0)
    wide = make_evaluator(rng, 8, 8, 6, allow22=True)
    assert wide.cost(0, 2, 0, 2) > 0.0


def test_cost_rejects_zero_length_groups():
    v = unit_rows(np.random.default_rng(3), 3, 4)
    ev = BeadEvaluator(v, v, np.array([5, 0, 5]), np.array([5, 5, 5]),
                       c=0.6, p=0.06, w=0.33, char_ratio=1.0)
    with pytest.raises(ZeroLengthError) as err:
        ev.cost(1, 2, 1, 2)
    assert "source group" in str(err.value)
    # a zero-length sentence inside a wider group is fine: totals count
    assert ev.cost(0, 3, 0, 1) > 0.0


def test_cost_composes_the_documented_formula():
    rng = np.random.default_rng(4)
    n = 9
    src = unit_rows(rng, n, 12)
    tgt = unit_rows(rng, n, 12)
    src_len = rng.integers(1, 40, size=n)
    tgt_len = rng.integers(1, 40, size=n)
    ev = BeadEvaluator(src, tgt, src_len, tgt_len,
                       c=0.45, p=0.08, w=0.25, char_ratio=1.3, length_slope=0.9)
    for x0, x1, y0, y1 in [(0, 1, 0, 1), (2, 4, 1, 2), (3, 4, 3, 6), (5, 9, 8, 9)]:
        g_src = src[x0:x1].sum(axis=0)
        g_tgt = tgt[y0:y1].sum(axis=0)
        d2 = d_embed_double_prime(
            g_src, g_tgt,
            src[x0 - 1] if x0 > 0 else None,
            src[x1] if x1 < n else None,
            tgt[y0 - 1] if y0 > 0 else None,
            tgt[y1] if y1 < n else None,
            0.45, 0.08, x1 - x0, y1 - y0,
        )
        dl = d_length(int(src_len[x0:x1].sum()), int(tgt_len[y0:y1].sum()), 1.3, 0.9)
        want = clamp01(0.75 * d2 + 0.25 * dl) * ((x1 - x0) + (y1 - y0))
        assert ev.cost(x0, x1, y0, y1) == pytest.approx(want, abs=1e-12)


def test_edge_beads_skip_missing_neighbours():
    # first bead of a document has no predecessors: two of the four
    # neighbour terms vanish but the denominator stays 4
    rng = np.random.default_rng(6)
    src = unit_rows(rng, 4, 8)
    tgt = unit_rows(rng, 4, 8)
    ev = BeadEvaluator(src, tgt, np.full(4, 10), np.full(4, 10),
                       c=0.6, p=0.06, w=0.0, char_ratio=1.0)
    d2 = d_embed_double_prime(src[0], tgt[0], None, src[1], None, tgt[1], 0.6, 0.06, 1, 1)
    assert ev.cost(0, 1, 0, 1) == pytest.approx(clamp01(d2) * 2, abs=1e-12)
