"""Strict precision/recall/F1 against a gold alignment.

A predicted bead scores only if its (source set, target set) pair is
identical to a gold bead. Index sets are compared without any contiguity
requirement so gold files produced by other tools load as-is.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import GoldParseError

BeadSets = tuple[frozenset, frozenset]


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    n_pred: int
    n_gold: int
    n_correct: int


def _as_bead_set(beads, include_null: bool) -> set[BeadSets]:
    out = set()
    for src, tgt in beads:
        s = frozenset(src)
        t = frozenset(tgt)
        if not include_null and (not s or not t):
            continue
        out.add((s, t))
    return out


def strict_prf(pred, gold, include_null: bool = True) -> PRF:
    """pred and gold are iterables of (source indices, target indices) pairs.
    include_null=False drops empty-side beads from both sides first."""
    pred_set = _as_bead_set(pred, include_null)
    gold_set = _as_bead_set(gold, include_null)
    n_correct = len(pred_set & gold_set)
    precision = n_correct / len(pred_set) if pred_set else 0.0
    recall = n_correct / len(gold_set) if gold_set else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return PRF(
        precision=precision,
        recall=recall,
        f1=f1,
        n_pred=len(pred_set),
        n_gold=len(gold_set),
        n_correct=n_correct,
    )


def _parse_index_field(text: str, line_no: int) -> frozenset:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        indices = [int(part) for part in text.split(",")]
    except ValueError:
        raise GoldParseError(line_no, f"bad index list {text!r}") from None
    if any(i < 0 for i in indices):
        raise GoldParseError(line_no, f"negative index in {text!r}")
    return frozenset(indices)


def _parse_bracket_field(text: str, line_no: int) -> frozenset:
    try:
        values = json.loads(text)
    except json.JSONDecodeError:
        raise GoldParseError(line_no, f"bad bracketed list {text!r}") from None
    if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
        raise GoldParseError(line_no, f"expected a list of integers, got {text!r}")
    if any(v < 0 for v in values):
        raise GoldParseError(line_no, f"negative index in {text!r}")
    return frozenset(values)


def load_alignment_file(path: str, fmt: str = "tsv") -> set[BeadSets]:
    """Read beads from an alignment file in either output format. The third
    TSV column (cost) is ignored when present."""
    beads = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip():
                continue
            if fmt == "tsv":
                fields = stripped.split("\t")
                if len(fields) < 2:
                    raise GoldParseError(line_no, "expected at least two tab-separated fields")
                src = _parse_index_field(fields[0], line_no)
                tgt = _parse_index_field(fields[1], line_no)
            elif fmt == "bertalign":
                left, sep, right = stripped.partition(":")
                if not sep:
                    raise GoldParseError(line_no, "expected [src]:[tgt]")
                src = _parse_bracket_field(left.strip(), line_no)
                tgt = _parse_bracket_field(right.strip(), line_no)
            else:
                raise GoldParseError(line_no, f"unknown alignment format {fmt!r}")
            if not src and not tgt:
                raise GoldParseError(line_no, "bead empty on both sides")
            beads.add((src, tgt))
    return beads


def load_gold(path: str, fmt: str = "tsv") -> set[BeadSets]:
    return load_alignment_file(path, fmt)
