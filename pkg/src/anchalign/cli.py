"""Command-line front end: `anchalign align` and `anchalign score`.

Exit codes: 0 success, 1 pipeline error (diagnostic on stderr), 2 usage
error. Config values resolve as defaults < --config file < flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from .config import AlignConfig, parse_config_file, resolve_config
from .dp import align_documents
from .embeddings import load_sentences, read_embeddings
from .errors import AlignerError
from .scoring import load_alignment_file, strict_prf


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anchalign",
        description="Anchor-guided bitext sentence aligner over precomputed embeddings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    al = sub.add_parser("align", help="align a source/target document pair")
    io = al.add_argument_group("inputs and outputs")
    io.add_argument("--src-text", help="source document, one sentence per line (UTF-8)")
    io.add_argument("--tgt-text", help="target document, one sentence per line (UTF-8)")
    io.add_argument("--src-emb", help="source embedding matrix file")
    io.add_argument("--tgt-emb", help="target embedding matrix file")
    io.add_argument("--emb-format", choices=["binary", "tsv"], help="embedding file format (default binary)")
    io.add_argument("--out", help="write the alignment here instead of stdout")
    io.add_argument("--format", choices=["tsv", "bertalign", "text"], help="output format (default tsv)")
    io.add_argument("--text-delimiter", help="separator between sides for --format text (default ' ||| ')")
    io.add_argument("--dump-anchors", metavar="PATH", help="also write the anchor points as TSV")
    io.add_argument("--dump-intervals", metavar="PATH", help="also write the detected intervals as TSV")
    io.add_argument("--config", metavar="PATH", help="key=value config file")
    io.add_argument("--print-config", action="store_true", help="print the resolved config and exit")
    io.add_argument("--timings", action=argparse.BooleanOptionalAction, default=None,
                    help="print per-stage wall-clock milliseconds to stderr")
    io.add_argument("--threads", type=int, help="max concurrent interval solves (default 1)")

    anchor = al.add_argument_group("anchor extraction")
    anchor.add_argument("--k", type=int, help="k-best width per row/column (default 3)")
    anchor.add_argument("--margin-threshold", type=float, help="min gap between top-2 cosines (default 0.05)")
    anchor.add_argument("--cos-threshold", type=float, help="min cosine for a candidate (default 0.4)")
    anchor.add_argument("--delta-x", type=float, help="density zone length (default 20)")
    anchor.add_argument("--delta-y", type=float, help="density zone height (default 3)")
    anchor.add_argument("--min-density-ratio", type=float, help="local/average density cutoff (default 0.3)")

    iv = al.add_argument_group("interval detection")
    iv.add_argument("--detect-intervals", action=argparse.BooleanOptionalAction, default=None,
                    help="segment the documents into alignable intervals (default off)")
    iv.add_argument("--adaptive", action=argparse.BooleanOptionalAction, default=None,
                    help="re-estimate ratios from detected intervals and rerun (implies --detect-intervals)")
    iv.add_argument("--deviation-ignore-threshold", type=float,
                    help="drop low-density points deviating more than this (default 10)")
    iv.add_argument("--max-dist-to-the-diagonal", type=float,
                    help="max deviation to stay in the current interval (default 20)")
    iv.add_argument("--max-gap-size", type=float, help="gap that forces a new interval (default 100)")
    iv.add_argument("--min-horizontal-density", type=float,
                    help="min anchors per source sentence in an interval (default 0.15)")

    cost = al.add_argument_group("cost model")
    cost.add_argument("--c", type=float, help="neighbour similarity coefficient (default 0.6)")
    cost.add_argument("--p", type=float, help="group size penalty (default 0.06)")
    cost.add_argument("--w", type=float, help="length distance weight (default 0.33)")
    cost.add_argument("--max-group-size", type=int, help="max sentences per group (default 4)")
    cost.add_argument("--allow22", action=argparse.BooleanOptionalAction, default=None,
                      help="permit 2-2 beads (default off)")
    cost.add_argument("--allow-empty", action=argparse.BooleanOptionalAction, default=None,
                      help="permit 1-0/0-1 beads (default on)")
    cost.add_argument("--empty-bead-cost", type=float, help="flat cost of a 1-0/0-1 bead (default 1.0)")
    cost.add_argument("--local-diag-beam", type=float,
                      help="max anchor deviation from the running diagonal during DP (default 20)")
    cost.add_argument("--length-slope", type=float, help="slope of the length distance (default 1.0)")
    cost.add_argument("--sent-ratio", type=float, help="pin the target/source sentence count ratio")
    cost.add_argument("--char-ratio", type=float, help="pin the target/source character count ratio")

    sc = sub.add_parser("score", help="strict precision/recall/F1 of a prediction against gold")
    sc.add_argument("--pred", required=True, help="predicted alignment file")
    sc.add_argument("--gold", required=True, help="gold alignment file")
    sc.add_argument("--format", choices=["tsv", "bertalign"], default="tsv",
                    help="format of both files (default tsv)")
    sc.add_argument("--exclude-null", action="store_true",
                    help="drop 1-0/0-1 beads from both sides before counting")
    return parser


def format_alignment(beads, fmt: str, src_doc, tgt_doc, delimiter: str) -> list[str]:
    lines = []
    for b in beads:
        if fmt == "tsv":
            src = ",".join(str(i) for i in b.src_indices)
            tgt = ",".join(str(i) for i in b.tgt_indices)
            lines.append(f"{src}\t{tgt}\t{b.cost:.6f}")
        elif fmt == "bertalign":
            lines.append(f"{b.src_indices}:{b.tgt_indices}")
        else:
            src = " ".join(src_doc.sentences[i] for i in b.src_indices)
            tgt = " ".join(tgt_doc.sentences[i] for i in b.tgt_indices)
            lines.append(f"{src}{delimiter}{tgt}")
    return lines


def _write_lines(path, lines) -> None:
    text = "".join(line + "\n" for line in lines)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _anchor_dump(anchors) -> list[str]:
    lines = ["x\ty\tsim\tdensity_ratio"]
    lines += [f"{a.x}\t{a.y}\t{a.sim:.6f}\t{a.density_ratio:.6f}" for a in anchors]
    return lines


def _interval_dump(intervals) -> list[str]:
    lines = ["x_start\tx_end\ty_start\ty_end\tn_anchors\thorizontal_density"]
    lines += [
        f"{iv.x_start}\t{iv.x_end}\t{iv.y_start}\t{iv.y_end}"
        f"\t{len(iv.anchors)}\t{iv.horizontal_density:.6f}"
        for iv in intervals
    ]
    return lines


def _run_align(args, parser) -> int:
    file_overrides = parse_config_file(args.config) if args.config else None
    cli_overrides = {}
    for f in dataclasses.fields(AlignConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            cli_overrides[f.name] = value
    cfg = resolve_config(file_overrides, cli_overrides)

    if args.print_config:
        print("\n".join(cfg.echo_lines()))
        return 0

    missing = [
        flag
        for flag, value in (
            ("--src-text", cfg.src_text),
            ("--tgt-text", cfg.tgt_text),
            ("--src-emb", cfg.src_emb),
            ("--tgt-emb", cfg.tgt_emb),
        )
        if not value
    ]
    if missing:
        parser.error("missing required inputs: " + ", ".join(missing))

    t0 = time.perf_counter()
    src_doc = load_sentences(cfg.src_text)
    tgt_doc = load_sentences(cfg.tgt_text)
    src_emb = read_embeddings(cfg.src_emb, cfg.emb_format)
    tgt_emb = read_embeddings(cfg.tgt_emb, cfg.emb_format)
    load_seconds = time.perf_counter() - t0

    result = align_documents(src_doc, tgt_doc, src_emb, tgt_emb, cfg)

    _write_lines(cfg.out, format_alignment(result.beads, cfg.format, src_doc, tgt_doc, cfg.text_delimiter))
    if cfg.dump_anchors:
        _write_lines(cfg.dump_anchors, _anchor_dump(result.anchors))
    if cfg.dump_intervals:
        _write_lines(cfg.dump_intervals, _interval_dump(result.intervals))
    if cfg.timings:
        stages = [("load", load_seconds)] + [
            (name, result.timings[name]) for name in ("similarity", "anchoring", "intervals", "dp")
        ]
        for name, seconds in stages:
            print(f"{name}\t{seconds * 1000.0:.1f} ms", file=sys.stderr)
    return 0


def _run_score(args) -> int:
    pred = load_alignment_file(args.pred, args.format)
    gold = load_alignment_file(args.gold, args.format)
    prf = strict_prf(pred, gold, include_null=not args.exclude_null)
    print(f"{prf.precision * 100:.1f}\t{prf.recall * 100:.1f}\t{prf.f1 * 100:.1f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "align":
            return _run_align(args, parser)
        return _run_score(args)
    except AlignerError as exc:
        print(f"anchalign: error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"anchalign: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
