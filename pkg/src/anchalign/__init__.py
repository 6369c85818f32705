"""Adaptive bitext sentence alignment from precomputed sentence embeddings.

Anchor points (mutually best, margin-checked, locally dense cosine matches)
constrain a banded dynamic program that tiles each alignable region with
sentence-group beads. Embeddings come from files; nothing here is stochastic.
"""

from .anchors import AnchorPoint, CandidatePoint, similarity_matrix
from .config import AlignConfig, resolve_config
from .costs import BeadEvaluator, shape_table
from .dp import AlignmentPath, Bead, DocumentAlignment, align_documents, dp_segment
from .embeddings import (
    SentenceDoc,
    l2_normalize,
    load_sentences,
    read_matrix,
    sum_rows,
    write_matrix,
)
from .errors import AlignerError
from .intervals import AlignableInterval, RatioEstimates, estimate_ratios
from .scoring import PRF, load_alignment_file, strict_prf

__version__ = "0.1.0"

__all__ = [
    "AlignConfig",
    "AlignableInterval",
    "AlignerError",
    "AlignmentPath",
    "AnchorPoint",
    "Bead",
    "BeadEvaluator",
    "CandidatePoint",
    "DocumentAlignment",
    "PRF",
    "RatioEstimates",
    "SentenceDoc",
    "align_documents",
    "dp_segment",
    "estimate_ratios",
    "l2_normalize",
    "load_alignment_file",
    "load_sentences",
    "read_matrix",
    "resolve_config",
    "shape_table",
    "similarity_matrix",
    "strict_prf",
    "sum_rows",
    "write_matrix",
    "__version__",
]
