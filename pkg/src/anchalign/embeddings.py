"""Sentence files and embedding matrices.

The binary matrix format is deliberately minimal: a 16-byte header
(magic ``AEMB``, format version, row count, dimension, all little-endian
uint32) followed by the rows as IEEE-754 float32, row-major. A TSV
alternative exists for debugging and for producers that cannot emit binary.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyMatrixError,
    MalformedHeaderError,
    MatrixFormatError,
    NonFiniteValueError,
    RowLengthMismatchError,
    TruncatedDataError,
    ZeroRowError,
)

MAGIC = b"AEMB"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


def write_matrix(path: str, matrix: np.ndarray) -> None:
    m = np.ascontiguousarray(matrix, dtype=np.float32)
    if m.ndim != 2:
        raise MatrixFormatError(f"expected a 2-d matrix, got {m.ndim}-d")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, m.shape[0], m.shape[1]))
        fh.write(m.tobytes())


def read_matrix(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise MalformedHeaderError(f"{path}: file shorter than the 16-byte header")
        magic, version, rows, dim = _HEADER.unpack(header)
        if magic != MAGIC:
            raise MalformedHeaderError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        if version != VERSION:
            raise MalformedHeaderError(f"{path}: unsupported format version {version}")
        if rows == 0 or dim == 0:
            raise EmptyMatrixError(f"{path}: declares {rows} rows x {dim} dims")
        payload = fh.read()
    expected = rows * dim * 4
    if len(payload) != expected:
        raise TruncatedDataError(
            f"{path}: expected {expected} payload bytes for {rows}x{dim}, got {len(payload)}"
        )
    matrix = np.frombuffer(payload, dtype="<f4").reshape(rows, dim).astype(np.float32)
    if not np.all(np.isfinite(matrix)):
        bad = int(np.argwhere(~np.isfinite(matrix).all(axis=1))[0][0])
        raise NonFiniteValueError(f"{path}: non-finite value in row {bad}")
    return matrix


def write_matrix_tsv(path: str, matrix: np.ndarray) -> None:
    m = np.asarray(matrix, dtype=np.float32)
    np.savetxt(path, m, fmt="%.8g", delimiter="\t")


def read_matrix_tsv(path: str) -> np.ndarray:
    rows = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            try:
                row = [float(p) for p in parts]
            except ValueError as exc:
                raise MatrixFormatError(f"{path}:{line_no}: {exc}") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise RowLengthMismatchError(
                    f"{path}:{line_no}: row has {len(row)} values, expected {width}"
                )
            rows.append(row)
    if not rows:
        raise EmptyMatrixError(f"{path}: no data rows")
    matrix = np.asarray(rows, dtype=np.float32)
    if not np.all(np.isfinite(matrix)):
        bad = int(np.argwhere(~np.isfinite(matrix).all(axis=1))[0][0])
        raise NonFiniteValueError(f"{path}: non-finite value in row {bad}")
    return matrix


def read_embeddings(path: str, fmt: str = "binary") -> np.ndarray:
    if fmt == "binary":
        return read_matrix(path)
    if fmt == "tsv":
        return read_matrix_tsv(path)
    raise MatrixFormatError(f"unknown embedding format {fmt!r}")


def l2_normalize(matrix: np.ndarray) -> np.ndarray:
    """Return a row-normalized copy; a zero row has no direction and is an error."""
    m = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(m, axis=1)
    zero = np.nonzero(norms == 0.0)[0]
    if zero.size:
        raise ZeroRowError(int(zero[0]))
    return m / norms[:, None]


def sum_rows(matrix: np.ndarray, start: int, stop: int) -> np.ndarray:
    """Component-wise sum of rows [start, stop); the group vector of a
    sentence span. Deliberately not re-normalized."""
    if not (0 <= start < stop <= matrix.shape[0]):
        raise IndexError(f"row range [{start},{stop}) outside matrix of {matrix.shape[0]} rows")
    return np.asarray(matrix[start:stop], dtype=np.float64).sum(axis=0)


def prefix_sums(matrix: np.ndarray) -> np.ndarray:
    """Prefix[i] = sum of rows [0, i); shape (n+1, d).

    Any contiguous group vector is then prefix[j] - prefix[i] in O(d),
    which is what keeps the DP cost evaluation flat per bead.
    """
    m = np.asarray(matrix, dtype=np.float64)
    out = np.zeros((m.shape[0] + 1, m.shape[1]), dtype=np.float64)
    np.cumsum(m, axis=0, out=out[1:])
    return out


@dataclass
class SentenceDoc:
    sentences: list[str]
    char_lengths: np.ndarray  # int64, Unicode scalar count per sentence

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def total_chars(self) -> int:
        return int(self.char_lengths.sum())


def load_sentences(path: str) -> SentenceDoc:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    # one sentence per line; a trailing newline does not add an empty sentence
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lengths = np.fromiter((len(s) for s in lines), dtype=np.int64, count=len(lines))
    return SentenceDoc(sentences=lines, char_lengths=lengths)


def char_prefix(doc: SentenceDoc) -> np.ndarray:
    out = np.zeros(len(doc) + 1, dtype=np.int64)
    np.cumsum(doc.char_lengths, out=out[1:])
    return out
