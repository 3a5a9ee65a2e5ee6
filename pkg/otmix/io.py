"""
Text formats read and written by otmix.

All formats are UTF-8 with LF line endings and use 1-based indices. Reals are
written with 17 significant digits, so a write/read round trip is exact.
"""
import json
import re
from io import StringIO
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from .constants import FLOAT_FORMAT, ORIGIN_CODES
from .errors import DimensionMismatch, FormatError
from .types import Alignment, EmbeddingSequence, MixupSequence

PathT = Union[str, Path]
SEQUENCE_HEADER = re.compile(r"n(?:\s+|\s*=\s*)(\d+)\s+d(?:\s+|\s*=\s*)(\d+)")
ALIGNMENT_HEADER = re.compile(r"n(?:\s+|\s*=\s*)(\d+)")
ORIGIN_FLAGS = {v: k for k, v in ORIGIN_CODES.items()}


#
# Plain text helpers
#
def read_lines(path: PathT) -> list:
    """
    Read lines from a text file, without line terminators.
    """
    try:
        with open(path, encoding="utf-8") as fd:
            lines = fd.read().split("\n")
    except UnicodeDecodeError as ex:
        raise FormatError(f"not valid UTF-8 ({ex.reason})", path)
    if lines[-1] == "":
        lines.pop()
    return lines


def write_text(text: str, path: PathT) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fd:
        fd.write(text)


def format_real(x: float) -> str:
    return FLOAT_FORMAT % x


def parse_real(token: str, path, line) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"invalid real number {token!r}", path, line)
    if not np.isfinite(value):
        raise FormatError(f"non-finite value {token!r}", path, line)
    return value


def parse_int(token: str, path, line) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"invalid integer {token!r}", path, line)


def _header(lines, regex, what, path) -> Tuple[int, ...]:
    if not lines:
        raise FormatError(f"empty {what} file", path, 1)
    m = regex.fullmatch(lines[0].strip())
    if m is None:
        raise FormatError(f"invalid {what} header {lines[0]!r}", path, 1)
    values = tuple(map(int, m.groups()))
    if min(values) < 1:
        raise FormatError(f"{what} sizes must be positive, got {lines[0]!r}", path, 1)
    return values


def _body(lines, n, path):
    body = lines[1:]
    if len(body) > n:
        raise FormatError(f"expected {n} rows, found extra data", path, n + 2)
    if len(body) < n:
        raise FormatError(f"expected {n} rows, got {len(body)}", path, len(lines) + 1)
    return enumerate(body, 2)


#
# Embedding sequences
#
def _parse_rows(lines, path, extra=0):
    n, d = _header(lines, SEQUENCE_HEADER, "sequence", path)
    rows = np.empty((n, d))
    tails = []
    for lineno, line in _body(lines, n, path):
        fields = line.split("\t")
        if len(fields) != d + extra:
            raise DimensionMismatch(
                f"{path}:{lineno}: expected {d} values, got {len(fields) - extra}"
            )
        rows[lineno - 2] = [parse_real(x, path, lineno) for x in fields[:d]]
        tails.append(fields[d:])
    return rows, tails


def format_sequence(seq: EmbeddingSequence) -> str:
    lines = [f"n {seq.length} d {seq.dim}"]
    lines.extend("\t".join(map(format_real, row)) for row in seq.vectors)
    return "\n".join(lines) + "\n"


def read_sequence(path: PathT) -> EmbeddingSequence:
    """
    Read an embedding sequence from a TSV file.

    The first line is ``n <int> d <int>`` (``n=<int> d=<int>`` is also
    accepted), followed by n lines of d tab-separated reals.
    """
    rows, _ = _parse_rows(read_lines(path), path)
    return EmbeddingSequence(rows)


def write_sequence(seq: EmbeddingSequence, path: PathT) -> None:
    """
    Write sequence in the embedding TSV format.
    """
    write_text(format_sequence(seq), path)


#
# Mixup sequences
#
def format_mixup(seq: MixupSequence) -> str:
    lines = [f"n {seq.length} d {seq.dim}"]
    for row, code in zip(seq.vectors, seq.origin):
        lines.append("\t".join([*map(format_real, row), code]))
    return "\n".join(lines) + "\n"


def read_mixup(path: PathT) -> MixupSequence:
    """
    Read a mixup sequence: the embedding TSV with a trailing S/T origin column.
    """
    rows, tails = _parse_rows(read_lines(path), path, extra=1)
    flags = []
    for lineno, (code,) in enumerate(tails, 2):
        try:
            flags.append(ORIGIN_FLAGS[code])
        except KeyError:
            raise FormatError(f"origin must be S or T, got {code!r}", path, lineno)
    return MixupSequence(rows, flags)


def write_mixup(seq: MixupSequence, path: PathT) -> None:
    write_text(format_mixup(seq), path)


#
# Alignments
#
def format_alignment(align: Alignment) -> str:
    lines = [f"n {len(align)}"]
    lines.extend(f"{i}\t{a}" for i, a in enumerate(align, 1))
    return "\n".join(lines) + "\n"


def read_alignment(path: PathT) -> Alignment:
    """
    Read alignment TSV: header ``n <int>``, then n lines ``i<TAB>a_i``.
    """
    lines = read_lines(path)
    (n,) = _header(lines, ALIGNMENT_HEADER, "alignment", path)
    targets = []
    for lineno, line in _body(lines, n, path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(f"expected 2 fields, got {len(fields)}", path, lineno)
        i, a = (parse_int(x, path, lineno) for x in fields)
        if i != lineno - 1:
            raise FormatError(f"expected position {lineno - 1}, got {i}", path, lineno)
        if a < 1:
            raise FormatError(f"targets are 1-based, got {a}", path, lineno)
        targets.append(a)
    return Alignment(targets)


def write_alignment(align: Alignment, path: PathT) -> None:
    write_text(format_alignment(align), path)


#
# Tables and JSON
#
def format_frame(df: pd.DataFrame, index=True) -> str:
    buf = StringIO()
    df.to_csv(buf, index=index, float_format=FLOAT_FORMAT)
    return buf.getvalue()


def format_matrix(obj) -> str:
    """
    Row-major CSV of a matrix-like object (cost matrix or transport plan) with
    header ``i\\j,1,2,...``.
    """
    return format_frame(obj.to_frame())


def write_matrix(obj, path: PathT) -> None:
    write_text(format_matrix(obj), path)


def format_json(data: dict) -> str:
    return json.dumps(data) + "\n"


def write_json(data: dict, path: PathT) -> None:
    write_text(format_json(data), path)
