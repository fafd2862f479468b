"""Sketch files, SNAP-style edge lists, label sets and report serialization.

Sketch file layout (little-endian)::

    offset  size   field
    0       4      magic "GSKT"
    4       2      format version (u16)
    6       24     codebook record (magic "GSCB", version, scheme, d, seed)
    30      8      edge count (i64; INT64_MIN marks a derived sketch)
    38      4      d (u32), must equal the codebook dimension
    42      8*d*d  matrix, row-major float64
    ...     4      CRC-32 of every preceding byte
"""

from __future__ import annotations

import csv
import io
import json
import os
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

from .baseline import ExactGraph
from .codebook import SPEC_RECORD_SIZE, CodebookSpec
from .exceptions import (
    BadMagicError,
    ChecksumError,
    EdgeListParseError,
    SketchFormatError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from .sketch import Sketch

PathOrFile = Union[str, os.PathLike, IO]

SKETCH_MAGIC = b"GSKT"
SKETCH_VERSION = 1
_PREFIX = struct.Struct("<4sH")
_TAIL = struct.Struct("<qI")
HEADER_SIZE = _PREFIX.size + SPEC_RECORD_SIZE + _TAIL.size  # 42
CHECKSUM_SIZE = 4
_DERIVED = -(2**63)


def sketch_file_size(d: int) -> int:
    return HEADER_SIZE + 8 * d * d + CHECKSUM_SIZE


def _open(target: PathOrFile, mode: str):
    if hasattr(target, "read") or hasattr(target, "write"):
        return _Borrowed(target)
    return open(target, mode)


class _Borrowed:
    """Context manager that leaves a caller-owned stream open."""

    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc):
        return False


def sketch_to_bytes(s: Sketch) -> bytes:
    d = s.dimension
    count = _DERIVED if s.edge_count is None else s.edge_count
    body = b"".join((
        _PREFIX.pack(SKETCH_MAGIC, SKETCH_VERSION),
        s.spec.to_bytes(),
        _TAIL.pack(count, d),
        np.ascontiguousarray(s.matrix, dtype="<f8").tobytes(),
    ))
    return body + struct.pack("<I", zlib.crc32(body))


def sketch_from_bytes(data: bytes) -> Sketch:
    if len(data) < _PREFIX.size:
        raise TruncatedFileError("sketch file is shorter than its magic and version")
    magic, version = _PREFIX.unpack_from(data, 0)
    if magic != SKETCH_MAGIC:
        raise BadMagicError(f"bad sketch magic {magic!r}")
    if version != SKETCH_VERSION:
        raise UnsupportedVersionError(f"sketch format version {version} is not supported")
    if len(data) < HEADER_SIZE:
        raise TruncatedFileError("sketch header is truncated")
    spec = CodebookSpec.from_bytes(data[_PREFIX.size:_PREFIX.size + SPEC_RECORD_SIZE])
    count, d = _TAIL.unpack_from(data, _PREFIX.size + SPEC_RECORD_SIZE)
    if d != spec.dimension:
        raise SketchFormatError(f"header dimension {d} disagrees with codebook dimension {spec.dimension}")
    expected = sketch_file_size(d)
    if len(data) < expected:
        raise TruncatedFileError(f"sketch file has {len(data)} bytes, expected {expected}")
    if len(data) > expected:
        raise SketchFormatError(f"{len(data) - expected} trailing bytes after checksum")
    (stored,) = struct.unpack_from("<I", data, expected - CHECKSUM_SIZE)
    if zlib.crc32(data[:expected - CHECKSUM_SIZE]) != stored:
        raise ChecksumError("sketch checksum mismatch")
    matrix = np.frombuffer(data, dtype="<f8", count=d * d, offset=HEADER_SIZE).reshape(d, d)
    return Sketch(spec, matrix, None if count == _DERIVED else count)


def save_sketch(s: Sketch, destination: PathOrFile) -> None:
    with _open(destination, "wb") as fh:
        fh.write(sketch_to_bytes(s))


def load_sketch(source: PathOrFile) -> Sketch:
    with _open(source, "rb") as fh:
        return sketch_from_bytes(fh.read())


# --------------------------------------------------------------------------
# edge lists and label sets


@dataclass
class EdgeListDocument:
    comments: list[str] = field(default_factory=list)
    edges: list[tuple[str, str]] = field(default_factory=list)

    def to_graph(self, keep_duplicates: bool = False) -> ExactGraph:
        return ExactGraph(self.edges, multigraph=keep_duplicates)


def _read_text(source) -> str:
    if isinstance(source, str) and ("\n" in source or source == ""):
        return source
    with _open(source, "r") as fh:
        text = fh.read()
    return text.decode("utf-8") if isinstance(text, bytes) else text


def _tokens(text: str, expected: int, what: str):
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            yield number, None, stripped[1:].strip()
            continue
        parts = stripped.split()
        if len(parts) != expected:
            raise EdgeListParseError(f"expected {expected} token(s) for {what}, found {len(parts)}", number)
        yield number, parts, None


def parse_edge_list(text: str) -> EdgeListDocument:
    doc = EdgeListDocument()
    for _n, parts, comment in _tokens(text, 2, "an edge"):
        if parts is None:
            doc.comments.append(comment)
        else:
            doc.edges.append((parts[0], parts[1]))
    return doc


def read_edge_list(source, keep_duplicates: bool = False) -> ExactGraph:
    """Read a whitespace-separated ``source target`` edge list; ``#`` lines are comments.

    ``source`` is a path, a text stream, or the file contents themselves (any
    string containing a newline).  Vertex labels stay as string tokens.
    Duplicate edges are dropped and counted in ``graph.n_duplicates`` unless
    ``keep_duplicates`` is set.
    """
    return parse_edge_list(_read_text(source)).to_graph(keep_duplicates)


def write_edge_list(graph: ExactGraph | Iterable, destination: PathOrFile, comments: Iterable[str] = ()) -> None:
    edges = graph.edges if isinstance(graph, ExactGraph) else list(graph)
    with _open(destination, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        for s, t in edges:
            fh.write(f"{s}\t{t}\n")


def read_label_set(source) -> list[str]:
    """One label per line, ``#`` comments; repeated labels are kept once, in first-seen order."""
    labels = {}
    for _n, parts, _comment in _tokens(_read_text(source), 1, "a label"):
        if parts is not None:
            labels.setdefault(parts[0], None)
    return list(labels)


# --------------------------------------------------------------------------
# reports


def write_report(report, destination: PathOrFile, format: str = "json") -> None:
    """Serialize an :class:`~graphsketch.harness.ExperimentReport`.

    ``json`` writes the whole report; ``csv`` writes the raw per-trial
    samples in long form (``series, trial, value``) for external plotting.
    """
    if format == "json":
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True)
        with _open(destination, "w") as fh:
            fh.write(text + "\n")
    elif format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["series", "trial", "value"])
        for name, values in sorted(report.samples.items()):
            for trial, value in enumerate(values):
                writer.writerow([name, trial, repr(float(value))])
        with _open(destination, "w") as fh:
            fh.write(buf.getvalue())
    else:
        raise ValueError(f"unknown report format {format!r}")


def read_report(source: PathOrFile):
    from .harness.report import ExperimentReport

    with _open(source, "r") as fh:
        return ExperimentReport.from_dict(json.load(fh))


def ensure_parent(path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path
