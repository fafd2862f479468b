"""Deterministic random unit-sphere codes for vertex labels.

A :class:`CodebookSpec` is a recipe rather than a stored matrix: the code of
any label is recomputed on demand from ``(seed, scheme_id, label)``, so the
vertex set of a sketch can grow without re-keying or remembering earlier
vertices.

Codes are drawn by hashing the label together with the seed into a 128-bit
Philox key, drawing ``dimension`` standard normals from that counter-based
stream, and normalizing.  The Gaussian is rotation invariant, so the result
is exactly uniform on the sphere.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    BadMagicError,
    DimensionMismatchError,
    DuplicateLabelError,
    InvalidSpecError,
    SketchFormatError,
    TruncatedFileError,
    UnsupportedVersionError,
)

SCHEME_PHILOX_GAUSS = 1
SUPPORTED_SCHEMES = (SCHEME_PHILOX_GAUSS,)

SPEC_MAGIC = b"GSCB"
SPEC_VERSION = 1
# magic, version u16, scheme_id u16, dimension u32, 4 reserved bytes, seed u64
_SPEC_STRUCT = struct.Struct("<4sHHI4xQ")
SPEC_RECORD_SIZE = _SPEC_STRUCT.size  # 24

_MIN_NORM = 1e-300
_UINT64_MAX = 2**64 - 1
_INT64_MIN = -(2**63)


@dataclass(frozen=True)
class CodebookSpec:
    """Recipe mapping every vertex label to a code on the unit sphere of ``R^dimension``.

    Two specs are interchangeable exactly when all three fields agree; the
    spec itself is the codebook fingerprint carried by every sketch.
    """

    seed: int
    dimension: int
    scheme_id: int = SCHEME_PHILOX_GAUSS

    def __post_init__(self):
        if isinstance(self.dimension, bool) or not isinstance(self.dimension, (int, np.integer)):
            raise InvalidSpecError(f"dimension must be an integer, got {self.dimension!r}")
        if self.dimension < 1 or self.dimension > 2**32 - 1:
            raise InvalidSpecError(f"dimension must be in [1, 2**32), got {self.dimension}")
        if not 0 <= int(self.seed) <= _UINT64_MAX:
            raise InvalidSpecError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.scheme_id not in SUPPORTED_SCHEMES:
            raise InvalidSpecError(f"unknown scheme_id {self.scheme_id}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "dimension", int(self.dimension))

    def to_bytes(self) -> bytes:
        return _SPEC_STRUCT.pack(SPEC_MAGIC, SPEC_VERSION, self.scheme_id, self.dimension, self.seed)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CodebookSpec":
        if len(data) < SPEC_RECORD_SIZE:
            raise TruncatedFileError(f"codebook record needs {SPEC_RECORD_SIZE} bytes, got {len(data)}")
        raw = bytes(data[:SPEC_RECORD_SIZE])
        magic, version, scheme_id, dimension, seed = _SPEC_STRUCT.unpack(raw)
        if magic != SPEC_MAGIC:
            raise BadMagicError(f"bad codebook magic {magic!r}")
        if version != SPEC_VERSION:
            raise UnsupportedVersionError(f"codebook record version {version}")
        if raw[12:16] != b"\x00\x00\x00\x00":
            raise SketchFormatError("codebook record has nonzero reserved bytes")
        try:
            return cls(seed=seed, dimension=dimension, scheme_id=scheme_id)
        except InvalidSpecError as exc:
            raise UnsupportedVersionError(str(exc)) from exc

    def with_seed(self, seed: int) -> "CodebookSpec":
        return CodebookSpec(seed=seed, dimension=self.dimension, scheme_id=self.scheme_id)


def canonical_label(label) -> bytes:
    """Byte string hashed for ``label``.

    Integers hash as their decimal text, so the integer ``7`` and the token
    ``"7"`` read from an edge-list file name the same vertex.
    """
    if isinstance(label, str):
        return label.encode("utf-8")
    if isinstance(label, (int, np.integer)) and not isinstance(label, (bool, np.bool_)):
        value = int(label)
        if not _INT64_MIN <= value <= _UINT64_MAX:
            raise TypeError(f"integer label {value} does not fit in 64 bits")
        return str(value).encode("ascii")
    raise TypeError(f"vertex labels must be str or int, got {type(label).__name__}")


def _philox_key(spec: CodebookSpec, label_bytes: bytes) -> np.ndarray:
    h = hashlib.blake2b(digest_size=16, person=b"graphsketch-v1")
    h.update(struct.pack("<QH", spec.seed, spec.scheme_id))
    h.update(label_bytes)
    return np.frombuffer(h.digest(), dtype="<u8")


def _restart(bitgen: np.random.Philox, key: np.ndarray) -> None:
    # equivalent to Philox(key=key) without the cost of a fresh instance
    bitgen.state = {
        "bit_generator": "Philox",
        "state": {"counter": np.zeros(4, dtype=np.uint64), "key": key},
        "buffer": np.zeros(4, dtype=np.uint64),
        "buffer_pos": 4,
        "has_uint32": 0,
        "uinteger": 0,
    }


def _draw_rows(spec: CodebookSpec, keys: Sequence[bytes], out: np.ndarray) -> None:
    """Fill row ``i`` of ``out`` with the unit code of ``keys[i]``."""
    bitgen = np.random.Philox(0)
    gen = np.random.Generator(bitgen)
    for row, key in zip(out, keys):
        _restart(bitgen, _philox_key(spec, key))
        gen.standard_normal(out=row)
    norms = np.sqrt(np.einsum("ij,ij->i", out, out))
    for i in np.flatnonzero(norms < _MIN_NORM):
        # replay the rejected draw, then keep drawing from the same stream
        _restart(bitgen, _philox_key(spec, keys[i]))
        gen.standard_normal(out=out[i])
        while norms[i] < _MIN_NORM:
            gen.standard_normal(out=out[i])
            norms[i] = np.sqrt(np.einsum("i,i->", out[i], out[i]))
    out /= norms[:, None]


def derive_code(spec: CodebookSpec, label) -> np.ndarray:
    """Return the unit-norm code of ``label`` under ``spec`` as a length-``d`` vector."""
    out = np.empty((1, spec.dimension))
    _draw_rows(spec, [canonical_label(label)], out)
    return out[0]


def code_matrix(spec: CodebookSpec, labels: Sequence) -> np.ndarray:
    """Stack the codes of ``labels`` as columns of a ``d x len(labels)`` matrix.

    Raises:
        DuplicateLabelError: if two labels canonicalize to the same vertex.
    """
    keys = [canonical_label(label) for label in labels]
    if len(set(keys)) != len(keys):
        seen = set()
        for label, key in zip(labels, keys):
            if key in seen:
                raise DuplicateLabelError(f"duplicate label {label!r}")
            seen.add(key)
    # rows are contiguous codes; the transpose is the column layout
    out = np.empty((len(keys), spec.dimension))
    _draw_rows(spec, keys, out)
    return out.T


def codes_for(spec: CodebookSpec, labels: Iterable) -> np.ndarray:
    """Like :func:`code_matrix` but tolerates repeats, deriving each distinct label once."""
    labels = list(labels)
    index = {}
    positions = []
    for label in labels:
        key = canonical_label(label)
        positions.append(index.setdefault(key, len(index)))
    unique = np.empty((len(index), spec.dimension))
    _draw_rows(spec, list(index), unique)
    return unique[positions].T


def dot(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatchError(f"cannot dot codes of shapes {a.shape} and {b.shape}")
    return float(a @ b)
