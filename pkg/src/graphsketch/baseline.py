"""Exact directed graphs and the three classic sparse adjacency formats.

These are the ground truth that sketches are validated against and the
opponents in the complexity benchmarks.  Query and composition follow the
textbook algorithms for each format (a linear scan for coordinate lists, a
hash lookup for dictionaries of keys, a row slice for CSR) so that timings
reflect the formats rather than an optimized library.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator

import numpy as np

from .exceptions import DimensionMismatchError, InfeasibleGraphError, MalformedMatrixError

Label = Hashable


class ExactGraph:
    """Directed graph stored as an explicit edge list.

    Vertices are indexed in order of first appearance in the edge stream
    (source before target).  Labels are compared with Python equality, so
    graphs that are combined must use the same label type.

    With ``multigraph=False`` repeated edges are dropped and counted in
    :attr:`n_duplicates`; with ``multigraph=True`` they are kept and act as
    multiplicities.
    """

    def __init__(self, edges: Iterable[tuple[Label, Label]] = (), *, multigraph: bool = False,
                 vertices: Iterable[Label] = ()):
        self.multigraph = multigraph
        self.edges: list[tuple[Label, Label]] = []
        self.vertex_index: dict[Label, int] = {}
        self.n_duplicates = 0
        self._edge_counts: Counter = Counter()
        for v in vertices:
            self._index(v)
        for source, target in edges:
            self.add_edge(source, target)

    def _index(self, label):
        idx = self.vertex_index.get(label)
        if idx is None:
            idx = self.vertex_index[label] = len(self.vertex_index)
        return idx

    def add_edge(self, source: Label, target: Label) -> bool:
        """Append ``(source, target)``; returns False if it was dropped as a duplicate."""
        edge = (source, target)
        if not self.multigraph and edge in self._edge_counts:
            self.n_duplicates += 1
            return False
        self._index(source)
        self._index(target)
        self.edges.append(edge)
        self._edge_counts[edge] += 1
        return True

    @property
    def vertices(self) -> list[Label]:
        return list(self.vertex_index)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_index)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def __len__(self):
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[Label, Label]]:
        return iter(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self._edge_counts

    def has_edge(self, source: Label, target: Label) -> bool:
        return (source, target) in self._edge_counts

    def multiplicity(self, source: Label, target: Label) -> int:
        return self._edge_counts.get((source, target), 0)

    def edge_counts(self) -> Counter:
        return Counter(self._edge_counts)

    def index_pairs(self) -> np.ndarray:
        """Edges as an ``(n_edges, 2)`` integer array of vertex indices."""
        idx = self.vertex_index
        out = np.empty((len(self.edges), 2), dtype=np.int64)
        for row, (s, t) in enumerate(self.edges):
            out[row, 0] = idx[s]
            out[row, 1] = idx[t]
        return out

    def to_coordinate_list(self) -> "CoordinateList":
        n = self.n_vertices
        idx = self.vertex_index
        triples = [(idx[s], idx[t], c) for (s, t), c in self._edge_counts.items()]
        return CoordinateList(triples, (n, n))

    def to_dense(self) -> np.ndarray:
        n = self.n_vertices
        dense = np.zeros((n, n), dtype=np.int64)
        for (s, t), c in self._edge_counts.items():
            dense[self.vertex_index[s], self.vertex_index[t]] += c
        return dense

    def __repr__(self):
        return f"ExactGraph(n_vertices={self.n_vertices}, n_edges={self.n_edges}, multigraph={self.multigraph})"


# --------------------------------------------------------------------------
# sparse formats


def _check_shape(shape):
    rows, cols = shape
    if rows < 0 or cols < 0:
        raise MalformedMatrixError(f"negative shape {shape}")
    return int(rows), int(cols)


def _check_index(shape, i, j):
    if not (0 <= i < shape[0] and 0 <= j < shape[1]):
        raise IndexError(f"index ({i}, {j}) out of range for shape {shape}")


class _SparseFormat:
    shape: tuple[int, int]

    def entries(self) -> dict[tuple[int, int], int]:
        raise NotImplementedError

    @property
    def nnz(self) -> int:
        return len(self.entries())

    def __eq__(self, other):
        if not isinstance(other, _SparseFormat):
            return NotImplemented
        return self.shape == other.shape and self.entries() == other.entries()

    __hash__ = None

    def to_coordinate_list(self) -> "CoordinateList":
        return CoordinateList(sorted((r, c, v) for (r, c), v in self.entries().items()), self.shape)

    def to_dok(self) -> "DictionaryOfKeys":
        return DictionaryOfKeys(self.entries(), self.shape)

    def to_csr(self) -> "CompressedSparseRow":
        return CompressedSparseRow.from_entries(self.entries(), self.shape)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape, dtype=np.int64)
        for (r, c), v in self.entries().items():
            dense[r, c] = v
        return dense


class CoordinateList(_SparseFormat):
    """List of ``(row, col, value)`` triples with unique positions and nonzero values."""

    def __init__(self, triples: Iterable[tuple[int, int, int]] = (), shape: tuple[int, int] = (0, 0)):
        self.shape = _check_shape(shape)
        self.triples = [(int(r), int(c), int(v)) for r, c, v in triples]
        seen = set()
        for r, c, v in self.triples:
            if v == 0:
                raise MalformedMatrixError(f"explicit zero stored at ({r}, {c})")
            if not (0 <= r < self.shape[0] and 0 <= c < self.shape[1]):
                raise MalformedMatrixError(f"triple ({r}, {c}) outside shape {self.shape}")
            if (r, c) in seen:
                raise MalformedMatrixError(f"duplicate position ({r}, {c})")
            seen.add((r, c))

    def entries(self):
        return {(r, c): v for r, c, v in self.triples}

    @property
    def nnz(self):
        return len(self.triples)

    def query(self, i: int, j: int) -> int:
        _check_index(self.shape, i, j)
        for r, c, v in self.triples:
            if r == i and c == j:
                return 1
        return 0

    def to_coordinate_list(self):
        return CoordinateList(self.triples, self.shape)

    def __repr__(self):
        return f"CoordinateList(nnz={self.nnz}, shape={self.shape})"


class DictionaryOfKeys(_SparseFormat):
    """Map from ``(row, col)`` to a nonzero value."""

    def __init__(self, data: dict[tuple[int, int], int] | None = None, shape: tuple[int, int] = (0, 0)):
        self.shape = _check_shape(shape)
        self.data: dict[tuple[int, int], int] = {}
        for (r, c), v in (data or {}).items():
            if v == 0:
                raise MalformedMatrixError(f"explicit zero stored at ({r}, {c})")
            if not (0 <= r < self.shape[0] and 0 <= c < self.shape[1]):
                raise MalformedMatrixError(f"key ({r}, {c}) outside shape {self.shape}")
            self.data[(int(r), int(c))] = int(v)

    def entries(self):
        return dict(self.data)

    def query(self, i: int, j: int) -> int:
        _check_index(self.shape, i, j)
        return 1 if (i, j) in self.data else 0

    def __repr__(self):
        return f"DictionaryOfKeys(nnz={len(self.data)}, shape={self.shape})"


class CompressedSparseRow(_SparseFormat):
    """Values, column indices and an ``n_rows + 1`` row-pointer array."""

    def __init__(self, values, indices, indptr, shape: tuple[int, int]):
        self.shape = _check_shape(shape)
        self.values = np.asarray(values, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self._validate()

    def _validate(self):
        rows, cols = self.shape
        if self.values.ndim != 1 or self.indices.ndim != 1 or self.indptr.ndim != 1:
            raise MalformedMatrixError("CSR arrays must be one-dimensional")
        if len(self.indptr) != rows + 1:
            raise MalformedMatrixError(f"row pointer has length {len(self.indptr)}, expected {rows + 1}")
        if len(self.values) != len(self.indices):
            raise MalformedMatrixError("values and column indices differ in length")
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.values):
            raise MalformedMatrixError("row pointer must start at 0 and end at nnz")
        if np.any(np.diff(self.indptr) < 0):
            raise MalformedMatrixError("row pointer is not nondecreasing")
        if len(self.indices) and (self.indices.min() < 0 or self.indices.max() >= cols):
            raise MalformedMatrixError("column index out of range")
        if np.any(self.values == 0):
            raise MalformedMatrixError("explicit zero stored")
        for r in range(rows):
            row = self.indices[self.indptr[r]:self.indptr[r + 1]]
            if np.any(np.diff(row) <= 0):
                raise MalformedMatrixError(f"column indices of row {r} are not strictly increasing")

    @classmethod
    def from_entries(cls, entries: dict[tuple[int, int], int], shape) -> "CompressedSparseRow":
        rows, _ = _check_shape(shape)
        ordered = sorted(entries.items())
        counts = np.zeros(rows + 1, dtype=np.int64)
        for (r, _c), _v in ordered:
            counts[r + 1] += 1
        indptr = np.cumsum(counts)
        indices = [c for (_r, c), _v in ordered]
        values = [v for _k, v in ordered]
        return cls(values, indices, indptr, shape)

    def entries(self):
        out = {}
        for r in range(self.shape[0]):
            for k in range(self.indptr[r], self.indptr[r + 1]):
                out[(r, int(self.indices[k]))] = int(self.values[k])
        return out

    @property
    def nnz(self):
        return len(self.values)

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def query(self, i: int, j: int) -> int:
        _check_index(self.shape, i, j)
        cols, _ = self.row(i)
        for c in cols:
            if c == j:
                return 1
        return 0

    def to_csr(self):
        return CompressedSparseRow(self.values.copy(), self.indices.copy(), self.indptr.copy(), self.shape)

    def __repr__(self):
        return f"CompressedSparseRow(nnz={self.nnz}, shape={self.shape})"


SparseMatrix = CoordinateList | DictionaryOfKeys | CompressedSparseRow

_FORMATS = {
    "cl": CoordinateList,
    "coo": CoordinateList,
    "dok": DictionaryOfKeys,
    "csr": CompressedSparseRow,
}


def convert(x: _SparseFormat, to) -> _SparseFormat:
    """Convert ``x`` to the format named by ``to`` (a class or one of ``"cl"``, ``"dok"``, ``"csr"``)."""
    target = _FORMATS[to.lower()] if isinstance(to, str) else to
    if target is CoordinateList:
        return x.to_coordinate_list()
    if target is DictionaryOfKeys:
        return x.to_dok()
    if target is CompressedSparseRow:
        return x.to_csr()
    raise TypeError(f"unknown sparse format {to!r}")


def exact_query(x: _SparseFormat | ExactGraph, i: int, j: int) -> int:
    """Membership indicator of entry ``(i, j)``."""
    if isinstance(x, ExactGraph):
        x = x.to_coordinate_list()
    return x.query(i, j)


def _rows(x: _SparseFormat) -> dict[int, list[tuple[int, int]]]:
    rows = defaultdict(list)
    if isinstance(x, CompressedSparseRow):
        for r in range(x.shape[0]):
            cols, vals = x.row(r)
            rows[r] = [(int(c), int(v)) for c, v in zip(cols, vals)]
        return rows
    for (r, c), v in x.entries().items():
        rows[r].append((c, v))
    return rows


def exact_compose(a: _SparseFormat, b: _SparseFormat, *, multiplicity: bool = False) -> CoordinateList:
    """Boolean product ``a @ b`` by edge chasing: for every ``(i, j)`` in ``a``, every ``(j, k)`` in ``b``.

    With ``multiplicity=True`` entries hold path counts (value products are
    summed) instead of being clamped to 1.
    """
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot compose shapes {a.shape} and {b.shape}")
    b_rows = _rows(b)
    acc: dict[tuple[int, int], int] = defaultdict(int)
    for (i, j), v in a.entries().items():
        for k, w in b_rows.get(j, ()):
            acc[(i, k)] += v * w
    triples = sorted((i, k, (v if multiplicity else 1)) for (i, k), v in acc.items() if v != 0)
    return CoordinateList(triples, (a.shape[0], b.shape[1]))


def compose_graphs(g: ExactGraph, h: ExactGraph | None = None) -> Counter:
    """Two-step paths of ``g`` followed by ``h`` (``g`` itself when omitted), keyed by labels.

    Values are path multiplicities, i.e. the entries of ``A_g A_h``.
    """
    h = g if h is None else h
    out_h = defaultdict(list)
    for (s, t), c in h.edge_counts().items():
        out_h[s].append((t, c))
    paths: Counter = Counter()
    for (s, t), c in g.edge_counts().items():
        for w, c2 in out_h.get(t, ()):
            paths[(s, w)] += c * c2
    return paths


def count_paths(g: ExactGraph, source: Label, target: Label, length: int) -> int:
    """Number of directed walks of exactly ``length`` edges, i.e. ``(A^length)[source, target]``."""
    out = defaultdict(list)
    for (s, t), c in g.edge_counts().items():
        out[s].append((t, c))
    frontier = {source: 1}
    for _ in range(length):
        nxt: dict = defaultdict(int)
        for v, ways in frontier.items():
            for w, c in out.get(v, ()):
                nxt[w] += ways * c
        frontier = nxt
    return frontier.get(target, 0)


def edge_intersection_count(g: ExactGraph, h: ExactGraph) -> int:
    """``tr(A_g^T A_h)`` under the union vertex indexing: the number of shared edges."""
    gc, hc = g.edge_counts(), h.edge_counts()
    if len(hc) < len(gc):
        gc, hc = hc, gc
    return sum(c * hc[e] for e, c in gc.items() if e in hc)


def symmetric_difference_count(g: ExactGraph, h: ExactGraph) -> int:
    """``||A_g - A_h||_F^2``; for simple graphs this is ``|E_g ^ E_h|``."""
    gc, hc = g.edge_counts(), h.edge_counts()
    return sum((gc.get(e, 0) - hc.get(e, 0)) ** 2 for e in set(gc) | set(hc))


def shared_vertex_pair_count(g: ExactGraph, h: ExactGraph) -> int:
    """Number of pairs in ``E_g x E_h`` whose endpoint sets meet in exactly one vertex.

    Counted with incidence degrees: ``sum_x deg_g(x) deg_h(x)`` counts each
    pair once per shared vertex, and pairs with equal endpoint sets are then
    removed.
    """
    inc_g, inc_h = Counter(), Counter()
    sets_g, sets_h = Counter(), Counter()
    for (s, t), c in g.edge_counts().items():
        ends = frozenset((s, t))
        sets_g[ends] += c
        for x in ends:
            inc_g[x] += c
    for (s, t), c in h.edge_counts().items():
        ends = frozenset((s, t))
        sets_h[ends] += c
        for x in ends:
            inc_h[x] += c
    by_vertex = sum(c * inc_h[x] for x, c in inc_g.items() if x in inc_h)
    same_set = sum(c * sets_h[s] * len(s) for s, c in sets_g.items() if s in sets_h)
    return by_vertex - same_set


@dataclass(frozen=True)
class DegreeStats:
    max_out: int
    max_in: int
    max_total: int

    def __iter__(self):
        return iter((self.max_out, self.max_in, self.max_total))


def degree_stats(g: ExactGraph) -> DegreeStats:
    out_deg, in_deg = Counter(), Counter()
    for s, t in g.edges:
        out_deg[s] += 1
        in_deg[t] += 1
    total = Counter(out_deg)
    total.update(in_deg)
    return DegreeStats(max(out_deg.values(), default=0), max(in_deg.values(), default=0),
                       max(total.values(), default=0))


# --------------------------------------------------------------------------
# generators


def _pair_from_index(index: int, n: int) -> tuple[int, int]:
    i, r = divmod(index, n - 1)
    return i, r + (r >= i)


def _erdos_renyi(n: int, k: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n < 1 or k < 0 or k > n * (n - 1):
        raise InfeasibleGraphError(f"cannot place {k} directed edges without loops on {n} vertices")
    if k == 0:
        return []
    picks = rng.choice(n * (n - 1), size=k, replace=False)
    return [_pair_from_index(int(p), n) for p in picks]


def _degree_capped(n: int, k: int, cap: int, rng: np.random.Generator,
                   planted: list[tuple[int, int]], attempts: int = 20) -> list[tuple[int, int]]:
    if n < 1 or k < 0 or k > n * (n - 1):
        raise InfeasibleGraphError(f"cannot place {k} directed edges without loops on {n} vertices")
    if 2 * k > n * cap:
        raise InfeasibleGraphError(f"{k} edges need total degree {2 * k} but cap {cap} on {n} vertices allows {n * cap}")
    base_degree = np.zeros(n, dtype=np.int64)
    for s, t in planted:
        if not (0 <= s < n and 0 <= t < n) or s == t or planted.count((s, t)) > 1:
            raise InfeasibleGraphError(f"planted edge {(s, t)} is invalid")
        base_degree[s] += 1
        base_degree[t] += 1
    if base_degree.max(initial=0) > cap:
        raise InfeasibleGraphError("planted edges already exceed the degree cap")
    if len(planted) > k:
        raise InfeasibleGraphError("more planted edges than requested")

    # greedy random filling can paint itself into a corner near full capacity; retry a few times
    for _ in range(attempts):
        edges = _fill_capped(n, k, cap, rng, planted, base_degree.copy())
        if edges is not None:
            return edges
    raise InfeasibleGraphError(f"degree cap {cap} exhausted before placing {k} edges ({attempts} attempts)")


def _fill_capped(n, k, cap, rng, planted, degree):
    edges = list(planted)
    used = set(planted)
    misses = 0
    while len(edges) < k:
        batch = rng.integers(0, n, size=(max(64, 2 * (k - len(edges))), 2))
        for s, t in batch.tolist():
            if s == t or (s, t) in used or degree[s] >= cap or degree[t] >= cap:
                misses += 1
                continue
            degree[s] += 1
            degree[t] += 1
            used.add((s, t))
            edges.append((s, t))
            if len(edges) == k:
                break
        if misses > 200 * k + 10_000:
            # close to capacity: choose among the remaining legal pairs directly
            free = np.flatnonzero(degree < cap)
            candidates = [(int(s), int(t)) for s in free for t in free if s != t and (s, t) not in used]
            if not candidates:
                return None
            s, t = candidates[rng.integers(len(candidates))]
            degree[s] += 1
            degree[t] += 1
            used.add((s, t))
            edges.append((s, t))
    return edges


def generate_graph(kind: str, seed: int | None = None, **params) -> ExactGraph:
    """Build a reproducible test graph with integer vertex labels.

    Kinds and their parameters:

    * ``erdos_renyi``: ``n`` vertices, ``k`` distinct loop-free edges drawn uniformly.
    * ``chain``: ``m`` edges ``0 -> 1 -> ... -> m``.
    * ``star``: hub ``0`` with edges to ``leaves`` vertices ``1..leaves``.
    * ``degree_capped``: ``k`` random edges on ``n`` vertices (default ``n = k``)
      whose total degree never exceeds ``cap``; optional ``planted`` edges are
      placed first.
    """
    rng = np.random.default_rng(seed)
    if kind == "erdos_renyi":
        edges = _erdos_renyi(int(params["n"]), int(params["k"]), rng)
    elif kind == "chain":
        m = int(params["m"])
        if m < 0:
            raise InfeasibleGraphError("chain length must be nonnegative")
        edges = [(i, i + 1) for i in range(m)]
    elif kind == "star":
        leaves = int(params["leaves"])
        edges = [(0, i) for i in range(1, leaves + 1)]
    elif kind == "degree_capped":
        k = int(params["k"])
        n = int(params.get("n") or max(k, 2))
        cap = int(params["cap"])
        planted = [tuple(map(int, e)) for e in params.get("planted", ())]
        edges = _degree_capped(n, k, cap, rng, planted)
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    return ExactGraph(edges)


def max_degree_cap(k: int, order: int = 1) -> int:
    """Degree bound ``l = 2 * ceil(k ** (1 / (order + 1)))`` used by the scaling experiments."""
    return 2 * math.ceil(k ** (1.0 / (order + 1)) - 1e-9)
