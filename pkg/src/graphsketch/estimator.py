"""scikit-learn style wrappers around the functional sketch API.

``GraphSketch`` treats a graph as a binary classifier over vertex pairs:
``fit`` takes the edge list, ``decision_function`` returns sketch scores and
``predict`` thresholds them.  ``GraphProjection`` maps whole graphs to flat
``d * d`` feature vectors whose dot products estimate shared-edge counts.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.metrics import accuracy_score
from sklearn.utils.validation import check_is_fitted

from .baseline import ExactGraph
from .codebook import CodebookSpec, codes_for
from .sketch import build_sketch, recommend_dimension
from .validation import check_edge_pairs, check_positive_int, check_unit_interval


class GraphSketch(ClassifierMixin, BaseEstimator):
    """Edge-membership classifier backed by a random-projection sketch.

    Args:
        dimension: sketch dimension ``d``. ``None`` picks
            ``recommend_dimension(n_edges, order, safety)`` at fit time.
        seed: codebook seed.
        threshold: decision threshold on the query score.
        safety: safety factor used when ``dimension`` is ``None``.
        order: query order the automatic dimension should support.

    Attributes:
        sketch_: the fitted :class:`~graphsketch.Sketch`.
        spec_: its codebook.
        dimension_: the dimension actually used.
        n_edges_: net number of edges added.
    """

    def __init__(self, dimension=None, seed=0, threshold=0.5, safety=10.0, order=1):
        self.dimension = dimension
        self.seed = seed
        self.threshold = threshold
        self.safety = safety
        self.order = order

    def fit(self, X, y=None):
        """Build the sketch from the distinct pairs in ``X``.

        If ``y`` is given, only rows with a truthy label are treated as edges.
        """
        pairs = check_edge_pairs(X)
        if y is not None:
            mask = np.asarray(y).astype(bool)
            if mask.shape != (len(pairs),):
                raise ValueError("y must have one entry per row of X")
            pairs = [p for p, keep in zip(pairs, mask) if keep]
        graph = ExactGraph(pairs)
        check_unit_interval(self.threshold, "threshold")
        if self.dimension is None:
            d = recommend_dimension(max(graph.n_edges, 1), check_positive_int(self.order, "order"), self.safety)
        else:
            d = check_positive_int(self.dimension, "dimension")
        self.spec_ = CodebookSpec(seed=self.seed, dimension=d)
        self.dimension_ = d
        self.sketch_ = build_sketch(graph, self.spec_)
        self.n_edges_ = graph.n_edges
        self.classes_ = np.array([False, True])
        return self

    def partial_fit(self, X, y=None):
        """Add the rows of ``X`` as further edges (kept with multiplicity).

        The first call fixes the codebook; later calls must not change
        ``dimension`` or ``seed``.
        """
        if not hasattr(self, "sketch_"):
            return self.fit(X, y)
        pairs = check_edge_pairs(X, allow_empty=True)
        if y is not None:
            pairs = [p for p, keep in zip(pairs, np.asarray(y).astype(bool)) if keep]
        extra = build_sketch(pairs, self.spec_)
        self.sketch_ = self.sketch_ + extra
        self.n_edges_ += len(pairs)
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "sketch_")
        return self.sketch_.query_edges(check_edge_pairs(X, allow_empty=True))

    def predict(self, X) -> np.ndarray:
        return self.decision_function(X) > self.threshold

    def score(self, X, y, sample_weight=None) -> float:
        return accuracy_score(np.asarray(y).astype(bool), self.predict(X), sample_weight=sample_weight)


class GraphProjection(TransformerMixin, BaseEstimator):
    """Transform graphs into flattened sketches of a shared codebook.

    Each input item is an :class:`~graphsketch.ExactGraph` or an iterable of
    ``(source, target)`` pairs.  Row ``i`` of the output is
    ``vec(P A_i P^T)``, so ``X @ X.T`` estimates pairwise shared-edge counts
    and row distances estimate edge symmetric differences.
    """

    def __init__(self, dimension=64, seed=0):
        self.dimension = dimension
        self.seed = seed

    def fit(self, X=None, y=None):
        d = check_positive_int(self.dimension, "dimension")
        self.spec_ = CodebookSpec(seed=self.seed, dimension=d)
        self.n_features_out_ = d * d
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "spec_")
        graphs = [g if isinstance(g, ExactGraph) else ExactGraph(check_edge_pairs(g, allow_empty=True)) for g in X]
        out = np.empty((len(graphs), self.n_features_out_))
        for row, g in zip(out, graphs):
            row[:] = build_sketch(g, self.spec_).matrix.ravel()
        return out

    def codes(self, labels) -> np.ndarray:
        """Codebook vectors of ``labels`` as columns."""
        check_is_fitted(self, "spec_")
        return codes_for(self.spec_, labels)
