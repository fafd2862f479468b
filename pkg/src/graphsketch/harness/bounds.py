"""Closed-form concentration bounds for sketch queries, inner products and norms.

All query bounds are Bernstein tails ``2 exp(-eps^2 / (2 (var + eps / 3)))``
where ``var`` collects the variances of the dot-product noise terms, each
independent spherical dot product contributing ``1/d``.  The raw expression is
returned even when it exceeds 1 (a vacuous bound); callers clip as needed.
"""

from __future__ import annotations

import math
import warnings


class BoundWarning(UserWarning):
    """A variance polynomial went negative outside its intended regime and was clamped."""


def _clamped(name: str, value: float) -> float:
    if value < 0:
        warnings.warn(f"{name} is negative ({value:g}); clamped to 0", BoundWarning, stacklevel=3)
        return 0.0
    return value


def bernstein_tail(eps: float, variance: float, *, factor: float = 2.0) -> float:
    """``2 exp(-eps^2 / (factor * (variance + eps / 3)))``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return 2.0 * math.exp(-eps * eps / (factor * (variance + eps / 3.0)))


def first_order_variance(k: int, l: int, d: int, true_query: bool = True) -> float:
    """Worst-case noise variance of an edge query on a graph with ``k + 1`` edges and max degree ``l / 2``.

    True query: ``l/d + (k - l)/d^2``; false query: ``l/d + (k + 1 - l)/d^2``.
    """
    rest = k - l if true_query else k + 1 - l
    return l / d + _clamped("k - l term", rest) / d**2


def bernstein_bound_first_order(eps: float, k: int, l: int, d: int, true_query: bool = True) -> float:
    return bernstein_tail(eps, first_order_variance(k, l, d, true_query))


def second_order_variance(k: int, l: int, d: int, true_query: bool = True) -> float:
    """Worst-case noise variance of a query on the squared sketch.

    The graph holds a composable pair plus ``k - 2`` nuisance edges with max
    degree ``l / 2``.  Each variance term is clamped at zero, since the
    polynomials go negative for very small ``k`` and ``l``.
    """
    if true_query:
        return ((2 * l + 1) / d
                + _clamped("k*l - 3l - 3 term", k * l - 3 * l - 3) / d**2
                + _clamped("cubic term", k * k - k * (l + 2) + l + 1) / d**3)
    return (_clamped("k*l term", k * l) / d**2
            + _clamped("k^2 - k*l term", k * k - k * l) / d**3)


def bernstein_bound_second_order(eps: float, k: int, l: int, d: int, true_query: bool = True) -> float:
    return bernstein_tail(eps, second_order_variance(k, l, d, true_query))


def realized_first_order_variance(shared: int, k_other: int, d: int) -> float:
    """Noise variance for a query whose edge meets ``shared`` of the ``k_other`` remaining edges in one vertex."""
    return shared / d + max(k_other - shared, 0) / d**2


def realized_second_order_variance(k: int, m1: int, m2: int, d: int) -> float:
    """True-query variance of the squared sketch before the worst-case substitution.

    ``m1`` nuisance edges touch the middle vertex of the composable pair and
    ``m2`` touch its source or target.
    """
    m = m1 + m2
    n1 = max(k * m2 - m2 - m - 3, 0)
    n2 = max(k * k - k * (m2 + 2) + m2 + 1, 0)
    return (m + 1) / d + n1 / d**2 + n2 / d**3


def realized_second_order_false_variance(k: int, m: int, d: int) -> float:
    """False-query variance when ``m`` edges start at the query source or end at its target."""
    return k * m / d**2 + max(k * k - k * m, 0) / d**3


def m_order_noise_variance(k: int, m: int, d: int) -> float:
    """Heuristic noise variance ``k^m / d^(m+1)`` of a query on the ``m``-th sketch power."""
    return float(k) ** m / float(d) ** (m + 1)


def inner_product_variance(q: int, n1: int, n2: int, shared: int, d: int) -> float:
    """Variance of ``<pi(G), pi(H)>``: ``q/d + (n1 n2 - shared - q)/d^2``."""
    return q / d + max(n1 * n2 - shared - q, 0) / d**2


def inner_product_bound(eps: float, q: int, n1: int, n2: int, shared: int, d: int) -> float:
    """Tail of the inner-product estimate, stated without the usual factor 2 in the denominator."""
    return bernstein_tail(eps, inner_product_variance(q, n1, n2, shared, d), factor=1.0)


def self_norm_bound(eps: float, d: int) -> float:
    """``P(| ||pi(G)||^2 - k | > k eps) <= 2 exp(-d eps^2)`` (stated for ``d < k``)."""
    return 2.0 * math.exp(-d * eps * eps)


def jl_failure_bound(n_graphs: int, eps: float, d: int) -> float:
    """Union bound ``N (N - 1) exp(-d eps^2)`` on any pairwise violation."""
    return n_graphs * (n_graphs - 1) * math.exp(-d * eps * eps)


def jl_dimension(n_graphs: int, eps: float, failure_prob: float) -> int:
    """Smallest ``d`` with ``N (N - 1) exp(-d eps^2) <= failure_prob``."""
    if n_graphs < 2:
        return 1
    if not 0 < failure_prob < 1 or not 0 < eps < 1:
        raise ValueError("need 0 < failure_prob < 1 and 0 < eps < 1")
    target = (math.log(n_graphs * (n_graphs - 1)) - math.log(failure_prob)) / eps**2
    d = max(1, math.ceil(target))
    # guard the boundary against rounding in the logarithms
    while d > 1 and jl_failure_bound(n_graphs, eps, d - 1) <= failure_prob:
        d -= 1
    while jl_failure_bound(n_graphs, eps, d) > failure_prob:
        d += 1
    return d


def tail_slack(bound: float, trials: int) -> float:
    """Allowance ``3 sqrt(b (1 - b) / trials) + 0.01`` on an empirical tail, ``b`` clipped to [0, 1]."""
    b = min(max(bound, 0.0), 1.0)
    return 3.0 * math.sqrt(b * (1.0 - b) / trials) + 0.01
