"""Monte Carlo experiments that compare sketch behaviour against closed-form bounds.

Each trial draws its own randomness from ``default_rng([seed, trial, stream])``
so results do not depend on execution order, and an identical config always
reproduces an identical report apart from wall-clock timings.
"""

from __future__ import annotations

import math
import time
import warnings
from typing import Callable

import numpy as np

from ..baseline import (
    ExactGraph,
    compose_graphs,
    count_paths,
    degree_stats,
    edge_intersection_count,
    generate_graph,
    max_degree_cap,
    shared_vertex_pair_count,
    symmetric_difference_count,
)
from ..codebook import CodebookSpec
from ..exceptions import InfeasibleGraphError
from ..sketch import build_sketch
from . import bounds
from .report import ExperimentConfig, ExperimentReport

VARIANCE_FACTOR = 4.0
MIN_TRIALS_FOR_VARIANCE = 30


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, trial, stream])


def random_spec(rng: np.random.Generator, d: int) -> CodebookSpec:
    return CodebookSpec(seed=int(rng.integers(0, 2**64, dtype=np.uint64)), dimension=d)


def _graph_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    """Standard desk-scale configuration of ``experiment`` with ``overrides`` applied."""
    base = {
        "first_order": dict(k=1000, trials=1000, epsilons=(0.25, 0.5), max_misclassification=0.01),
        "second_order": dict(k=216, trials=1000, epsilons=(0.25, 0.5), max_misclassification=0.05),
        "m_order": dict(k=81, m=3, trials=1000, epsilons=(0.25, 0.5), min_fraction=0.95),
        "inner_product": dict(n1=100, n2=100, shared=20, n=200, d=1024, trials=200,
                              epsilons=(0.5, 1.0, 1.5), min_fraction=0.95),
        "norm": dict(k=200, d=512, trials=200, epsilons=(0.1, 0.2, 0.3), tolerance=0.3, min_fraction=0.95),
        "jl": dict(n_graphs=32, k=50, n=200, epsilons=(0.5,), failure_prob=0.01, trials=20, min_fraction=0.9),
        "bench": dict(d_grid=(128, 256, 512, 1024), repeats=5, trials=1, epsilons=()),
    }[experiment]
    base.update(overrides)
    return ExperimentConfig(experiment=experiment, **base)


# --------------------------------------------------------------------------
# shared helpers


def _touching(edges, a, b) -> int:
    """Edges whose endpoint set meets ``{a, b}`` in exactly one vertex."""
    ends = {a, b}
    count = 0
    for s, t in edges:
        other = {s, t}
        if other != ends and len(ends & other) == 1:
            count += 1
    return count


def _tabulate(report: ExperimentReport, series: str, errors, bound_values, trials: int) -> bool:
    errors = np.abs(np.asarray(errors, dtype=float))
    tails = [float(np.mean(errors > eps)) for eps in report.epsilons]
    report.tails[series] = tails
    report.bounds[series] = [float(b) for b in bound_values]
    return all(emp <= min(b, 1.0) + bounds.tail_slack(b, trials) for emp, b in zip(tails, bound_values))


def _bounded(report: ExperimentReport, fn: Callable, *args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", bounds.BoundWarning)
        value = fn(*args)
    for w in caught:
        msg = str(w.message)
        if msg not in report.warnings:
            report.warnings.append(msg)
            warnings.warn(msg, bounds.BoundWarning, stacklevel=3)
    return value


def _variance_check(report: ExperimentReport, name: str, errors, predicted: float) -> None:
    errors = np.asarray(errors, dtype=float)
    empirical = float(np.var(errors))
    report.statistics[f"{name}_variance"] = empirical
    report.statistics[f"{name}_predicted_variance"] = float(predicted)
    if len(errors) < MIN_TRIALS_FOR_VARIANCE or predicted <= 0:
        report.warnings.append(f"{name} variance check skipped ({len(errors)} trials, predicted {predicted:g})")
        return
    ratio = empirical / predicted
    report.statistics[f"{name}_variance_ratio"] = ratio
    report.checks[f"{name}_variance_within_{VARIANCE_FACTOR:g}x"] = 1 / VARIANCE_FACTOR <= ratio <= VARIANCE_FACTOR


def _pick_non_edge(rng, vertices, is_present) -> tuple:
    n = len(vertices)
    for _ in range(10_000):
        a, b = rng.integers(n, size=2)
        if a != b and not is_present(vertices[a], vertices[b]):
            return vertices[a], vertices[b]
    raise InfeasibleGraphError("could not find a vertex pair for a false query")


def _finish(report: ExperimentReport, started: float) -> ExperimentReport:
    report.timings["total_s"] = time.perf_counter() - started
    return report


# --------------------------------------------------------------------------
# first order


def run_first_order_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Edge-query accuracy on degree-capped random graphs.

    Every trial builds a fresh graph with ``k`` edges (total degree at most
    ``l // 2``) and a fresh codebook, then issues one true query on a random
    edge and one false query on a random non-adjacent vertex pair.
    """
    started = time.perf_counter()
    k = cfg.k
    l = cfg.l or max_degree_cap(k, 1)
    d = cfg.d or 10 * math.ceil(math.sqrt(k) - 1e-9)
    n = cfg.n or max(k, 2)
    cap = max(l // 2, 1)
    report = ExperimentReport(config=cfg, d=d, epsilons=list(cfg.epsilons))

    true_scores, false_scores, true_pred, false_pred = [], [], [], []
    max_degree = 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        g = generate_graph("degree_capped", seed=_graph_seed(rng), k=k, n=n, cap=cap)
        max_degree = max(max_degree, degree_stats(g).max_total)
        s = build_sketch(g, random_spec(rng, d))

        u, v = g.edges[int(rng.integers(k))]
        true_scores.append(s.query_edge(u, v, cfg.threshold).score)
        true_pred.append(bounds.realized_first_order_variance(_touching(g.edges, u, v), k - 1, d))

        a, b = _pick_non_edge(rng, g.vertices, g.has_edge)
        false_scores.append(s.query_edge(a, b, cfg.threshold).score)
        false_pred.append(bounds.realized_first_order_variance(_touching(g.edges, a, b), k, d))

    true_scores = np.array(true_scores)
    false_scores = np.array(false_scores)
    # the bound counts k + 1 edges including the queried one
    k_thm = k - 1
    ok_true = _tabulate(report, "true", true_scores - 1.0,
                        [_bounded(report, bounds.bernstein_bound_first_order, e, k_thm, l, d, True)
                         for e in cfg.epsilons], cfg.trials)
    ok_false = _tabulate(report, "false", false_scores,
                         [_bounded(report, bounds.bernstein_bound_first_order, e, k_thm, l, d, False)
                          for e in cfg.epsilons], cfg.trials)
    report.checks["tails_within_bound"] = ok_true and ok_false

    misclassified = int(np.sum(true_scores <= cfg.threshold) + np.sum(false_scores > cfg.threshold))
    rate = misclassified / (2 * cfg.trials)
    report.statistics.update({
        "misclassification": rate,
        "true_mean": float(true_scores.mean()),
        "false_mean": float(false_scores.mean()),
        "worst_case_true_variance": bounds.first_order_variance(k_thm, l, d, True),
        "worst_case_false_variance": bounds.first_order_variance(k_thm, l, d, False),
        "max_total_degree": float(max_degree),
        "degree_cap": float(cap),
    })
    if cfg.max_misclassification is not None:
        report.checks["misclassification"] = rate <= cfg.max_misclassification
    _variance_check(report, "true", true_scores - 1.0, float(np.mean(true_pred)))
    _variance_check(report, "false", false_scores, float(np.mean(false_pred)))
    report.samples = {"true": true_scores.tolist(), "false": false_scores.tolist()}
    return _finish(report, started)


# --------------------------------------------------------------------------
# second order


def run_second_order_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Composition accuracy: queries on the squared sketch.

    A composable pair ``0 -> 1 -> 2`` is planted among ``k - 2`` nuisance
    edges.  The true query asks for ``(0, 2)`` in the square; the false query
    asks for a random vertex pair joined by no two-step path.  Expected
    values come from the exact path counts, so extra ``0 -> x -> 2`` paths
    created by nuisance edges are accounted for.  The vertex pool defaults
    to ``2k``; with only ``k`` vertices the nuisance edges crowd the planted
    pair and misclassification sits near 5%.
    """
    started = time.perf_counter()
    k = cfg.k
    if k < 2:
        raise InfeasibleGraphError("the second-order experiment needs k >= 2")
    l = cfg.l or max_degree_cap(k, 2)
    d = cfg.d or 4 * math.ceil(k ** (2 / 3) - 1e-9)
    n = cfg.n or max(2 * k, 3)
    cap = max(l // 2, 2)
    planted = [(0, 1), (1, 2)]
    report = ExperimentReport(config=cfg, d=d, epsilons=list(cfg.epsilons))

    true_err, false_scores, true_scores = [], [], []
    true_pred, false_pred = [], []
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        g = generate_graph("degree_capped", seed=_graph_seed(rng), k=k, n=n, cap=cap, planted=planted)
        paths = compose_graphs(g)
        squared = build_sketch(g, random_spec(rng, d)).power(2)

        expected = paths[(0, 2)]
        score = squared.query_edge(0, 2, cfg.threshold).score
        true_scores.append(score)
        true_err.append(score - expected)
        nuisance = g.edges[2:]
        m1 = sum(1 for s, t in nuisance if 1 in (s, t))
        m2 = sum(1 for s, t in nuisance if {s, t} & {0, 2})
        true_pred.append(bounds.realized_second_order_variance(k, m1, m2, d))

        a, b = _pick_non_edge(rng, g.vertices, lambda x, y: paths.get((x, y), 0) > 0)
        false_scores.append(squared.query_edge(a, b, cfg.threshold).score)
        touching = sum(1 for s, t in g.edges if s == a or t == b)
        false_pred.append(bounds.realized_second_order_false_variance(k, touching, d))

    true_scores = np.array(true_scores)
    false_scores = np.array(false_scores)
    ok_true = _tabulate(report, "true", true_err,
                        [_bounded(report, bounds.bernstein_bound_second_order, e, k, l, d, True)
                         for e in cfg.epsilons], cfg.trials)
    ok_false = _tabulate(report, "false", false_scores,
                         [_bounded(report, bounds.bernstein_bound_second_order, e, k, l, d, False)
                          for e in cfg.epsilons], cfg.trials)
    report.checks["tails_within_bound"] = ok_true and ok_false

    misclassified = int(np.sum(true_scores <= cfg.threshold) + np.sum(false_scores > cfg.threshold))
    rate = misclassified / (2 * cfg.trials)
    report.statistics.update({
        "misclassification": rate,
        "true_mean_error": float(np.mean(true_err)),
        "false_mean": float(false_scores.mean()),
        "false_mean_se": float(false_scores.std() / math.sqrt(cfg.trials)),
        "worst_case_true_variance": _bounded(report, bounds.second_order_variance, k, l, d, True),
        "worst_case_false_variance": _bounded(report, bounds.second_order_variance, k, l, d, False),
        "degree_cap": float(cap),
    })
    if cfg.max_misclassification is not None:
        report.checks["misclassification"] = rate <= cfg.max_misclassification
    _variance_check(report, "true", true_err, float(np.mean(true_pred)))
    _variance_check(report, "false", false_scores, float(np.mean(false_pred)))
    report.samples = {"true": true_scores.tolist(), "false": false_scores.tolist()}
    return _finish(report, started)


# --------------------------------------------------------------------------
# m-th order


def run_m_order_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Path queries on the ``m``-th sketch power for a planted ``m``-chain among nuisance edges.

    The noise comparison against ``k^m / d^(m+1)`` uses false queries
    between two vertices outside the graph, where every noise term is a
    product of spherical dot products.  The vertex pool defaults to ``4k``
    so that composable nuisance pairs stay rare.
    """
    started = time.perf_counter()
    k, m = cfg.k, cfg.m
    if m < 3:
        raise ValueError("use the first- or second-order experiment for m < 3")
    if k < m:
        raise InfeasibleGraphError("k must be at least the chain length m")
    l = cfg.l or max_degree_cap(k, m)
    d = cfg.d or 3 * math.ceil(k ** (m / (m + 1)) - 1e-9)
    n = cfg.n or max(4 * k, m + 1)
    cap = max(l // 2, 2)
    planted = [(i, i + 1) for i in range(m)]
    outside = (-1, -2)
    report = ExperimentReport(config=cfg, d=d, epsilons=list(cfg.epsilons))

    true_err, true_scores, false_scores = [], [], []
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        g = generate_graph("degree_capped", seed=_graph_seed(rng), k=k, n=n, cap=cap, planted=planted)
        powered = build_sketch(g, random_spec(rng, d)).power(m)
        expected = count_paths(g, 0, m, m)
        score = powered.query_edge(0, m, cfg.threshold).score
        true_scores.append(score)
        true_err.append(score - expected)
        false_scores.append(powered.query_edge(*outside, cfg.threshold).score)

    true_scores = np.array(true_scores)
    false_scores = np.array(false_scores)
    predicted = bounds.m_order_noise_variance(k, m, d)
    # no closed-form bound is available at this order; use Bernstein with the heuristic variance
    heuristic = [bounds.bernstein_tail(e, predicted) for e in cfg.epsilons]
    _tabulate(report, "true", true_err, heuristic, cfg.trials)
    _tabulate(report, "false", false_scores, heuristic, cfg.trials)

    correct = (np.sum(true_scores > cfg.threshold) + np.sum(false_scores <= cfg.threshold)) / (2 * cfg.trials)
    report.statistics.update({
        "correct_fraction": float(correct),
        "true_mean_error": float(np.mean(true_err)),
        "true_variance": float(np.var(true_err)),
        "false_mean": float(false_scores.mean()),
        "noise_variance": float(np.var(false_scores)),
        "predicted_noise_variance": predicted,
    })
    if cfg.trials >= MIN_TRIALS_FOR_VARIANCE:
        ratio = float(np.var(false_scores)) / predicted
        report.statistics["noise_variance_ratio"] = ratio
        report.checks[f"noise_variance_within_{VARIANCE_FACTOR:g}x"] = 1 / VARIANCE_FACTOR <= ratio <= VARIANCE_FACTOR
    if cfg.min_fraction is not None:
        report.checks["path_decisions"] = correct >= cfg.min_fraction
    report.samples = {"true": true_scores.tolist(), "false": false_scores.tolist()}
    return _finish(report, started)


# --------------------------------------------------------------------------
# inner products and norms


def planted_pair(cfg: ExperimentConfig) -> tuple[ExactGraph, ExactGraph]:
    """Two graphs with ``n1`` and ``n2`` edges sharing exactly ``shared`` edges."""
    n1, n2, shared, n = cfg.n1, cfg.n2, cfg.shared or 0, cfg.n or 200
    if shared > min(n1, n2):
        raise InfeasibleGraphError("shared edge count exceeds a graph's size")
    rng = trial_rng(cfg.seed, 0, stream=1)
    if cfg.disjoint:
        if shared:
            raise InfeasibleGraphError("graphs on disjoint vertex sets cannot share edges")
        g = generate_graph("erdos_renyi", seed=_graph_seed(rng), n=n, k=n1)
        h = generate_graph("erdos_renyi", seed=_graph_seed(rng), n=n, k=n2)
        return g, ExactGraph((s + n, t + n) for s, t in h.edges)
    pool = generate_graph("erdos_renyi", seed=_graph_seed(rng), n=n, k=n1 + n2 - shared).edges
    common = pool[:shared]
    g = ExactGraph(common + pool[shared:n1])
    h = ExactGraph(common + pool[n1:n1 + n2 - shared])
    return g, h


def run_inner_product_experiment(cfg: ExperimentConfig, graphs: tuple[ExactGraph, ExactGraph] | None = None
                                 ) -> ExperimentReport:
    """Concentration of ``<pi(G), pi(H)>`` on the exact shared-edge count.

    The graph pair is fixed (``planted_pair`` unless ``graphs`` is given) and
    each trial draws a fresh codebook.
    """
    started = time.perf_counter()
    g, h = graphs if graphs is not None else planted_pair(cfg)
    d = cfg.d or 1024
    report = ExperimentReport(config=cfg, d=d, epsilons=list(cfg.epsilons))
    exact = edge_intersection_count(g, h)
    q = shared_vertex_pair_count(g, h)
    n1, n2 = g.n_edges, h.n_edges
    variance = bounds.inner_product_variance(q, n1, n2, exact, d)
    sigma = math.sqrt(variance)

    estimates = np.empty(cfg.trials)
    for trial in range(cfg.trials):
        spec = random_spec(trial_rng(cfg.seed, trial), d)
        estimates[trial] = build_sketch(g, spec).inner_product(build_sketch(h, spec))

    errors = estimates - exact
    ok_tails = _tabulate(report, "error", errors,
                         [bounds.inner_product_bound(e, q, n1, n2, exact, d) for e in cfg.epsilons], cfg.trials)
    mean = float(estimates.mean())
    se = float(estimates.std() / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    coverage = float(np.mean(np.abs(errors) <= 3 * sigma))
    report.statistics.update({
        "exact_shared_edges": float(exact),
        "one_vertex_pairs": float(q),
        "predicted_sigma": sigma,
        "mean_estimate": mean,
        "mean_se": se,
        "empirical_variance": float(np.var(errors)),
        "coverage_3sigma": coverage,
    })
    if cfg.shared is not None and graphs is None:
        report.checks["exact_count_matches_planted"] = exact == cfg.shared
    report.checks["tails_within_bound"] = ok_tails
    report.checks["mean_within_3sigma"] = abs(mean - exact) <= 3 * sigma
    if cfg.min_fraction is not None:
        report.checks["coverage_3sigma"] = coverage >= cfg.min_fraction
    report.samples = {"estimate": estimates.tolist()}
    return _finish(report, started)


def run_norm_experiment(cfg: ExperimentConfig, graph: ExactGraph | None = None) -> ExperimentReport:
    """Concentration of ``||pi(G)||_F^2`` on the edge count ``k``.

    Tails at relative deviations ``eps`` are compared with the inner-product
    bound specialised to ``H = G``; the simpler ``2 exp(-d eps^2)`` form is
    reported alongside.
    """
    started = time.perf_counter()
    if graph is None:
        rng = trial_rng(cfg.seed, 0, stream=1)
        graph = generate_graph("erdos_renyi", seed=_graph_seed(rng), n=cfg.n or max(cfg.k, 2), k=cfg.k)
    k = graph.n_edges
    d = cfg.d or 512
    tol = cfg.tolerance if cfg.tolerance is not None else 0.3
    report = ExperimentReport(config=cfg, d=d, epsilons=list(cfg.epsilons))
    q = shared_vertex_pair_count(graph, graph)

    norms = np.empty(cfg.trials)
    for trial in range(cfg.trials):
        norms[trial] = build_sketch(graph, random_spec(trial_rng(cfg.seed, trial), d)).frobenius_norm_sq()

    relative = (norms - k) / k
    ok = _tabulate(report, "relative_error", relative,
                   [bounds.inner_product_bound(e * k, q, k, k, k, d) for e in cfg.epsilons], cfg.trials)
    report.bounds["self_norm"] = [bounds.self_norm_bound(e, d) for e in cfg.epsilons]
    if d >= k:
        report.warnings.append("d >= k: the 2 exp(-d eps^2) form is stated only for d < k")
    within = float(np.mean(np.abs(relative) <= tol))
    report.statistics.update({
        "edges": float(k),
        "one_vertex_pairs": float(q),
        "mean_norm_sq": float(norms.mean()),
        "fraction_within_tolerance": within,
    })
    report.checks["tails_within_bound"] = ok
    if cfg.min_fraction is not None:
        report.checks["fraction_within_tolerance"] = within >= cfg.min_fraction
    report.samples = {"norm_sq": norms.tolist()}
    return _finish(report, started)


# --------------------------------------------------------------------------
# Johnson-Lindenstrauss


def jl_graphs(cfg: ExperimentConfig) -> list[ExactGraph]:
    rng = trial_rng(cfg.seed, 0, stream=1)
    return [generate_graph("erdos_renyi", seed=_graph_seed(rng), n=cfg.n or 200, k=cfg.k)
            for _ in range(cfg.n_graphs)]


def run_jl_experiment(cfg: ExperimentConfig, graphs: list[ExactGraph] | None = None) -> ExperimentReport:
    """Pairwise distance preservation over a fixed family of graphs.

    Exact squared distances are symmetric-difference counts; sketched ones
    are ``||pi(A_i) - pi(A_j)||_F^2``.  Each repetition (``trials``) draws a
    new codebook and passes when every pair satisfies the two-sided
    ``(1 +/- eps)`` inequality.
    """
    started = time.perf_counter()
    graphs = graphs if graphs is not None else jl_graphs(cfg)
    n_graphs = len(graphs)
    if n_graphs < 2:
        raise ValueError("need at least two graphs")
    eps = cfg.epsilons[0]
    if not 0 < eps < 1:
        raise ValueError("the JL experiment needs 0 < eps < 1")
    failure_prob = cfg.failure_prob or 0.01
    d = cfg.d or bounds.jl_dimension(n_graphs, eps, failure_prob)
    report = ExperimentReport(config=cfg, d=d, epsilons=[eps])

    pairs = [(i, j) for i in range(n_graphs) for j in range(i + 1, n_graphs)]
    exact = np.array([symmetric_difference_count(graphs[i], graphs[j]) for i, j in pairs], dtype=float)
    violation_rates, full_pass, ratios = [], 0, []
    for rep in range(cfg.trials):
        spec = random_spec(trial_rng(cfg.seed, rep), d)
        sketches = [build_sketch(g, spec) for g in graphs]
        sketched = np.array([(sketches[i] - sketches[j]).frobenius_norm_sq() for i, j in pairs])
        ok = ((1 - eps) * exact <= sketched) & (sketched <= (1 + eps) * exact)
        violation_rates.append(1.0 - float(ok.mean()))
        full_pass += bool(ok.all())
        nonzero = exact > 0
        ratios.extend((sketched[nonzero] / exact[nonzero]).tolist())

    report.tails["pair_violation"] = [float(np.mean(violation_rates))]
    report.bounds["pair_violation"] = [bounds.self_norm_bound(eps, d)]
    report.tails["any_violation"] = [1.0 - full_pass / cfg.trials]
    report.bounds["any_violation"] = [bounds.jl_failure_bound(n_graphs, eps, d)]
    required = math.ceil((cfg.min_fraction if cfg.min_fraction is not None else 0.9) * cfg.trials - 1e-9)
    report.statistics.update({
        "n_graphs": float(n_graphs),
        "pairs": float(len(pairs)),
        "full_pass_repetitions": float(full_pass),
        "required_repetitions": float(required),
        "mean_exact_distance": float(exact.mean()),
        "min_ratio": float(min(ratios)) if ratios else 1.0,
        "max_ratio": float(max(ratios)) if ratios else 1.0,
    })
    report.checks["full_pass_repetitions"] = full_pass >= required
    report.samples = {"violation_rate": violation_rates}
    return _finish(report, started)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    from .benchmarks import run_benchmarks

    runners = {
        "first_order": run_first_order_experiment,
        "second_order": run_second_order_experiment,
        "m_order": run_m_order_experiment,
        "inner_product": run_inner_product_experiment,
        "norm": run_norm_experiment,
        "jl": run_jl_experiment,
        "bench": run_benchmarks,
    }
    return runners[cfg.experiment](cfg)
