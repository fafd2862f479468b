"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.  The timing-slope part of criterion 9 is
soft unless ``GRAPHSKETCH_STRICT_TIMING=1`` is set.
"""

import itertools
import os
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from graphsketch import (
    CodebookSpec,
    CompressedSparseRow,
    CoordinateList,
    DictionaryOfKeys,
    build_sketch,
    code_matrix,
    convert,
    edge_intersection_count,
    empty_sketch,
    exact_compose,
    generate_graph,
    load_sketch,
    read_edge_list,
    read_label_set,
)
from graphsketch.cli import main as cli_main
from graphsketch.harness import default_config, jl_dimension, run_benchmarks, run_experiment
from graphsketch.harness.benchmarks import SLOPE_RANGE, STRICT_ENV
from graphsketch.harness.experiments import planted_pair
from graphsketch.storage import CHECKSUM_SIZE, HEADER_SIZE, sketch_to_bytes

FIXTURES = Path(__file__).parent / "fixtures"
_capture = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _capture["capsys"] = capsys
    yield


def verdict(number: int, title: str, ok: bool, detail: str, *, elapsed: float, limit: float, soft: bool = False):
    ok_time = elapsed < limit
    status = "PASS" if ok and ok_time else ("SOFT-FAIL" if soft else "FAIL")
    line = f"criterion {number:2d} {status:9s} {title}: {detail}; {elapsed:.1f}s (limit {limit:g}s)"
    with _capture["capsys"].disabled():
        print("\n" + line, flush=True)
    if not soft:
        assert ok, line
        assert ok_time, line


def test_criterion_01_spherical_moments():
    start = time.perf_counter()
    d, m = 100, 100_000
    codes = code_matrix(CodebookSpec(seed=2024, dimension=d), list(range(2 * m)))
    x = np.einsum("ij,ij->j", codes[:, :m], codes[:, m:])
    se_mean = x.std() / np.sqrt(m)
    x2 = x * x
    se_sq = x2.std() / np.sqrt(m)
    z_mean = abs(x.mean()) / se_mean
    z_sq = abs(x2.mean() - 1 / d) / se_sq
    verdict(1, "spherical moments", z_mean < 4 and z_sq < 4,
            f"mean(X)={x.mean():.2e} ({z_mean:.2f} SE), mean(X^2)={x2.mean():.5f} ({z_sq:.2f} SE)",
            elapsed=time.perf_counter() - start, limit=5)


def test_criterion_02_single_edge_exactness():
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    worst_query, worst_zero = 0.0, 0.0
    for seed in rng.integers(0, 2**64, size=100, dtype=np.uint64):
        s = empty_sketch(CodebookSpec(seed=int(seed), dimension=64)).add_edge("u", "v")
        worst_query = max(worst_query, abs(s.query_edge("u", "v").score - 1))
        worst_zero = max(worst_zero, float(np.abs(s.remove_edge("u", "v").matrix).max()))
    verdict(2, "single-edge exactness", worst_query <= 1e-9 and worst_zero <= 1e-12,
            f"max |score-1|={worst_query:.1e}, max residual={worst_zero:.1e}",
            elapsed=time.perf_counter() - start, limit=1)


def test_criterion_03_first_order_concentration():
    start = time.perf_counter()
    r = run_experiment(default_config("first_order", k=1000, trials=1000, epsilons=(0.25, 0.5)))
    assert r.d == 320 and r.config.k == 1000
    ok = r.statistics["misclassification"] <= 0.01 and r.checks["tails_within_bound"]
    verdict(3, "first-order concentration", ok,
            f"misclassification={r.statistics['misclassification']:.4f}, "
            f"tails true={r.tails['true']} false={r.tails['false']} vs bounds {[round(b, 3) for b in r.bounds['true']]}",
            elapsed=time.perf_counter() - start, limit=60)


def test_criterion_04_second_order_concentration():
    start = time.perf_counter()
    r = run_experiment(default_config("second_order", k=216, trials=1000))
    assert r.d == 144
    ok = r.statistics["misclassification"] <= 0.05 and r.checks["tails_within_bound"]
    verdict(4, "second-order concentration", ok,
            f"misclassification={r.statistics['misclassification']:.4f}, "
            f"tails true={r.tails['true']} false={r.tails['false']}",
            elapsed=time.perf_counter() - start, limit=120)


def test_criterion_05_inner_product():
    start = time.perf_counter()
    cfg = default_config("inner_product", n1=100, n2=100, shared=20, d=1024, trials=200)
    g, h = planted_pair(cfg)
    exact = edge_intersection_count(g, h)
    r = run_experiment(cfg)
    sigma = r.statistics["predicted_sigma"]
    mean = r.statistics["mean_estimate"]
    ok = exact == 20 and abs(mean - 20) <= 3 * sigma
    verdict(5, "inner-product preservation", ok,
            f"exact shared={exact}, mean={mean:.4f}, sigma={sigma:.4f}",
            elapsed=time.perf_counter() - start, limit=60)


def test_criterion_06_norm_preservation():
    start = time.perf_counter()
    r = run_experiment(default_config("norm", k=200, d=512, trials=200, tolerance=0.3))
    frac = r.statistics["fraction_within_tolerance"]
    verdict(6, "norm preservation", frac >= 0.95, f"fraction within k(1 +/- 0.3)={frac:.3f}",
            elapsed=time.perf_counter() - start, limit=30)


def test_criterion_07_jl_property():
    start = time.perf_counter()
    d = jl_dimension(32, 0.5, 0.01)
    r = run_experiment(default_config("jl", n_graphs=32, k=50, epsilons=(0.5,), failure_prob=0.01, trials=20))
    passes = int(r.statistics["full_pass_repetitions"])
    verdict(7, "JL property", r.d == d and passes >= 18, f"d={r.d}, full-pass repetitions={passes}/20",
            elapsed=time.perf_counter() - start, limit=120)


def test_criterion_08_baseline_oracles():
    start = time.perf_counter()
    formats = [CoordinateList, DictionaryOfKeys, CompressedSparseRow]
    round_trips = compositions = 0
    failures = []
    for seed in range(200):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 65))
        k = int(rng.integers(0, min(n * (n - 1), 256) + 1)) if n > 1 else 0
        g = generate_graph("erdos_renyi", seed=seed, n=n, k=k)
        x = CoordinateList([(i, j, 1) for i, j in g.index_pairs()], (n, n))
        for a, b in itertools.permutations(formats, 2):
            round_trips += 1
            if convert(convert(convert(x, a), b), a) != convert(x, a):
                failures.append(f"round trip {a.__name__}->{b.__name__} seed {seed}")
        dense = x.to_dense().astype(np.int64)
        expected = dense @ dense
        for form in formats:
            compositions += 1
            y = convert(x, form)
            if not (np.array_equal(exact_compose(y, y, multiplicity=True).to_dense(), expected)
                    and np.array_equal(exact_compose(y, y).to_dense() != 0, expected != 0)):
                failures.append(f"compose {form.__name__} seed {seed}")
    verdict(8, "baseline oracle equivalence", not failures,
            f"{round_trips} round trips, {compositions} compositions, {len(failures)} failures",
            elapsed=time.perf_counter() - start, limit=10)


def test_criterion_09_complexity_shape():
    start = time.perf_counter()
    r = run_benchmarks(default_config("bench", d_grid=(128, 256, 512, 1024), repeats=5))
    sizes_ok = all(r.statistics[f"file_bytes_d{d}"] == 8 * d * d + HEADER_SIZE + CHECKSUM_SIZE
                   for d in (128, 256, 512, 1024))
    slope = r.statistics["sketch_query_slope"]
    slope_ok = SLOPE_RANGE[0] <= slope <= SLOPE_RANGE[1]
    elapsed = time.perf_counter() - start
    verdict(9, "file size (hard)", sizes_ok, "bytes = 8 d^2 + 46 at every grid point", elapsed=elapsed, limit=60)
    verdict(9, "query-time slope", slope_ok, f"log-log slope={slope:.3f}, expected {SLOPE_RANGE}",
            elapsed=elapsed, limit=60, soft=os.environ.get(STRICT_ENV) != "1")


def _pipeline(workdir: Path) -> bytes:
    a, b = workdir / "a.gsk", workdir / "b.gsk"
    moved, merged = workdir / "b_moved.gsk", workdir / "merged.gsk"
    steps = [
        ["build", FIXTURES / "graph_a.txt", "--d", "256", "--seed", "11", "--out", a],
        ["build", FIXTURES / "graph_b.txt", "--d", "256", "--seed", "12", "--out", b],
        ["translate", b, "--seed", "11", "--labels", FIXTURES / "labels.txt", "--out", moved],
        ["merge", a, moved, "--out", merged],
    ]
    for argv in steps:
        assert cli_main([str(x) for x in argv]) == 0
    return merged.read_bytes()


def test_criterion_10_cli_pipeline(tmp_path, capsys):
    start = time.perf_counter()
    first, second = tmp_path / "run1", tmp_path / "run2"
    first.mkdir()
    second.mkdir()
    bytes1 = _pipeline(first)
    bytes2 = _pipeline(second)

    spec_a, spec_b = CodebookSpec(seed=11, dimension=256), CodebookSpec(seed=12, dimension=256)
    ga, gb = read_edge_list(FIXTURES / "graph_a.txt"), read_edge_list(FIXTURES / "graph_b.txt")
    labels = read_label_set(FIXTURES / "labels.txt")
    library = build_sketch(ga, spec_a) + build_sketch(gb, spec_b).translate(spec_a, labels)

    queries = ga.edges[:5] + gb.edges[:5] + [("1", "39"), ("39", "1")]
    capsys.readouterr()
    mismatches = 0
    for s, t in queries:
        code = cli_main(["query", str(first / "merged.gsk"), s, t])
        printed_score, printed_decision = capsys.readouterr().out.split()
        expected = library.query_edge(s, t)
        mismatches += printed_score != repr(expected.score)
        mismatches += printed_decision != ("true" if expected.decision else "false")
        mismatches += code != (0 if expected.decision else 1)

    ok = bytes1 == bytes2 == sketch_to_bytes(library) and load_sketch(first / "merged.gsk") == library and not mismatches
    verdict(10, "end-to-end CLI", ok,
            f"file bytes identical across runs={bytes1 == bytes2}, "
            f"equal to library={bytes1 == sketch_to_bytes(library)}, query mismatches={mismatches}",
            elapsed=time.perf_counter() - start, limit=5)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
