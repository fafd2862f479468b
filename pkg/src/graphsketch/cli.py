"""Command-line interface: ``graphsketch <subcommand> ...``.

Exit codes: 0 success or passing verdict, 1 absent edge or failed verdict,
2 usage error, 3 incompatible codebooks, 4 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import sys

from . import storage
from .baseline import degree_stats
from .codebook import CodebookSpec
from .exceptions import (
    EdgeListParseError,
    IncompatibleCodebookError,
    InfeasibleGraphError,
    InvalidSpecError,
    SketchFormatError,
)
from .sketch import build_sketch, recommend_dimension

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCOMPATIBLE = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {value}")
    return value


def _epsilon(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 2.0:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 2), got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphsketch", description="Random-projection graph sketches.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="sketch an edge-list file")
    p.add_argument("edges")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--keep-duplicates", action="store_true", help="superpose repeated edges")
    p.add_argument("--out", required=True)

    p = sub.add_parser("query", help="score one edge; exit 0 if present, 1 if absent")
    p.add_argument("sketch")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--threshold", type=_unit_interval, default=0.5)

    p = sub.add_parser("merge", help="sum sketches that share a codebook")
    p.add_argument("sketches", nargs="+")
    p.add_argument("--out", required=True)

    p = sub.add_parser("translate", help="move a sketch to another codebook over a label set")
    p.add_argument("sketch")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--d", type=_positive_int, help="target dimension (default: unchanged)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("restrict", help="project a sketch onto a vertex subset")
    p.add_argument("sketch")
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compose", help="compose two sketches, or raise one to a power")
    p.add_argument("sketch")
    p.add_argument("other", nargs="?")
    p.add_argument("--order", type=_positive_int, help="power m when no second sketch is given")
    p.add_argument("--out", required=True)

    from .harness.report import EXPERIMENTS

    p = sub.add_parser("validate", help="run a validation experiment; exit 0 iff it passes")
    p.add_argument("experiment", choices=[e for e in EXPERIMENTS if e != "bench"])
    _experiment_flags(p)

    p = sub.add_parser("bench", help="timing benchmarks (informational)")
    p.add_argument("--d", type=_positive_int, action="append", help="grid point; repeat for several")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--trials", type=_positive_int, help="timing repeats per measurement")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("recommend", help="print a sketch dimension for k edges")
    p.add_argument("k", type=_positive_int)
    p.add_argument("--order", type=_positive_int, default=1)
    p.add_argument("--safety", type=_positive_float, default=10.0)
    return parser


def _experiment_flags(p):
    p.add_argument("--d", type=_positive_int)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--epsilon", type=_epsilon, action="append", help="repeat for a grid")
    p.add_argument("--threshold", type=_unit_interval)
    p.add_argument("--order", type=_positive_int, help="path order m (m_order experiment)")
    p.add_argument("--k", type=_positive_int, help="edge count")
    p.add_argument("--n", type=_positive_int, help="vertex pool size")
    p.add_argument("--l", type=_positive_int, help="degree parameter")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")


# --------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    graph = storage.read_edge_list(args.edges, keep_duplicates=args.keep_duplicates)
    s = build_sketch(graph, CodebookSpec(seed=args.seed, dimension=args.d))
    storage.save_sketch(s, storage.ensure_parent(args.out))
    stats = degree_stats(graph)
    print(f"edges={graph.n_edges} d={args.d} max_degree={stats.max_total} duplicates={graph.n_duplicates}")
    return EXIT_OK


def cmd_query(args) -> int:
    result = storage.load_sketch(args.sketch).query_edge(args.source, args.target, args.threshold)
    print(f"{result.score!r}\t{'true' if result.decision else 'false'}")
    return EXIT_OK if result.decision else EXIT_NEGATIVE


def cmd_merge(args) -> int:
    sketches = [storage.load_sketch(path) for path in args.sketches]
    total = sketches[0]
    for path, s in zip(args.sketches[1:], sketches[1:]):
        if s.spec != total.spec:
            raise IncompatibleCodebookError(
                f"{path} uses codebook (seed={s.spec.seed}, d={s.dimension}) but {args.sketches[0]} uses "
                f"(seed={total.spec.seed}, d={total.dimension}); run 'graphsketch translate' first")
        total = total + s
    storage.save_sketch(total, storage.ensure_parent(args.out))
    print(f"merged={len(sketches)} edge_count={total.edge_count}")
    return EXIT_OK


def cmd_translate(args) -> int:
    s = storage.load_sketch(args.sketch)
    labels = storage.read_label_set(args.labels)
    if not labels:
        raise UsageError("label set is empty")
    target = CodebookSpec(seed=args.seed, dimension=args.d or s.dimension)
    storage.save_sketch(s.translate(target, labels), storage.ensure_parent(args.out))
    print(f"labels={len(labels)} seed={target.seed} d={target.dimension}")
    return EXIT_OK


def cmd_restrict(args) -> int:
    s = storage.load_sketch(args.sketch)
    labels = storage.read_label_set(args.labels)
    if not labels:
        raise UsageError("label set is empty")
    storage.save_sketch(s.restrict(labels), storage.ensure_parent(args.out))
    print(f"labels={len(labels)}")
    return EXIT_OK


def cmd_compose(args) -> int:
    s = storage.load_sketch(args.sketch)
    if args.other is not None:
        if args.order is not None:
            raise UsageError("give either a second sketch or --order, not both")
        result = s.compose(storage.load_sketch(args.other))
    elif args.order is not None:
        result = s.power(args.order)
    else:
        raise UsageError("compose needs a second sketch or --order")
    storage.save_sketch(result, storage.ensure_parent(args.out))
    return EXIT_OK


def _config_from_args(experiment: str, args):
    from .harness import default_config

    overrides = {}
    mapping = {"d": "d", "seed": "seed", "trials": "trials", "threshold": "threshold",
               "k": "k", "n": "n", "l": "l"}
    for flag, field in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if getattr(args, "epsilon", None):
        overrides["epsilons"] = tuple(args.epsilon)
    if getattr(args, "order", None) is not None:
        overrides["m"] = args.order
    return default_config(experiment, **overrides)


def _emit_report(report, args):
    for line in report.summary_lines():
        print(line)
    if args.out:
        storage.write_report(report, storage.ensure_parent(args.out), format=args.format)


def cmd_validate(args) -> int:
    from .harness import run_experiment

    report = run_experiment(_config_from_args(args.experiment, args))
    _emit_report(report, args)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_bench(args) -> int:
    from .harness import default_config, run_benchmarks

    overrides = {"seed": args.seed}
    if args.d:
        overrides["d_grid"] = tuple(args.d)
    if args.trials:
        overrides["repeats"] = args.trials
    report = run_benchmarks(default_config("bench", **overrides))
    _emit_report(report, args)
    return EXIT_OK


def cmd_recommend(args) -> int:
    print(recommend_dimension(args.k, args.order, args.safety))
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "query": cmd_query,
    "merge": cmd_merge,
    "translate": cmd_translate,
    "restrict": cmd_restrict,
    "compose": cmd_compose,
    "validate": cmd_validate,
    "bench": cmd_bench,
    "recommend": cmd_recommend,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except IncompatibleCodebookError as exc:
        print(f"graphsketch: incompatible codebooks: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except (OSError, SketchFormatError, EdgeListParseError) as exc:
        print(f"graphsketch: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, InvalidSpecError, InfeasibleGraphError, ValueError, TypeError) as exc:
        print(f"graphsketch: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
