from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

EXPERIMENTS = ("first_order", "second_order", "m_order", "inner_product", "norm", "jl", "bench")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one validation experiment.

    Fields left as ``None`` are filled in by the experiment from its standard
    scaling (see :func:`graphsketch.harness.default_config`).  ``l`` is the
    degree parameter of the concentration bounds: generated graphs keep every
    vertex's total degree at or below ``l // 2``.
    """

    experiment: str
    k: int | None = None
    n: int | None = None
    l: int | None = None
    m: int = 1
    d: int | None = None
    trials: int = 1000
    epsilons: tuple[float, ...] = (0.25, 0.5)
    seed: int = 0
    threshold: float = 0.5
    max_misclassification: float | None = None
    # inner-product / norm
    n1: int | None = None
    n2: int | None = None
    shared: int | None = None
    disjoint: bool = False
    tolerance: float | None = None
    min_fraction: float | None = None
    # JL
    n_graphs: int | None = None
    failure_prob: float | None = None
    # benchmarks
    d_grid: tuple[int, ...] = ()
    repeats: int = 5

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.d is not None and self.d < 1:
            raise ValueError("d must be >= 1")
        if any(not 0 < e < 2 for e in self.epsilons):
            raise ValueError("epsilon values must lie in (0, 2)")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        object.__setattr__(self, "d_grid", tuple(int(x) for x in self.d_grid))

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["epsilons"] = list(self.epsilons)
        out["d_grid"] = list(self.d_grid)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        data["epsilons"] = tuple(data.get("epsilons", ()))
        data["d_grid"] = tuple(data.get("d_grid", ()))
        return cls(**data)


@dataclass
class ExperimentReport:
    """Outcome of an experiment: empirical tails next to their bounds, statistics and verdicts.

    ``tails`` and ``bounds`` map a series name (e.g. ``"true"``) to one value
    per entry of ``epsilons``.  ``checks`` holds the individual pass/fail
    verdicts; ``passed`` is their conjunction.  Everything except
    ``timings`` is reproducible from the config.
    """

    config: ExperimentConfig
    d: int
    epsilons: list[float] = field(default_factory=list)
    tails: dict[str, list[float]] = field(default_factory=dict)
    bounds: dict[str, list[float]] = field(default_factory=dict)
    statistics: dict[str, float] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    samples: dict[str, list[float]] = field(default_factory=dict)
    informational: bool = False

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "d": self.d,
            "epsilons": list(self.epsilons),
            "tails": {k: list(v) for k, v in self.tails.items()},
            "bounds": {k: list(v) for k, v in self.bounds.items()},
            "statistics": dict(self.statistics),
            "checks": dict(self.checks),
            "passed": self.passed,
            "timings": dict(self.timings),
            "warnings": list(self.warnings),
            "samples": {k: list(v) for k, v in self.samples.items()},
            "informational": self.informational,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            config=ExperimentConfig.from_dict(data["config"]),
            d=data["d"],
            epsilons=list(data.get("epsilons", [])),
            tails={k: list(v) for k, v in data.get("tails", {}).items()},
            bounds={k: list(v) for k, v in data.get("bounds", {}).items()},
            statistics=dict(data.get("statistics", {})),
            checks={k: bool(v) for k, v in data.get("checks", {}).items()},
            timings=dict(data.get("timings", {})),
            warnings=list(data.get("warnings", [])),
            samples={k: list(v) for k, v in data.get("samples", {}).items()},
            informational=bool(data.get("informational", False)),
        )

    def without_timings(self) -> dict:
        out = self.to_dict()
        out.pop("timings")
        return out

    def summary_lines(self) -> list[str]:
        lines = [f"{self.config.experiment}: d={self.d} trials={self.config.trials} "
                 f"{'PASS' if self.passed else 'FAIL'}{' (informational)' if self.informational else ''}"]
        for series, values in self.tails.items():
            bounds = self.bounds.get(series, [float("nan")] * len(values))
            for eps, emp, bnd in zip(self.epsilons, values, bounds):
                lines.append(f"  tail[{series}] eps={eps:g}: empirical={emp:.4f} bound={bnd:.4g}")
        for name, value in self.statistics.items():
            lines.append(f"  {name} = {value:.6g}")
        for name, ok in self.checks.items():
            lines.append(f"  check {name}: {'ok' if ok else 'FAILED'}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return lines
