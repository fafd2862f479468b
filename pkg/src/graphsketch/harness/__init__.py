"""Validation experiments and benchmarks for graph sketches."""

from .benchmarks import loglog_slope, median_time, run_benchmarks
from .bounds import (
    BoundWarning,
    bernstein_bound_first_order,
    bernstein_bound_second_order,
    bernstein_tail,
    first_order_variance,
    inner_product_bound,
    inner_product_variance,
    jl_dimension,
    jl_failure_bound,
    m_order_noise_variance,
    second_order_variance,
    self_norm_bound,
    tail_slack,
)
from .experiments import (
    default_config,
    run_experiment,
    run_first_order_experiment,
    run_inner_product_experiment,
    run_jl_experiment,
    run_m_order_experiment,
    run_norm_experiment,
    run_second_order_experiment,
)
from .report import EXPERIMENTS, ExperimentConfig, ExperimentReport

__all__ = [
    "EXPERIMENTS",
    "BoundWarning",
    "ExperimentConfig",
    "ExperimentReport",
    "bernstein_bound_first_order",
    "bernstein_bound_second_order",
    "bernstein_tail",
    "default_config",
    "first_order_variance",
    "inner_product_bound",
    "inner_product_variance",
    "jl_dimension",
    "jl_failure_bound",
    "loglog_slope",
    "m_order_noise_variance",
    "median_time",
    "run_benchmarks",
    "run_experiment",
    "run_first_order_experiment",
    "run_inner_product_experiment",
    "run_jl_experiment",
    "run_m_order_experiment",
    "run_norm_experiment",
    "run_second_order_experiment",
    "second_order_variance",
    "self_norm_bound",
    "tail_slack",
]
