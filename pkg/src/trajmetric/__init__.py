"""Metrics for multi-object tracking evaluation over sets of Bernoulli
sequence estimates: GOSPA, PGOSPA, TGOSPA and PTGOSPA (exact and
LP-relaxed), with a synthetic scenario generator, Monte Carlo aggregation,
an HTTP service and a CLI."""

__version__ = "0.1.0"

from .assignment import (
    DEFAULT_STATE_CAP,
    SolverSolution,
    count_assignment_vectors,
    enumerate_assignment_vectors,
    solve_exact_dp,
    solve_lp,
    switch_cost,
)
from .basemetric import BaseMetricKind, base_distance, wasserstein2
from .errors import CapacityError, DomainError, SolverError, TrajMetricError
from .gospa import (
    GospaReport,
    MultiBernoulli,
    PgospaReport,
    StateSet,
    gospa,
    pgospa,
    pgospa_bernoulli,
)
from .ptgospa import (
    HypothesisMixture,
    MetricReport,
    StepDecomposition,
    build_cost_matrix,
    ptgospa,
    tgospa,
    weighted_ptgospa,
)
from .scenario import (
    AggregateSeries,
    DecayAfterDeath,
    HoldHigh,
    RunSeries,
    ScenarioConfig,
    aggregate_rms,
    default_scenario,
    generate_estimates,
    generate_truth,
    run_series,
)
from .types import (
    BernoulliDensity,
    BernoulliSequence,
    DiracDensity,
    GaussianDensity,
    MetricParams,
    SequenceSet,
    lift_ground_truth,
    tau,
)

__all__ = [
    "__version__",
    "TrajMetricError",
    "DomainError",
    "CapacityError",
    "SolverError",
    "BaseMetricKind",
    "base_distance",
    "wasserstein2",
    "GaussianDensity",
    "DiracDensity",
    "BernoulliDensity",
    "BernoulliSequence",
    "SequenceSet",
    "MetricParams",
    "tau",
    "lift_ground_truth",
    "StateSet",
    "MultiBernoulli",
    "GospaReport",
    "PgospaReport",
    "gospa",
    "pgospa",
    "pgospa_bernoulli",
    "SolverSolution",
    "solve_exact_dp",
    "solve_lp",
    "switch_cost",
    "count_assignment_vectors",
    "enumerate_assignment_vectors",
    "DEFAULT_STATE_CAP",
    "StepDecomposition",
    "MetricReport",
    "HypothesisMixture",
    "build_cost_matrix",
    "ptgospa",
    "tgospa",
    "weighted_ptgospa",
    "ScenarioConfig",
    "HoldHigh",
    "DecayAfterDeath",
    "RunSeries",
    "AggregateSeries",
    "generate_truth",
    "generate_estimates",
    "run_series",
    "aggregate_rms",
    "default_scenario",
]
