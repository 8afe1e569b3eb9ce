"""PTGOSPA: the metric between sets of Bernoulli-density time sequences.

Builds one cost matrix per time step from the two sequence sets, hands the
stack to a solver (exact DP or LP relaxation), and attributes the optimal
assignment weights to a five-way decomposition per step:

* expected localization error of properly detected objects,
* existence-probability mismatch of properly detected objects,
* expected missed detection error,
* expected false detection error,
* track switch error between consecutive steps.

Cells where both sequences are alive and the base distance is below the
cut-off are "properly detected" (the T1 category); at or beyond the cut-off
the same pairing is charged, exactly, as a missed plus a false detection
(T4).  TGOSPA is the degenerate case with unit existence and Dirac
densities, obtained here by lifting point trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .assignment import DEFAULT_STATE_CAP, SolverSolution, solve_exact_dp, solve_lp
from .basemetric import BaseMetricKind, base_distance
from .errors import DomainError
from .gospa import _bernoulli_pair_cost
from .types import MetricParams, SequenceSet, lift_ground_truth, tau

__all__ = [
    "StepDecomposition",
    "MetricReport",
    "HypothesisMixture",
    "build_cost_matrix",
    "ptgospa",
    "tgospa",
    "weighted_ptgospa",
]

SolverName = Literal["exact", "lp"]


@dataclass(frozen=True)
class StepDecomposition:
    """Per-step error components, all stored as p-th-power costs.

    ``switch_to_next`` is the switch cost from this step to the next one and
    is None at the final step.
    """

    expected_localization: float
    existence_mismatch: float
    expected_missed: float
    expected_false: float
    switch_to_next: float | None

    @property
    def step_cost(self) -> float:
        """Sum of this step's p-th-power components, switch included."""
        return (
            self.expected_localization
            + self.existence_mismatch
            + self.expected_missed
            + self.expected_false
            + (self.switch_to_next or 0.0)
        )


@dataclass(frozen=True)
class MetricReport:
    """Metric value, per-step decomposition and optimal assignment weights."""

    total: float
    per_step: tuple[StepDecomposition, ...]
    weights: tuple[np.ndarray, ...]
    solver_kind: str


@dataclass(frozen=True)
class HypothesisMixture:
    """Weighted global hypotheses; weights must sum to one."""

    hypotheses: tuple[tuple[float, SequenceSet], ...]

    def __post_init__(self) -> None:
        hyps = tuple((float(w), s) for w, s in self.hypotheses)
        if not hyps:
            raise DomainError("a mixture must contain at least one hypothesis")
        for w, s in hyps:
            if not np.isfinite(w) or w <= 0:
                raise DomainError(f"hypothesis weights must be > 0, got {w!r}")
            if not isinstance(s, SequenceSet):
                raise DomainError("hypothesis estimates must be SequenceSet values")
        total = sum(w for w, _ in hyps)
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"hypothesis weights must sum to 1, got {total!r}")
        object.__setattr__(self, "hypotheses", hyps)


@dataclass(frozen=True)
class _StepData:
    """Everything needed to price and decompose one time step."""

    d: np.ndarray  # (nx+1, ny+1) cost matrix
    alive_x: np.ndarray
    alive_y: np.ndarray
    rx: np.ndarray  # existence, 0 where dead
    ry: np.ndarray
    db: np.ndarray  # base distances, +inf unless both alive


def _check_windows(truth: SequenceSet, estimate: SequenceSet) -> None:
    if truth.window_length != estimate.window_length:
        raise DomainError(
            f"window mismatch: truth has K={truth.window_length}, "
            f"estimate has K={estimate.window_length}"
        )
    dx, dy = truth.dim, estimate.dim
    if dx is not None and dy is not None and dx != dy:
        raise DomainError(f"state dimension mismatch: {dx} vs {dy}")


def _step_data(
    truth: SequenceSet,
    estimate: SequenceSet,
    k: int,
    params: MetricParams,
    kind: BaseMetricKind,
) -> _StepData:
    nx, ny = len(truth), len(estimate)
    half_cp = params.miss_cost
    bx = [tau(s, k, truth.window_length) for s in truth.sequences]
    by = [tau(s, k, estimate.window_length) for s in estimate.sequences]
    alive_x = np.array([b is not None for b in bx], dtype=bool)
    alive_y = np.array([b is not None for b in by], dtype=bool)
    rx = np.array([b.existence if b is not None else 0.0 for b in bx])
    ry = np.array([b.existence if b is not None else 0.0 for b in by])

    d = np.zeros((nx + 1, ny + 1))
    db = np.full((nx, ny), np.inf)
    for i in range(nx):
        for j in range(ny):
            if bx[i] is None and by[j] is None:
                continue
            if bx[i] is None:
                d[i, j] = ry[j] * half_cp
            elif by[j] is None:
                d[i, j] = rx[i] * half_cp
            else:
                db[i, j] = base_distance(kind, bx[i].density, by[j].density)
                if db[i, j] < params.c:
                    d[i, j] = _bernoulli_pair_cost(rx[i], ry[j], db[i, j], params)
                else:
                    d[i, j] = (rx[i] + ry[j]) * half_cp
    d[:nx, ny] = rx * half_cp
    d[nx, :ny] = ry * half_cp
    return _StepData(d=d, alive_x=alive_x, alive_y=alive_y, rx=rx, ry=ry, db=db)


def build_cost_matrix(
    truth: SequenceSet,
    estimate: SequenceSet,
    k: int,
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
) -> np.ndarray:
    """The (n_x+1) x (n_y+1) per-step cost matrix at time step ``k``."""
    _check_windows(truth, estimate)
    if not 1 <= int(k) <= truth.window_length:
        raise DomainError(f"time step {k} outside window 1..{truth.window_length}")
    return _step_data(truth, estimate, int(k), params, kind).d


def _decompose(
    steps: list[_StepData],
    weights: tuple[np.ndarray, ...],
    params: MetricParams,
) -> list[StepDecomposition]:
    half_cp = params.miss_cost
    gamma_p = params.gamma**params.p
    out = []
    K = len(steps)
    for k, (sd, w) in enumerate(zip(steps, weights)):
        nx, ny = sd.rx.size, sd.ry.size
        loc = mismatch = missed = false = 0.0
        for i in range(nx):
            for j in range(ny):
                wij = w[i, j]
                if wij == 0.0:
                    continue
                if sd.alive_x[i] and sd.alive_y[j]:
                    if sd.db[i, j] < params.c:
                        loc += min(sd.rx[i], sd.ry[j]) * sd.db[i, j] ** params.p * wij
                        mismatch += abs(sd.rx[i] - sd.ry[j]) * half_cp * wij
                    else:
                        missed += sd.rx[i] * half_cp * wij
                        false += sd.ry[j] * half_cp * wij
                elif sd.alive_x[i]:
                    missed += sd.rx[i] * half_cp * wij
                elif sd.alive_y[j]:
                    false += sd.ry[j] * half_cp * wij
        missed += float((sd.rx * half_cp * w[:nx, ny]).sum())
        false += float((sd.ry * half_cp * w[nx, :ny]).sum())
        switch = None
        if k < K - 1:
            nxt = weights[k + 1]
            switch = 0.5 * gamma_p * float(np.abs(w[:nx, :ny] - nxt[:nx, :ny]).sum())
        out.append(StepDecomposition(loc, mismatch, missed, false, switch))
    return out


def ptgospa(
    truth: SequenceSet,
    estimate: SequenceSet,
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
    solver: SolverName = "lp",
    state_cap: int = DEFAULT_STATE_CAP,
) -> MetricReport:
    """PTGOSPA between a truth and an estimate sequence set.

    The reported total is the 1/p power of the summed decomposition, so
    ``total**p`` always equals the sum of all per-step components.
    """
    _check_windows(truth, estimate)
    K = truth.window_length
    steps = [_step_data(truth, estimate, k, params, kind) for k in range(1, K + 1)]
    costs = [sd.d for sd in steps]
    if solver == "exact":
        solution = solve_exact_dp(costs, params.gamma, params.p, state_cap=state_cap)
    elif solver == "lp":
        solution = solve_lp(costs, params.gamma, params.p)
    else:
        raise DomainError(f"unknown solver {solver!r}; expected 'exact' or 'lp'")
    per_step = _decompose(steps, solution.weights, params)
    total_p = sum(s.step_cost for s in per_step)
    report = MetricReport(
        total=total_p ** (1.0 / params.p),
        per_step=tuple(per_step),
        weights=solution.weights,
        solver_kind=solver,
    )
    return report


def tgospa(
    truth_trajectories: Iterable[tuple[int, Sequence[Sequence[float]]]],
    estimate_trajectories: Iterable[tuple[int, Sequence[Sequence[float]]]],
    window_length: int,
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
    solver: SolverName = "lp",
    state_cap: int = DEFAULT_STATE_CAP,
) -> MetricReport:
    """TGOSPA between sets of point trajectories.

    Both inputs are lifted to unit-existence Dirac sequences, which makes
    the existence-mismatch component identically zero.
    """
    truth = lift_ground_truth(truth_trajectories, window_length)
    estimate = lift_ground_truth(estimate_trajectories, window_length)
    return ptgospa(truth, estimate, params, kind=kind, solver=solver, state_cap=state_cap)


def weighted_ptgospa(
    truth: SequenceSet,
    mixture: HypothesisMixture,
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
    solver: SolverName = "lp",
    state_cap: int = DEFAULT_STATE_CAP,
) -> float:
    """Hypothesis-weighted sum of PTGOSPA totals (not itself a metric)."""
    return float(
        sum(
            w * ptgospa(truth, est, params, kind=kind, solver=solver, state_cap=state_cap).total
            for w, est in mixture.hypotheses
        )
    )
