"""Single-time-step metrics: GOSPA between finite state sets and PGOSPA
between multi-Bernoulli parameterizations, each with its error decomposition.

Both are solved as a 2-D assignment on an augmented square cost matrix in
which every element owns a dummy partner carrying its unassignment cost.
Among cost-optimal assignments the lexicographically smallest assignment
vector (unassigned sorts first) is reported, so reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .basemetric import BaseMetricKind, base_distance
from .errors import DomainError
from .types import BernoulliDensity, DiracDensity, MetricParams, as_state_vector

__all__ = [
    "StateSet",
    "MultiBernoulli",
    "GospaReport",
    "PgospaReport",
    "gospa",
    "pgospa",
    "pgospa_bernoulli",
    "solve_augmented_assignment",
]


@dataclass(frozen=True)
class StateSet:
    """A finite set of state vectors, all of one dimension."""

    states: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        states = tuple(as_state_vector(s) for s in self.states)
        if len({s.size for s in states}) > 1:
            raise DomainError("all states in a set must share one dimension")
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class MultiBernoulli:
    """A multi-Bernoulli density given by its list of Bernoulli components."""

    components: tuple[BernoulliDensity, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        for b in comps:
            if not isinstance(b, BernoulliDensity):
                raise DomainError("components must be BernoulliDensity values")
        if len({b.dim for b in comps}) > 1:
            raise DomainError("all components must share one state dimension")
        object.__setattr__(self, "components", comps)

    def __len__(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class GospaReport:
    """GOSPA value and decomposition; components are p-th-power costs."""

    total: float
    localization: float
    missed: float
    false_det: float
    assignment: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PgospaReport:
    """PGOSPA value and decomposition; components are p-th-power costs."""

    total: float
    expected_localization: float
    existence_mismatch: float
    expected_missed: float
    expected_false: float
    assignment: tuple[tuple[int, int], ...]


def _augmented_total(
    pair: np.ndarray, row_un: np.ndarray, col_un: np.ndarray
) -> float:
    """Optimal cost of matching rows to columns with per-element opt-outs."""
    nx, ny = pair.shape
    if nx == 0 and ny == 0:
        return 0.0
    if nx == 0:
        return float(col_un.sum())
    if ny == 0:
        return float(row_un.sum())
    big = float(pair.sum() + row_un.sum() + col_un.sum()) + 1.0
    m = np.full((nx + ny, ny + nx), big)
    m[:nx, :ny] = pair
    m[np.arange(nx), ny + np.arange(nx)] = row_un
    m[nx + np.arange(ny), np.arange(ny)] = col_un
    m[nx:, ny:] = 0.0
    rows, cols = linear_sum_assignment(m)
    return float(m[rows, cols].sum())


def solve_augmented_assignment(
    pair: np.ndarray, row_un: np.ndarray, col_un: np.ndarray
) -> tuple[float, np.ndarray]:
    """Optimal partial matching with unassignment costs.

    Returns ``(total, pi)`` where ``pi[i] == j + 1`` assigns row ``i`` to
    column ``j`` and ``pi[i] == 0`` leaves it unassigned.  Among optimal
    solutions the lexicographically smallest ``pi`` is returned, found by
    fixing entries greedily and re-solving the remainder.
    """
    pair = np.asarray(pair, dtype=float)
    row_un = np.asarray(row_un, dtype=float)
    col_un = np.asarray(col_un, dtype=float)
    nx, ny = pair.shape
    optimum = _augmented_total(pair, row_un, col_un)
    tol = 1e-9 * max(1.0, abs(optimum))

    pi = np.zeros(nx, dtype=int)
    available = list(range(ny))
    fixed = 0.0
    for i in range(nx):
        chosen = None
        for v in [0] + [j + 1 for j in available]:
            cost_v = row_un[i] if v == 0 else pair[i, v - 1]
            rem_cols = [j for j in available if j != v - 1]
            rest = _augmented_total(
                pair[np.ix_(range(i + 1, nx), rem_cols)],
                row_un[i + 1 :],
                col_un[rem_cols],
            )
            if fixed + cost_v + rest <= optimum + tol:
                chosen = v
                fixed += cost_v
                if v > 0:
                    available.remove(v - 1)
                break
        if chosen is None:  # cannot happen: opting out is always feasible
            raise AssertionError("no optimal completion found")
        pi[i] = chosen
    return optimum, pi


def _as_state_tuple(x: Union[StateSet, Iterable[Sequence[float]]]) -> StateSet:
    if isinstance(x, StateSet):
        return x
    return StateSet(states=tuple(x))


def gospa(
    x: Union[StateSet, Iterable[Sequence[float]]],
    y: Union[StateSet, Iterable[Sequence[float]]],
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
) -> GospaReport:
    """GOSPA (alpha = 2) between two finite sets of states.

    Pair cost is ``min(d_b, c)^p`` and every unassigned element costs
    ``c^p / 2``; the reported assignment keeps only pairs with ``d_b < c``.
    """
    xs, ys = _as_state_tuple(x), _as_state_tuple(y)
    if xs.states and ys.states and xs.states[0].size != ys.states[0].size:
        raise DomainError("state dimension mismatch between the two sets")
    nx, ny = len(xs), len(ys)
    c_p = params.c**params.p
    db = np.zeros((nx, ny))
    for i, a in enumerate(xs.states):
        for j, b in enumerate(ys.states):
            db[i, j] = base_distance(kind, DiracDensity(a), DiracDensity(b))
    pair = np.minimum(db, params.c) ** params.p
    row_un = np.full(nx, 0.5 * c_p)
    col_un = np.full(ny, 0.5 * c_p)
    _, pi = solve_augmented_assignment(pair, row_un, col_un)

    matched = [(i, pi[i] - 1) for i in range(nx) if pi[i] > 0 and db[i, pi[i] - 1] < params.c]
    loc = float(sum(pair[i, j] for i, j in matched))
    missed = 0.5 * c_p * (nx - len(matched))
    false_det = 0.5 * c_p * (ny - len(matched))
    total = (loc + missed + false_det) ** (1.0 / params.p)
    return GospaReport(total, loc, missed, false_det, tuple(matched))


def pgospa_bernoulli(
    bx: BernoulliDensity,
    by: BernoulliDensity,
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
) -> float:
    """PGOSPA between two single-Bernoulli densities (closed form)."""
    db = base_distance(kind, bx.density, by.density)
    return float(_bernoulli_pair_cost(bx.existence, by.existence, db, params) ** (1.0 / params.p))


def _bernoulli_pair_cost(rx: float, ry: float, db: float, params: MetricParams) -> float:
    """p-th-power cost of pairing two Bernoulli components."""
    c_p = params.c**params.p
    return min(rx, ry) * min(db, params.c) ** params.p + abs(rx - ry) * 0.5 * c_p


def pgospa(
    fx: MultiBernoulli,
    fy: MultiBernoulli,
    params: MetricParams,
    kind: BaseMetricKind = BaseMetricKind.WASSERSTEIN2,
) -> PgospaReport:
    """PGOSPA (alpha = 2) between two multi-Bernoulli densities.

    Unassigning component ``i`` costs ``r_i c^p / 2``, so a pair whose cost
    reaches the sum of its two opt-outs is never forced together.
    """
    if fx.components and fy.components and fx.components[0].dim != fy.components[0].dim:
        raise DomainError("state dimension mismatch between the two densities")
    nx, ny = len(fx), len(fy)
    c_p = params.c**params.p
    rx = np.array([b.existence for b in fx.components])
    ry = np.array([b.existence for b in fy.components])
    db = np.zeros((nx, ny))
    pair = np.zeros((nx, ny))
    for i, a in enumerate(fx.components):
        for j, b in enumerate(fy.components):
            db[i, j] = base_distance(kind, a.density, b.density)
            pair[i, j] = _bernoulli_pair_cost(rx[i], ry[j], db[i, j], params)
    _, pi = solve_augmented_assignment(pair, 0.5 * c_p * rx, 0.5 * c_p * ry)

    eloc = emis = emissed = efalse = 0.0
    matched: list[tuple[int, int]] = []
    assigned_cols = set()
    for i in range(nx):
        j = pi[i] - 1
        if pi[i] > 0 and db[i, j] < params.c:
            matched.append((i, j))
            assigned_cols.add(j)
            eloc += min(rx[i], ry[j]) * db[i, j] ** params.p
            emis += abs(rx[i] - ry[j]) * 0.5 * c_p
        else:
            # Unassigned, or assigned at d_b >= c: expected missed plus, for
            # the latter, the partner's expected false detection.
            emissed += rx[i] * 0.5 * c_p
            if pi[i] > 0:
                assigned_cols.add(j)
                efalse += ry[j] * 0.5 * c_p
    for j in range(ny):
        if j not in assigned_cols:
            efalse += ry[j] * 0.5 * c_p
    total = (eloc + emis + emissed + efalse) ** (1.0 / params.p)
    return PgospaReport(total, eloc, emis, emissed, efalse, tuple(matched))
