"""Solvers for the trajectory-level assignment problem over a time window.

Per time step ``k`` the instance is an ``(n_x + 1) x (n_y + 1)`` cost matrix
``D^k`` whose last row/column hold unassignment costs (corner fixed at 0).
Two solvers minimize, in p-th power,

    sum_k trace(D^k^T W^k)
    + (gamma^p / 2) * sum_{k<K} sum_{i<=n_x, j<=n_y} |W^k(i,j) - W^{k+1}(i,j)|

over per-step assignment matrices ``W^k``:

* ``solve_exact_dp`` keeps ``W^k`` binary.  Because the switch term couples
  only consecutive steps, the multidimensional assignment factorizes into a
  shortest path over time whose states are assignment vectors; the DP is
  exact and breaks ties toward the lexicographically smallest vector
  sequence.
* ``solve_lp`` relaxes the binary constraint to ``W^k >= 0`` with unit row
  and column sums, linearizing the absolute values with auxiliary
  variables.  Its optimum is a lower bound of the exact one and coincides
  with it for ``K = 1``.

The LP backend is a narrow wrapper around a dense/sparse linear-programming
routine so an external solver can be substituted in one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import CapacityError, DomainError, SolverError

__all__ = [
    "SolverSolution",
    "count_assignment_vectors",
    "enumerate_assignment_vectors",
    "switch_cost",
    "solve_exact_dp",
    "solve_lp",
    "DEFAULT_STATE_CAP",
]

DEFAULT_STATE_CAP = 2_000_000

# Max float64 cells materialized at once in blocked switch-cost passes.
_BLOCK_CELLS = 4_000_000


@dataclass(frozen=True)
class SolverSolution:
    """Objective in p-th power plus the K optimal assignment matrices."""

    objective_pth_power: float
    weights: tuple[np.ndarray, ...]


def _validate_costs(costs: list[np.ndarray]) -> tuple[int, int, int]:
    if len(costs) < 1:
        raise DomainError("at least one time step of costs is required")
    shape = costs[0].shape
    if len(shape) != 2 or shape[0] < 1 or shape[1] < 1:
        raise DomainError(f"cost matrices must be 2-D with dummy row/column, got {shape}")
    nx, ny = shape[0] - 1, shape[1] - 1
    for k, d in enumerate(costs):
        if d.shape != shape:
            raise DomainError(f"cost matrix {k} has shape {d.shape}, expected {shape}")
        if not np.all(np.isfinite(d)):
            raise DomainError(f"cost matrix {k} contains non-finite entries")
        if float(d.min()) < -1e-12:
            raise DomainError(f"cost matrix {k} contains negative entries")
        if abs(float(d[nx, ny])) > 1e-12:
            raise DomainError(f"cost matrix {k} corner entry must be 0, got {d[nx, ny]!r}")
    return len(costs), nx, ny


def count_assignment_vectors(nx: int, ny: int) -> int:
    """Number of injective-on-nonzero vectors in {0..ny}^nx."""
    return sum(math.comb(nx, m) * math.perm(ny, m) for m in range(min(nx, ny) + 1))


def enumerate_assignment_vectors(nx: int, ny: int) -> np.ndarray:
    """All assignment vectors in lexicographic order, shape (S, nx)."""
    out: list[tuple[int, ...]] = []
    vec = [0] * nx

    def rec(i: int, used: int) -> None:
        if i == nx:
            out.append(tuple(vec))
            return
        vec[i] = 0
        rec(i + 1, used)
        for j in range(1, ny + 1):
            if not used & (1 << j):
                vec[i] = j
                rec(i + 1, used | (1 << j))
        vec[i] = 0

    rec(0, 0)
    return np.array(out, dtype=np.int32).reshape(len(out), nx)


def switch_cost(a: np.ndarray, b: np.ndarray, gamma: float, p: float) -> float:
    """gamma^p times the per-entry switch sum between two assignment vectors.

    An unchanged entry costs 0, a change between two nonzero targets 1, and
    a change involving zero 1/2.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    diff = a != b
    full = diff & (a > 0) & (b > 0)
    return float(gamma) ** float(p) * float(0.5 * diff.sum() + 0.5 * full.sum())


def _switch_block(a_blk: np.ndarray, a_all: np.ndarray, gamma_p: float) -> np.ndarray:
    """Switch costs between each vector in ``a_blk`` and all of ``a_all``."""
    if a_all.shape[1] == 0:
        return np.zeros((a_blk.shape[0], a_all.shape[0]))
    diff = a_blk[:, None, :] != a_all[None, :, :]
    full = diff & (a_blk[:, None, :] > 0) & (a_all[None, :, :] > 0)
    return gamma_p * (0.5 * diff.sum(axis=2) + 0.5 * full.sum(axis=2))


def _node_costs(d: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Cost of every assignment vector under one step's cost matrix."""
    nx = d.shape[0] - 1
    ny = d.shape[1] - 1
    if nx == 0:
        base = float(d[nx, :ny].sum())
        return np.full(vectors.shape[0], base)
    cols = np.where(vectors > 0, vectors - 1, ny)
    picked = d[np.arange(nx)[None, :], cols].sum(axis=1)
    # Unassigned estimate columns pay the dummy-row cost: subtract the
    # assigned ones from the full dummy-row sum.
    dummy_row = d[nx]
    covered = (dummy_row[cols] * (vectors > 0)).sum(axis=1)
    return picked + float(dummy_row[:ny].sum()) - covered


def _vector_to_weight(vec: np.ndarray, nx: int, ny: int) -> np.ndarray:
    w = np.zeros((nx + 1, ny + 1))
    assigned = set()
    for i in range(nx):
        j = int(vec[i])
        if j > 0:
            w[i, j - 1] = 1.0
            assigned.add(j - 1)
        else:
            w[i, ny] = 1.0
    for j in range(ny):
        if j not in assigned:
            w[nx, j] = 1.0
    return w


def solve_exact_dp(
    costs: list[np.ndarray],
    gamma: float,
    p: float,
    state_cap: int = DEFAULT_STATE_CAP,
) -> SolverSolution:
    """Exact minimum over binary assignment-matrix sequences.

    Runs a shortest-path DP over time with assignment vectors as states:
    node cost is the sum of cost-matrix entries selected by the vector and
    edge cost is the switch cost between consecutive vectors.  Memory and
    time grow with the square of the state count, so the state space is
    capped (raise the cap explicitly for bigger instances, or use
    ``solve_lp``).
    """
    K, nx, ny = _validate_costs(costs)
    n_states = count_assignment_vectors(nx, ny)
    if n_states > state_cap:
        raise CapacityError(
            f"assignment-vector state space has {n_states} states, above the cap "
            f"{state_cap}; use the LP solver for instances of this size"
        )
    vectors = enumerate_assignment_vectors(nx, ny)
    gamma_p = float(gamma) ** float(p)
    node = [_node_costs(np.asarray(costs[k], dtype=float), vectors) for k in range(K)]

    # Backward pass: g[s] = best cost of steps k..K-1 given state s at k.
    g = node[K - 1].copy()
    tail: list[np.ndarray] = [g]
    block = max(1, _BLOCK_CELLS // max(n_states * max(nx, 1), 1))
    for k in range(K - 2, -1, -1):
        g_next = tail[-1]
        m = np.empty(n_states)
        for lo in range(0, n_states, block):
            hi = min(lo + block, n_states)
            sw = _switch_block(vectors[lo:hi], vectors, gamma_p)
            m[lo:hi] = (sw + g_next[None, :]).min(axis=1)
        tail.append(node[k] + m)
    tail.reverse()  # tail[k][s] = cost-to-go from step k in state s

    # Forward reconstruction, lexicographically smallest optimal sequence.
    objective = float(tail[0].min())
    s = int(np.argmin(tail[0]))
    path = [s]
    for k in range(1, K):
        row = _switch_block(vectors[s : s + 1], vectors, gamma_p)[0] + tail[k]
        s = int(np.argmin(row))
        path.append(s)
    weights = tuple(_vector_to_weight(vectors[s], nx, ny) for s in path)
    return SolverSolution(objective_pth_power=objective, weights=weights)


def _solve_linear_program(
    c: np.ndarray,
    a_ub: sp.csr_matrix | None,
    b_ub: np.ndarray | None,
    a_eq: sp.csr_matrix | None,
    b_eq: np.ndarray | None,
    bounds: np.ndarray,
) -> np.ndarray:
    """Narrow LP interface; swap the backend here to use another solver."""
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs-ds",
        options={
            "primal_feasibility_tolerance": 1e-10,
            "dual_feasibility_tolerance": 1e-10,
        },
    )
    if not res.success:
        raise SolverError(f"linear program failed with status {res.status}: {res.message}")
    return np.asarray(res.x, dtype=float)


def solve_lp(costs: list[np.ndarray], gamma: float, p: float) -> SolverSolution:
    """LP relaxation over non-negative assignment matrices with unit sums.

    Absolute switch terms are linearized with one auxiliary variable per
    real (i, j) cell and consecutive step pair.  The reported objective is
    recomputed from the returned weights, so it is consistent with any
    downstream decomposition of them.
    """
    K, nx, ny = _validate_costs(costs)
    costs = [np.asarray(d, dtype=float) for d in costs]
    gamma_p = float(gamma) ** float(p)

    if nx == 0 or ny == 0:
        # Row/column sums force the unique feasible point.
        weights = []
        total = 0.0
        for d in costs:
            w = np.zeros((nx + 1, ny + 1))
            w[:nx, ny] = 1.0
            w[nx, :ny] = 1.0
            weights.append(w)
            total += float((d * w).sum())
        return SolverSolution(objective_pth_power=total, weights=tuple(weights))

    cell = (nx + 1) * (ny + 1)
    m = nx * ny
    n_w = K * cell
    n_e = (K - 1) * m
    n_var = n_w + n_e

    obj = np.concatenate([np.concatenate([d.ravel() for d in costs]), np.full(n_e, 0.5 * gamma_p)])
    bounds = np.zeros((n_var, 2))
    bounds[:, 1] = np.inf
    bounds[np.arange(K) * cell + nx * (ny + 1) + ny, 1] = 0.0  # corner cells

    # Unit row sums (real rows) and column sums (real columns) per step.
    row_cells = np.arange(nx * (ny + 1))  # cells of the nx real rows
    col_cells = (np.arange(nx + 1)[:, None] * (ny + 1) + np.arange(ny)[None, :]).ravel()
    eq_rows_k = np.concatenate(
        [np.repeat(np.arange(nx), ny + 1), nx + np.tile(np.arange(ny), nx + 1)]
    )
    eq_cols_k = np.concatenate([row_cells, col_cells])
    eq_rows = (np.arange(K)[:, None] * (nx + ny) + eq_rows_k[None, :]).ravel()
    eq_cols = (np.arange(K)[:, None] * cell + eq_cols_k[None, :]).ravel()
    a_eq = sp.csr_matrix(
        (np.ones(eq_rows.size), (eq_rows, eq_cols)), shape=(K * (nx + ny), n_var)
    )
    b_eq = np.ones(K * (nx + ny))

    a_ub = None
    b_ub = None
    if n_e:
        # Per real cell and step pair: e >= +(w_k - w_{k+1}) and e >= -(...).
        real = (np.arange(nx)[:, None] * (ny + 1) + np.arange(ny)[None, :]).ravel()
        k_arr = np.repeat(np.arange(K - 1), m)
        w_k = k_arr * cell + np.tile(real, K - 1)
        w_k1 = w_k + cell
        e_col = n_w + np.arange(n_e)
        plus = 2 * np.arange(n_e)  # row of the +(w_k - w_{k+1}) constraint
        rows = np.concatenate([plus, plus, plus, plus + 1, plus + 1, plus + 1])
        cols = np.concatenate([w_k, w_k1, e_col, w_k, w_k1, e_col])
        ones = np.ones(n_e)
        vals = np.concatenate([ones, -ones, -ones, -ones, ones, -ones])
        a_ub = sp.csr_matrix((vals, (rows, cols)), shape=(2 * n_e, n_var))
        b_ub = np.zeros(2 * n_e)

    x = _solve_linear_program(obj, a_ub, b_ub, a_eq, b_eq, bounds)
    weights = []
    for k in range(K):
        w = x[k * cell : (k + 1) * cell].reshape(nx + 1, ny + 1)
        w = np.clip(w, 0.0, None)
        w[nx, ny] = 0.0
        weights.append(w)
    total = sum(float((d * w).sum()) for d, w in zip(costs, weights))
    for k in range(K - 1):
        total += 0.5 * gamma_p * float(
            np.abs(weights[k][:nx, :ny] - weights[k + 1][:nx, :ny]).sum()
        )
    return SolverSolution(objective_pth_power=float(total), weights=tuple(weights))
