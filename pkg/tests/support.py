"""Shared random-instance generators and independent brute-force oracles.

The oracles evaluate the metric definitions directly (enumeration over
assignment sets / assignment-vector sequences) and deliberately share no
code with the solvers they check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from trajmetric import (
    BaseMetricKind,
    BernoulliDensity,
    BernoulliSequence,
    DiracDensity,
    GaussianDensity,
    MetricParams,
    MultiBernoulli,
    SequenceSet,
    base_distance,
)

# ---------------------------------------------------------------------------
# random instances


def random_density(rng: np.random.Generator, dim: int, spread: float = 10.0):
    mean = rng.uniform(-spread, spread, size=dim)
    if rng.random() < 0.5:
        return DiracDensity(mean)
    a = rng.uniform(-1.0, 1.0, size=(dim, dim))
    cov = a @ a.T + 0.1 * np.eye(dim)
    return GaussianDensity(mean, cov)


def random_bernoulli(rng: np.random.Generator, dim: int, spread: float = 10.0) -> BernoulliDensity:
    return BernoulliDensity(float(rng.uniform(0.05, 1.0)), random_density(rng, dim, spread))


def random_sequence(rng: np.random.Generator, window: int, dim: int, spread: float = 10.0) -> BernoulliSequence:
    start = int(rng.integers(1, window + 1))
    length = int(rng.integers(1, window - start + 2))
    return BernoulliSequence(
        start, tuple(random_bernoulli(rng, dim, spread) for _ in range(length))
    )


def random_sequence_set(
    rng: np.random.Generator,
    window: int,
    dim: int = 2,
    max_sequences: int = 3,
    spread: float = 10.0,
) -> SequenceSet:
    n = int(rng.integers(0, max_sequences + 1))
    return SequenceSet(window, tuple(random_sequence(rng, window, dim, spread) for _ in range(n)))


def random_multi_bernoulli(rng: np.random.Generator, dim: int = 2, max_components: int = 4) -> MultiBernoulli:
    n = int(rng.integers(0, max_components + 1))
    return MultiBernoulli(tuple(random_bernoulli(rng, dim) for _ in range(n)))


# ---------------------------------------------------------------------------
# assignment-set enumeration (2-D metrics)


def assignment_sets(nx: int, ny: int):
    """All injective partial matchings between range(nx) and range(ny)."""
    for m in range(min(nx, ny) + 1):
        for rows in itertools.combinations(range(nx), m):
            for cols in itertools.permutations(range(ny), m):
                yield tuple(zip(rows, cols))


def gospa_brute(states_x, states_y, params: MetricParams, kind=BaseMetricKind.WASSERSTEIN2) -> float:
    """GOSPA by enumerating assignment sets (localization term unclamped)."""
    xs = [np.asarray(s, dtype=float) for s in states_x]
    ys = [np.asarray(s, dtype=float) for s in states_y]
    c_p = params.c**params.p
    best = math.inf
    for theta in assignment_sets(len(xs), len(ys)):
        cost = sum(
            base_distance(kind, DiracDensity(xs[i]), DiracDensity(ys[j])) ** params.p
            for i, j in theta
        )
        cost += 0.5 * c_p * (len(xs) + len(ys) - 2 * len(theta))
        best = min(best, cost)
    return best ** (1.0 / params.p)


def pgospa_brute(fx: MultiBernoulli, fy: MultiBernoulli, params: MetricParams, kind=BaseMetricKind.WASSERSTEIN2) -> float:
    """PGOSPA by enumerating assignment sets (localization term unclamped)."""
    c_p = params.c**params.p
    rx = [b.existence for b in fx.components]
    ry = [b.existence for b in fy.components]
    best = math.inf
    for theta in assignment_sets(len(fx), len(fy)):
        cost = 0.0
        for i, j in theta:
            db = base_distance(kind, fx.components[i].density, fy.components[j].density)
            cost += min(rx[i], ry[j]) * db**params.p + abs(rx[i] - ry[j]) * 0.5 * c_p
        matched_x = {i for i, _ in theta}
        matched_y = {j for _, j in theta}
        cost += 0.5 * c_p * sum(r for i, r in enumerate(rx) if i not in matched_x)
        cost += 0.5 * c_p * sum(r for j, r in enumerate(ry) if j not in matched_y)
        best = min(best, cost)
    return best ** (1.0 / params.p)


# ---------------------------------------------------------------------------
# assignment-vector enumeration (trajectory metrics)


def assignment_vectors(nx: int, ny: int):
    """All vectors in {0..ny}^nx that are injective on nonzero entries."""
    out = []
    for cand in itertools.product(range(ny + 1), repeat=nx):
        nonzero = [v for v in cand if v > 0]
        if len(nonzero) == len(set(nonzero)):
            out.append(cand)
    return out


def _pair_cost_pth(bx: BernoulliDensity, by: BernoulliDensity, params: MetricParams, kind) -> float:
    db = base_distance(kind, bx.density, by.density)
    c_p = params.c**params.p
    return (
        min(bx.existence, by.existence) * min(db, params.c) ** params.p
        + abs(bx.existence - by.existence) * 0.5 * c_p
    )


def ptgospa_brute(
    truth: SequenceSet,
    estimate: SequenceSet,
    params: MetricParams,
    kind=BaseMetricKind.WASSERSTEIN2,
) -> float:
    """PTGOSPA by enumerating all assignment-vector sequences.

    Evaluates the multidimensional-assignment definition directly from the
    sequences: per-step detected pairs are those assigned, both alive, with
    base distance below the cut-off; everything else alive is charged as
    expected missed/false; switch costs compare consecutive vectors.
    """
    from trajmetric import tau

    K = truth.window_length
    nx, ny = len(truth), len(estimate)
    c_p = params.c**params.p
    gamma_p = params.gamma**params.p
    vectors = assignment_vectors(nx, ny)

    step_costs = []
    for k in range(1, K + 1):
        bx = [tau(s, k, K) for s in truth.sequences]
        by = [tau(s, k, K) for s in estimate.sequences]
        per_vec = {}
        for vec in vectors:
            cost = 0.0
            detected_x = set()
            detected_y = set()
            for i, v in enumerate(vec):
                if v == 0 or bx[i] is None or by[v - 1] is None:
                    continue
                if base_distance(kind, bx[i].density, by[v - 1].density) < params.c:
                    cost += _pair_cost_pth(bx[i], by[v - 1], params, kind)
                    detected_x.add(i)
                    detected_y.add(v - 1)
            cost += 0.5 * c_p * sum(
                b.existence for i, b in enumerate(bx) if b is not None and i not in detected_x
            )
            cost += 0.5 * c_p * sum(
                b.existence for j, b in enumerate(by) if b is not None and j not in detected_y
            )
            per_vec[vec] = cost
        step_costs.append(per_vec)

    def switch(a, b):
        total = 0.0
        for x, y in zip(a, b):
            if x != y:
                total += 1.0 if (x > 0 and y > 0) else 0.5
        return gamma_p * total

    best = math.inf
    for seq in itertools.product(vectors, repeat=K):
        cost = sum(step_costs[k][seq[k]] for k in range(K))
        cost += sum(switch(seq[k], seq[k + 1]) for k in range(K - 1))
        best = min(best, cost)
    return best ** (1.0 / params.p)
