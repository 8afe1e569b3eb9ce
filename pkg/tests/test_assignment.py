import itertools

import numpy as np
import pytest

from trajmetric import (
    CapacityError,
    DomainError,
    count_assignment_vectors,
    enumerate_assignment_vectors,
    solve_exact_dp,
    solve_lp,
    switch_cost,
)

from .support import assignment_vectors


def _random_costs(rng, nx, ny, K, scale=10.0):
    costs = []
    for _ in range(K):
        d = rng.uniform(0.0, scale, size=(nx + 1, ny + 1))
        d[nx, ny] = 0.0
        costs.append(d)
    return costs


def _brute(costs, gamma, p):
    K = len(costs)
    nx, ny = costs[0].shape[0] - 1, costs[0].shape[1] - 1
    vecs = assignment_vectors(nx, ny)

    def node(d, vec):
        cost, used = 0.0, set()
        for i, v in enumerate(vec):
            cost += d[i, v - 1] if v > 0 else d[i, ny]
            if v > 0:
                used.add(v - 1)
        return cost + sum(d[nx, j] for j in range(ny) if j not in used)

    best = np.inf
    for seq in itertools.product(vecs, repeat=K):
        cost = sum(node(costs[k], seq[k]) for k in range(K))
        cost += sum(switch_cost(np.array(seq[k]), np.array(seq[k + 1]), gamma, p) for k in range(K - 1))
        best = min(best, cost)
    return float(best)


class TestEnumeration:
    @pytest.mark.parametrize("nx,ny", [(0, 0), (0, 3), (3, 0), (2, 2), (3, 3), (3, 4)])
    def test_count_matches_enumeration(self, nx, ny):
        vecs = enumerate_assignment_vectors(nx, ny)
        assert vecs.shape == (count_assignment_vectors(nx, ny), nx)
        assert len({tuple(v) for v in vecs}) == len(vecs)

    def test_lexicographic_order(self):
        vecs = enumerate_assignment_vectors(2, 2)
        as_tuples = [tuple(v) for v in vecs]
        assert as_tuples == sorted(as_tuples)

    def test_injectivity(self):
        for v in enumerate_assignment_vectors(3, 3):
            nz = [e for e in v if e > 0]
            assert len(nz) == len(set(nz))


class TestSwitchCost:
    def test_cases(self):
        gamma, p = 2.0, 2.0
        assert switch_cost(np.array([1, 2]), np.array([1, 2]), gamma, p) == 0.0
        assert switch_cost(np.array([1, 2]), np.array([2, 1]), gamma, p) == 8.0
        assert switch_cost(np.array([1, 0]), np.array([0, 0]), gamma, p) == 2.0
        assert switch_cost(np.array([0, 0]), np.array([0, 2]), gamma, p) == 2.0


class TestExactDP:
    def test_single_step_minimum(self):
        rng = np.random.default_rng(0)
        costs = _random_costs(rng, 2, 3, 1)
        sol = solve_exact_dp(costs, 2.0, 2.0)
        assert sol.objective_pth_power == pytest.approx(_brute(costs, 2.0, 2.0), abs=1e-12)
        assert len(sol.weights) == 1

    def test_empty_instance(self):
        costs = [np.zeros((1, 1)) for _ in range(3)]
        sol = solve_exact_dp(costs, 2.0, 2.0)
        assert sol.objective_pth_power == 0.0

    def test_forced_double_switch(self):
        # Matched pairings swap between the two steps; both full switches.
        big = 1e6
        d1 = np.array([[0.0, big, 50.0], [big, 0.0, 50.0], [50.0, 50.0, 0.0]])
        d2 = np.array([[big, 0.0, 50.0], [0.0, big, 50.0], [50.0, 50.0, 0.0]])
        sol = solve_exact_dp([d1, d2], 2.0, 2.0)
        assert sol.objective_pth_power == pytest.approx(8.0, abs=1e-12)
        lp = solve_lp([d1, d2], 2.0, 2.0)
        assert lp.objective_pth_power == pytest.approx(8.0, abs=1e-9)

    def test_matches_enumeration(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            nx, ny, K = rng.integers(0, 4), rng.integers(0, 4), rng.integers(1, 4)
            costs = _random_costs(rng, nx, ny, K)
            gamma = float(rng.uniform(0.5, 3.0))
            sol = solve_exact_dp(costs, gamma, 2.0)
            assert sol.objective_pth_power == pytest.approx(_brute(costs, gamma, 2.0), abs=1e-12)

    def test_tie_break_lexicographic(self):
        # All-zero costs: everything optimal; lex-smallest is all-unassigned.
        costs = [np.zeros((3, 3)) for _ in range(2)]
        sol = solve_exact_dp(costs, 2.0, 2.0)
        for w in sol.weights:
            assert np.all(w[:2, :2] == 0.0)

    def test_tie_break_prefers_smaller_target(self):
        # Both columns tie at the optimum; the smaller target index wins.
        d = np.array([[1.0, 1.0, 50.0], [50.0, 50.0, 0.0]])
        sol = solve_exact_dp([d], 2.0, 2.0)
        assert sol.weights[0][0, 0] == 1.0
        assert sol.weights[0][0, 1] == 0.0

    def test_capacity_error(self):
        costs = _random_costs(np.random.default_rng(2), 3, 3, 2)
        with pytest.raises(CapacityError):
            solve_exact_dp(costs, 2.0, 2.0, state_cap=10)

    def test_weights_are_valid_assignments(self):
        rng = np.random.default_rng(3)
        costs = _random_costs(rng, 3, 2, 4)
        sol = solve_exact_dp(costs, 2.0, 2.0)
        for w in sol.weights:
            assert np.all((w == 0.0) | (w == 1.0))
            assert np.allclose(w[:3, :].sum(axis=1), 1.0)
            assert np.allclose(w[:, :2].sum(axis=0), 1.0)
            assert w[3, 2] == 0.0


class TestLP:
    def test_k1_equals_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            nx, ny = rng.integers(0, 5), rng.integers(0, 5)
            costs = _random_costs(rng, nx, ny, 1)
            exact = solve_exact_dp(costs, 2.0, 2.0)
            lp = solve_lp(costs, 2.0, 2.0)
            assert lp.objective_pth_power == pytest.approx(exact.objective_pth_power, abs=1e-9)

    def test_lower_bound(self):
        rng = np.random.default_rng(5)
        for _ in range(60):
            nx, ny, K = rng.integers(0, 4), rng.integers(0, 4), rng.integers(1, 5)
            costs = _random_costs(rng, nx, ny, K)
            gamma = float(rng.uniform(0.5, 3.0))
            exact = solve_exact_dp(costs, gamma, 2.0)
            lp = solve_lp(costs, gamma, 2.0)
            assert lp.objective_pth_power <= exact.objective_pth_power + 1e-9

    def test_weight_constraints(self):
        rng = np.random.default_rng(6)
        costs = _random_costs(rng, 3, 4, 5)
        sol = solve_lp(costs, 2.0, 2.0)
        for w in sol.weights:
            assert np.all(w >= 0.0)
            assert np.allclose(w[:3, :].sum(axis=1), 1.0, atol=1e-9)
            assert np.allclose(w[:, :4].sum(axis=0), 1.0, atol=1e-9)
            assert w[3, 4] == 0.0

    def test_monotone_in_gamma_and_costs(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            nx, ny = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            costs = _random_costs(rng, nx, ny, int(rng.integers(2, 5)))
            base = solve_lp(costs, 1.0, 2.0).objective_pth_power
            assert solve_lp(costs, 2.0, 2.0).objective_pth_power >= base - 1e-9
            bumped = [c.copy() for c in costs]
            bumped[1][
                rng.integers(0, nx + 1), rng.integers(0, ny)
            ] += float(rng.uniform(0.5, 5.0))
            assert solve_lp(bumped, 1.0, 2.0).objective_pth_power >= base - 1e-9

    def test_validation(self):
        with pytest.raises(DomainError):
            solve_lp([], 2.0, 2.0)
        bad = [np.full((2, 2), -1.0)]
        with pytest.raises(DomainError):
            solve_lp(bad, 2.0, 2.0)
        corner = [np.ones((2, 2))]
        with pytest.raises(DomainError):
            solve_lp(corner, 2.0, 2.0)
        with pytest.raises(DomainError):
            solve_exact_dp([np.zeros((2, 2)), np.zeros((3, 2))], 2.0, 2.0)
