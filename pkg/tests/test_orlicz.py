import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import midpoint_sum, riemann_norm
from highenergy.orlicz import (DistributionFunction, choquet_norm, choquet_solution, constant_distribution,
                               envelope_of_sum, layercake_integral, luxembourg_norm, solve_decreasing,
                               solve_norm, union_envelope)
from highenergy.weights import exponential, polynomial, tilde


def exp_decay():
    return DistributionFunction(lambda t: np.exp(-t), lambda t: -t, label="exp(-t)")


def cap_of_truncated_log(M=2.0, n=1):
    """``t^{-n}`` on ``(0, M)``: capacities of the sublevels of ``max(log|z|, -M)``."""
    return DistributionFunction(lambda t: t ** -float(n), None, (), M, False, True, "t^-n")


class TestDistributionFunction:
    def test_vanishes_beyond_support(self):
        F = constant_distribution(2.0, 3.0)
        np.testing.assert_array_equal(F(np.array([0.5, 2.999, 3.0, 10.0])), [2.0, 2.0, 0.0, 0.0])

    def test_jump_list(self):
        F = constant_distribution(1.5, 3.0).plus(constant_distribution(1.0, 1.0))
        assert F.jumps() == [(1.0, 2.5, 1.5), (3.0, 1.5, 0.0)]

    def test_is_zero(self):
        assert constant_distribution(0.0, 3.0).is_zero()
        assert constant_distribution(1.0, 0.0).is_zero()
        assert not exp_decay().is_zero()

    def test_integral_against_riemann(self):
        F = exp_decay().plus(constant_distribution(0.5, 2.0))
        ref = midpoint_sum(lambda t: np.exp(-t) + 0.5 * (t < 2.0), 0.0, 60.0, 1e-4)
        np.testing.assert_allclose(F.integral(), ref, rtol=1e-8)

    def test_json_round_trip_is_deterministic(self):
        F = exp_decay().plus(constant_distribution(0.5, 2.0))
        d = F.to_json()
        G = DistributionFunction.from_json(json.loads(json.dumps(d)))
        assert json.dumps(G.to_json(), sort_keys=True) == json.dumps(d, sort_keys=True)
        t = np.array([0.1, 1.0, 1.9, 2.5, 7.0])
        np.testing.assert_allclose(G(t), F(t), rtol=1e-3)


class TestLayercake:
    def test_point_mass(self):
        F = constant_distribution(1.0, 3.0)
        np.testing.assert_allclose(layercake_integral(F, polynomial(2), 1.0), 4.5, rtol=1e-14)

    def test_exponential_tail(self):
        np.testing.assert_allclose(layercake_integral(exp_decay(), polynomial(1), 1.0), 1.0, rtol=1e-9)
        ref = midpoint_sum(lambda t: np.exp(-t), 0.0, 50.0, 1e-4)
        assert abs(layercake_integral(exp_decay(), polynomial(1), 1.0) - ref) < 1e-6

    def test_monotone_in_lambda(self):
        lams = [0.5, 1.0, 2.0, 4.0]
        values = [layercake_integral(exp_decay(), exponential(), lam) for lam in lams[1:]]
        np.testing.assert_allclose(layercake_integral(exp_decay(), polynomial(1), 2.0), 0.5, rtol=1e-9)
        assert all(a >= b for a, b in zip(values[:-1], values[1:]))

    def test_divergent(self):
        assert layercake_integral(exp_decay(), exponential(), 1.0) == math.inf


class TestLuxembourg:
    def test_atom(self):
        np.testing.assert_allclose(luxembourg_norm(constant_distribution(1.0, 3.0), polynomial(2)),
                                   3.0 / math.sqrt(2.0), rtol=1e-12)

    def test_zero(self):
        assert luxembourg_norm(constant_distribution(0.0, 1.0), exponential()) == 0.0

    def test_p_norm(self):
        np.testing.assert_allclose(luxembourg_norm(exp_decay(), polynomial(2)), 1.0, rtol=1e-9)

    def test_against_riemann_oracle(self):
        ref = riemann_norm(lambda t: np.exp(-t), np.exp, 60.0, 1e-4)
        np.testing.assert_allclose(luxembourg_norm(exp_decay(), exponential()), ref, rtol=1e-6)

    def test_root_consistency(self):
        for F, w in [(exp_decay(), exponential()), (exp_decay(), polynomial(3)),
                     (constant_distribution(0.3, 5.0), exponential())]:
            sol = solve_norm(F, w)
            assert abs(layercake_integral(F, w, sol.value) - 1.0) <= 1e-8

    def test_not_in_space(self):
        F = DistributionFunction(lambda t: 1.0 / (1.0 + t) ** 2, label="algebraic")
        sol = solve_norm(F, exponential())
        assert sol.value == math.inf and sol.reason == "not-in-space"

    def test_monotone_in_distribution(self):
        F = exp_decay()
        G = F.plus(constant_distribution(0.2, 1.0))
        assert luxembourg_norm(F, exponential()) <= luxembourg_norm(G, exponential()) + 1e-10

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 20.0), st.floats(0.05, 20.0), st.floats(1.0, 4.0))
    def test_atom_closed_form(self, mass, value, p):
        w = polynomial(p)
        expected = value / float(w.inv(1.0 / mass))
        np.testing.assert_allclose(luxembourg_norm(constant_distribution(mass, value), w), expected,
                                   rtol=1e-10)


class TestChoquet:
    def test_truncated_log(self):
        np.testing.assert_allclose(choquet_norm(cap_of_truncated_log(), tilde(polynomial(1), 1)),
                                   math.sqrt(2.0), rtol=1e-10)

    def test_zero(self):
        assert choquet_norm(constant_distribution(0.0, 1.0), tilde(exponential(), 1)) == 0.0

    def test_homogeneity(self):
        w = tilde(exponential(), 1)
        F = cap_of_truncated_log(3.0)
        np.testing.assert_allclose(choquet_norm(F.scaled_argument(2.0), w), 2.0 * choquet_norm(F, w),
                                   rtol=1e-9)

    def test_singularity_diagnostic(self):
        F = DistributionFunction(lambda t: t ** -3.0, None, (), 1.0, False, True, "t^-3")
        sol = choquet_solution(F, tilde(polynomial(1), 1))
        assert sol.value == math.inf and sol.reason == "singular-at-zero"

    def test_quasi_triangle_envelope(self):
        w = tilde(polynomial(2), 1)
        F, G = cap_of_truncated_log(2.0), cap_of_truncated_log(0.5)
        bound = 4.0 * max(choquet_norm(F, w), choquet_norm(G, w))
        assert choquet_norm(envelope_of_sum(F, G), w) <= bound

    def test_increasing_limits(self):
        w = tilde(exponential(), 1)
        F = DistributionFunction(lambda t: 1.0 / np.expm1(t), None, (), math.inf, False, True, "iterlog cap")
        limit = choquet_norm(F, w)
        seq = [choquet_norm(F.truncated(T), w) for T in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)]
        assert all(a <= b + 1e-12 for a, b in zip(seq[:-1], seq[1:]))
        np.testing.assert_allclose(seq[-1], limit, rtol=1e-8)

    def test_union_envelope_dominates_summands(self):
        w = tilde(polynomial(1), 1)
        F = cap_of_truncated_log(2.0)
        env = union_envelope([F, F], [0.5, 0.5])
        np.testing.assert_allclose(choquet_norm(env, w), choquet_norm(F, w), rtol=1e-10)


class TestSolver:
    def test_power_law(self):
        sol = solve_decreasing(lambda lam: 7.0 / lam ** 3)
        np.testing.assert_allclose(sol.value, 7.0 ** (1.0 / 3.0), rtol=1e-12)

    def test_small_root(self):
        sol = solve_decreasing(lambda lam: 1e-9 / lam)
        np.testing.assert_allclose(sol.value, 1e-9, rtol=1e-12)

    def test_infinite(self):
        assert solve_decreasing(lambda lam: math.inf).value == math.inf
