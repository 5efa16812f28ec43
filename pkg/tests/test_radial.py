import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect_decreasing, central_difference, midpoint_sum
from highenergy.errors import InvalidInput
from highenergy.radial import (AtomMeasure, ExpDensityMeasure, MAMeasure, TabulatedMeasure, atom,
                               cap_distribution, dirichlet_solve, energy, energy_poly_closed, energy_via_s,
                               exhaustion, family, is_below, j_energy, j_energy_poly_closed, lp_norm,
                               ma_distribution, pushforward_distribution, sandwich_margins, subextension,
                               truncation, vol_distribution)
from highenergy.orlicz import layercake_integral
from highenergy.weights import exponential, polynomial

SAMPLED = {
    "trunc2": lambda n: truncation(2.0, n=n),
    "trunc0.5": lambda n: truncation(0.5, n=n),
    "quadratic": lambda n: family("exp", n=n, c=2.0),
    "iterlog1": lambda n: family("iterlog", n=n, k=1),
    "iterlog2": lambda n: family("iterlog", n=n, k=2),
    "power": lambda n: family("power", n=n, alpha=0.5),
    "exhaustion": lambda n: exhaustion(family("iterlog", n=n, k=1), 4.0),
}


class TestDistributions:
    def test_truncation_is_unit_atom(self):
        F = ma_distribution(truncation(2.0))
        np.testing.assert_array_equal(F(np.array([0.1, 1.0, 1.99, 2.0, 3.0])), [1, 1, 1, 0, 0])

    def test_log_profile_is_dirac(self):
        F = ma_distribution(family("log"))
        np.testing.assert_allclose(F(np.array([0.1, 10.0, 1e6])), 1.0)

    def test_quadratic_profile(self):
        F = ma_distribution(family("exp", c=2.0))
        t = np.array([0.1, 0.5, 0.9])
        np.testing.assert_allclose(F(t), 2.0 * (1.0 - t), rtol=1e-12)
        assert F(1.0) == 0.0
        ref = midpoint_sum(lambda t: 2.0 * (1.0 - t), 0.0, 1.0, 1e-5)
        np.testing.assert_allclose(F.integral(), ref, rtol=1e-9)

    def test_capacity_truncation(self):
        F = cap_distribution(truncation(2.0))
        np.testing.assert_allclose(F(np.array([0.5, 1.0, 1.5])), [2.0, 1.0, 1 / 1.5], rtol=1e-14)
        assert F(2.5) == 0.0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_capacity_of_balls(self, n):
        t = np.array([0.25, 1.0, 7.0])
        np.testing.assert_allclose(cap_distribution(family("log", n=n))(t), t ** -float(n), rtol=1e-14)

    def test_capacity_iterlog_decay(self):
        F = cap_distribution(family("iterlog", k=1))
        t = np.linspace(1.0, 30.0, 30)
        np.testing.assert_allclose(F(t), 1.0 / np.expm1(t), rtol=1e-12)
        assert np.all(F(t) <= math.e / (math.e - 1.0) * np.exp(-t) * (1 + 1e-14))

    def test_volume(self):
        F = vol_distribution(family("log"))
        np.testing.assert_allclose(F(2.0), math.exp(-4.0), rtol=1e-14)
        np.testing.assert_allclose(F(1e-12), 1.0, rtol=1e-10)

    @pytest.mark.parametrize("name", list(SAMPLED))
    @pytest.mark.parametrize("n", [1, 2])
    def test_volume_capacity_identity(self, name, n):
        g = SAMPLED[name](n)
        t = np.geomspace(1e-3, 0.99 * min(-g.lower, 1e3), 50)
        # log domain: both sides underflow for the iterated-log profiles
        log_vol = vol_distribution(g).log(t)
        log_cap = cap_distribution(g).log(t)
        with np.errstate(over="ignore"):
            np.testing.assert_allclose(log_vol, -2.0 * n * np.exp(-log_cap / n), rtol=1e-10)

    @pytest.mark.parametrize("name", list(SAMPLED))
    def test_json(self, name):
        g = SAMPLED[name](1)
        d = g.to_json()
        assert json.loads(json.dumps(d)) == d
        assert d["kind"]


class TestEnergies:
    def test_truncation_atom(self):
        np.testing.assert_allclose(energy(truncation(2.0), polynomial(2)), math.sqrt(2.0), rtol=1e-12)
        for M in (0.5, 3.0):
            np.testing.assert_allclose(energy(truncation(M), exponential()), M / math.log(2.0), rtol=1e-12)

    def test_quadratic(self):
        g = family("exp", c=2.0)
        np.testing.assert_allclose(energy(g, polynomial(1)), 1.0, rtol=1e-10)

    def test_log_is_infinite(self):
        assert energy(family("log"), polynomial(1)) == math.inf
        assert energy_via_s(family("log"), polynomial(1)) == math.inf

    def test_j_truncation(self):
        np.testing.assert_allclose(j_energy(truncation(2.0), polynomial(1)), math.sqrt(2.0), rtol=1e-10)

    def test_j_quadratic(self):
        g = family("exp", c=2.0)
        expected = math.sqrt(2.0 * math.log(2.0))
        np.testing.assert_allclose(j_energy(g, polynomial(1)), expected, rtol=1e-9)
        # the defining integral int_0^1 t / (-log(1 - t)) dt against a Riemann sum
        ref = midpoint_sum(lambda t: t / -np.log1p(-t), 0.0, 1.0, 1e-5)
        np.testing.assert_allclose(ref, math.log(2.0), rtol=1e-6)

    def test_j_riemann_oracle_exponential(self):
        g = family("iterlog", k=1)
        F = cap_distribution(g)
        # h~'(t) = t e^t for n = 1 and the exponential weight
        def L(lam):
            return midpoint_sum(lambda t: (t / lam ** 2) * np.exp(t / lam) / np.expm1(t), 0.0, 200.0, 1e-4)
        np.testing.assert_allclose(j_energy(g, exponential()), bisect_decreasing(L, 0.5, 10.0, 80), rtol=1e-6)

    @pytest.mark.parametrize("name", ["trunc2", "quadratic", "iterlog1", "iterlog2", "exhaustion"])
    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_two_path_polynomial(self, name, n, p):
        g = SAMPLED[name](n)
        w = polynomial(p)
        np.testing.assert_allclose(energy(g, w), energy_poly_closed(g, p), rtol=1e-7)
        np.testing.assert_allclose(j_energy(g, w), j_energy_poly_closed(g, p), rtol=1e-7)

    @pytest.mark.parametrize("name", ["trunc2", "quadratic", "iterlog1", "exhaustion"])
    def test_two_path_exponential(self, name):
        g = SAMPLED[name](1)
        np.testing.assert_allclose(energy(g, exponential()), energy_via_s(g, exponential()), rtol=1e-7)

    @pytest.mark.parametrize("name", list(SAMPLED))
    def test_first_moment_two_ways(self, name):
        g = SAMPLED[name](1)
        F = ma_distribution(g)
        w = polynomial(1)
        from highenergy.radial.core import stieltjes_layercake
        a = layercake_integral(F, w, 1.0)
        b = stieltjes_layercake(g, w, 1.0)
        if math.isinf(a):
            assert math.isinf(b)
        else:
            np.testing.assert_allclose(a, b, rtol=1e-7)

    def test_lp_norm_of_self_measure(self):
        g = family("exp", c=2.0)
        np.testing.assert_allclose(lp_norm(MAMeasure(g), g, polynomial(1)), energy(g, polynomial(1)),
                                   rtol=1e-9)


class TestFamilies:
    def test_iterlog_first(self):
        g = family("iterlog", k=1)
        s = np.array([-5.0, -1.0, -0.1])
        np.testing.assert_allclose(g.g(s), -np.log1p(-s), rtol=1e-14)
        fd = np.array([central_difference(g.g, x) for x in s])
        np.testing.assert_allclose(fd, g.dg(s), rtol=1e-8)
        np.testing.assert_allclose(g.dg(0.0), 1.0, rtol=1e-14)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_iterlog_zero_boundary_and_convex(self, k):
        g = family("iterlog", k=k)
        assert abs(float(g.g(0.0))) < 1e-14
        s = -np.geomspace(1e-6, 1e6, 300)[::-1]
        assert np.all(np.diff(np.asarray(g.dg(s))) >= -1e-15)

    @pytest.mark.parametrize("n", [1, 2])
    def test_power_capacity(self, n):
        F = cap_distribution(family("power", n=n, alpha=0.5))
        t = np.array([0.3, 1.0, 5.0])
        np.testing.assert_allclose(F(t), t ** (-2.0 * n), rtol=1e-12)

    def test_power_rejects_nonconvex(self):
        with pytest.raises(InvalidInput):
            family("power", alpha=1.5)

    def test_truncation_of_identity(self):
        g = truncation(3.0)
        s = np.array([-10.0, -3.0, -1.0, 0.0])
        np.testing.assert_allclose(g.g(s), np.maximum(s, -3.0))

    def test_exhaustion_is_bounded_and_increasing_to_base(self):
        base = family("iterlog", k=1)
        s = -np.geomspace(1e-3, 1e3, 100)
        prev = None
        for j in (1.0, 2.0, 8.0, 32.0):
            g = exhaustion(base, j)
            assert math.isfinite(g.lower)
            vals = np.asarray(g.g(s))
            assert np.all(vals >= np.asarray(base.g(s)) - 1e-14)
            if prev is not None:
                assert np.all(vals <= prev + 1e-14)
            prev = vals

    def test_inverse(self):
        for name in ("quadratic", "iterlog2", "power", "exhaustion"):
            g = SAMPLED[name](1)
            s = np.array([-7.0, -2.0, -0.5, -0.01])
            np.testing.assert_allclose(g.level(-np.asarray(g.g(s))), s, rtol=1e-10, atol=1e-10)

    def test_unknown_family(self):
        with pytest.raises(InvalidInput):
            family("spiral")


class TestSandwich:
    @pytest.mark.parametrize("name", list(SAMPLED))
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_margins(self, name, n):
        g = SAMPLED[name](n)
        grid = np.geomspace(0.01, 20.0, 20)
        lower, upper = sandwich_margins(g, grid, grid)
        assert np.min(lower) >= -1e-9
        assert np.min(upper) >= -1e-9

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 5.0), st.floats(0.05, 5.0))
    def test_capacity_monotone(self, M1, M2):
        lo, hi = truncation(max(M1, M2)), truncation(min(M1, M2))
        assert is_below(lo, hi)
        t = np.geomspace(1e-3, 10.0, 40)
        assert np.all(cap_distribution(lo)(t) >= cap_distribution(hi)(t))

    def test_capacity_monotone_families(self):
        t = np.geomspace(1e-3, 10.0, 40)
        lo, hi = family("iterlog", k=1), exhaustion(family("iterlog", k=1), 2.0)
        assert is_below(lo, hi)
        assert np.all(cap_distribution(lo)(t) >= cap_distribution(hi)(t) * (1 - 1e-12))


class TestDirichlet:
    def test_exponential_density(self):
        g = dirichlet_solve(ExpDensityMeasure(2.0, 2.0), n=1)
        s = np.array([-5.0, -1.0, -0.2, 0.0])
        np.testing.assert_allclose(g.g(s), np.expm1(2.0 * s), rtol=1e-9, atol=1e-12)

    def test_sphere_atom(self):
        g = dirichlet_solve(atom(-2.0), n=1)
        s = np.array([-10.0, -2.0, -1.0, 0.0])
        np.testing.assert_allclose(g.g(s), np.maximum(s, -2.0), atol=1e-12)

    def test_zero_measure(self):
        g = dirichlet_solve(AtomMeasure((), ()), n=2)
        assert float(g.g(-3.0)) == 0.0

    def test_origin_mass_is_unbounded(self):
        g = dirichlet_solve(AtomMeasure((-math.inf,), (1.0,)), n=1)
        assert g.lower == -math.inf

    def test_rejects_decreasing(self):
        with pytest.raises(InvalidInput):
            TabulatedMeasure((-2.0, -1.0), (2.0, 1.0))

    @pytest.mark.parametrize("mu, n", [(ExpDensityMeasure(2.0, 2.0), 1), (ExpDensityMeasure(3.0, 1.0), 2),
                                       (AtomMeasure((-3.0, -1.0), (0.5, 1.5)), 1),
                                       (AtomMeasure((-3.0, -1.0), (0.5, 1.5)), 2)])
    def test_round_trip(self, mu, n):
        g = dirichlet_solve(mu, n=n)
        F_ma = ma_distribution(g)
        F_mu = pushforward_distribution(mu, g)
        for lam in (0.25, 1.0, 4.0):
            for w in (polynomial(1), exponential()):
                a, b = layercake_integral(F_ma, w, lam), layercake_integral(F_mu, w, lam)
                np.testing.assert_allclose(a, b, rtol=1e-6)

    def test_csv(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("s,m\n-4,0\n-2,0\n-2,1\n0,1\n")
        mu = TabulatedMeasure.from_csv(path)
        g = dirichlet_solve(mu, n=1)
        np.testing.assert_allclose(energy(g, polynomial(1)), 2.0, rtol=1e-10)

    def test_csv_bad_row(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("-1,0\n-0.5,abc\n")
        with pytest.raises(InvalidInput):
            TabulatedMeasure.from_csv(path)


class TestSubextension:
    def test_truncation(self):
        G = subextension(truncation(2.0), 1.0)
        np.testing.assert_allclose(G.slope_star, 2.0 / 3.0, rtol=1e-14)
        assert G.s_star == -2.0
        s = np.array([-5.0, -2.0, 0.0, 0.5, 1.0])
        np.testing.assert_allclose(G.g(s), np.maximum(-2.0, (2.0 / 3.0) * (s - 1.0)), atol=1e-14)

    def test_truncation_energy(self):
        g = truncation(2.0)
        G = subextension(g, 1.0)
        np.testing.assert_allclose(energy(G, polynomial(1)), 4.0 / 3.0, rtol=1e-12)
        assert energy(G, polynomial(1)) <= energy(g, polynomial(1))

    def test_zero(self):
        G = subextension(family("zero"), 1.0)
        assert float(G.g(-2.0)) == 0.0 and float(G.g(0.5)) == 0.0

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(InvalidInput):
            subextension(truncation(1.0), 0.0)

    @pytest.mark.parametrize("name", ["trunc2", "trunc0.5", "quadratic", "iterlog1", "iterlog2", "exhaustion"])
    @pytest.mark.parametrize("logR", [0.5, 2.0])
    def test_properties(self, name, logR):
        g = SAMPLED[name](1)
        G = subextension(g, logR)
        s = -np.geomspace(1e-4, 50.0, 200)[::-1]
        assert np.all(np.asarray(G.g(s)) <= np.asarray(g.g(s)) + 1e-12)
        full = np.concatenate([s, np.linspace(0.0, logR, 20)])
        assert np.all(np.diff(np.asarray(G.dg(full))) >= -1e-12)
        right = np.linspace(max(G.s_star, -50.0) + 1e-9, logR, 20)
        np.testing.assert_allclose(G.g(right), G.slope_star * (right - logR), atol=1e-12)
        for w in (polynomial(1), polynomial(2), exponential()):
            assert energy(G, w) <= energy(g, w) * (1 + 1e-9)
