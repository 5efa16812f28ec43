"""Acceptance checks, one test per criterion; each prints a single pass/fail line."""

import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from oracles import bisect_decreasing, lower_riemann, midpoint_sum
from highenergy.conjecture import (DIVERGENCE_THRESHOLD, bedford_pipeline, kappa_lower_bound,
                                   lower_block_sums, sample_ratios)
from highenergy.orlicz import DistributionFunction, layercake_integral
from highenergy.radial import (AtomMeasure, ExpDensityMeasure, MAMeasure, TabulatedMeasure, atom,
                               cap_distribution, dirichlet_solve, energy, exhaustion, family, j_energy,
                               ma_distribution, pushforward_distribution, sandwich_margins, subextension,
                               subextension_slope, truncation)
from highenergy.radial.profiles import ScaledProfile, ZeroProfile
from highenergy.verify import (check_cap_characterization, check_choquet_axioms, check_choquet_convexity,
                               check_quasi_triangle, check_scaling, default_families, default_weights,
                               run_suite)
from highenergy.weights import exponential, extra_growth, piecewise_weighted_integral, polynomial, tilde

N_VALUES = (1, 2, 3)


@pytest.fixture
def verdict(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


def _unexpected(reports):
    """Failed reports, plus skipped ones whose reason is not an infinite energy or norm."""
    bad = [r for r in reports if r.status == "fail"]
    bad += [r for r in reports if r.status == "skipped" and "infinite" not in r.diagnostics["skip_reason"]]
    return bad


def test_closed_form_anchors(verdict):
    start = time.perf_counter()
    worst = 0.0
    for M in (1.0, 2.0, 4.0):
        for p in (1.0, 2.0):
            w = polynomial(p)
            h = lambda t: t ** p / p
            for n in N_VALUES:
                g = truncation(M, n=n)
                e_ref = M / p ** (1.0 / p)
                j_ref = bisect_decreasing(lambda lam: lam ** -n * h(M / lam))
                worst = max(worst, abs(energy(g, w) - e_ref) / e_ref, abs(j_energy(g, w) - j_ref) / j_ref)
    elapsed = time.perf_counter() - start
    verdict(1, worst <= 1e-8 and elapsed < 1.0, f"max rel err {worst:.2e}, {elapsed:.3f} s")


def test_smooth_anchor(verdict):
    start = time.perf_counter()
    g = family("exp", n=1, c=2.0)
    E, J = energy(g, polynomial(1)), j_energy(g, polynomial(1))
    # MA(phi)(phi < -t) = 2(1 - t) and Cap(phi < -t) = 2 / -log(1 - t) on (0, 1); h = h' = 1 at p = 1
    e_ref = midpoint_sum(lambda t: 2.0 * (1.0 - t), 0.0, 1.0, 1e-5)
    j_ref = math.sqrt(midpoint_sum(lambda t: 2.0 * t / -np.log1p(-t), 0.0, 1.0, 1e-5))
    elapsed = time.perf_counter() - start
    gaps = (abs(E - e_ref), abs(J - j_ref))
    ok = max(gaps) <= 1e-7 and abs(J - math.sqrt(2.0 * math.log(2.0))) <= 1e-7 and elapsed < 5.0
    verdict(2, ok, f"E={E:.10f} gap {gaps[0]:.1e}, J={J:.10f} gap {gaps[1]:.1e}, {elapsed:.2f} s")


def test_sandwich(verdict):
    grid = np.geomspace(0.01, 20.0, 20)
    worst = math.inf
    for n in (1, 2):
        profiles = [truncation(1.0, n=n), truncation(2.0, n=n), truncation(4.0, n=n),
                    family("iterlog", n=n, k=1), family("power", n=n, alpha=0.5), family("exp", n=n, c=2.0)]
        for g in profiles:
            lower, upper = sandwich_margins(g, grid, grid)
            worst = min(worst, float(np.min(lower)), float(np.min(upper)))
    verdict(3, worst >= -1e-9, f"min margin {worst:.3e} over 12 profiles x 400 points")


@pytest.fixture(scope="module")
def scaling_reports():
    return run_suite("scaling", N_VALUES) + run_suite("fundamental", N_VALUES)


def test_scaling_and_fundamental(verdict, scaling_reports):
    bad = _unexpected(scaling_reports)
    passed = sum(r.status == "pass" for r in scaling_reports)
    gap = 0.0
    for n in N_VALUES:
        for M in (1.0, 2.0, 4.0):
            g = truncation(M, n=n)
            lhs = energy(ScaledProfile(g, 2.0), polynomial(1))
            gap = max(gap, abs(lhs - 2.0 ** (n + 1) * energy(g, polynomial(1))) / lhs)
    ok = len(scaling_reports) >= 150 and not bad and gap <= 1e-8
    verdict(4, ok, f"{len(scaling_reports)} instances, {passed} pass, {len(bad)} unexpected, "
                   f"equality gap {gap:.1e}")


def test_cap_characterization(verdict):
    profiles = [g for n in N_VALUES for g in default_families(n) + [ScaledProfile(family("exp", n=n, c=2.0), 2.0)]]
    tasks = [(g, w) for g in profiles for w in default_weights()]
    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(lambda task: check_cap_characterization(*task), tasks))
    bad = _unexpected(reports)
    gap = 0.0
    for n in N_VALUES:
        for M in (2.0, 4.0):
            r = check_cap_characterization(truncation(M, n=n), polynomial(1))
            part = r.diagnostics["parts"]["e_le_max1jn1"]
            gap = max(gap, abs(part["margin"]))
    ok = not bad and gap <= 1e-8
    verdict(5, ok, f"{len(reports)} instances, {len(bad)} unexpected, atom equality gap {gap:.1e}")


def test_moser_trudinger(verdict):
    reports = run_suite("moser_trudinger", N_VALUES)
    bad = _unexpected(reports)
    finite = [r for r in reports if r.status == "pass"]
    # skipped instances are exactly the infinite-energy profiles
    skipped_energy = [energy(family("power", n=n, alpha=0.5), w) for n in N_VALUES for w in default_weights()]
    identity = max(r.diagnostics["identity_max_abs_gap"] for r in finite)
    ok = not bad and identity <= 1e-10 and all(math.isfinite(r.lhs) for r in finite)
    ok = ok and all(math.isinf(e) for e in skipped_energy)
    verdict(6, ok, f"{len(finite)} finite integrals, {len(reports) - len(finite)} skipped (infinite energy), "
                   f"identity gap {identity:.1e}")


def test_dirichlet_round_trip(verdict):
    measures = [atom(-2.0), AtomMeasure((-3.0, -1.0), (0.5, 1.5)), ExpDensityMeasure(2.0, 2.0),
                ExpDensityMeasure(3.0, 1.0), TabulatedMeasure((-3.0, -1.0, 0.0), (0.0, 0.5, 2.0))]
    worst = 0.0
    for mu in measures:
        for n in (1, 2):
            g = dirichlet_solve(mu, n=n)
            F_ma, F_mu = ma_distribution(g), pushforward_distribution(mu, g)
            for lam in (0.25, 1.0, 4.0):
                for w in (polynomial(1), exponential()):
                    a, b = layercake_integral(F_ma, w, lam), layercake_integral(F_mu, w, lam)
                    worst = max(worst, abs(a - b) / b)
    verdict(7, worst <= 1e-6, f"max rel gap {worst:.1e} over 5 measures, n=1,2, 2 weights")


def test_subextension(verdict):
    g = truncation(2.0)
    slope = subextension_slope(g, 1.0)
    E = energy(subextension(g, 1.0), polynomial(1))
    anchor = max(abs(slope - 2.0 / 3.0), abs(E - 4.0 / 3.0))
    count, worse = 0, []
    for profile in default_families(1):
        for log_radius in (0.5, 1.0, 2.0):
            G = subextension(profile, log_radius)
            for w in default_weights():
                e_sub, e_orig = energy(G, w), energy(profile, w)
                count += 1
                if e_sub > e_orig * (1.0 + 1e-9):
                    worse.append((profile.to_json()["kind"], log_radius, e_sub, e_orig))
    ok = anchor <= 1e-9 and not worse
    verdict(8, ok, f"slope {slope:.12f}, energy {E:.12f}, {count} comparisons, {len(worse)} increases")


def test_kappa_constant(verdict):
    mu = MAMeasure(family("exp", c=2.0))
    worst, points = 0.0, 0
    best_gap = 0.0
    for p in (1.0, 2.0, 3.0):
        target = 2.0 ** (-1.0 / p)
        for fam in ("trunc", "exp", "exhaustion"):
            _, ratios = sample_ratios(mu, polynomial(p), fam, points=20)
            points += len(ratios)
            worst = max(worst, float(np.max(np.abs(np.asarray(ratios) - target))))
        est = kappa_lower_bound(mu, polynomial(p), "trunc", budget=40)
        best_gap = max(best_gap, abs(est.best_ratio - target))
    ok = worst <= 1e-8 and best_gap <= 1e-8 and points >= 150
    verdict(9, ok, f"{points} ratios, max gap {worst:.1e}, optimizer gap {best_gap:.1e}")


def test_bedford(verdict):
    start = time.perf_counter()
    bounded = [truncation(1.0), truncation(2.0), truncation(4.0), family("exp", c=2.0),
               exhaustion(family("iterlog", k=1), 4.0)]
    finite = all(bedford_pipeline(g).all_finite for g in bounded)
    rep = bedford_pipeline(family("iterlog", k=1))
    first = rep.divergence["1"]["first_blocks"]
    elapsed = time.perf_counter() - start
    # phi_1 has eps(t) = e^{-t}, so block j of the witness weight has h'(t) = e^{2^j t}
    oracle = lower_riemann(lambda t: np.exp(2.0 ** np.floor(t) * t), lambda t: np.exp(-t), 1.0, 4)
    agree = np.allclose(first, oracle, rtol=1e-10)
    ok = finite and first[3] > DIVERGENCE_THRESHOLD and agree and elapsed < 2.0
    verdict(10, ok, f"bounded finite={finite}, block sums {first[3]:.3e} after 4 blocks, {elapsed:.2f} s")


CHOQUET_POOL = [truncation(1.0), truncation(2.0), truncation(4.0), family("iterlog", k=1),
                family("iterlog", k=2), family("exp", c=2.0), exhaustion(family("iterlog", k=1), 2.0)]


def test_choquet_norm(verdict):
    rng = np.random.default_rng(20240601)
    axioms = []
    for g in CHOQUET_POOL[:4] + [ZeroProfile(1)]:
        for w in (polynomial(1), exponential()):
            axioms += check_choquet_axioms(cap_distribution(g), tilde(w, 1), label=g.to_json()["kind"])
    combos, pairs = [], []
    for _ in range(20):
        k = int(rng.integers(1, 5))
        picks = [CHOQUET_POOL[i] for i in rng.choice(len(CHOQUET_POOL), size=k)]
        eps = rng.dirichlet(np.ones(k)) * rng.uniform(0.5, 1.0)
        alpha = rng.dirichlet(np.ones(k)) * rng.uniform(0.5, 1.0)
        w = (polynomial(1), polynomial(2), exponential())[int(rng.integers(3))]
        combos.append((picks, list(eps), list(alpha), w))
        i, j = rng.choice(len(CHOQUET_POOL), size=2)
        pairs.append((CHOQUET_POOL[i], CHOQUET_POOL[j], w))
    with ThreadPoolExecutor() as pool:
        convex = list(pool.map(lambda c: check_choquet_convexity(*c), combos))
        triangle = list(pool.map(lambda c: check_quasi_triangle(*c), pairs))
    homogeneity = max(r.diagnostics["relative_gap"] for r in axioms if r.name.startswith("choquet_homogeneity"))
    bad = _unexpected(axioms + convex + triangle)
    ok = not bad and homogeneity <= 1e-9
    verdict(11, ok, f"{len(axioms)} axiom, {len(convex)} convexity, {len(triangle)} quasi-triangle reports, "
                    f"{len(bad)} unexpected, homogeneity gap {homogeneity:.1e}")


def test_extra_growth(verdict):
    F = DistributionFunction(lambda t: np.exp(-t), lambda t: -t, label="exp(-t)")
    w = extra_growth(F, 2.0)
    weighted = piecewise_weighted_integral(F, w)
    margin = 2.0 * 1.0 - weighted
    # the same integral in closed form: a = 2^k on [N_k, N_{k+1})
    edges = np.append(np.asarray(w.breakpoints), math.inf)
    exact = float(np.sum(np.asarray(w.values) * (np.exp(-edges[:-1]) - np.exp(-edges[1:]))))
    levels = [w.dh(w.breakpoints[k]) for k in range(11)]
    ok = margin >= -1e-9 and 2.0 - exact >= -1e-9 and levels == [2.0 ** k for k in range(11)]
    verdict(12, ok, f"int aF = {weighted:.12f} vs 2 int F = 2, margin {margin:.2e}, a(N_10) = {levels[-1]:g}")
