"""Distribution functions, energies, Dirichlet solutions and subextensions of radial profiles.

Normalizations: the open ball of radius ``e^s`` has Monge-Ampere mass
``g'(s-)^n`` (so ``log|z|`` carries unit mass at the origin), capacity
``(s_top - s)^{-n}`` and volume ``V1 * e^{2 n s}``.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..errors import InvalidInput
from ..orlicz import (DistributionFunction, NormSolution, solve_decreasing, solve_norm)
from ..quadrature import DEFAULT_SPEC, QuadratureSpec, integrate, integrate_from_zero, integrate_to_infinity
from ..weights import PolynomialWeight, Weight, tilde
from .measures import MAMeasure, RadialMeasure, check_monotone
from .profiles import (CombinationProfile, ExpProfile, IterLogProfile, PowerProfile, RadialProfile,
                       ScaledProfile, SolvedProfile, SubextendedProfile, TruncatedProfile, ZeroProfile,
                       exhaustion, log_profile)


def ma_distribution(g: RadialProfile) -> DistributionFunction:
    """``t -> MA(phi)(phi < -t) = g'(sigma_t-)^n``."""
    n = g.n

    def log_func(t):
        return n * np.asarray(g.log_slope_at_level(t), dtype=float)

    def func(t):
        with np.errstate(all="ignore"):
            return np.exp(log_func(t))

    top = float(g.dg(np.asarray(g.s_top)))
    return DistributionFunction(func, log_func, g.t_breaks(), -g.lower,
                                piecewise_constant=g.piecewise_linear,
                                singular_at_zero=not math.isfinite(top), label=f"MA[{g.kind}]")


def cap_distribution(g: RadialProfile) -> DistributionFunction:
    """``t -> Cap(phi < -t) = (s_top - sigma_t)^{-n}``; blows up like ``t^{-n}`` at 0."""
    n = g.n

    def log_func(t):
        with np.errstate(all="ignore"):
            return -n * np.log(g.s_top - np.asarray(g.level(t), dtype=float))

    def func(t):
        with np.errstate(all="ignore"):
            return np.exp(log_func(t))

    return DistributionFunction(func, log_func, g.t_breaks(), -g.lower, piecewise_constant=False,
                                singular_at_zero=True, label=f"Cap[{g.kind}]")


def vol_distribution(g: RadialProfile, unit_volume: float = 1.0) -> DistributionFunction:
    """``t -> Vol(phi < -t) = V1 * e^{2 n sigma_t}`` (volume of the ball of radius ``e^{sigma_t}``)."""
    n = g.n
    logv = math.log(unit_volume)

    def log_func(t):
        return logv + 2.0 * n * (np.asarray(g.level(t), dtype=float) - g.s_top)

    def func(t):
        with np.errstate(all="ignore"):
            return np.exp(log_func(t))

    return DistributionFunction(func, log_func, g.t_breaks(), -g.lower, label=f"Vol[{g.kind}]")


def energy_solution(g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> NormSolution:
    return solve_norm(ma_distribution(g), w, spec)


def energy(g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Weighted energy: the Luxembourg norm of ``-phi`` against its own MA measure."""
    return energy_solution(g, w, spec).value


def j_energy_solution(g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> NormSolution:
    return solve_norm(cap_distribution(g), tilde(w, g.n), spec)


def j_energy(g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Capacity energy: the Choquet norm of ``-phi`` for the transformed weight ``h~``."""
    return j_energy_solution(g, w, spec).value


def lp_norm(mu: RadialMeasure, g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Luxembourg norm of ``-phi`` in ``L_h(mu)``."""
    from .measures import pushforward_distribution
    return solve_norm(pushforward_distribution(mu, g), w, spec).value


# -- second path: integrals over the radius variable s -----------------------

def _integrate_s(f, g: RadialProfile, spec: QuadratureSpec, stop_above: float = math.inf) -> float:
    """``int_{-inf}^{s_top} f(s) ds`` split at the kinks of ``g``."""
    ks = sorted({k for k in g.kinks() if k < g.s_top})
    if not ks or ks[-1] < g.s_top - 1.0:
        ks.append(g.s_top - 1.0)
    edges = ks + [g.s_top]

    def safe(s):
        v = np.asarray(f(s), dtype=float)
        return np.where(np.isnan(v), 0.0, v)

    total = 0.0
    for lo, hi in zip(edges[:-2], edges[1:-1]):
        total += integrate(safe, lo, hi, spec).value
    # dyadic blocks toward the boundary sphere detect a nonintegrable blow-up there
    top = g.s_top
    total += integrate_from_zero(lambda u: safe(top - u), top - edges[-2], spec,
                                 stop_above - total).value
    if not math.isfinite(total) or total > stop_above:
        return total
    left = edges[0]
    # unbounded end, in the variable u = left - s
    r = integrate_to_infinity(lambda u: safe(left - u), 0.0, spec, stop_above=stop_above - total,
                              first_width=max(1.0, abs(left)))
    return total + r.value


def stieltjes_layercake(g: RadialProfile, w: Weight, lam: float, mu: Optional[RadialMeasure] = None,
                        spec: QuadratureSpec = DEFAULT_SPEC, stop_above: float = math.inf) -> float:
    """``int h(-phi/lam) dmu`` integrated by parts in ``s`` (no level inversion).

    ``int m(s) (1/lam) h'(-g(s)/lam) g'(s) ds`` plus the boundary term from a
    Dirac mass at the origin, which is infinite for unbounded ``g``.
    """
    mu = mu if mu is not None else MAMeasure(g)
    if mu.origin_mass > 0 and not math.isfinite(g.lower):
        return math.inf
    loglam = math.log(lam)

    def f(s):
        with np.errstate(all="ignore"):
            m = np.asarray(mu.m_closed(s), dtype=float)
            val = np.exp(np.log(m) + w.log_dh(-np.asarray(g.g(s)) / lam) - loglam
                         + np.log(np.asarray(g.dg(s), dtype=float)))
        return val

    total = _integrate_s(f, g, spec, stop_above)
    if mu.origin_mass > 0:
        total += mu.origin_mass * float(w.h(-g.lower / lam))
    return total


def energy_via_s(g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Energy computed from :func:`stieltjes_layercake`: an independent route to :func:`energy`."""
    if float(MAMeasure(g).total) == 0.0:
        return 0.0
    return solve_decreasing(lambda lam: stieltjes_layercake(g, w, lam, spec=spec, stop_above=1e6)).value


def energy_poly_closed(g: RadialProfile, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Energy for ``h = t^p / p`` in closed form: ``(int (-g)^{p-1} g'^{n+1} ds)^{1/p}``."""
    n = g.n
    if g.asymptotic_slope > 0 and not math.isfinite(g.lower):
        return math.inf

    def f(s):
        with np.errstate(all="ignore"):
            d = np.asarray(g.dg(s), dtype=float)
            return np.exp((p - 1.0) * np.log(-np.asarray(g.g(s))) + (n + 1) * np.log(d)) if p != 1 else d ** (n + 1)

    val = _integrate_s(f, g, spec)
    return val ** (1.0 / p)


def j_energy_poly_closed(g: RadialProfile, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Capacity energy for ``h = t^p / p``: ``(int (-g)^{n+p-1} (s_top - s)^{-n} g' ds)^{1/(n+p)}``."""
    n = g.n

    def f(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(all="ignore"):
            mg = -np.asarray(g.g(s), dtype=float)
            ratio = mg / (g.s_top - s)
            return np.exp(n * np.log(ratio) + (p - 1.0) * np.log(mg) + np.log(np.asarray(g.dg(s), dtype=float)))

    val = _integrate_s(f, g, spec)
    return val ** (1.0 / (n + p))


# -- Dirichlet problem and subextension -------------------------------------

def dirichlet_solve(mu: RadialMeasure, n: int = 1) -> RadialProfile:
    """Radial profile with Monge-Ampere measure ``mu`` and zero boundary values.

    ``g(s) = -int_s^0 m(x)^{1/n} dx``; the result is unbounded below when the
    tail integral diverges (for instance if ``mu`` charges the origin).
    """
    if int(n) != n or n < 1:
        raise InvalidInput("dimension must be an integer >= 1")
    check_monotone(mu)
    if mu.total == 0:
        return ZeroProfile(int(n))
    return SolvedProfile(mu, int(n))


def subextension(g: RadialProfile, log_radius: float) -> RadialProfile:
    """Largest convex nondecreasing ``G <= 0`` on ``(-inf, log R]`` with ``G <= g`` on ``(-inf, 0]``.

    ``G`` is ``g`` up to the contact point ``s*`` and the support line through
    ``(log R, 0)`` after it.  ``s*`` is where ``D(s) = g(s) + g'(s-) (log R - s)``,
    the value at ``log R`` of the tangent line at ``s``, changes sign; ``D``
    is nondecreasing by convexity.
    """
    if not log_radius > 0:
        raise InvalidInput("log R must be positive")
    if g.s_top != 0.0:
        raise InvalidInput("subextension starts from a profile on the unit ball")
    if float(g.dg(0.0)) == 0.0:
        return SubextendedProfile(g, log_radius, 0.0, 0.0)

    def D(s):
        s = np.asarray(s, dtype=float)
        return np.asarray(g.g(s)) + np.asarray(g.dg(s)) * (log_radius - s)

    if D(-1.0) >= 0:
        lo = -1.0
        while D(lo) >= 0 and lo > -1e15:
            lo *= 2.0
        if D(lo) >= 0:
            return SubextendedProfile(g, log_radius, -math.inf, g.asymptotic_slope)
        hi = lo / 2.0
    else:
        lo, hi = -1.0, 0.0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if D(mid) >= 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 2e-16 * max(1.0, abs(hi)):
            break
    s_star = hi
    # snap to a kink when bisection converged onto one
    for k in g.kinks():
        if abs(k - s_star) <= 1e-12 * max(1.0, abs(k)):
            s_star = k
    slope = float(g.g(s_star)) / (s_star - log_radius)
    return SubextendedProfile(g, log_radius, s_star, slope)


def subextension_slope(g: RadialProfile, log_radius: float) -> float:
    """``sup_{s <= 0} g(s) / (s - log R)``, the slope of the support line."""
    return subextension(g, log_radius).slope_star


# -- named families ---------------------------------------------------------

def family(kind: str, n: int = 1, **params) -> RadialProfile:
    """Build a named profile.

    Kinds: ``log``, ``trunc`` (``M``), ``iterlog`` (``k``), ``power``
    (``alpha``), ``exp`` (``c``, default 2), ``exhaustion`` (``j`` with
    ``base`` profile), ``scaled`` (``alpha`` with ``base``), ``zero``.
    """
    if kind == "log":
        return log_profile(n)
    if kind == "trunc":
        base = params.get("base") or log_profile(n)
        return TruncatedProfile(base, float(params["M"]))
    if kind == "iterlog":
        return IterLogProfile(int(params.get("k", 1)), n)
    if kind == "power":
        return PowerProfile(float(params["alpha"]), n)
    if kind == "exp":
        return ExpProfile(float(params.get("c", 2.0)), n)
    if kind == "exhaustion":
        base = params.get("base") or IterLogProfile(1, n)
        return exhaustion(base, float(params["j"]))
    if kind == "scaled":
        return ScaledProfile(params["base"], float(params["alpha"]))
    if kind == "zero":
        return ZeroProfile(n)
    raise InvalidInput(f"unknown profile family {kind!r}")


def superposition(coefficients, profiles) -> CombinationProfile:
    """``sum_j c_j g_j``."""
    return CombinationProfile(tuple(float(c) for c in coefficients), tuple(profiles))


def profile_grid(*profiles: RadialProfile, points: int = 512, depth: float = 40.0) -> np.ndarray:
    """512 log-spaced radii in ``[-depth, 0]`` plus every kink of the given profiles."""
    grid = -np.geomspace(1e-8, depth, points)
    ks = [k for p in profiles for k in p.kinks() if math.isfinite(k)]
    return np.unique(np.concatenate([grid, np.asarray(ks, dtype=float), [0.0]]))


def is_below(low: RadialProfile, high: RadialProfile, tol: float = 1e-12) -> bool:
    """``low <= high`` on :func:`profile_grid`."""
    s = profile_grid(low, high)
    a, b = np.asarray(low.g(s)), np.asarray(high.g(s))
    return bool(np.all(a <= b + tol * np.maximum(1.0, np.abs(b))))


def poly_exponent(w: Weight) -> Optional[float]:
    """``p`` if ``w`` is the polynomial weight ``t^p/p``, else ``None``."""
    return w.p if isinstance(w, PolynomialWeight) else None


def sandwich_margins(g: RadialProfile, s, t) -> tuple[np.ndarray, np.ndarray]:
    """Margins of ``t^n Cap(phi < -s-t) <= MA(phi)(phi < -s) <= s^n Cap(phi < -s)``.

    Evaluated on the outer product of ``s`` and ``t``; each margin is
    ``(rhs - lhs) / max(1, |rhs|)`` so a negative entry is a violation.

    Returns:
        ``(lower, upper)`` arrays of shape ``(len(s), len(t))``.
    """
    n = g.n
    s = np.asarray(s, dtype=float)[:, None]
    t = np.asarray(t, dtype=float)[None, :]
    F_ma, F_cap = ma_distribution(g), cap_distribution(g)
    ma = np.asarray(F_ma(np.broadcast_to(s, (s.shape[0], t.shape[1]))), dtype=float)
    with np.errstate(all="ignore"):
        low_lhs = t ** n * np.asarray(F_cap(s + t), dtype=float)
        up_rhs = s ** n * np.asarray(F_cap(np.broadcast_to(s, ma.shape)), dtype=float)
        lower = (ma - low_lhs) / np.maximum(1.0, np.abs(ma))
        upper = (up_rhs - ma) / np.maximum(1.0, np.abs(up_rhs))
    lower = np.where(np.isinf(ma) & (ma > 0), np.inf, lower)
    upper = np.where(np.isinf(up_rhs) & (up_rhs > 0), np.inf, upper)
    return lower, upper
