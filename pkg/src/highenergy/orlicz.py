"""Distribution functions, layer-cake integrals and Orlicz-type norms.

Functions enter only through their distribution functions
``F(t) = mu(|f| > t)`` (or ``Cap(f > t)`` for Choquet integrals), so that

    int h(|f| / lam) dmu = int_0^inf (1/lam) h'(t/lam) F(t) dt.

The Luxembourg norm is the root in ``lam`` of that integral equal to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, InvalidInput
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, QuadResult, integrate,
                         integrate_from_zero, integrate_to_infinity)
from .weights import Weight

# Layer-cake values above this are only needed as "larger than 1".
_STOP_ABOVE = 1e6
_MAX_DOUBLINGS = 64


@dataclass(frozen=True)
class DistributionFunction:
    """A nonincreasing right-continuous ``F: (0, inf) -> [0, inf]``.

    Attributes:
        func: vectorized evaluator of ``F``.
        log_func: optional vectorized evaluator of ``log F`` for rapidly
            decaying tails; defaults to ``log(func)``.
        breaks: points in ``(0, t_max)`` where ``F`` may jump or have a kink.
        t_max: ``F`` vanishes on ``[t_max, inf)``.
        piecewise_constant: ``F`` is constant between consecutive breaks.
        singular_at_zero: ``F`` may be unbounded as ``t -> 0``.
        label: free-form description carried into reports.
    """

    func: Callable
    log_func: Optional[Callable] = None
    breaks: tuple = ()
    t_max: float = math.inf
    piecewise_constant: bool = False
    singular_at_zero: bool = False
    label: str = ""
    _json: Optional[dict] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        bps = sorted({float(b) for b in self.breaks if 0.0 < b < self.t_max and math.isfinite(b)})
        object.__setattr__(self, "breaks", tuple(bps))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            v = np.asarray(self.func(t), dtype=float)
        v = np.where(t >= self.t_max, 0.0, v)
        return float(v) if np.ndim(t) == 0 else v

    def log(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            if self.log_func is not None:
                v = np.asarray(self.log_func(t), dtype=float)
            else:
                v = np.log(np.asarray(self.func(t), dtype=float))
        v = np.where(t >= self.t_max, -np.inf, v)
        return float(v) if np.ndim(t) == 0 else v

    @property
    def pieces(self) -> list[tuple[float, float]]:
        """Consecutive intervals between breaks, covering ``(0, t_max)``."""
        edges = [0.0, *self.breaks, self.t_max]
        return list(zip(edges[:-1], edges[1:]))

    def jumps(self) -> list[tuple[float, float, float]]:
        """``(location, left value, right value)`` for every break where ``F`` jumps."""
        out = []
        locs = list(self.breaks) + ([self.t_max] if math.isfinite(self.t_max) and self.t_max > 0 else [])
        for b in locs:
            left = self(np.nextafter(b, 0.0))
            right = self(b)
            if left != right:
                out.append((b, float(left), float(right)))
        return out

    def is_zero(self) -> bool:
        """``F == 0`` identically; by monotonicity it suffices to look at ``0+``."""
        if self.t_max <= 0:
            return True
        first = self.pieces[0][1]
        probe = min(1e-300, first) if self.singular_at_zero else 0.5 * min(first, 1e-12)
        return float(self(probe if probe > 0 else 5e-324)) == 0.0

    # -- algebra -----------------------------------------------------------
    def truncated(self, T: float) -> "DistributionFunction":
        """``F * 1_{t < T}``."""
        return DistributionFunction(self.func, self.log_func, self.breaks + (T,), min(self.t_max, T),
                                    self.piecewise_constant, self.singular_at_zero,
                                    f"{self.label}|t<{T:g}")

    def scaled_argument(self, alpha: float) -> "DistributionFunction":
        """Distribution of ``alpha * f``: ``t -> F(t / alpha)``."""
        if not alpha > 0:
            raise InvalidInput("argument scale must be positive")
        f, lf = self.func, self.log_func
        return DistributionFunction(lambda t: f(np.asarray(t) / alpha),
                                    None if lf is None else (lambda t: lf(np.asarray(t) / alpha)),
                                    tuple(alpha * b for b in self.breaks), alpha * self.t_max,
                                    self.piecewise_constant, self.singular_at_zero,
                                    f"{self.label}(t/{alpha:g})")

    def scaled(self, c: float) -> "DistributionFunction":
        """``c * F``; ``c = 1/2`` realizes the halved measure."""
        if not c >= 0:
            raise InvalidInput("mass scale must be nonnegative")
        f, lf = self.func, self.log_func
        logc = math.log(c) if c > 0 else -math.inf
        return DistributionFunction(lambda t: c * np.asarray(f(t)),
                                    None if lf is None else (lambda t: logc + np.asarray(lf(t))),
                                    self.breaks, self.t_max if c > 0 else 0.0,
                                    self.piecewise_constant, self.singular_at_zero,
                                    f"{c:g}*{self.label}")

    def plus(self, other: "DistributionFunction") -> "DistributionFunction":
        """Pointwise sum ``F + G``."""
        f, g = self.func, other.func
        return DistributionFunction(
            lambda t: np.where(np.asarray(t) < self.t_max, f(t), 0.0)
            + np.where(np.asarray(t) < other.t_max, g(t), 0.0),
            lambda t: np.logaddexp(self.log(t), other.log(t)), self.breaks + other.breaks + (min(self.t_max, other.t_max),),
            max(self.t_max, other.t_max),
            self.piecewise_constant and other.piecewise_constant,
            self.singular_at_zero or other.singular_at_zero, f"{self.label}+{other.label}")

    # -- integrals ---------------------------------------------------------
    def integral(self, a: float = 0.0, b: float = math.inf, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
        """``int_a^b F(t) dt``."""
        return _integrate_pieces(self, lambda t: self(t), a, b, spec, math.inf,
                                 exact=lambda c, lo, hi: c * (hi - lo)).value

    # -- serialization -----------------------------------------------------
    def to_json(self, grid: Optional[Sequence[float]] = None) -> dict:
        """Sampled description ``{samples, jumps, tail, head}``.

        Sampling is deterministic, and a function rebuilt by :meth:`from_json`
        serializes to the identical dictionary.
        """
        if self._json is not None:
            return self._json
        top = self.t_max if math.isfinite(self.t_max) else max([*self.breaks, 1.0]) * 64.0
        if grid is None:
            grid = np.geomspace(1e-6 * top, top, 241)
            grid = np.unique(np.concatenate([grid, np.asarray(self.breaks)]))
        grid = np.asarray(grid, dtype=float)
        grid = grid[grid < self.t_max] if math.isfinite(self.t_max) else grid
        vals = self(grid)
        samples = [[float(t), float(v)] for t, v in zip(grid, vals)]
        tail = {"kind": "zero", "rate": 0.0, "start": float(self.t_max)}
        if not math.isfinite(self.t_max) and len(grid) >= 2 and vals[-1] > 0 and vals[-2] > 0:
            lg = self.log(grid[-2:])
            tail = {"kind": "exp", "rate": float(-(lg[1] - lg[0]) / (grid[-1] - grid[-2])),
                    "start": float(grid[-1])}
        head = {"kind": "power", "rate": 0.0}
        if self.singular_at_zero and len(grid) >= 2 and vals[0] > 0 and vals[1] > 0:
            head["rate"] = float(-(math.log(vals[1]) - math.log(vals[0])) / (math.log(grid[1]) - math.log(grid[0])))
        return {"samples": samples, "jumps": [list(j) for j in self.jumps()], "tail": tail, "head": head,
                "label": self.label}

    @classmethod
    def from_json(cls, d: dict) -> "DistributionFunction":
        """Rebuild by log-linear interpolation between samples."""
        samples = np.asarray(d["samples"], dtype=float).reshape(-1, 2)
        ts, vs = list(samples[:, 0]), list(samples[:, 1])
        # a jump is a repeated knot: left value first, then the right value
        for loc, left, _right in d.get("jumps", []):
            if loc in ts:
                i = ts.index(loc)
                ts.insert(i, loc)
                vs.insert(i, left)
        ts, vs = np.asarray(ts), np.asarray(vs)
        tail, head = d["tail"], d.get("head", {"kind": "power", "rate": 0.0})
        t_max = float(tail["start"]) if tail["kind"] == "zero" else math.inf

        def func(t):
            t = np.asarray(t, dtype=float)
            i = np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2)
            t0, t1, v0, v1 = ts[i], ts[i + 1], vs[i], vs[i + 1]
            with np.errstate(all="ignore"):
                w = np.where(t1 > t0, (t - t0) / (t1 - t0), 1.0)
                loglin = np.exp((1 - w) * np.log(v0) + w * np.log(v1))
                val = np.where((v0 > 0) & (v1 > 0), loglin, (1 - w) * v0 + w * v1)
                val = np.where(t >= ts[-1], vs[-1] * np.exp(-tail["rate"] * (t - ts[-1])), val)
                val = np.where(t < ts[0], vs[0] * (t / ts[0]) ** (-head["rate"]), val)
            return val

        bps = tuple(float(j[0]) for j in d.get("jumps", []))
        return cls(func, None, bps, t_max, False, head["rate"] > 0, d.get("label", ""), _json=d)


def _integrate_pieces(F: DistributionFunction, integrand: Callable, a: float, b: float,
                      spec: QuadratureSpec, stop_above: float, exact=None,
                      tail_width: float = 1.0) -> QuadResult:
    """Integrate ``integrand`` over ``[a, b]`` piece by piece along ``F``'s breaks.

    ``exact(c, lo, hi)`` integrates a piece on which ``F == c`` in closed form
    when ``F`` is piecewise constant.
    """
    b = min(b, F.t_max)
    if not b > a:
        return QuadResult(0.0, 0.0, 0)
    edges = [a] + [x for x in F.breaks if a < x < b] + [b]
    total = err = 0.0
    evals = 0

    def safe(t):
        v = np.asarray(integrand(t), dtype=float)
        return np.where(np.isnan(v), 0.0, v)

    for lo, hi in zip(edges[:-1], edges[1:]):
        if F.piecewise_constant and exact is not None:
            probe = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * lo + 1.0
            c = float(F(probe))
            if c == 0.0:
                continue
            val = float(exact(c, lo, hi))
            r = QuadResult(val, 0.0, 1)
        elif math.isfinite(hi):
            if lo == 0.0 and F.singular_at_zero:
                r = integrate_from_zero(safe, hi, spec, stop_above - total)
            else:
                r = integrate(safe, lo, hi, spec)
        else:
            if lo == 0.0:
                head = (integrate_from_zero(safe, 1.0, spec, stop_above - total) if F.singular_at_zero
                        else integrate(safe, 0.0, 1.0, spec))
                if not math.isfinite(head.value) or head.value + total > stop_above:
                    return QuadResult(total + head.value, err + head.error, evals + head.evaluations, True)
                total += head.value
                err += head.error
                evals += head.evaluations
                lo = 1.0
            r = integrate_to_infinity(safe, lo, spec, stop_above - total,
                                      first_width=max(tail_width, lo))
        total += r.value
        err += r.error
        evals += r.evaluations
        if not math.isfinite(total):
            return QuadResult(math.inf, math.inf, evals)
        if total > stop_above or r.partial:
            return QuadResult(total, err, evals, True)
    return QuadResult(total, err, evals)


def layercake_integral(F: DistributionFunction, w: Weight, lam: float,
                       spec: QuadratureSpec = DEFAULT_SPEC,
                       stop_above: float = math.inf) -> float:
    """``int_0^inf (1/lam) h'(t/lam) F(t) dt``, i.e. ``int h(|f|/lam) dmu``.

    Constant pieces of ``F`` are integrated exactly as ``c (h(b/lam) - h(a/lam))``;
    other pieces use log-domain evaluation of the integrand.  Divergence is
    reported as ``math.inf``; with ``stop_above`` the integration may stop
    early and return any value above that threshold.
    """
    return _layercake(F, w, lam, spec, stop_above).value


def _layercake(F, w, lam, spec, stop_above):
    if not lam > 0:
        raise InvalidInput("lambda must be positive")
    loglam = math.log(lam)

    def integrand(t):
        with np.errstate(all="ignore"):
            return np.exp(w.log_dh(t / lam) - loglam + F.log(t))

    def exact(c, lo, hi):
        with np.errstate(over="ignore"):
            return c * (w.h(hi / lam) - w.h(lo / lam)) if math.isfinite(hi) else math.inf

    return _integrate_pieces(F, integrand, 0.0, math.inf, spec, stop_above, exact=exact,
                             tail_width=max(lam, 1e-3))


@dataclass
class NormSolution:
    """Outcome of a norm computation together with solver diagnostics."""

    value: float
    integral_at_value: float
    bracket: tuple
    evaluations: int
    reason: str = "root"

    def to_json(self) -> dict:
        return {"value": self.value, "integral_at_value": self.integral_at_value,
                "bracket": list(self.bracket), "evaluations": self.evaluations, "reason": self.reason}


def solve_norm(F: DistributionFunction, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC,
               rel_width: float = 1e-12) -> NormSolution:
    """``inf{lam > 0 : layercake(F, w, lam) <= 1}`` with diagnostics."""
    if F.is_zero():
        return NormSolution(0.0, 0.0, (0.0, 0.0), 0, "zero")
    return solve_decreasing(lambda lam: layercake_integral(F, w, lam, spec, stop_above=_STOP_ABOVE),
                            rel_width)


def solve_decreasing(L: Callable[[float], float], rel_width: float = 1e-12) -> NormSolution:
    """Solve ``L(lam) = 1`` for a continuous decreasing ``L`` with ``L(0+) = inf``.

    ``L`` may return any value above ``1e6`` in place of the exact one.  The
    bracket is found by doubling or halving from ``lam = 1``; the root of
    ``x -> log L(e^x)`` is then located by Brent's method to the requested
    relative width.  If ``L > 1`` up to ``lam = 2**64`` the result is ``inf``.
    """
    count = [0]

    def call(lam):
        count[0] += 1
        return L(lam)

    lam = 1.0
    v = call(lam)
    if v > 1.0:
        lo, vlo = lam, v
        for _ in range(_MAX_DOUBLINGS):
            lam *= 2.0
            v = call(lam)
            if v <= 1.0:
                break
            lo, vlo = lam, v
        else:
            return NormSolution(math.inf, v, (lam, math.inf), count[0], "not-in-space")
        hi, vhi = lam, v
    else:
        hi, vhi = lam, v
        for _ in range(4 * _MAX_DOUBLINGS):
            lam *= 0.5
            v = call(lam)
            if v > 1.0:
                break
            hi, vhi = lam, v
        else:
            raise BracketError("layer-cake integral stays below 1 as lambda -> 0")
        lo, vlo = lam, v
    if vhi == 1.0:
        return NormSolution(hi, vhi, (lo, hi), count[0])
    # pull the lower end inside the region where values are exact
    while not (math.isfinite(vlo) and vlo < _STOP_ABOVE):
        mid = math.sqrt(lo * hi)
        vm = call(mid)
        if vm <= 1.0:
            hi, vhi = mid, vm
        else:
            lo, vlo = mid, vm
        if hi / lo - 1.0 < rel_width:
            return NormSolution(hi, vhi, (lo, hi), count[0])

    ends = {}

    def phi(x):
        # exp(log(lam)) need not round back to lam, so the bracket ends reuse their values
        val = ends[x] if x in ends else call(math.exp(x))
        return math.log(val) if val > 0 else -745.0

    if vhi == 0.0:
        # zero integral at hi: shrink until positive so Brent sees a sign change
        while vhi == 0.0 and hi / lo - 1.0 > rel_width:
            mid = math.sqrt(lo * hi)
            vm = call(mid)
            if vm > 1.0:
                lo, vlo = mid, vm
            else:
                hi, vhi = mid, vm
        if vhi == 0.0:
            return NormSolution(hi, vhi, (lo, hi), count[0])
    ends.update({math.log(lo): vlo, math.log(hi): vhi})
    x = brentq(phi, math.log(lo), math.log(hi), xtol=rel_width, rtol=4 * np.finfo(float).eps, maxiter=200)
    root = math.exp(x)
    return NormSolution(root, call(root), (lo, hi), count[0])


def luxembourg_norm(F: DistributionFunction, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Luxembourg norm ``inf{lam : int h(|f|/lam) dmu <= 1}`` from the distribution of ``|f|``.

    Returns 0 exactly when ``F == 0`` and ``math.inf`` when the integral
    exceeds 1 for every ``lam`` up to ``2**64``.
    """
    return solve_norm(F, w, spec).value


def choquet_norm(F_cap: DistributionFunction, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Choquet-Orlicz norm from the capacity distribution ``t -> Cap(f > t)``.

    Same solver as :func:`luxembourg_norm`; ``F_cap`` may blow up at 0.
    """
    return solve_norm(F_cap, w, spec).value


def choquet_solution(F_cap: DistributionFunction, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC) -> NormSolution:
    """:func:`choquet_norm` with diagnostics.

    When the norm is infinite the reason distinguishes a non-integrable
    singularity at ``t = 0`` (``"singular-at-zero"``) from a divergent tail.
    """
    sol = solve_norm(F_cap, w, spec)
    if math.isinf(sol.value) and F_cap.singular_at_zero:
        lam = 2.0 ** _MAX_DOUBLINGS

        def integrand(t):
            with np.errstate(all="ignore"):
                return np.exp(w.log_dh(t / lam) - math.log(lam) + F_cap.log(t))

        head = integrate_from_zero(lambda t: np.nan_to_num(integrand(t)), min(1.0, F_cap.pieces[0][1]), spec)
        if math.isinf(head.value):
            sol.reason = "singular-at-zero"
    return sol


def envelope_of_sum(F: DistributionFunction, G: DistributionFunction) -> DistributionFunction:
    """Upper bound ``F(t/2) + G(t/2)`` for the distribution of ``f + g``."""
    return F.scaled_argument(2.0).plus(G.scaled_argument(2.0))


def union_envelope(dists: Sequence[DistributionFunction], alphas: Sequence[float]) -> DistributionFunction:
    """``sum_j alpha_j F_j``: its layer cake bounds that of ``sum_j eps_j alpha_j f_j``.

    With ``sum eps_j <= 1``, convexity of ``h`` and ``h(0) = 0`` give
    ``h(f/lam) <= sum_j eps_j h(alpha_j f_j/lam)``; the union bound
    ``{sum eps_j u_j > t} <= union {u_j > t}`` and ``h(alpha x) <= alpha h(x)``
    then bound the Choquet integral by ``sum_j alpha_j int h(f_j/lam) dCap``,
    which is the layer cake of this distribution.
    """
    parts = [F.scaled(a) for F, a in zip(dists, alphas) if a > 0]
    out = parts[0]
    for s in parts[1:]:
        out = out.plus(s)
    return out


def constant_distribution(mass: float, value: float) -> DistributionFunction:
    """Distribution of the constant ``value`` on a set of measure ``mass``."""
    return DistributionFunction(lambda t: np.full(np.shape(t), float(mass)), None, (), float(value),
                                True, False, f"atom({mass:g}@{value:g})")
