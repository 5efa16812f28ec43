"""Numerical exploration around Orlicz integrability of Monge-Ampere measures.

* :func:`kappa_lower_bound` searches a profile family for large values of
  ``||phi||_{L(mu/2)} / ||phi||_{L(mu)}``; the result is a lower bound on
  the supremum over all finite-energy functions, relative to the family.
* :func:`coercivity_fit` fits a line ``||phi||_{L(mu)} <= a E(phi) + C``
  dominating a sample cloud.
* :func:`quantitative_bound_check` tests the explicit norm bound for
  ``mu = MA(psi)``.
* :func:`bedford_pipeline` shows finiteness of energies for bounded
  profiles and builds a divergence witness weight for unbounded ones.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BoundedInput, HighEnergyError, InvalidInput, NotInOrliczSpace
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .radial import (CombinationProfile, ExpProfile, IterLogProfile, MAMeasure, PowerProfile,
                     RadialMeasure, RadialProfile, energy, exhaustion, lp_norm,
                     ma_distribution, truncation)
from .verify import CheckReport, _report, _skip
from .weights import Weight, exponential, iterated_exponential, polynomial, witness_weight

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ProfileFamily:
    """A profile family indexed by a box of real parameters.

    Attributes:
        name: family name used on the command line.
        names: parameter names.
        bounds: ``(lo, hi)`` per parameter; ``lo == hi`` fixes it.
        log_scale: search each parameter on a log scale.
        build: ``(params, n) -> RadialProfile``.
    """

    name: str
    names: tuple
    bounds: tuple
    log_scale: tuple
    build: Callable[[tuple, int], RadialProfile]

    def to_unit(self, i: int, x: float) -> float:
        lo, hi = self.bounds[i]
        if hi == lo:
            return 0.0
        if self.log_scale[i]:
            return (math.log(x) - math.log(lo)) / (math.log(hi) - math.log(lo))
        return (x - lo) / (hi - lo)

    def from_unit(self, i: int, u: float) -> float:
        lo, hi = self.bounds[i]
        u = min(1.0, max(0.0, u))
        if self.log_scale[i]:
            return math.exp(math.log(lo) + u * (math.log(hi) - math.log(lo)))
        return lo + u * (hi - lo)


FAMILIES = {
    "trunc": ProfileFamily("trunc", ("M",), ((0.25, 16.0),), (True,),
                           lambda x, n: truncation(x[0], n=n)),
    "trunc-iterlog": ProfileFamily("trunc-iterlog", ("M",), ((0.25, 16.0),), (True,),
                                   lambda x, n: truncation(x[0], base=IterLogProfile(1, n))),
    "exhaustion": ProfileFamily("exhaustion", ("j",), ((1.0, 64.0),), (True,),
                                lambda x, n: exhaustion(IterLogProfile(1, n), x[0])),
    "exp": ProfileFamily("exp", ("c",), ((0.25, 8.0),), (True,), lambda x, n: ExpProfile(x[0], n)),
    "power": ProfileFamily("power", ("alpha",), ((0.25, 0.75),), (False,),
                           lambda x, n: PowerProfile(x[0], n)),
    "trunc-exp": ProfileFamily(
        "trunc-exp", ("M", "b"), ((0.25, 16.0), (0.0, 4.0)), (True, False),
        lambda x, n: CombinationProfile((1.0, x[1]), (truncation(x[0], n=n), ExpProfile(2.0, n)))),
}


def get_family(family) -> ProfileFamily:
    if isinstance(family, ProfileFamily):
        return family
    try:
        return FAMILIES[family]
    except KeyError:
        raise InvalidInput(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}") from None


def constant_family(profile: RadialProfile) -> ProfileFamily:
    """A one-member family (a single fixed parameter)."""
    return ProfileFamily("constant", ("x",), ((1.0, 1.0),), (False,), lambda x, n: profile)


def _dimension(mu: RadialMeasure, n: Optional[int]) -> int:
    if n is not None:
        return int(n)
    return int(getattr(getattr(mu, "profile", None), "n", 1))


# -- kappa ------------------------------------------------------------------

@dataclass
class KappaEstimate:
    """Best ratio found by :func:`kappa_lower_bound`.

    The ratio is a lower bound on the supremum over all finite-energy
    functions; it is relative to the searched family and never an estimate
    of the supremum itself.
    """

    measure: dict
    weight: dict
    family: str
    best_ratio: float
    best_params: dict
    evaluations: int
    unreliable: bool = False
    trace: list = field(default_factory=list)

    @property
    def trace_length(self) -> int:
        return len(self.trace)

    def to_json(self) -> dict:
        return {"measure": self.measure, "weight": self.weight, "family": self.family,
                "best_ratio": self.best_ratio, "best_params": self.best_params,
                "evaluations": self.evaluations, "trace_length": self.trace_length,
                "unreliable": self.unreliable, "claim": "lower bound relative to the family"}

    def csv_rows(self, names: Sequence[str]) -> list:
        rows = []
        for params, ratio in self.trace:
            for name, x in zip(names, params):
                rows.append([x, ratio, name])
        return rows


def kappa_ratio(mu: RadialMeasure, w: Weight, g: RadialProfile,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``||phi||_{L(mu/2)} / ||phi||_{L(mu)}``; ``nan`` when the denominator is 0 or infinite."""
    den = lp_norm(mu, g, w, spec)
    if not (math.isfinite(den) and den > 0):
        return math.nan
    return lp_norm(mu.halved(), g, w, spec) / den


def sample_ratios(mu: RadialMeasure, w: Weight, family="trunc", points: int = 64,
                  n: Optional[int] = None, spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[np.ndarray, np.ndarray]:
    """Ratios on an evenly spaced (in search coordinates) grid along the first parameter.

    Returns:
        ``(parameters, ratios)``.
    """
    fam = get_family(family)
    n = _dimension(mu, n)
    mid = [fam.from_unit(i, 0.5) for i in range(len(fam.names))]
    xs = [fam.from_unit(0, u) for u in np.linspace(0.0, 1.0, points)]

    def one(x):
        return kappa_ratio(mu, w, fam.build(tuple([x] + mid[1:]), n), spec)

    with ThreadPoolExecutor() as pool:
        ratios = list(pool.map(one, xs))
    return np.asarray(xs), np.asarray(ratios)


def kappa_lower_bound(mu: RadialMeasure, w: Weight, family="trunc", budget: int = 200,
                      n: Optional[int] = None, seed_order: Optional[Sequence[str]] = None,
                      spec: QuadratureSpec = DEFAULT_SPEC, grid_points: int = 9) -> KappaEstimate:
    """Coordinate search with golden-section refinement for the largest ratio.

    Each sweep first evaluates ``grid_points`` values of one coordinate (the
    others held at the incumbent) and then refines around the best of them
    by golden-section search.  Coordinates are visited in ``seed_order``.

    Args:
        budget: maximal number of ratio evaluations.
        seed_order: parameter names in visiting order (default: family order).

    Raises:
        NotInOrliczSpace: if no sampled member has a finite positive norm.
    """
    fam = get_family(family)
    n = _dimension(mu, n)
    dim = len(fam.names)
    order = list(range(dim))
    if seed_order:
        try:
            order = [fam.names.index(name) for name in seed_order]
        except ValueError:
            raise InvalidInput(f"seed order {list(seed_order)} does not match parameters {fam.names}") from None
        order += [i for i in range(dim) if i not in order]
    trace: list = []
    cache: dict = {}
    flags = {"unreliable": False}

    def params_of(u):
        return tuple(float(fam.from_unit(i, u[i])) for i in range(dim))

    def evaluate_many(us):
        todo = [u for u in us if u not in cache]
        todo = list(dict.fromkeys(todo))[: max(0, budget - len(trace))]

        def one(u):
            try:
                return kappa_ratio(mu, w, fam.build(params_of(u), n), spec)
            except HighEnergyError:
                flags["unreliable"] = True
                return math.nan

        with ThreadPoolExecutor() as pool:
            values = list(pool.map(one, todo))
        for u, r in zip(todo, values):
            cache[u] = r
            trace.append((params_of(u), r))
            if math.isfinite(r) and r > 1.0 + 1e-9:
                flags["unreliable"] = True
        return [cache.get(u, math.nan) for u in us]

    def key(r):
        return r if math.isfinite(r) else -math.inf

    best_u = tuple(0.5 if fam.bounds[i][0] != fam.bounds[i][1] else 0.0 for i in range(dim))
    best_r = evaluate_many([best_u])[0]
    while len(trace) < budget:
        start = (best_u, best_r)
        for i in order:
            if fam.bounds[i][0] == fam.bounds[i][1] or len(trace) >= budget:
                continue
            grid = np.linspace(0.0, 1.0, grid_points)
            cands = [best_u[:i] + (float(x),) + best_u[i + 1:] for x in grid]
            vals = evaluate_many(cands)
            k = int(np.argmax([key(v) for v in vals]))
            if key(vals[k]) > key(best_r):
                best_u, best_r = cands[k], vals[k]
            # golden section on the neighbouring cells
            a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid_points - 1)]
            c, d = b - INVPHI * (b - a), a + INVPHI * (b - a)
            fc, fd = (key(v) for v in evaluate_many([best_u[:i] + (c,) + best_u[i + 1:],
                                                      best_u[:i] + (d,) + best_u[i + 1:]]))
            while b - a > 1e-6 and len(trace) < budget:
                if fc >= fd:
                    b, d, fd = d, c, fc
                    c = b - INVPHI * (b - a)
                    fc = key(evaluate_many([best_u[:i] + (c,) + best_u[i + 1:]])[0])
                else:
                    a, c, fc = c, d, fd
                    d = a + INVPHI * (b - a)
                    fd = key(evaluate_many([best_u[:i] + (d,) + best_u[i + 1:]])[0])
            for u, r in list(cache.items()):
                if key(r) > key(best_r):
                    best_u, best_r = u, r
        if (best_u, best_r) == start or all(lo == hi for lo, hi in fam.bounds):
            break
    if not math.isfinite(best_r):
        raise NotInOrliczSpace(f"no member of family {fam.name!r} has a finite nonzero norm")
    return KappaEstimate(mu.to_json(), w.to_json(), fam.name, float(best_r),
                         dict(zip(fam.names, params_of(best_u))), len(trace),
                         flags["unreliable"], trace)


# -- coercivity -------------------------------------------------------------

@dataclass
class CoercivityFit:
    """Line ``||phi||_{L(mu)} <= a E(phi) + C`` dominating every finite sample.

    ``integrable`` is false when a sampled member of finite energy has an
    infinite norm; ``witness`` then holds its parameters and ``a`` is inf.
    """

    a: float
    C: float
    samples: int
    residual: float
    violations: int
    points: list
    integrable: bool = True
    witness: Optional[dict] = None
    skipped: int = 0

    def to_json(self) -> dict:
        return {"a": self.a, "C": self.C, "samples": self.samples, "residual": self.residual,
                "violations": self.violations, "integrable": self.integrable,
                "witness": self.witness, "skipped_infinite_energy": self.skipped}


def upper_hull(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices of the upper concave hull of the points, left to right."""
    order = np.lexsort((y, x))
    hull: list[int] = []
    for i in order:
        while hull and x[hull[-1]] == x[i]:
            hull.pop()
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(int(i))
    return np.asarray(hull, dtype=int)


def fit_support_line(x, y) -> tuple[float, float]:
    """Support line at the right end of the upper hull.

    ``a`` is the nonnegative slope of the rightmost hull edge (the growth
    rate the cloud shows at its largest energies) and ``C = max(y - a x)``.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.size == 0:
        return 0.0, 0.0
    h = upper_hull(x, y)
    a = 0.0
    if h.size >= 2:
        i, j = h[-2], h[-1]
        a = max(0.0, float((y[j] - y[i]) / (x[j] - x[i])))
    C = float(np.max(y - a * x))
    return a, C


def family_grid(fam: ProfileFamily, samples: int) -> list[tuple]:
    free = [i for i in range(len(fam.names)) if fam.bounds[i][0] != fam.bounds[i][1]]
    per = max(2, math.ceil(samples ** (1.0 / max(1, len(free))))) if free else 1
    axes = [np.linspace(0.0, 1.0, per) if i in free else np.asarray([0.0]) for i in range(len(fam.names))]
    mesh = np.meshgrid(*axes, indexing="ij")
    units = np.stack([m.ravel() for m in mesh], axis=1)[:samples]
    return [tuple(fam.from_unit(i, u[i]) for i in range(len(fam.names))) for u in units]


def coercivity_fit(mu: RadialMeasure, w: Weight, family="trunc", samples: int = 32,
                   n: Optional[int] = None, spec: QuadratureSpec = DEFAULT_SPEC) -> CoercivityFit:
    """Sample ``(E(phi), ||phi||_{L(mu)})`` over a family and fit a dominating line."""
    fam = get_family(family)
    n = _dimension(mu, n)
    grid = family_grid(fam, samples)

    def one(params):
        g = fam.build(params, n)
        return params, energy(g, w, spec), lp_norm(mu, g, w, spec)

    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(one, grid))
    finite = [(p, e, v) for p, e, v in rows if math.isfinite(e)]
    skipped = len(rows) - len(finite)
    for p, e, v in finite:
        if not math.isfinite(v):
            return CoercivityFit(math.inf, math.inf, len(finite), math.nan, 0,
                                 [(list(q), a, b) for q, a, b in finite], False,
                                 dict(zip(fam.names, p)), skipped)
    x = np.asarray([e for _, e, _ in finite])
    y = np.asarray([v for _, _, v in finite])
    a, C = fit_support_line(x, y)
    gap = a * x + C - y
    violations = int(np.sum(gap < -1e-12 * np.maximum(1.0, np.abs(y))))
    residual = float(np.min(gap)) if gap.size else 0.0
    return CoercivityFit(a, C, len(finite), residual, violations,
                         [(list(p), e, v) for p, e, v in finite], True, None, skipped)


# -- quantitative bound -----------------------------------------------------

def quantitative_bound_check(g_psi: RadialProfile, g_phi: RadialProfile, w: Weight, a: float,
                             spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``||phi||_{L(MA(psi))} <= max(a E(phi), 2^{1+1/n} E(psi) a / (a - 1))``.

    The left side uses the mixed distribution ``t -> MA(psi)(phi < -t)``,
    which in the radial model is the MA mass of ``psi`` on the ball where
    ``phi < -t``.
    """
    if not a > 1:
        raise InvalidInput("a must exceed 1")
    if g_psi.n != g_phi.n:
        raise InvalidInput("profiles must share the dimension")
    n = g_psi.n
    name = f"quantitative_bound[{g_psi.kind}|{g_phi.kind}|{w.kind}|n={n}|a={a:g}]"
    inputs = {"psi": g_psi.to_json(), "phi": g_phi.to_json(), "weight": w.to_json(), "a": a}
    E_psi, E_phi = energy(g_psi, w, spec), energy(g_phi, w, spec)
    if not (math.isfinite(E_psi) and math.isfinite(E_phi)):
        return _skip(name, inputs, "infinite energy", rhs=math.inf)
    lhs = lp_norm(MAMeasure(g_psi), g_phi, w, spec)
    rhs = max(a * E_phi, 2.0 ** (1.0 + 1.0 / n) * E_psi * a / (a - 1.0))
    return _report(name, inputs, lhs, rhs, {"energy_psi": E_psi, "energy_phi": E_phi})


# -- Bedford pipeline -------------------------------------------------------

DIVERGENCE_THRESHOLD = 1e6


def sampled_weights() -> dict:
    return {"poly:p=1": polynomial(1), "poly:p=2": polynomial(2), "exp": exponential(),
            "iterexp:k=2": iterated_exponential(2)}


def lower_block_sums(F, w: Weight, lam: float, blocks: int) -> np.ndarray:
    """Cumulative lower Riemann sums of ``int (1/lam) h'(t/lam) F(t) dt`` over unit blocks.

    On ``[k, k+1)`` the integrand is at least ``(1/lam) h'(k/lam) F(k+1)``
    because ``h'`` is nondecreasing and ``F`` nonincreasing.
    """
    k = np.arange(blocks, dtype=float)
    with np.errstate(all="ignore"):
        logs = np.asarray(w.log_dh(k / lam), dtype=float) - math.log(lam) + np.asarray(F.log(k + 1.0), dtype=float)
        terms = np.exp(logs)
    return np.cumsum(np.where(np.isnan(terms), 0.0, terms))


@dataclass
class BedfordReport:
    """Outcome of :func:`bedford_pipeline`."""

    profile: dict
    bounded: bool
    energies: dict = field(default_factory=dict)
    divergence: dict = field(default_factory=dict)

    @property
    def all_finite(self) -> bool:
        return bool(self.energies) and all(math.isfinite(v) for v in self.energies.values())

    @property
    def diverges(self) -> bool:
        return bool(self.divergence) and all(d["exceeded"] for d in self.divergence.values())

    @property
    def ok(self) -> bool:
        return self.all_finite if self.bounded else self.diverges

    def to_json(self) -> dict:
        return {"profile": self.profile, "bounded": self.bounded, "energies": self.energies,
                "all_finite": self.all_finite, "divergence": self.divergence,
                "diverges": self.diverges, "threshold": DIVERGENCE_THRESHOLD}


def bedford_pipeline(g: RadialProfile, lams: Sequence[float] = (1.0, 2.0, 4.0), blocks: int = 64,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> BedfordReport:
    """Finite energies for bounded profiles; a divergence witness for unbounded ones.

    For unbounded ``g`` the weight ``h'(t) = c / eps(2^j t)`` on ``[j, j+1)``
    is built from ``eps(t) = MA(psi)(psi < -t)``, and the lower block sums of
    the energy integral are accumulated until they exceed the threshold.
    At scale ``lam`` the scan covers ``t < blocks * lam``, where the weight is
    fully tabulated.
    """
    if math.isfinite(g.lower):
        energies = {k: energy(g, w, spec) for k, w in sampled_weights().items()}
        return BedfordReport(g.to_json(), True, energies)
    eps = ma_distribution(g)
    try:
        wit = witness_weight(eps, blocks=blocks)
    except BoundedInput:  # pragma: no cover - guarded by the lower bound test
        return BedfordReport(g.to_json(), True, {})
    divergence = {}
    for lam in lams:
        # unit blocks covering the same weight blocks at every lam
        sums = lower_block_sums(eps, wit, lam, int(math.ceil(blocks * lam)))
        hit = np.nonzero(sums > DIVERGENCE_THRESHOLD)[0]
        cutoff = float(hit[0] + 1) if hit.size else math.nan
        divergence[f"{lam:g}"] = {"exceeded": bool(hit.size), "cutoff": cutoff,
                                  "partial_sum": float(sums[int(hit[0])] if hit.size else sums[-1]),
                                  "first_blocks": [float(v) for v in sums[:4]]}
    return BedfordReport(g.to_json(), False, {}, divergence)
