"""Young functions ("weights") and the constructions that build new ones.

A weight is a convex increasing ``h`` on ``[0, inf)`` with ``h(0) = 0``.  The
concave weight on the negative axis is ``chi(t) = -h(-t)``; everything here
works with ``h``.  Evaluators are vectorized: they accept floats or arrays
and return the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BoundedInput, BracketError, InvalidInput
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate

ArrayLike = "float | np.ndarray"

_LOG_MAX = 709.0


def _arr(t):
    return np.asarray(t, dtype=float)


def _out(x, like):
    if np.ndim(like) == 0:
        return float(np.asarray(x).reshape(()))
    return x


def iterated_exp(t, k: int):
    """``e_k(t)`` with ``e_0(t) = t``; overflows to ``inf``."""
    x = _arr(t)
    with np.errstate(over="ignore"):
        for _ in range(k):
            x = np.exp(x)
    return x


def iterated_log(x, k: int):
    """``L_k(x) = log o ... o log (x)``, the inverse of :func:`iterated_exp`."""
    y = _arr(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(k):
            y = np.log(y)
    return y


def invert_increasing(func: Callable, y, t0: float = 1.0, iterations: int = 200):
    """Solve ``func(t) = y`` for a continuous increasing ``func`` with ``func(0) = 0``.

    Vectorized bisection.  The upper bracket is found by doubling from ``t0``.
    """
    y = _arr(y)
    flat = np.atleast_1d(y).ravel()
    hi = np.full(flat.shape, float(t0))
    for _ in range(2100):
        short = np.asarray(func(hi)) < flat
        if not short.any():
            break
        hi = np.where(short, hi * 2.0, hi)
        if np.any(hi > 1e300):
            raise BracketError("inverse value escaped every bracket")
    lo = np.zeros_like(hi)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = np.asarray(func(mid)) < flat
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 1e-15 * np.maximum(hi, 1e-300)):
            break
    res = np.where(flat <= 0, 0.0, hi)
    return _out(res.reshape(np.shape(y)) if np.ndim(y) else res[0], y)


class Weight:
    """Interface shared by all weights.

    Subclasses implement :meth:`h`, :meth:`dh` and :meth:`inv`; the log-domain
    accessors default to logarithms of those and are overridden wherever
    the plain values overflow.
    """

    kind = "abstract"

    def h(self, t):
        raise NotImplementedError

    def dh(self, t):
        raise NotImplementedError

    def inv(self, y):
        return invert_increasing(self.h, y)

    def log_dh(self, t):
        with np.errstate(divide="ignore"):
            return np.log(self.dh(t))

    def log_h(self, t):
        with np.errstate(divide="ignore"):
            return np.log(self.h(t))

    def __call__(self, t):
        return self.h(t)

    def to_json(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} is not serializable")


@dataclass(frozen=True)
class PolynomialWeight(Weight):
    """``h(t) = t**p / p``."""

    p: float
    kind = "poly"

    def __post_init__(self):
        if not self.p >= 1:
            raise InvalidInput(f"polynomial weight needs p >= 1, got {self.p}")

    def h(self, t):
        t = _arr(t)
        return _out(t ** self.p / self.p, t)

    def dh(self, t):
        t = _arr(t)
        return _out(t ** (self.p - 1.0), t)

    def log_dh(self, t):
        t = _arr(t)
        if self.p == 1:
            return _out(np.zeros_like(t), t)
        with np.errstate(divide="ignore"):
            return _out((self.p - 1.0) * np.log(t), t)

    def log_h(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore"):
            return _out(self.p * np.log(t) - math.log(self.p), t)

    def inv(self, y):
        y = _arr(y)
        return _out((self.p * y) ** (1.0 / self.p), y)

    def to_json(self):
        return {"kind": "poly", "parameters": {"p": self.p}}


@dataclass(frozen=True)
class ExponentialWeight(Weight):
    """``h(t) = e^t - 1``."""

    kind = "exp"

    def h(self, t):
        t = _arr(t)
        with np.errstate(over="ignore"):
            return _out(np.expm1(t), t)

    def dh(self, t):
        t = _arr(t)
        with np.errstate(over="ignore"):
            return _out(np.exp(t), t)

    def log_dh(self, t):
        t = _arr(t)
        return _out(t + 0.0, t)

    def log_h(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore", over="ignore"):
            small = np.log(np.expm1(np.minimum(t, _LOG_MAX)))
            big = t + np.log1p(-np.exp(-t))
        return _out(np.where(t < _LOG_MAX, small, big), t)

    def inv(self, y):
        y = _arr(y)
        return _out(np.log1p(y), y)

    def to_json(self):
        return {"kind": "exp", "parameters": {}}


@dataclass(frozen=True)
class IteratedExpWeight(Weight):
    """Affine normalization of ``e_k``: ``h(t) = (e_k(t) - e_k(0)) / e_k'(0)``.

    ``k = 1`` gives ``e^t - 1``; ``k = 2`` gives ``(e^{e^t} - e) / e``.
    """

    k: int
    kind = "iterexp"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidInput("iterated exponential needs an integer k >= 1")

    @property
    def base_values(self) -> list[float]:
        """``e_0(0), ..., e_{k}(0)``."""
        vals = [0.0]
        for _ in range(self.k):
            vals.append(math.exp(vals[-1]))
        return vals

    @property
    def scale(self) -> float:
        """``e_k'(0) = prod_{i=1..k} e_i(0)``; the normalization constant."""
        return math.prod(self.base_values[1:])

    def _diff(self, t):
        # e_j(t) - e_j(0) computed without cancellation
        d = _arr(t) + 0.0
        base = self.base_values
        with np.errstate(over="ignore", invalid="ignore"):
            for j in range(1, self.k + 1):
                d = base[j] * np.expm1(d)
        return d

    def h(self, t):
        t = _arr(t)
        return _out(self._diff(t) / self.scale, t)

    def dh(self, t):
        t = _arr(t)
        with np.errstate(over="ignore"):
            return _out(np.exp(self.log_dh(t)), t)

    def log_dh(self, t):
        t = _arr(t)
        acc = np.zeros_like(t)
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(self.k):
                acc = acc + iterated_exp(t, i)
        return _out(acc - math.log(self.scale), t)

    def log_h(self, t):
        t = _arr(t)
        base = self.base_values
        d = _arr(t) + 0.0
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            for j in range(1, self.k):
                d = base[j] * np.expm1(d)
            # d = e_{k-1}(t) - e_{k-1}(0); log(e_k(0) * expm1(d))
            small = np.log(np.expm1(np.minimum(d, _LOG_MAX)))
            big = d + np.log1p(-np.exp(-d))
            res = math.log(base[self.k]) + np.where(d < _LOG_MAX, small, big)
        return _out(res - math.log(self.scale), t)

    def inv(self, y):
        y = _arr(y)
        d = y * self.scale
        base = self.base_values
        for j in range(self.k, 0, -1):
            d = np.log1p(d / base[j])
        return _out(d, y)

    def to_json(self):
        return {"kind": "iterexp", "parameters": {"k": int(self.k)}}


@dataclass(frozen=True)
class PiecewiseWeight(Weight):
    """Weight with piecewise-constant derivative.

    ``h'(t) = values[i]`` on ``[breakpoints[i], breakpoints[i+1])``; the last
    value extends to infinity.  ``breakpoints[0]`` must be 0.
    """

    breakpoints: tuple
    values: tuple
    label: str = "table"
    kind = "table"

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.size == 0 or bp.size != vals.size:
            raise InvalidInput("breakpoints and values must have the same nonzero length")
        if bp[0] != 0.0 or np.any(np.diff(bp) <= 0):
            raise InvalidInput("breakpoints must start at 0 and increase strictly")
        if np.any(vals < 0) or np.any(np.diff(vals) < 0):
            raise InvalidInput("derivative values must be nonnegative and nondecreasing")
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in bp))
        object.__setattr__(self, "values", tuple(float(v) for v in vals))
        cum = np.concatenate([[0.0], np.cumsum(vals[:-1] * np.diff(bp))])
        object.__setattr__(self, "_cum", tuple(cum))

    def _index(self, t):
        return np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, None)

    def h(self, t):
        t = _arr(t)
        i = self._index(t)
        bp, vals, cum = (np.asarray(x) for x in (self.breakpoints, self.values, self._cum))
        return _out(cum[i] + vals[i] * (t - bp[i]), t)

    def dh(self, t):
        t = _arr(t)
        return _out(np.asarray(self.values)[self._index(t)], t)

    def inv(self, y):
        y = _arr(y)
        cum = np.asarray(self._cum)
        vals = np.asarray(self.values)
        bp = np.asarray(self.breakpoints)
        i = np.clip(np.searchsorted(cum, y, side="right") - 1, 0, None)
        # a zero-derivative piece only occurs at the start and maps y = 0 to t = 0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(vals[i] > 0, bp[i] + (y - cum[i]) / vals[i], bp[i])
        return _out(np.where(y <= 0, 0.0, t), y)

    def to_json(self):
        return {"kind": "table", "parameters": {"label": self.label},
                "breakpoints": list(self.breakpoints), "derivative_values": list(self.values)}


@dataclass(frozen=True)
class TildeWeight(Weight):
    """``h~(s) = int_0^s t^n h'(t) dt`` for a base weight ``h``.

    Closed forms are used for polynomial and exponential bases; any other base
    is integrated numerically.
    """

    base: Weight
    n: int
    kind = "tilde"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInput("dimension n must be an integer >= 1")

    def dh(self, t):
        t = _arr(t)
        with np.errstate(over="ignore", invalid="ignore"):
            return _out(t ** self.n * self.base.dh(t), t)

    def log_dh(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore"):
            return _out(self.n * np.log(t) + self.base.log_dh(t), t)

    def h(self, t):
        t = _arr(t)
        b = self.base
        if isinstance(b, PolynomialWeight):
            m = self.n + b.p
            return _out(t ** m / m, t)
        if isinstance(b, ExponentialWeight):
            with np.errstate(over="ignore"):
                return _out(np.exp(self._log_exp_tilde(t)), t)
        flat = np.atleast_1d(t).ravel()
        vals = np.array([self._quad(x) for x in flat])
        return _out(vals.reshape(np.shape(t)) if np.ndim(t) else vals[0], t)

    def _quad(self, x: float) -> float:
        if x <= 0:
            return 0.0
        total = 0.0
        lo = 0.0
        # unit pieces keep the Kronrod rule accurate on fast-growing integrands
        while lo < x:
            hi = min(x, lo + 1.0)
            total += integrate(self.dh, lo, hi, QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300)).value
            lo = hi
        return total

    def _log_exp_tilde(self, t):
        # int_0^u t^n e^t dt: power series below 30, closed form above
        n = self.n
        t = np.atleast_1d(_arr(t)).astype(float)
        out = np.full(t.shape, -np.inf)
        small = (t > 0) & (t < 30)
        if small.any():
            u = t[small]
            acc = np.zeros_like(u)
            term = u ** (n + 1) / (n + 1)
            m = 0
            while True:
                acc += term
                m += 1
                term = term * u * (n + m) / (m * (n + m + 1))
                if np.all(term <= 1e-17 * acc):
                    break
            out[small] = np.log(acc)
        big = t >= 30
        if big.any():
            u = t[big]
            poly = np.zeros_like(u)
            for k in range(n + 1):
                poly += (-1.0) ** (n - k) * math.factorial(n) / math.factorial(k) * u ** k
            with np.errstate(over="ignore"):
                const = (-1.0) ** (n + 1) * math.factorial(n) * np.exp(-u)
                out[big] = u + np.log(poly + const)
        return out

    def log_h(self, t):
        if isinstance(self.base, ExponentialWeight):
            res = self._log_exp_tilde(t)
            return _out(res.reshape(np.shape(t)) if np.ndim(t) else res[0], _arr(t))
        return super().log_h(t)

    def inv(self, y):
        b = self.base
        if isinstance(b, PolynomialWeight):
            y = _arr(y)
            m = self.n + b.p
            return _out((m * y) ** (1.0 / m), y)
        return invert_increasing(self.h, y)

    def to_json(self):
        return {"kind": "tilde", "parameters": {"n": int(self.n)}, "base": self.base.to_json()}


@dataclass(frozen=True)
class NormalizedWeight(Weight):
    """``h(t) = (H(t) - H(0)) / H'(0)`` for a raw convex generator ``H``."""

    raw: Callable
    raw_derivative: Callable
    label: str = "custom"
    kind = "normalized"

    @property
    def offset(self) -> float:
        return float(self.raw(0.0))

    @property
    def scale(self) -> float:
        return float(self.raw_derivative(0.0))

    def h(self, t):
        t = _arr(t)
        with np.errstate(over="ignore", invalid="ignore"):
            return _out((self.raw(t) - self.offset) / self.scale, t)

    def dh(self, t):
        t = _arr(t)
        with np.errstate(over="ignore"):
            return _out(self.raw_derivative(t) / self.scale, t)

    def to_json(self):
        if self.label not in GENERATORS:
            raise NotImplementedError(f"generator {self.label!r} is not registered")
        return {"kind": "normalized", "parameters": {"generator": self.label}}


GENERATORS: dict[str, tuple[Callable, Callable]] = {
    "identity": (lambda t: np.asarray(t, dtype=float) + 0.0, lambda t: np.ones_like(np.asarray(t, dtype=float))),
    "exp": (np.exp, np.exp),
    "exp2": (lambda t: np.exp(np.exp(t)), lambda t: np.exp(np.exp(t) + t)),
}


def normalize(raw: Callable, raw_derivative: Callable, label: str = "custom",
              probe: Optional[Sequence[float]] = None) -> NormalizedWeight:
    """Affinely normalize a raw generator ``H`` so that ``h(0) = 0`` and ``h'(0) = 1``.

    Raises:
        InvalidInput: if ``H'(0) <= 0`` or ``H'`` decreases on the probe grid.
    """
    d0 = float(raw_derivative(0.0))
    if not d0 > 0:
        raise InvalidInput(f"generator derivative at 0 must be positive, got {d0}")
    grid = np.asarray(probe if probe is not None else np.concatenate([[0.0], np.geomspace(1e-6, 50.0, 400)]))
    with np.errstate(over="ignore", invalid="ignore"):
        d = np.asarray(raw_derivative(grid), dtype=float)
    finite = np.isfinite(d)
    if np.any(np.diff(d[finite]) < -1e-12 * np.abs(d[finite][1:])):
        raise InvalidInput("generator derivative is not monotone on the probe grid")
    return NormalizedWeight(raw, raw_derivative, label)


def polynomial(p: float) -> PolynomialWeight:
    return PolynomialWeight(float(p))


def exponential() -> ExponentialWeight:
    return ExponentialWeight()


def iterated_exponential(k: int) -> IteratedExpWeight:
    return IteratedExpWeight(int(k))


def tilde(w: Weight, n: int) -> TildeWeight:
    """The capacity-side weight ``h~(s) = int_0^s t^n h'(t) dt``."""
    return TildeWeight(w, int(n))


def legendre(theta: Callable[[float], float], s: float, max_doublings: int = 64,
             rel_width: float = 1e-13) -> float:
    """Convex conjugate ``sup_{t >= 0} (s t - theta(t))`` of a superlinear ``theta``.

    Golden-section search on the concave map ``t -> s t - theta(t)``; the
    bracket ``[0, b]`` starts at ``b = 1`` and doubles until the map drops.
    """
    if s < 0:
        raise InvalidInput("legendre transform is evaluated at s >= 0")

    def f(t):
        return s * t - float(theta(t))

    b = 1.0
    for _ in range(max_doublings):
        if f(b) < f(0.5 * b):
            break
        b *= 2.0
    else:
        raise BracketError(f"maximizer escaped [0, {b}] after {max_doublings} doublings")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, b
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > rel_width * max(1.0, hi):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
    return max(f1, f2, f(0.0))


def entropy_function(p: float) -> Callable[[float], float]:
    """``theta(t) = t (log(1 + t))^p``, the finite-entropy integrand."""
    return lambda t: t * math.log1p(t) ** p


def extra_growth(F, kappa: float, spec: QuadratureSpec = DEFAULT_SPEC,
                 blocks: int = 30) -> PiecewiseWeight:
    """Weight ``h(t) = int_0^t a`` with ``a -> inf`` and ``int a F <= kappa int F``.

    ``a = q^{-k}`` on ``[N_k, N_{k+1})`` where ``kappa (1 - q) = 1``,
    ``N_0 = 0`` and ``N_{k+1}`` is the smallest ``T >= 2 N_k`` with
    ``int_T^inf F <= q^{2(k+1)} int_0^inf F``.  Only ``blocks`` levels are
    built; ``a`` stays constant past the last one, which keeps the bound.

    Args:
        F: a :class:`~highenergy.orlicz.DistributionFunction`.
        kappa: the allowed inflation factor, ``> 1``.
    """
    if not kappa > 1:
        raise InvalidInput(f"kappa must exceed 1, got {kappa}")
    q = 1.0 - 1.0 / kappa
    total = F.integral(spec=spec)
    if not math.isfinite(total):
        raise InvalidInput("distribution function has a non-finite integral")
    bps = [0.0]
    vals = [1.0]
    if total == 0:
        return PiecewiseWeight((0.0,), (1.0,), label="extra_growth")
    for k in range(1, blocks + 1):
        target = q ** (2 * k) * total
        if target < 1e-290:
            break
        T = _minimal_tail_point(F, target, spec)
        nk = max(2.0 * bps[-1], T)
        if nk <= bps[-1]:
            nk = bps[-1] + 1.0 if bps[-1] == 0 else 2.0 * bps[-1]
        if not math.isfinite(nk):
            break
        bps.append(nk)
        vals.append(q ** (-k))
    w = PiecewiseWeight(tuple(bps), tuple(vals), label="extra_growth")
    weighted = piecewise_weighted_integral(F, w, spec)
    if weighted > kappa * total * (1.0 + 1e-9) + spec.abs_tol:
        raise InvalidInput(f"extra-growth bound violated: {weighted} > {kappa} * {total}")
    return w


def piecewise_weighted_integral(F, w: PiecewiseWeight, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_0^inf h'(t) F(t) dt`` summed exactly over the constant pieces of ``h'``."""
    edges = list(w.breakpoints) + [math.inf]
    return math.fsum(v * F.integral(lo, hi, spec=spec)
                     for v, lo, hi in zip(w.values, edges[:-1], edges[1:]))


def _minimal_tail_point(F, target: float, spec: QuadratureSpec) -> float:
    fine = QuadratureSpec(rel_tol=min(spec.rel_tol, 1e-11), abs_tol=max(target * 1e-13, 1e-300),
                          max_depth=spec.max_depth, max_blocks=spec.max_blocks)

    def tail(T):
        return F.integral(T, math.inf, spec=fine)

    if tail(0.0) <= target:
        return 0.0
    hi = 1.0
    while tail(hi) > target:
        hi *= 2.0
        if hi > 1e300:
            raise BracketError("tail bound never reached")
    lo = 0.0 if hi == 1.0 else hi / 2.0
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if tail(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class WitnessWeight(Weight):
    """Block weight ``h'(t) = c / eps(2^j t)`` for ``j <= t < j + 1``.

    ``eps`` is the sublevel-mass profile ``t -> mu(psi < -t)`` of an unbounded
    function; ``c = eps(0)`` when the total mass is finite (so ``h'(0) = 1``)
    and ``c = 1`` otherwise.
    """

    eps: object
    scale: float = 1.0
    blocks: int = 64
    kind = "witness"
    _cum: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        cum = [0.0]
        for j in range(self.blocks):
            if not math.isfinite(cum[-1]):
                cum.append(math.inf)
                continue
            val = integrate(self.dh, float(j), float(j + 1),
                            QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300)).value
            cum.append(cum[-1] + val)
        object.__setattr__(self, "_cum", tuple(cum))

    @property
    def normalized(self) -> bool:
        return math.isclose(float(self.dh(0.0)), 1.0, rel_tol=1e-12)

    def log_dh(self, t):
        t = _arr(t)
        j = np.floor(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            res = math.log(self.scale) - self.eps.log(np.ldexp(1.0, j.astype(int)) * t)
        return _out(res, t)

    def dh(self, t):
        t = _arr(t)
        with np.errstate(over="ignore"):
            return _out(np.exp(self.log_dh(t)), t)

    def h(self, t):
        t = _arr(t)
        flat = np.atleast_1d(t).ravel()
        out = np.empty_like(flat)
        for i, x in enumerate(flat):
            j = int(math.floor(x))
            if j >= self.blocks:
                out[i] = math.inf
                continue
            part = integrate(self.dh, float(j), float(x), QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300)).value
            out[i] = self._cum[j] + part
        return _out(out.reshape(np.shape(t)) if np.ndim(t) else out[0], t)

    def to_json(self):
        return {"kind": "witness", "parameters": {"scale": self.scale, "blocks": self.blocks},
                "epsilon": self.eps.to_json()}


def witness_weight(eps, blocks: int = 64) -> WitnessWeight:
    """Build the weight that makes an unbounded function's energy infinite.

    Raises:
        BoundedInput: if ``eps`` vanishes at a finite level (bounded function).
        InvalidInput: if ``eps`` is not strictly positive at 0.
    """
    if math.isfinite(eps.t_max):
        raise BoundedInput(f"sublevel mass vanishes at t = {eps.t_max}; the function is bounded")
    e0 = float(eps(0.0))
    if not e0 > 0:
        raise InvalidInput("sublevel mass must be positive")
    scale = e0 if math.isfinite(e0) else 1.0
    return WitnessWeight(eps, scale, blocks)


def weight_from_json(d: dict) -> Weight:
    """Inverse of ``Weight.to_json``."""
    kind = d["kind"]
    params = d.get("parameters", {})
    if kind == "poly":
        return PolynomialWeight(float(params["p"]))
    if kind == "exp":
        return ExponentialWeight()
    if kind == "iterexp":
        return IteratedExpWeight(int(params["k"]))
    if kind == "table":
        return PiecewiseWeight(tuple(d["breakpoints"]), tuple(d["derivative_values"]),
                               label=params.get("label", "table"))
    if kind == "tilde":
        return TildeWeight(weight_from_json(d["base"]), int(params["n"]))
    if kind == "normalized":
        raw, draw = GENERATORS[params["generator"]]
        return normalize(raw, draw, params["generator"])
    if kind == "witness":
        from .orlicz import DistributionFunction
        eps = DistributionFunction.from_json(d["epsilon"])
        return WitnessWeight(eps, float(params["scale"]), int(params["blocks"]))
    raise InvalidInput(f"unknown weight kind {kind!r}")
