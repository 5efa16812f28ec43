"""Radial psh functions ``phi(z) = g(log|z|)`` on a ball, stored by their profile ``g``.

A profile is convex and nondecreasing on ``(-inf, s_top]`` with ``g(s_top) = 0``
(``s_top = 0`` for the unit ball).  Every profile knows its dimension ``n``.

Conventions used throughout:

* ``dg`` is the left derivative, ``dg_right`` the right one; they differ
  only at kinks, where the Monge-Ampere measure has an atom on a sphere.
* ``level(t)`` is ``sigma_t = inf{s : g(s) >= -t}``, so that
  ``{phi < -t}`` is the open ball of radius ``exp(sigma_t)``.  It is ``-inf``
  when that ball is empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..errors import InvalidInput
from ..weights import iterated_exp


def _arr(x):
    return np.asarray(x, dtype=float)


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


class RadialProfile:
    """Interface for radial profiles; subclasses override what they know in closed form."""

    n: int = 1
    s_top: float = 0.0
    piecewise_linear: bool = False
    kind = "abstract"

    # -- required ----------------------------------------------------------
    def g(self, s):
        raise NotImplementedError

    def dg(self, s):
        raise NotImplementedError

    @property
    def lower(self) -> float:
        """``g(-inf)``; finite exactly for bounded functions."""
        raise NotImplementedError

    @property
    def asymptotic_slope(self) -> float:
        """``lim g'(s)`` as ``s -> -inf``; its ``n``-th power is the mass at the origin."""
        raise NotImplementedError

    # -- defaults ----------------------------------------------------------
    def dg_right(self, s):
        return self.dg(s)

    def kinks(self) -> tuple:
        """Finite ``s`` where ``g`` is not differentiable, sorted."""
        return ()

    def slope(self, s):
        """Left derivative extended by the asymptotic slope at ``s = -inf``."""
        s = _arr(s)
        neg = np.isneginf(s)
        with np.errstate(all="ignore"):
            val = np.asarray(self.dg(np.where(neg, self.s_top - 1.0, s)), dtype=float)
        return _out(np.where(neg, self.asymptotic_slope, val), s)

    def level(self, t):
        return self._bisect_level(t)

    def log_slope_at_level(self, t):
        """``log g'(sigma_t)``; the MA distribution is ``exp(n * this)``."""
        with np.errstate(divide="ignore"):
            return np.log(self.slope(self.level(t)))

    def _bisect_level(self, t):
        t = _arr(t)
        flat = np.atleast_1d(t).ravel().astype(float)
        y = -flat
        out = np.full(flat.shape, -np.inf)
        out[flat <= 0] = self.s_top
        todo = (flat > 0) & (y > self.lower)
        if todo.any():
            yy = y[todo]
            # distances below s_top: g >= y at d_hi, g < y at d_lo
            d_hi = np.zeros_like(yy)
            d_lo = np.ones_like(yy)
            for _ in range(64):
                high = np.asarray(self.g(self.s_top - d_lo)) >= yy
                if not high.any():
                    break
                # squaring reaches deep levels in O(log log) steps
                grown = np.maximum(2.0 * d_lo, d_lo * d_lo)
                d_hi = np.where(high, d_lo, d_hi)
                d_lo = np.where(high, np.where(grown > 1e300, np.inf, grown), d_lo)
                if np.all(~high | np.isinf(d_lo)):
                    break
            finite = np.isfinite(d_lo)
            d_lo = np.where(finite, d_lo, 1.0)
            g_hi = np.asarray(self.g(self.s_top - d_hi), dtype=float)
            last_step = np.full_like(yy, np.inf)
            for _ in range(2200):
                # g is convex, so a Newton step from the upper end never crosses the root
                with np.errstate(all="ignore"):
                    step = (g_hi - yy) / np.asarray(self.dg(self.s_top - d_hi), dtype=float)
                tol = 2.5e-16 * np.maximum(1.0, np.abs(self.s_top - d_hi))
                newton = d_hi + step
                done = ~finite | (d_lo - d_hi <= tol) | (g_hi == yy) | (np.isfinite(step) & (step <= tol))
                if np.all(done):
                    break
                usable = np.isfinite(step) & (step > 0) & (newton < d_lo) & (step <= 0.5 * last_step)
                wide = (d_hi > 0) & (d_lo > 2.0 * d_hi)
                mid = np.where(wide, np.sqrt(d_lo * d_hi), 0.5 * (d_lo + d_hi))
                cand = np.where(usable, newton, mid)
                g_cand = np.asarray(self.g(self.s_top - cand), dtype=float)
                above = ~done & (g_cand >= yy)
                below = ~done & ~above
                last_step = np.where(usable, step, last_step)
                d_hi = np.where(above, cand, d_hi)
                g_hi = np.where(above, g_cand, g_hi)
                d_lo = np.where(below, cand, d_lo)
            out[todo] = np.where(finite, self.s_top - d_hi, -np.inf)
        res = out.reshape(np.shape(t))
        return _out(res, t)

    def t_breaks(self) -> tuple:
        """Values ``t = -g(s)`` at kinks: where the distributions may jump."""
        ks = self.kinks()
        if not ks:
            return ()
        vals = -np.asarray(self.g(np.asarray(ks, dtype=float)))
        return tuple(float(v) for v in vals if 0 < v < -self.lower)

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params(), "n": self.n,
                "breakpoints": [float(k) for k in self.kinks()]}

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class ZeroProfile(RadialProfile):
    """``g == 0``."""

    n: int = 1
    s_top: float = 0.0
    kind = "zero"
    piecewise_linear = True

    def g(self, s):
        s = _arr(s)
        return _out(np.zeros_like(s), s)

    def dg(self, s):
        return self.g(s)

    @property
    def lower(self):
        return 0.0

    @property
    def asymptotic_slope(self):
        return 0.0

    def level(self, t):
        t = _arr(t)
        return _out(np.where(t <= 0, self.s_top, -np.inf), t)


@dataclass(frozen=True)
class PowerProfile(RadialProfile):
    """``g(s) = -(-s)^alpha`` with ``0 < alpha <= 1``; ``alpha = 1`` is ``log|z|``."""

    alpha: float = 1.0
    n: int = 1
    kind = "power"

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidInput(f"power profile needs 0 < alpha <= 1, got {self.alpha}")

    @property
    def piecewise_linear(self):
        return self.alpha == 1.0

    def g(self, s):
        s = _arr(s)
        return _out(-(-s) ** self.alpha, s)

    def dg(self, s):
        s = _arr(s)
        with np.errstate(divide="ignore"):
            return _out(self.alpha * (-s) ** (self.alpha - 1.0), s)

    @property
    def lower(self):
        return -math.inf

    @property
    def asymptotic_slope(self):
        return 1.0 if self.alpha == 1.0 else 0.0

    def level(self, t):
        t = _arr(t)
        with np.errstate(over="ignore"):
            return _out(np.where(t <= 0, 0.0, -np.maximum(t, 0.0) ** (1.0 / self.alpha)), t)

    def log_slope_at_level(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore"):
            return math.log(self.alpha) + (self.alpha - 1.0) / self.alpha * np.log(t)

    def params(self):
        return {"alpha": self.alpha}


def log_profile(n: int = 1) -> PowerProfile:
    """``g(s) = s``, i.e. ``phi = log|z|``."""
    return PowerProfile(1.0, n)


@dataclass(frozen=True)
class ExpProfile(RadialProfile):
    """``g(s) = e^{c s} - 1``; ``c = 2`` is ``|z|^2 - 1``."""

    c: float = 2.0
    n: int = 1
    kind = "exp"

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidInput("exponential profile needs c > 0")

    def g(self, s):
        s = _arr(s)
        return _out(np.expm1(self.c * s), s)

    def dg(self, s):
        s = _arr(s)
        return _out(self.c * np.exp(self.c * s), s)

    @property
    def lower(self):
        return -1.0

    @property
    def asymptotic_slope(self):
        return 0.0

    def level(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            res = np.where(t < 1.0, np.log1p(-np.minimum(t, 1.0)) / self.c, -np.inf)
        return _out(np.where(t <= 0, 0.0, res), t)

    def log_slope_at_level(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return math.log(self.c) + np.log1p(-np.minimum(t, 1.0))

    def params(self):
        return {"c": self.c}


def iterlog_constants(k: int) -> list[float]:
    """``[C_0, C_1, ..., C_k]`` with ``C_0 = 0``, ``C_1 = 1``, ``C_{j+1} = e^{C_j}``."""
    cs = [0.0, 1.0]
    for _ in range(k - 1):
        cs.append(math.exp(cs[-1]))
    return cs[: k + 1]


@dataclass(frozen=True)
class IterLogProfile(RadialProfile):
    """``g(s) = -L_k(C_k - s)`` with iterated logarithm ``L_k``; ``g(0) = 0``.

    Sublevels are explicit: ``sigma_t = C_k - e_k(t)`` and
    ``g'(sigma_t) = 1 / prod_{i=1..k} e_i(t)``.
    """

    k: int = 1
    n: int = 1
    kind = "iterlog"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidInput("iterated-log profile needs an integer k >= 1")

    def _chain(self, s):
        # d_j with L_j(C_k - s) = C_{k-j} + d_j, computed without cancellation
        cs = iterlog_constants(self.k)
        d = -_arr(s)
        terms = [cs[self.k] + d]
        for j in range(self.k):
            d = np.log1p(d / cs[self.k - j])
            if j < self.k - 1:
                terms.append(cs[self.k - j - 1] + d)
        return d, terms

    def g(self, s):
        s = _arr(s)
        with np.errstate(over="ignore", invalid="ignore"):
            d, _ = self._chain(s)
        return _out(-d, s)

    def dg(self, s):
        s = _arr(s)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            _, terms = self._chain(s)
            res = 1.0 / np.prod(np.stack(terms), axis=0)
        return _out(res, s)

    @property
    def lower(self):
        return -math.inf

    @property
    def asymptotic_slope(self):
        return 0.0

    def _excess(self, t):
        # e_k(t) - e_k(0) = e_k(t) - C_k
        d = _arr(t) + 0.0
        base = [0.0]
        for _ in range(self.k):
            base.append(math.exp(base[-1]))
        with np.errstate(over="ignore", invalid="ignore"):
            for j in range(1, self.k + 1):
                d = base[j] * np.expm1(d)
        return d

    def level(self, t):
        t = _arr(t)
        return _out(np.where(t <= 0, 0.0, -self._excess(np.maximum(t, 0.0))), t)

    def log_slope_at_level(self, t):
        t = _arr(t)
        acc = np.zeros_like(t)
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(self.k):
                acc = acc + iterated_exp(t, i)
        return -acc

    def params(self):
        return {"k": int(self.k)}


@dataclass(frozen=True)
class TruncatedProfile(RadialProfile):
    """``max(g, -M)``: bounded below by ``-M``, with an MA atom on the sphere where ``g = -M``."""

    base: RadialProfile
    M: float
    kind = "trunc"

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidInput("truncation level M must be positive")
        object.__setattr__(self, "_s_cut", float(self.base.level(self.M)))

    @property
    def n(self):
        return self.base.n

    @property
    def s_top(self):
        return self.base.s_top

    @property
    def piecewise_linear(self):
        return self.base.piecewise_linear

    def g(self, s):
        s = _arr(s)
        return _out(np.where(s > self._s_cut, self.base.g(np.maximum(s, self._s_cut)), -min(self.M, -self.base.lower)), s)

    def dg(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            return _out(np.where(s > self._s_cut, self.base.dg(np.maximum(s, self._s_cut)), 0.0), s)

    def dg_right(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            return _out(np.where(s >= self._s_cut, self.base.dg_right(np.maximum(s, self._s_cut)), 0.0), s)

    @property
    def lower(self):
        return max(-self.M, self.base.lower)

    @property
    def asymptotic_slope(self):
        return 0.0 if math.isfinite(self._s_cut) else self.base.asymptotic_slope

    def kinks(self):
        ks = [k for k in self.base.kinks() if k > self._s_cut]
        if math.isfinite(self._s_cut):
            ks.append(self._s_cut)
        return tuple(sorted(ks))

    def level(self, t):
        t = _arr(t)
        return _out(np.where(t < self.M, self.base.level(np.minimum(t, self.M)), -np.inf), t)

    def log_slope_at_level(self, t):
        t = _arr(t)
        with np.errstate(all="ignore"):
            return np.where(t < self.M, self.base.log_slope_at_level(np.minimum(t, self.M)), -np.inf)

    def params(self):
        return {"M": self.M}

    def to_json(self):
        d = super().to_json()
        d["base"] = self.base.to_json()
        return d


def truncation(M: float, base: Optional[RadialProfile] = None, n: int = 1) -> TruncatedProfile:
    """``max(g, -M)``; the default base is ``log|z|`` so the result is ``max(s, -M)``."""
    return TruncatedProfile(base if base is not None else log_profile(n), float(M))


@dataclass(frozen=True)
class ScaledProfile(RadialProfile):
    """``alpha * g`` for ``alpha > 0``."""

    base: RadialProfile
    alpha: float
    kind = "scaled"

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInput("profile scale must be positive")

    @property
    def n(self):
        return self.base.n

    @property
    def s_top(self):
        return self.base.s_top

    @property
    def piecewise_linear(self):
        return self.base.piecewise_linear

    def g(self, s):
        return self.alpha * self.base.g(s)

    def dg(self, s):
        return self.alpha * self.base.dg(s)

    def dg_right(self, s):
        return self.alpha * self.base.dg_right(s)

    @property
    def lower(self):
        return self.alpha * self.base.lower

    @property
    def asymptotic_slope(self):
        return self.alpha * self.base.asymptotic_slope

    def kinks(self):
        return self.base.kinks()

    def level(self, t):
        return self.base.level(_arr(t) / self.alpha)

    def log_slope_at_level(self, t):
        return math.log(self.alpha) + self.base.log_slope_at_level(_arr(t) / self.alpha)

    def params(self):
        return {"alpha": self.alpha}

    def to_json(self):
        d = super().to_json()
        d["base"] = self.base.to_json()
        return d


def _crossings(f, lo: float = -1e4, hi: float = 0.0, count: int = 4000) -> list[float]:
    """Sign changes of ``f`` on a log-spaced grid of ``[lo, hi)``, refined by bisection."""
    grid = np.unique(np.concatenate([hi - np.geomspace(1e-10, hi - lo, count)]))
    vals = np.asarray(f(grid))
    sgn = np.sign(vals)
    out = []
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        a, b = grid[i], grid[i + 1]
        fa = vals[i]
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = float(f(m))
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
            if b - a <= 4e-16 * max(1.0, abs(b)):
                break
        out.append(0.5 * (a + b))
    return out


@dataclass(frozen=True)
class MaxProfile(RadialProfile):
    """``max(a, b)`` of two profiles on the same ball."""

    a: RadialProfile
    b: RadialProfile
    label: str = "max"
    kind = "max"

    def __post_init__(self):
        if self.a.n != self.b.n or self.a.s_top != self.b.s_top:
            raise InvalidInput("max of profiles needs equal dimension and domain")
        cross = _crossings(lambda s: np.asarray(self.a.g(s)) - np.asarray(self.b.g(s)), hi=self.s_top)
        object.__setattr__(self, "_cross", tuple(cross))

    @property
    def n(self):
        return self.a.n

    @property
    def s_top(self):
        return self.a.s_top

    @property
    def piecewise_linear(self):
        return self.a.piecewise_linear and self.b.piecewise_linear

    def g(self, s):
        return np.maximum(self.a.g(s), self.b.g(s))

    def _pick(self, s, da, db, tie):
        ga, gb = np.asarray(self.a.g(s)), np.asarray(self.b.g(s))
        return np.where(ga > gb, da, np.where(gb > ga, db, tie(da, db)))

    def dg(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            da, db = np.asarray(self.a.dg(s)), np.asarray(self.b.dg(s))
        return _out(self._pick(s, da, db, np.minimum), s)

    def dg_right(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            da, db = np.asarray(self.a.dg_right(s)), np.asarray(self.b.dg_right(s))
        return _out(self._pick(s, da, db, np.maximum), s)

    @property
    def lower(self):
        return max(self.a.lower, self.b.lower)

    @property
    def asymptotic_slope(self):
        if math.isfinite(self.a.lower) != math.isfinite(self.b.lower):
            return self.a.asymptotic_slope if math.isfinite(self.a.lower) else self.b.asymptotic_slope
        return min(self.a.asymptotic_slope, self.b.asymptotic_slope)

    def kinks(self):
        ks = set(self.a.kinks()) | set(self.b.kinks()) | set(self._cross)
        return tuple(sorted(k for k in ks if math.isfinite(k) and k < self.s_top))

    def level(self, t):
        return np.minimum(self.a.level(t), self.b.level(t))

    def params(self):
        return {"label": self.label}

    def to_json(self):
        d = super().to_json()
        d["parts"] = [self.a.to_json(), self.b.to_json()]
        return d


def exhaustion(base: RadialProfile, j: float) -> MaxProfile:
    """``max(g, j * rho)`` with the defining function ``rho = |z|^2 - 1``.

    These are bounded and decrease to ``g`` as ``j`` grows.
    """
    if not j > 0:
        raise InvalidInput("exhaustion index must be positive")
    return MaxProfile(base, ScaledProfile(ExpProfile(2.0, base.n), float(j)), label=f"exhaustion:j={j:g}")


@dataclass(frozen=True)
class CombinationProfile(RadialProfile):
    """``sum_j c_j g_j`` with ``c_j >= 0``."""

    coefficients: tuple
    parts: tuple
    kind = "combination"

    def __post_init__(self):
        if len(self.coefficients) != len(self.parts) or not self.parts:
            raise InvalidInput("combination needs matching nonempty coefficient and profile lists")
        if any(c < 0 for c in self.coefficients):
            raise InvalidInput("combination coefficients must be nonnegative")
        if len({p.n for p in self.parts}) != 1 or len({p.s_top for p in self.parts}) != 1:
            raise InvalidInput("combined profiles need equal dimension and domain")

    @property
    def n(self):
        return self.parts[0].n

    @property
    def s_top(self):
        return self.parts[0].s_top

    @property
    def piecewise_linear(self):
        return all(p.piecewise_linear for p in self.parts)

    def g(self, s):
        s = _arr(s)
        return sum(c * np.asarray(p.g(s)) for c, p in zip(self.coefficients, self.parts) if c > 0) + 0.0 * s

    def dg(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            return sum(c * np.asarray(p.dg(s)) for c, p in zip(self.coefficients, self.parts) if c > 0) + 0.0 * s

    def dg_right(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            return sum(c * np.asarray(p.dg_right(s)) for c, p in zip(self.coefficients, self.parts) if c > 0) + 0.0 * s

    @property
    def lower(self):
        return sum(c * p.lower for c, p in zip(self.coefficients, self.parts) if c > 0)

    @property
    def asymptotic_slope(self):
        return sum(c * p.asymptotic_slope for c, p in zip(self.coefficients, self.parts))

    def kinks(self):
        ks = set()
        for c, p in zip(self.coefficients, self.parts):
            if c > 0:
                ks |= set(p.kinks())
        return tuple(sorted(ks))

    def params(self):
        return {"coefficients": list(self.coefficients)}

    def to_json(self):
        d = super().to_json()
        d["parts"] = [p.to_json() for p in self.parts]
        return d


@dataclass(frozen=True)
class SubextendedProfile(RadialProfile):
    """Maximal psh minorant on the ball of radius ``R`` of a function on the unit ball.

    Equal to ``g`` up to the contact point ``s_star`` and to the support line
    ``slope * (s - log R)`` through ``(log R, 0)`` after it.
    """

    base: RadialProfile
    log_radius: float
    s_star: float
    slope_star: float
    kind = "subext"

    @property
    def n(self):
        return self.base.n

    @property
    def s_top(self):
        return self.log_radius

    @property
    def piecewise_linear(self):
        return self.base.piecewise_linear

    def g(self, s):
        s = _arr(s)
        line = self.slope_star * (s - self.log_radius)
        if not math.isfinite(self.s_star):
            return _out(line, s)
        return _out(np.where(s <= self.s_star, self.base.g(np.minimum(s, self.s_star)), line), s)

    def dg(self, s):
        s = _arr(s)
        if not math.isfinite(self.s_star):
            return _out(np.full_like(s, self.slope_star), s)
        with np.errstate(all="ignore"):
            return _out(np.where(s <= self.s_star, self.base.dg(np.minimum(s, self.s_star)), self.slope_star), s)

    def dg_right(self, s):
        s = _arr(s)
        if not math.isfinite(self.s_star):
            return _out(np.full_like(s, self.slope_star), s)
        with np.errstate(all="ignore"):
            return _out(np.where(s < self.s_star, self.base.dg_right(np.minimum(s, self.s_star)), self.slope_star), s)

    @property
    def lower(self):
        if self.slope_star == 0:
            return 0.0
        return self.base.lower if math.isfinite(self.s_star) else -math.inf

    @property
    def asymptotic_slope(self):
        return self.base.asymptotic_slope if math.isfinite(self.s_star) else self.slope_star

    @property
    def contact_level(self) -> float:
        """``T* = -g(s_star)``: sublevels below it are balls cut by the support line."""
        return -float(self.base.g(self.s_star)) if math.isfinite(self.s_star) else math.inf

    def kinks(self):
        if not math.isfinite(self.s_star):
            return ()
        return tuple(sorted({k for k in self.base.kinks() if k < self.s_star} | {self.s_star}))

    def level(self, t):
        t = _arr(t)
        if self.slope_star == 0:
            return _out(np.where(t <= 0, self.s_top, -np.inf), t)
        line = self.log_radius - t / self.slope_star
        T = self.contact_level
        with np.errstate(all="ignore"):
            res = np.where(t < T, line, self.base.level(np.maximum(t, min(T, 1e300))))
        return _out(np.where(t <= 0, self.s_top, res), t)

    def log_slope_at_level(self, t):
        t = _arr(t)
        if self.slope_star == 0:
            return np.full_like(t, -np.inf)
        T = self.contact_level
        with np.errstate(all="ignore"):
            return np.where(t < T, math.log(self.slope_star),
                            self.base.log_slope_at_level(np.maximum(t, min(T, 1e300))))

    def params(self):
        return {"logR": self.log_radius, "s_star": self.s_star, "slope": self.slope_star}

    def to_json(self):
        d = super().to_json()
        d["base"] = self.base.to_json()
        return d


_GAUSS_LEGENDRE_20 = leggauss(20)


@dataclass(frozen=True)
class SolvedProfile(RadialProfile):
    """``g(s) = -int_s^0 m(x)^{1/n} dx``: the radial solution of ``MA(phi) = mu``.

    The antiderivative is tabulated on a node grid containing every kink of
    the mass profile; evaluation adds a 20-point Gauss-Legendre rule on the
    partial cell.
    """

    measure: object
    n: int = 1
    kind = "solved"
    _nodes: tuple = field(default=(), repr=False, compare=False)
    _cum: tuple = field(default=(), repr=False, compare=False)
    _lower: float = field(default=-math.inf, repr=False, compare=False)

    def __post_init__(self):
        from ..quadrature import QuadratureSpec, integrate, integrate_to_infinity

        m = self.measure
        ks = [k for k in m.s_kinks() if math.isfinite(k) and k < 0]
        far = -np.geomspace(1e-4, 1e6, 241)
        nodes = np.unique(np.concatenate([[0.0], far, np.asarray(ks, dtype=float)]))[::-1]
        spec = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300)

        def rate(x):
            return np.asarray(m.m_closed(x), dtype=float) ** (1.0 / self.n)

        cum = [0.0]
        for hi, lo in zip(nodes[:-1], nodes[1:]):
            cum.append(cum[-1] + integrate(rate, lo, hi, spec).value)
        object.__setattr__(self, "_nodes", tuple(float(x) for x in nodes))
        object.__setattr__(self, "_cum", tuple(cum))
        if m.origin_mass > 0:
            lower = -math.inf
        else:
            tail = integrate_to_infinity(lambda u: rate(-u), -nodes[-1],
                                         QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300))
            lower = -(cum[-1] + tail.value)
        object.__setattr__(self, "_lower", lower)

    def g(self, s):
        s = _arr(s)
        flat = np.atleast_1d(s).ravel()
        nodes = np.asarray(self._nodes)  # decreasing from 0
        cum = np.asarray(self._cum)
        idx = np.clip(np.searchsorted(-nodes, -flat, side="left"), 0, len(nodes) - 1)
        # nodes[idx] <= s < nodes[idx - 1] inside the table
        inside = flat >= nodes[-1]
        right = np.where(inside, nodes[np.maximum(idx - 1, 0)], nodes[-1])
        base = np.where(inside, cum[np.maximum(idx - 1, 0)], cum[-1])
        x, wq = _GAUSS_LEGENDRE_20
        a, b = flat[:, None], right[:, None]
        pts = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
        vals = np.asarray(self.measure.m_closed(pts.ravel()), dtype=float).reshape(pts.shape) ** (1.0 / self.n)
        part = 0.5 * (b - a)[:, 0] * (vals @ wq)
        res = -(base + part)
        res = np.where(flat >= 0, 0.0, res)
        out = res.reshape(np.shape(s))
        return _out(out, s)

    def dg(self, s):
        s = _arr(s)
        return _out(np.asarray(self.measure.m_open(s), dtype=float) ** (1.0 / self.n), s)

    def dg_right(self, s):
        s = _arr(s)
        return _out(np.asarray(self.measure.m_closed(s), dtype=float) ** (1.0 / self.n), s)

    @property
    def lower(self):
        return self._lower

    @property
    def asymptotic_slope(self):
        return self.measure.origin_mass ** (1.0 / self.n)

    @property
    def piecewise_linear(self):
        return self.measure.is_atomic

    def kinks(self):
        return tuple(sorted(k for k in self.measure.s_kinks() if math.isfinite(k) and k < 0))

    def level(self, t):
        return self._bisect_level(t)

    def params(self):
        return {}

    def to_json(self):
        d = super().to_json()
        d["measure"] = self.measure.to_json()
        return d
