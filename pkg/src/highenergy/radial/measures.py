"""Radial measures on the unit ball, stored by their mass profile.

``m_closed(s)`` is the mass of the closed ball of radius ``e^s`` and
``m_open(s)`` that of the open ball; they differ exactly at spheres carrying
an atom.  ``s = -inf`` stands for the origin.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import InvalidInput
from ..orlicz import DistributionFunction


def _arr(x):
    return np.asarray(x, dtype=float)


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


class RadialMeasure:
    """Interface: nondecreasing mass profiles with finite total mass."""

    kind = "abstract"
    is_atomic = False

    def m_closed(self, s):
        raise NotImplementedError

    def m_open(self, s):
        return self.m_closed(s)

    @property
    def origin_mass(self) -> float:
        """Mass of the origin ``{z = 0}``."""
        return 0.0

    @property
    def total(self) -> float:
        return float(self.m_closed(0.0))

    def s_kinks(self) -> tuple:
        """Radii ``s`` where the mass profile jumps or has a kink."""
        return ()

    def halved(self) -> "RadialMeasure":
        """The measure ``mu / 2``."""
        return ScaledMeasure(self, 0.5)

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class AtomMeasure(RadialMeasure):
    """Uniform masses on spheres ``|z| = e^{s_i}``; ``s_i = -inf`` is a Dirac mass at 0."""

    locations: tuple
    masses: tuple
    kind = "atoms"
    is_atomic = True

    def __post_init__(self):
        locs = np.asarray(self.locations, dtype=float)
        ms = np.asarray(self.masses, dtype=float)
        if locs.shape != ms.shape or np.any(ms < 0) or np.any(locs > 0):
            raise InvalidInput("atoms need matching nonnegative masses at radii s <= 0")
        order = np.argsort(locs)
        object.__setattr__(self, "locations", tuple(float(x) for x in locs[order]))
        object.__setattr__(self, "masses", tuple(float(x) for x in ms[order]))

    def _cum(self, s, closed):
        s = _arr(s)
        locs = np.asarray(self.locations)
        cum = np.concatenate([[0.0], np.cumsum(self.masses)])
        idx = np.searchsorted(locs, s, side="right" if closed else "left")
        return _out(cum[idx], s)

    def m_closed(self, s):
        return self._cum(s, True)

    def m_open(self, s):
        s = _arr(s)
        res = np.asarray(self._cum(s, False), dtype=float)
        # the open ball of radius 0 is empty but contains the origin in the limit
        res = np.where(np.isneginf(s), self.origin_mass, res)
        return _out(res, s)

    @property
    def origin_mass(self):
        return float(sum(m for x, m in zip(self.locations, self.masses) if math.isinf(x)))

    def s_kinks(self):
        return tuple(x for x in self.locations if math.isfinite(x))

    def params(self):
        return {"locations": list(self.locations), "masses": list(self.masses)}


@dataclass(frozen=True)
class ExpDensityMeasure(RadialMeasure):
    """``m(s) = c * e^{rate * s}``: e.g. ``2 e^{2s}`` is the MA measure of ``|z|^2 - 1`` for n = 1."""

    c: float
    rate: float
    kind = "expdensity"

    def __post_init__(self):
        if not (self.c >= 0 and self.rate > 0):
            raise InvalidInput("exponential density needs c >= 0 and rate > 0")

    def m_closed(self, s):
        s = _arr(s)
        with np.errstate(under="ignore"):
            return _out(self.c * np.exp(self.rate * np.minimum(s, 0.0)), s)

    def params(self):
        return {"c": self.c, "rate": self.rate}


@dataclass(frozen=True)
class MAMeasure(RadialMeasure):
    """Monge-Ampere measure of a radial profile: closed-ball mass ``g'(s+)^n``."""

    profile: object
    kind = "ma"

    @property
    def is_atomic(self):
        return self.profile.piecewise_linear

    def m_closed(self, s):
        s = _arr(s)
        with np.errstate(all="ignore"):
            v = np.asarray(self.profile.dg_right(np.where(np.isneginf(s), -1.0, s)), dtype=float)
        v = np.where(np.isneginf(s), self.profile.asymptotic_slope, v)
        return _out(v ** self.profile.n, s)

    def m_open(self, s):
        s = _arr(s)
        return _out(np.asarray(self.profile.slope(s), dtype=float) ** self.profile.n, s)

    @property
    def origin_mass(self):
        return self.profile.asymptotic_slope ** self.profile.n

    def s_kinks(self):
        return self.profile.kinks()

    def to_json(self):
        return {"kind": "ma", "profile": self.profile.to_json()}


@dataclass(frozen=True)
class TabulatedMeasure(RadialMeasure):
    """Mass profile interpolated linearly between table rows ``(s, m(s))``.

    A repeated ``s`` encodes a jump (an atom on that sphere): the first row
    holds the open-ball mass, the last the closed-ball mass.  Left of the
    table the mass is constant, so a positive first value is a Dirac mass at
    the origin.
    """

    s_values: tuple
    m_values: tuple
    kind = "table"

    def __post_init__(self):
        s = np.asarray(self.s_values, dtype=float)
        m = np.asarray(self.m_values, dtype=float)
        if s.size < 1 or s.shape != m.shape:
            raise InvalidInput("measure table needs matching nonempty columns")
        if np.any(np.diff(s) < 0) or np.any(s > 0):
            raise InvalidInput("table radii must be nondecreasing and <= 0")
        if np.any(np.diff(m) < 0) or np.any(m < 0):
            raise InvalidInput("mass profile must be nonnegative and nondecreasing")
        object.__setattr__(self, "s_values", tuple(float(x) for x in s))
        object.__setattr__(self, "m_values", tuple(float(x) for x in m))

    @property
    def is_atomic(self):
        # constant between rows except at jumps
        s, m = np.asarray(self.s_values), np.asarray(self.m_values)
        return bool(np.all((np.diff(s) == 0) | (np.diff(m) == 0)))

    def _interp(self, s, closed):
        s = _arr(s)
        xs, ms = np.asarray(self.s_values), np.asarray(self.m_values)
        side = "right" if closed else "left"
        i = np.searchsorted(xs, s, side=side)
        # interpolate between rows i-1 and i (clamped)
        lo = np.clip(i - 1, 0, len(xs) - 1)
        hi = np.clip(i, 0, len(xs) - 1)
        x0, x1, m0, m1 = xs[lo], xs[hi], ms[lo], ms[hi]
        with np.errstate(invalid="ignore", divide="ignore"):
            w = np.where(x1 > x0, (s - x0) / (x1 - x0), 0.0)
        val = m0 + np.clip(w, 0.0, 1.0) * (m1 - m0)
        val = np.where(i == 0, ms[0], val)
        val = np.where(i >= len(xs), ms[-1], val)
        return _out(val, s)

    def m_closed(self, s):
        return self._interp(s, True)

    def m_open(self, s):
        s = _arr(s)
        return _out(np.where(np.isneginf(s), self.origin_mass, self._interp(s, False)), s)

    @property
    def origin_mass(self):
        return self.m_values[0]

    def s_kinks(self):
        return tuple(sorted(set(self.s_values)))

    def params(self):
        return {"s": list(self.s_values), "m": list(self.m_values)}

    @classmethod
    def from_csv(cls, path) -> "TabulatedMeasure":
        """Read ``s,m`` rows; a header line is skipped if present."""
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows:
                        raise InvalidInput(f"bad measure row {row!r}") from None
                    continue  # header
        if not rows:
            raise InvalidInput(f"no measure rows in {path}")
        s, m = zip(*rows)
        return cls(tuple(s), tuple(m))


@dataclass(frozen=True)
class ScaledMeasure(RadialMeasure):
    """``c * mu``."""

    base: RadialMeasure
    c: float
    kind = "scaled"

    def __post_init__(self):
        if not self.c >= 0:
            raise InvalidInput("measure scale must be nonnegative")

    @property
    def is_atomic(self):
        return self.base.is_atomic

    def m_closed(self, s):
        return self.c * self.base.m_closed(s)

    def m_open(self, s):
        return self.c * self.base.m_open(s)

    @property
    def origin_mass(self):
        return self.c * self.base.origin_mass

    def s_kinks(self):
        return self.base.s_kinks()

    def to_json(self):
        return {"kind": "scaled", "params": {"c": self.c}, "base": self.base.to_json()}


@dataclass(frozen=True)
class SumMeasure(RadialMeasure):
    """``mu_1 + ... + mu_k``."""

    parts: tuple
    kind = "sum"

    @property
    def is_atomic(self):
        return all(p.is_atomic for p in self.parts)

    def m_closed(self, s):
        return sum(np.asarray(p.m_closed(s)) for p in self.parts)

    def m_open(self, s):
        return sum(np.asarray(p.m_open(s)) for p in self.parts)

    @property
    def origin_mass(self):
        return sum(p.origin_mass for p in self.parts)

    def s_kinks(self):
        ks: set = set()
        for p in self.parts:
            ks |= set(p.s_kinks())
        return tuple(sorted(ks))

    def to_json(self):
        return {"kind": "sum", "parts": [p.to_json() for p in self.parts]}


def atom(s: float, mass: float = 1.0) -> AtomMeasure:
    return AtomMeasure((float(s),), (float(mass),))


def check_monotone(mu: RadialMeasure, grid: Iterable[float] | None = None) -> None:
    """Reject mass profiles that decrease on a probe grid."""
    s = np.asarray(grid if grid is not None else -np.geomspace(1e-6, 1e4, 512)[::-1])
    s = np.sort(np.concatenate([s, [0.0]]))
    m = np.asarray(mu.m_closed(s), dtype=float)
    if np.any(np.diff(m) < -1e-12 * np.maximum(1.0, np.abs(m[1:]))) or np.any(m < 0):
        raise InvalidInput("mass profile is not nonnegative and nondecreasing")
    if not math.isfinite(float(mu.m_closed(0.0))):
        raise InvalidInput("total mass must be finite")


def pushforward_distribution(mu: RadialMeasure, profile) -> DistributionFunction:
    """``t -> mu(phi < -t) = m_open(sigma_t)`` for a radial ``phi`` with profile ``profile``."""
    breaks = set(profile.t_breaks())
    for k in mu.s_kinks():
        if math.isfinite(k):
            v = -float(profile.g(k))
            if v > 0:
                breaks.add(v)

    def func(t):
        return np.asarray(mu.m_open(profile.level(t)), dtype=float)

    return DistributionFunction(func, None, tuple(breaks), -profile.lower,
                                piecewise_constant=mu.is_atomic,
                                singular_at_zero=not math.isfinite(mu.total),
                                label=f"{mu.kind}(phi<-t)")
