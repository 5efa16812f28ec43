"""Compact text descriptions of weights, profiles and measures.

Grammar: ``kind`` or ``kind:key=value,key=value``; a nested argument follows
``@``.  Examples::

    poly:p=2            exp            iterexp:k=2        tilde:n=1@poly:p=1
    log                 trunc:M=2      trunc:M=3@iterlog:k=1
    power:alpha=0.5     exp:c=2        exhaustion:j=4@iterlog:k=1
    scaled:alpha=2@trunc:M=2
    ma:trunc:M=2        atom:s=-2,mass=1        expdensity:c=2,rate=2
    half@ma:iterlog:k=1

The mapping to the JSON descriptions is one-to-one: ``kind`` is the JSON
``kind`` and the key/value pairs are its parameters.
"""

from __future__ import annotations

from typing import Optional

from .errors import InvalidInput
from .radial import (AtomMeasure, ExpDensityMeasure, MAMeasure, RadialMeasure, RadialProfile,
                     ScaledMeasure, TabulatedMeasure, family)
from .radial.profiles import ScaledProfile, TruncatedProfile, exhaustion
from .weights import (Weight, exponential, iterated_exponential, polynomial, tilde)


def _split(spec: str) -> tuple[str, dict, Optional[str]]:
    spec = spec.strip()
    if not spec:
        raise InvalidInput("empty specification")
    head, _, nested = spec.partition("@")
    kind, _, body = head.partition(":")
    params: dict = {}
    if body:
        for item in body.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key:
                raise InvalidInput(f"expected key=value in {spec!r}, got {item!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise InvalidInput(f"parameter {key!r} in {spec!r} is not a number") from None
    return kind.strip(), params, (nested or None)


def _require(params: dict, *keys: str, spec: str) -> None:
    missing = [k for k in keys if k not in params]
    if missing:
        raise InvalidInput(f"{spec!r} is missing parameter(s) {', '.join(missing)}")


def parse_weight(spec: str) -> Weight:
    """Weight from ``poly:p=..``, ``exp``, ``iterexp:k=..`` or ``tilde:n=..@<weight>``."""
    kind, params, nested = _split(spec)
    if kind == "poly":
        _require(params, "p", spec=spec)
        return polynomial(params["p"])
    if kind == "exp":
        return exponential()
    if kind == "iterexp":
        return iterated_exponential(int(params.get("k", 1)))
    if kind == "tilde":
        _require(params, "n", spec=spec)
        if nested is None:
            raise InvalidInput("tilde weight needs a base weight after '@'")
        return tilde(parse_weight(nested), int(params["n"]))
    raise InvalidInput(f"unknown weight kind {kind!r}")


def parse_profile(spec: str, n: int = 1) -> RadialProfile:
    """Profile in dimension ``n`` from the mini-language."""
    kind, params, nested = _split(spec)
    base = parse_profile(nested, n) if nested else None
    if kind == "trunc":
        _require(params, "M", spec=spec)
        return TruncatedProfile(base if base is not None else family("log", n), params["M"])
    if kind == "exhaustion":
        _require(params, "j", spec=spec)
        return exhaustion(base if base is not None else family("iterlog", n, k=1), params["j"])
    if kind == "scaled":
        _require(params, "alpha", spec=spec)
        if base is None:
            raise InvalidInput("scaled profile needs a base profile after '@'")
        return ScaledProfile(base, params["alpha"])
    if base is not None:
        raise InvalidInput(f"profile kind {kind!r} takes no nested argument")
    if kind == "iterlog":
        params = {"k": int(params.get("k", 1))}
    if kind == "power":
        _require(params, "alpha", spec=spec)
    return family(kind, n, **params)


def parse_measure(spec: str, n: int = 1) -> RadialMeasure:
    """Measure from ``ma:<profile>``, ``atom:s=..,mass=..``, ``expdensity:c=..,rate=..``,
    ``lebesgue`` (density ``e^{2ns}``), ``table:<csv path>`` or ``half@<measure>``."""
    spec = spec.strip()
    if spec.startswith("ma:"):
        return MAMeasure(parse_profile(spec[3:], n))
    if spec.startswith("table:"):
        return TabulatedMeasure.from_csv(spec[6:])
    kind, params, nested = _split(spec)
    if kind == "half":
        if nested is None:
            raise InvalidInput("half needs a measure after '@'")
        return ScaledMeasure(parse_measure(nested, n), 0.5)
    if kind == "atom":
        _require(params, "s", spec=spec)
        return AtomMeasure((params["s"],), (params.get("mass", 1.0),))
    if kind == "expdensity":
        _require(params, "c", "rate", spec=spec)
        return ExpDensityMeasure(params["c"], params["rate"])
    if kind == "lebesgue":
        return ExpDensityMeasure(params.get("c", 1.0), 2.0 * n)
    raise InvalidInput(f"unknown measure kind {kind!r}")
