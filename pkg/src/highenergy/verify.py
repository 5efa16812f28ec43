"""Inequality checks on radial instances, with complete reports.

Every check returns a :class:`CheckReport` whose margin is ``rhs - lhs``.
A check fails when the margin is below ``-1e-6 * max(1, |rhs|)``; when a
hypothesis of the inequality does not hold (infinite energy, for instance)
the report is marked ``skipped`` instead of passed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidInput, QuadratureError
from .orlicz import (DistributionFunction, envelope_of_sum, solve_norm, union_envelope)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .radial import (ExpProfile, IterLogProfile, RadialProfile, ScaledProfile, cap_distribution,
                     energy, energy_poly_closed, exhaustion, is_below, j_energy,
                     j_energy_poly_closed, superposition, truncation,
                     vol_distribution)
from .radial.profiles import PowerProfile
from .weights import PolynomialWeight, Weight, tilde

TOLERANCE = 1e-6


def _num(x):
    """JSON-safe number: non-finite floats become strings."""
    if isinstance(x, (bool, str)) or x is None:
        return x
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, int, np.floating, np.integer)) and not isinstance(obj, bool):
        return _num(obj)
    return obj


def violates(lhs: float, rhs: float, tol: float = TOLERANCE) -> bool:
    """True when ``lhs <= rhs`` fails beyond the relative tolerance."""
    if math.isnan(lhs) or math.isnan(rhs):
        return True
    if math.isinf(rhs) and rhs > 0:
        return False
    if math.isinf(lhs):
        return lhs > 0
    return (rhs - lhs) < -tol * max(1.0, abs(rhs))


@dataclass
class CheckReport:
    """Outcome of one inequality check ``lhs <= rhs``.

    Attributes:
        name: unique check name including the instance description.
        inputs: serialized inputs.
        lhs, rhs: the two sides; ``margin = rhs - lhs``.
        status: ``"pass"``, ``"fail"`` or ``"skipped"``.
        diagnostics: quadrature and sub-check details.
    """

    name: str
    inputs: dict
    lhs: float
    rhs: float
    status: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        if math.isinf(self.rhs) and math.isinf(self.lhs):
            return math.nan if self.rhs == self.lhs else self.rhs - self.lhs
        return self.rhs - self.lhs

    @property
    def passed(self) -> Optional[bool]:
        return None if self.status == "skipped" else self.status == "pass"

    def to_json(self) -> dict:
        return _clean({"name": self.name, "inputs": self.inputs, "lhs": self.lhs, "rhs": self.rhs,
                       "margin": self.margin, "status": self.status, "pass": self.passed,
                       "diagnostics": self.diagnostics})

    def csv_row(self) -> list:
        return [self.name, _num(self.lhs), _num(self.rhs), _num(self.margin),
                {"pass": "true", "fail": "false", "skipped": "skipped"}[self.status]]


def _report(name, inputs, lhs, rhs, diagnostics=None, extra_ok=True) -> CheckReport:
    status = "pass" if (not violates(lhs, rhs) and extra_ok) else "fail"
    return CheckReport(name, inputs, float(lhs), float(rhs), status, diagnostics or {})


def _skip(name, inputs, reason, lhs=math.nan, rhs=math.nan, diagnostics=None) -> CheckReport:
    d = dict(diagnostics or {})
    d["skip_reason"] = reason
    return CheckReport(name, inputs, lhs, rhs, "skipped", d)


def _describe(g: RadialProfile) -> dict:
    return g.to_json()


def _label(g: RadialProfile) -> str:
    d = g.to_json()
    params = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                      for k, v in sorted(d["params"].items()) if not isinstance(v, list))
    inner = ""
    if "base" in d:
        inner = "@" + _label_json(d["base"])
    return f"{d['kind']}{':' + params if params else ''}{inner}"


def _label_json(d: dict) -> str:
    params = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                      for k, v in sorted(d["params"].items()) if not isinstance(v, list))
    inner = "@" + _label_json(d["base"]) if "base" in d else ""
    return f"{d['kind']}{':' + params if params else ''}{inner}"


def _wlabel(w: Weight) -> str:
    d = w.to_json()
    params = ",".join(f"{k}={v:g}" for k, v in sorted(d.get("parameters", {}).items())
                      if isinstance(v, (int, float)))
    return f"{d['kind']}{':' + params if params else ''}"


def _two_path(g: RadialProfile, w: Weight, E: float, J: Optional[float] = None,
              spec: QuadratureSpec = DEFAULT_SPEC) -> dict:
    """Relative gaps between the level-set quadrature and the closed-form route in s."""
    if not isinstance(w, PolynomialWeight):
        return {}
    out: dict = {}
    try:
        _fill_two_path(out, g, w, E, J, spec)
    except QuadratureError as exc:
        out["closed_form_error"] = str(exc)
    return out


def _fill_two_path(out, g, w, E, J, spec):
    if math.isfinite(E) and E > 0:
        e2 = energy_poly_closed(g, w.p, spec)
        out["energy_closed_form"] = e2
        out["energy_rel_gap"] = abs(e2 - E) / E
    if J is not None and math.isfinite(J) and J > 0:
        j2 = j_energy_poly_closed(g, w.p, spec)
        out["j_energy_closed_form"] = j2
        out["j_energy_rel_gap"] = abs(j2 - J) / J


# -- individual checks ------------------------------------------------------

def check_scaling(g: RadialProfile, w: Weight, alpha: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``E(alpha phi) <= max(alpha, alpha^{n+1}) E(phi)``."""
    if not alpha > 0:
        raise InvalidInput("alpha must be positive")
    name = f"scaling[{_label(g)}|{_wlabel(w)}|n={g.n}|alpha={alpha:g}]"
    inputs = {"profile": _describe(g), "weight": w.to_json(), "alpha": alpha}
    E = energy(g, w, spec)
    if not math.isfinite(E):
        return _skip(name, inputs, "infinite energy", rhs=E)
    lhs = energy(ScaledProfile(g, alpha), w, spec) if alpha != 1 else E
    rhs = max(alpha, alpha ** (g.n + 1)) * E
    return _report(name, inputs, lhs, rhs, {"energy": E, **_two_path(g, w, E, spec=spec)})


def check_fundamental(g_low: RadialProfile, g_high: RadialProfile, w: Weight,
                      spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``E(psi) <= 2^{n+1} E(phi)`` for ``phi <= psi``.

    Raises:
        InvalidInput: if ``g_low <= g_high`` fails on the comparison grid.
    """
    if g_low.n != g_high.n:
        raise InvalidInput("profiles must share the dimension")
    if not is_below(g_low, g_high):
        raise InvalidInput("fundamental inequality needs g_low <= g_high")
    n = g_low.n
    name = f"fundamental[{_label(g_low)}<={_label(g_high)}|{_wlabel(w)}|n={n}]"
    inputs = {"low": _describe(g_low), "high": _describe(g_high), "weight": w.to_json()}
    E_low = energy(g_low, w, spec)
    if not math.isfinite(E_low):
        return _skip(name, inputs, "infinite energy of the lower function", rhs=E_low)
    E_high = energy(g_high, w, spec)
    rhs = 2.0 ** (n + 1) * E_low
    diag = {"energy_low": E_low, "ratio": E_high / E_low if E_low > 0 else math.nan,
            **_two_path(g_low, w, E_low, spec=spec)}
    return _report(name, inputs, E_high, rhs, diag)


def check_cap_characterization(g: RadialProfile, w: Weight,
                               spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``J <= 2 max(1, E)`` and ``E <= max(1, J^{n+1})``; the worse part is reported."""
    n = g.n
    name = f"cap_characterization[{_label(g)}|{_wlabel(w)}|n={n}]"
    inputs = {"profile": _describe(g), "weight": w.to_json()}
    E = energy(g, w, spec)
    J = j_energy(g, w, spec)
    if not math.isfinite(E) and not math.isfinite(J):
        return _skip(name, inputs, "infinite energies", E, J, {"energy": E, "j_energy": J})
    parts = {
        "j_le_2max1e": (J, 2.0 * max(1.0, E)),
        "e_le_max1jn1": (E, max(1.0, J ** (n + 1))),
    }
    worst = min(parts, key=lambda k: _scaled_margin(*parts[k]))
    lhs, rhs = parts[worst]
    diag = {"energy": E, "j_energy": J, "worst_part": worst,
            "parts": {k: {"lhs": a, "rhs": b, "margin": b - a} for k, (a, b) in parts.items()},
            **_two_path(g, w, E, J, spec)}
    ok = all(not violates(a, b) for a, b in parts.values())
    return _report(name, inputs, lhs, rhs, diag, extra_ok=ok)


def _scaled_margin(lhs, rhs):
    if math.isinf(rhs) and rhs > 0:
        return math.inf
    if math.isinf(lhs):
        return -math.inf
    return (rhs - lhs) / max(1.0, abs(rhs))


def closed_cap(g: RadialProfile, s):
    """``Cap({phi <= -s})``: the closed sublevel, which differs from the open one only
    at the bottom value of a bounded function."""
    s = np.asarray(s, dtype=float)
    F = cap_distribution(g)
    top = -g.lower
    vals = np.asarray(F(s), dtype=float)
    if math.isfinite(top):
        at = np.isclose(s, top, rtol=0, atol=0)
        if at.any():
            sig = float(g.level(np.nextafter(top, 0.0)))
            vals = np.where(at, (g.s_top - sig) ** (-g.n), vals)
    return vals


def check_cap_decay(g: RadialProfile, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC,
                    grid: Optional[Sequence[float]] = None) -> CheckReport:
    """Capacity decay and its converse.

    Forward: ``Cap(phi <= -s) <= 1 / h~(s / J)`` on a grid of ``s``.  Converse:
    if ``Cap(phi <= -s) <= C0 / ((1 + s)^2 s^n h'(s / lam0))`` on the grid then
    for ``lam >= lam0`` the capacity layer cake is at most ``C0 / lam^{n+1}``,
    so ``J <= b = max(lam0, C0^{1/(n+1)})`` and ``E <= max(1, b^{n+1})``.
    Both are asserted for the fit minimizing ``b``.  The fit minimizing
    ``max(C0, lam0)`` and the comparison ``E <= max(C0, lam0)^{n+1}`` are
    reported only: that form fails for small profiles (the second iterated
    logarithm with ``n >= 2``).  A fit that is still growing at the end of the
    grid is skipped.
    """
    n = g.n
    name = f"cap_decay[{_label(g)}|{_wlabel(w)}|n={n}]"
    inputs = {"profile": _describe(g), "weight": w.to_json()}
    J = j_energy(g, w, spec)
    if not math.isfinite(J):
        return _skip(name, inputs, "infinite capacity energy", rhs=J)
    if J == 0:
        return _report(name, inputs, 0.0, 0.0, {"j_energy": 0.0})
    top = -g.lower
    if grid is None:
        grid = np.geomspace(1e-3, 1e3, 97)
        if math.isfinite(top):
            grid = np.concatenate([grid[grid < top], [top], np.asarray(g.t_breaks())])
        grid = np.unique(grid)
    s = np.asarray(grid, dtype=float)
    cap = closed_cap(g, s)
    ht = tilde(w, n)
    with np.errstate(all="ignore"):
        bound = np.exp(-np.asarray(ht.log_h(s / J), dtype=float))
    margins = np.where(np.isinf(bound), np.inf, (bound - cap) / np.maximum(1.0, np.abs(bound)))
    i = int(np.argmin(margins))
    forward_ok = not violates(float(cap[i]), float(bound[i]))
    diag = {"j_energy": J, "forward_worst_s": float(s[i]),
            "forward_worst": {"lhs": float(cap[i]), "rhs": float(bound[i])}}

    # converse: fit (C0, lam0) on a log grid of lam0
    E = energy(g, w, spec)
    fit_grid = np.geomspace(1e-4, 1e4 if not math.isfinite(top) else top, 400)
    cap_fit = closed_cap(g, fit_grid)
    best = None
    best_size = None
    for lam0 in 2.0 ** (np.arange(-40, 121) / 4.0):
        with np.errstate(all="ignore"):
            logp = (np.log(cap_fit) + 2 * np.log1p(fit_grid) + n * np.log(fit_grid)
                    + np.asarray(w.log_dh(fit_grid / lam0), dtype=float))
        logp = np.where(cap_fit > 0, logp, -np.inf)
        k = int(np.argmax(logp))
        if math.isinf(top) and k == len(fit_grid) - 1:
            continue
        with np.errstate(over="ignore"):
            C0 = float(np.exp(logp[k]))
            b = max(float(lam0), float(np.exp(logp[k] / (n + 1))))
        if best is None or b < best[0]:
            best = (b, C0, float(lam0))
        size = max(C0, float(lam0))
        if best_size is None or size < best_size[0]:
            best_size = (size, C0, float(lam0))
    if best is None:
        diag["converse"] = "fit failed: capacity decays slower than every tested bound"
        status_ok = forward_ok
        report = _report(name, inputs, float(cap[i]), float(bound[i]), diag, extra_ok=status_ok)
        return report
    b, C0, lam0 = best
    size = best_size[0]
    conv_rhs = max(1.0, b) ** (n + 1)
    diag["converse"] = {"C0": C0, "lambda0": lam0, "energy": E, "bound": conv_rhs, "j_bound": b,
                        "size_fit": {"C0": best_size[1], "lambda0": best_size[2], "size": size},
                        "unfloored_bound": size ** (n + 1),
                        "unfloored_holds": not violates(E, size ** (n + 1))}
    conv_ok = not violates(E, conv_rhs) and not violates(J, b)
    if _scaled_margin(E, conv_rhs) < _scaled_margin(float(cap[i]), float(bound[i])):
        lhs, rhs = E, conv_rhs
    else:
        lhs, rhs = float(cap[i]), float(bound[i])
    return _report(name, inputs, lhs, rhs, diag, extra_ok=forward_ok and conv_ok)


class _MoserTrudingerWeight(Weight):
    """``H_beta(t) - 1`` with ``H_beta = exp(beta h~(t)^{1/n})``, evaluated in log form."""

    kind = "moser_trudinger"

    def __init__(self, ht: Weight, beta: float, n: int):
        self.ht, self.beta, self.n = ht, beta, n

    def log_dh(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            lh = np.asarray(self.ht.log_h(t), dtype=float)
            res = (self.beta * np.exp(lh / self.n) + math.log(self.beta / self.n)
                   + (1.0 / self.n - 1.0) * lh + np.asarray(self.ht.log_dh(t), dtype=float))
        return np.where(t > 0, res, -np.inf)

    def dh(self, t):
        with np.errstate(over="ignore"):
            return np.exp(self.log_dh(t))

    def h(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return np.expm1(self.beta * np.asarray(self.ht.h(t)) ** (1.0 / self.n))


def moser_trudinger_integral(g: RadialProfile, w: Weight, beta: float, E: Optional[float] = None,
                             unit_volume: float = 1.0, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int H_beta(-phi / (2 max(1, E))) dV`` over the ball, by layer cake over volumes."""
    from .orlicz import layercake_integral
    E = energy(g, w, spec) if E is None else E
    Lam = 2.0 * max(1.0, E)
    mt = _MoserTrudingerWeight(tilde(w, g.n), beta, g.n)
    F = vol_distribution(g, unit_volume)
    total_volume = unit_volume * math.exp(2 * g.n * g.s_top)
    return total_volume + layercake_integral(F, mt, Lam, spec)


def check_moser_trudinger(g: RadialProfile, w: Weight, beta: float,
                          spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """Finiteness of the ``H_beta`` volume integral for ``beta < 2n`` and the exact
    radial identity ``Vol = V1 exp(-2n / Cap^{1/n})``.

    For ``beta >= 2n`` the value is computed and reported, never asserted.
    """
    n = g.n
    name = f"moser_trudinger[{_label(g)}|{_wlabel(w)}|n={n}|beta={beta:g}]"
    inputs = {"profile": _describe(g), "weight": w.to_json(), "beta": beta}
    if not beta > 0:
        raise InvalidInput("beta must be positive")
    E = energy(g, w, spec)
    if not math.isfinite(E):
        return _skip(name, inputs, "infinite energy", rhs=math.inf)
    # the identity, on the unit ball
    top = -g.lower
    ts = np.geomspace(1e-3, min(top, 1e3) if math.isfinite(top) else 1e3, 200)
    ts = ts[ts < top]
    identity_gap = 0.0
    if g.s_top == 0.0 and ts.size:
        vol = np.asarray(vol_distribution(g)(ts))
        cap = np.asarray(cap_distribution(g)(ts))
        with np.errstate(all="ignore"):
            ackpz = np.exp(-2.0 * n / cap ** (1.0 / n))
        identity_gap = float(np.max(np.abs(vol - ackpz)))
    value = moser_trudinger_integral(g, w, beta, E, spec=spec)
    diag = {"energy": E, "Lambda": 2.0 * max(1.0, E), "identity_max_abs_gap": identity_gap,
            "integral": value}
    if beta >= 2 * n:
        diag["note"] = "beta >= 2n lies outside the range of the inequality; value reported only"
        return _skip(name, inputs, "boundary exponent", lhs=value, rhs=math.inf, diagnostics=diag)
    ok = math.isfinite(value) and identity_gap <= 1e-10
    return _report(name, inputs, value, math.inf, diag, extra_ok=ok)


def check_choquet_convexity(g_list: Sequence[RadialProfile], eps_list: Sequence[float],
                            alpha_list: Sequence[float], w: Weight,
                            spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``I(sum eps_j alpha_j f_j) <= sup_j I(f_j)`` for the Choquet norm of ``h~``.

    The left side is bounded through the layer cake of ``sum alpha_j Cap(f_j > t)``
    and also computed exactly for the radial superposition; both must pass.
    """
    if not (len(g_list) == len(eps_list) == len(alpha_list)) or not g_list:
        raise InvalidInput("profiles, eps and alpha lists must have equal nonzero length")
    if sum(eps_list) > 1 + 1e-12 or sum(alpha_list) > 1 + 1e-12:
        raise InvalidInput("eps and alpha must each sum to at most 1")
    if any(e < 0 for e in eps_list) or any(a < 0 for a in alpha_list):
        raise InvalidInput("eps and alpha must be nonnegative")
    n = g_list[0].n
    ht = tilde(w, n)
    name = (f"choquet_convexity[{'+'.join(_label(g) for g in g_list)}|{_wlabel(w)}|n={n}"
            f"|eps={','.join(f'{e:g}' for e in eps_list)}|alpha={','.join(f'{a:g}' for a in alpha_list)}]")
    inputs = {"profiles": [_describe(g) for g in g_list], "eps": list(eps_list),
              "alpha": list(alpha_list), "weight": w.to_json()}
    norms = [solve_norm(cap_distribution(g), ht, spec).value for g in g_list]
    rhs = max(norms)
    if not math.isfinite(rhs):
        return _skip(name, inputs, "a summand has infinite norm", rhs=rhs)
    env = union_envelope([cap_distribution(g) for g in g_list], alpha_list)
    lhs_env = solve_norm(env, ht, spec).value
    combo = superposition([e * a for e, a in zip(eps_list, alpha_list)], g_list)
    lhs_exact = solve_norm(cap_distribution(combo), ht, spec).value
    diag = {"summand_norms": norms, "envelope_norm": lhs_env, "exact_norm": lhs_exact}
    ok = not violates(lhs_exact, rhs) and not violates(lhs_env, rhs)
    return _report(name, inputs, max(lhs_env, lhs_exact), rhs, diag, extra_ok=ok)


def check_quasi_triangle(g: RadialProfile, h_: RadialProfile, w: Weight,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``I(f + g) <= 4 max(I(f), I(g))`` via the envelope ``F(t/2) + G(t/2)`` and the exact sum."""
    n = g.n
    ht = tilde(w, n)
    name = f"quasi_triangle[{_label(g)}+{_label(h_)}|{_wlabel(w)}|n={n}]"
    inputs = {"profiles": [_describe(g), _describe(h_)], "weight": w.to_json()}
    a = solve_norm(cap_distribution(g), ht, spec).value
    b = solve_norm(cap_distribution(h_), ht, spec).value
    rhs = 4.0 * max(a, b)
    if not math.isfinite(rhs):
        return _skip(name, inputs, "infinite norm", rhs=rhs)
    env = solve_norm(envelope_of_sum(cap_distribution(g), cap_distribution(h_)), ht, spec).value
    exact = solve_norm(cap_distribution(superposition([1.0, 1.0], [g, h_])), ht, spec).value
    diag = {"norms": [a, b], "envelope_norm": env, "exact_norm": exact}
    ok = not violates(env, rhs) and not violates(exact, rhs)
    return _report(name, inputs, max(env, exact), rhs, diag, extra_ok=ok)


def check_semicontinuity(g: RadialProfile, sequence: Sequence[RadialProfile], w: Weight,
                         spec: QuadratureSpec = DEFAULT_SPEC, label: str = "") -> CheckReport:
    """``E(phi) <= liminf E(phi_j)`` for ``phi_j`` decreasing to ``phi``.

    The liminf is represented by the last computed element; the full sequence
    is kept in the diagnostics.
    """
    n = g.n
    name = f"semicontinuity[{_label(g)}|{label or 'sequence'}|{_wlabel(w)}|n={n}]"
    inputs = {"profile": _describe(g), "sequence": [_describe(x) for x in sequence], "weight": w.to_json()}
    for a, b in zip(sequence[:-1], sequence[1:]):
        if not is_below(b, a):
            raise InvalidInput("sequence must be decreasing")
    if sequence and not is_below(g, sequence[-1]):
        raise InvalidInput("sequence must stay above its limit")
    values = [energy(x, w, spec) for x in sequence]
    E = energy(g, w, spec)
    diag = {"sequence_energies": values, "limit_energy": E}
    if not math.isfinite(E):
        return _skip(name, inputs, "limit has infinite energy", E, values[-1] if values else math.nan, diag)
    return _report(name, inputs, E, values[-1], diag)


def check_cone_combination(g_list: Sequence[RadialProfile], w: Weight, A: Optional[float] = None,
                           spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """``E(sum_j 4^{-j} g_j) <= (2 max(1, A))^{n+1}`` when every ``E(g_j) <= A``.

    At most eight terms are used; the weight of the omitted tail is reported.
    """
    g_list = list(g_list)[:8]
    n = g_list[0].n
    name = f"cone_combination[{'+'.join(_label(g) for g in g_list)}|{_wlabel(w)}|n={n}]"
    energies = [energy(g, w, spec) for g in g_list]
    A = max(energies) if A is None else A
    inputs = {"profiles": [_describe(g) for g in g_list], "weight": w.to_json(), "A": A}
    if not math.isfinite(A):
        return _skip(name, inputs, "infinite energy bound", rhs=math.inf)
    if any(e > A * (1 + 1e-12) for e in energies):
        raise InvalidInput("every summand must satisfy E <= A")
    coeffs = [4.0 ** -(j + 1) for j in range(len(g_list))]
    psi = superposition(coeffs, g_list)
    lhs = energy(psi, w, spec)
    rhs = (2.0 * max(1.0, A)) ** (n + 1)
    diag = {"energies": energies, "bound_without_floor": (2.0 * A) ** (n + 1),
            "omitted_tail_weight": 4.0 ** -len(g_list) / 3.0}
    return _report(name, inputs, lhs, rhs, diag)


def check_choquet_axioms(F: DistributionFunction, w: Weight, spec: QuadratureSpec = DEFAULT_SPEC,
                         factor: float = 2.0, label: str = "") -> list[CheckReport]:
    """Homogeneity, positive-definiteness and monotone limits of the Choquet norm."""
    out = []
    I = solve_norm(F, w, spec).value
    I2 = solve_norm(F.scaled_argument(factor), w, spec).value
    inputs = {"distribution": label or F.label, "weight": w.to_json(), "factor": factor}
    rel = abs(I2 - factor * I) / max(1e-300, factor * I) if math.isfinite(I) and I > 0 else 0.0
    out.append(CheckReport(f"choquet_homogeneity[{label or F.label}|{_wlabel(w)}|x{factor:g}]", inputs,
                           I2, factor * I, "pass" if rel <= 1e-9 else "fail", {"relative_gap": rel}))
    zero = F.is_zero()
    ok = (I == 0.0) == zero
    out.append(CheckReport(f"choquet_definite[{label or F.label}|{_wlabel(w)}]", inputs,
                           I, 0.0 if zero else I, "pass" if ok else "fail",
                           {"is_zero": zero, "jumps": [list(j) for j in F.jumps()]}))
    seq = [solve_norm(F.truncated(T), w, spec).value for T in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)]
    mono = all(a <= b * (1 + 1e-10) for a, b in zip(seq[:-1], seq[1:])) and seq[-1] <= I * (1 + 1e-10)
    out.append(CheckReport(f"choquet_monotone_limit[{label or F.label}|{_wlabel(w)}]", inputs,
                           seq[-1], I, "pass" if mono else "fail", {"sequence": seq, "limit": I}))
    return out


# -- suite runner -----------------------------------------------------------

def default_families(n: int) -> list[RadialProfile]:
    """The sampled radial families in dimension ``n``."""
    phi1 = IterLogProfile(1, n)
    return [truncation(1.0, n=n), truncation(2.0, n=n), truncation(4.0, n=n),
            phi1, IterLogProfile(2, n), ExpProfile(2.0, n), PowerProfile(0.5, n),
            exhaustion(phi1, 4.0), truncation(3.0, base=phi1)]


def default_weights() -> list[Weight]:
    from .weights import exponential, polynomial
    return [polynomial(1), polynomial(2), exponential()]


def _suite_tasks(suite: str, n_values: Iterable[int], weights: Sequence[Weight]):
    tasks = []
    for n in n_values:
        fams = default_families(n)
        for w in weights:
            if suite in ("all", "scaling"):
                for g in fams:
                    for a in (0.5, 2.0):
                        tasks.append((check_scaling, (g, w, a)))
            if suite in ("all", "fundamental"):
                for M_low, M_high in ((4.0, 2.0), (2.0, 1.0), (4.0, 1.0)):
                    tasks.append((check_fundamental, (truncation(M_low, n=n), truncation(M_high, n=n), w)))
                phi1 = IterLogProfile(1, n)
                tasks.append((check_fundamental, (phi1, exhaustion(phi1, 4.0), w)))
                tasks.append((check_fundamental, (phi1, truncation(2.0, base=phi1), w)))
                tasks.append((check_fundamental, (ScaledProfile(ExpProfile(2.0, n), 2.0), truncation(0.5, n=n), w)))
            if suite in ("all", "cap"):
                for g in fams:
                    tasks.append((check_cap_characterization, (g, w)))
                    tasks.append((check_cap_decay, (g, w)))
            if suite in ("all", "moser_trudinger"):
                for g in fams:
                    for beta in (0.5 * n, 1.0 * n, 1.9 * n):
                        tasks.append((check_moser_trudinger, (g, w, beta)))
            if suite in ("all", "convexity"):
                tasks.append((check_choquet_convexity,
                              ([truncation(2.0, n=n)] * 2, [0.5, 0.5], [0.5, 0.5], w)))
                mixed = [truncation(1.0, n=n), IterLogProfile(1, n), ExpProfile(2.0, n),
                         truncation(4.0, n=n), exhaustion(IterLogProfile(1, n), 2.0), truncation(2.0, n=n)]
                geo = [2.0 ** -(j + 1) for j in range(len(mixed))]
                tasks.append((check_choquet_convexity, (mixed, geo, geo, w)))
                tasks.append((check_quasi_triangle, (truncation(2.0, n=n), IterLogProfile(1, n), w)))
            if suite in ("all", "semicontinuity"):
                phi1 = IterLogProfile(1, n)
                seq = [exhaustion(phi1, float(j)) for j in (1, 2, 4, 8, 16, 32, 64)]
                tasks.append((check_semicontinuity, (phi1, seq, w), {"label": "exhaustion"}))
                seq = [truncation(float(M), base=phi1) for M in (1, 2, 4, 8, 16, 32, 64)]
                tasks.append((check_semicontinuity, (phi1, seq, w), {"label": "truncation"}))
            if suite in ("all", "cone"):
                tasks.append((check_cone_combination, ([truncation(2.0, n=n)] * 8, w)))
                tasks.append((check_cone_combination,
                              ([truncation(1.0, n=n), truncation(2.0, n=n), truncation(4.0, n=n)], w)))
    return tasks


SUITES = ("all", "scaling", "fundamental", "cap", "moser_trudinger", "convexity", "semicontinuity", "cone")


def run_suite(suite: str = "all", n_values: Iterable[int] = (1,), weights: Optional[Sequence[Weight]] = None,
              max_workers: Optional[int] = None, spec: QuadratureSpec = DEFAULT_SPEC) -> list[CheckReport]:
    """Run a named suite concurrently; reports are returned sorted by name."""
    if suite not in SUITES:
        raise InvalidInput(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    weights = list(weights) if weights is not None else default_weights()
    tasks = _suite_tasks(suite, list(n_values), weights)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        reports = list(pool.map(lambda task: task[0](*task[1], **(task[2] if len(task) > 2 else {}),
                                                     spec=spec), tasks))
    return sorted(reports, key=lambda r: r.name)


def write_jsonl(reports: Sequence[CheckReport], path_or_buffer) -> None:
    """One JSON object per line, keys sorted for byte-stable output."""
    lines = "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in reports)
    if isinstance(path_or_buffer, io.IOBase) or hasattr(path_or_buffer, "write"):
        path_or_buffer.write(lines)
    else:
        with open(path_or_buffer, "w") as fh:
            fh.write(lines)


def write_csv(reports: Sequence[CheckReport], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "lhs", "rhs", "margin", "pass"])
        for r in reports:
            writer.writerow(r.csv_row())
