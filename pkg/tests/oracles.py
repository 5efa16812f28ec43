"""Independent reference computations for the tests.

Nothing here imports the package: integrals are midpoint Riemann sums on
uniform grids and roots are found by plain bisection.
"""

import math

import numpy as np


def midpoint_sum(f, a, b, step):
    """Midpoint Riemann sum of a vectorized ``f`` over ``[a, b]``."""
    count = int(math.ceil((b - a) / step))
    h = (b - a) / count
    total = 0.0
    chunk = 1_000_000
    for start in range(0, count, chunk):
        k = np.arange(start, min(count, start + chunk), dtype=float)
        total += float(np.sum(f(a + (k + 0.5) * h)))
    return total * h


def bisect_decreasing(L, lo=1e-6, hi=1e6, iterations=200):
    """Root of ``L(lam) = 1`` for decreasing ``L`` by bisection in log scale."""
    for _ in range(iterations):
        mid = math.sqrt(lo * hi)
        if L(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def riemann_norm(F, dh, t_max, step):
    """Luxembourg norm from a distribution function on ``(0, t_max)``.

    The layer cake ``int (1/lam) h'(t/lam) F(t) dt`` is a midpoint sum.
    """
    count = int(math.ceil(t_max / step))
    h = t_max / count
    t = (np.arange(count, dtype=float) + 0.5) * h
    Ft = F(t)

    def L(lam):
        return float(np.sum(dh(t / lam) * Ft)) * h / lam

    return bisect_decreasing(L)


def grid_max(f, a, b, step):
    """Brute-force maximum of ``f`` on a uniform grid."""
    t = np.arange(a, b + step, step)
    return float(np.max(f(t)))


def central_difference(f, t, step=1e-6):
    return (f(t + step) - f(t - step)) / (2.0 * step)


def lower_riemann(f_left, F_right, lam, blocks):
    """Lower sums over unit blocks of ``(1/lam) h'(t/lam) F(t)`` with ``h'`` up and ``F`` down."""
    k = np.arange(blocks, dtype=float)
    return np.cumsum(f_left(k / lam) * F_right(k + 1.0) / lam)
