"""Coarse-scan + bracketed refinement used by peak finding and amplitude fits."""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar


class ScanMax(NamedTuple):
    x: float
    value: float
    index: int  # index of the coarse-grid maximum
    at_upper: bool  # coarse maximum sits on the upper end of the scan


def scan_maximize(
    f_vec: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    n: int,
    xatol: float,
    dfdx: Callable[[float], float] | None = None,
) -> ScanMax:
    """Global maximum of a 1-D function on ``[lo, hi]``.

    ``f_vec`` is evaluated on ``n`` uniform points; the best grid point is then
    refined inside its two neighbouring cells.  When ``dfdx`` is given and
    changes sign across the bracket the stationary point is located with
    Brent's root finder, which is accurate to ``xatol`` even where the peak is
    too flat for value comparisons to resolve it.
    """
    xs = np.linspace(lo, hi, n)
    ys = np.asarray(f_vec(xs), dtype=float)
    i = int(np.argmax(ys))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]

    def f(x: float) -> float:
        return float(f_vec(np.array([x]))[0])

    x_best, y_best = float(xs[i]), float(ys[i])
    if dfdx is not None and 0 < i < n - 1 and dfdx(a) > 0 > dfdx(b):
        x = brentq(dfdx, a, b, xtol=xatol * 1e-2, rtol=4 * np.finfo(float).eps)
        y = f(x)
        if y >= y_best:
            x_best, y_best = float(x), y
    else:
        res = minimize_scalar(lambda x: -f(x), bounds=(a, b), method="bounded",
                              options={"xatol": xatol})
        if -res.fun >= y_best:
            x_best, y_best = float(res.x), float(-res.fun)
    return ScanMax(x_best, y_best, i, i == n - 1)
