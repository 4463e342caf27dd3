"""Closed-form Wigner functions of coherent-state superpositions.

Convention: ``alpha = x + i p`` and a coherent state ``|b>`` has
``W(alpha) = (2/pi) exp(-2|alpha - b|^2)``, so every pure state satisfies
``|W| <= 2/pi``.  A dyad ``|b_i><b_j|`` contributes

    (2/pi) <b_j|b_i> exp(-2 (alpha - b_i)(conj(alpha) - conj(b_j)))

and the state's Wigner function is the coefficient-weighted sum over all dyads.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from ._optimize import scan_maximize
from .coherent import ModeState, overlap_matrix
from .errors import InvalidArgumentError, NoPeakError

W_BOUND = 2 / math.pi
PEAK_SCAN_POINTS = 2001
PEAK_XTOL = 1e-8
GRID_MARGIN = 4.0
_CHUNK = 4096


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise InvalidArgumentError(f"non-finite phase point ({self.x}, {self.p})")

    @property
    def alpha(self) -> complex:
        return complex(self.x, self.p)


def _dyad_weights(state: ModeState) -> np.ndarray:
    c, a = state.coeffs, state.alphas
    # w[i, j] = c_i conj(c_j) <a_j|a_i>
    return c[:, None] * np.conj(c)[None, :] * overlap_matrix(a, a).T


def dyad_sum(state: ModeState, points, derivative: bool = False) -> np.ndarray:
    """Complex dyad sum at ``points`` (complex phase-space amplitudes).

    The imaginary part is rounding noise for any valid state.  With
    ``derivative=True`` the x-derivative at fixed p is returned instead.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    w = _dyad_weights(state)
    a = state.alphas
    out = np.empty(pts.shape, dtype=complex)
    for start in range(0, pts.size, _CHUNK):
        z = pts[start:start + _CHUNK, None]
        d = z - a[None, :]
        # (alpha - a_i)(conj(alpha) - conj(a_j))
        prod = d[:, :, None] * np.conj(d)[:, None, :]
        e = np.exp(-2.0 * prod) * w[None, :, :]
        if derivative:
            e = e * (-2.0) * (d[:, :, None] + np.conj(d)[:, None, :])
        out[start:start + _CHUNK] = e.sum(axis=(1, 2))
    return W_BOUND * out


def wigner(state: ModeState, x, p) -> np.ndarray:
    """Vectorized ``W(x, p)``; ``x`` and ``p`` broadcast together."""
    state.require_normalized()
    xb, pb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    vals = dyad_sum(state, xb + 1j * pb)
    return vals.real.reshape(xb.shape)


def wigner_point(state: ModeState, at: PhasePoint) -> float:
    return float(wigner(state, at.x, at.p))


def wigner_decomposition(state: ModeState, x, p) -> tuple[np.ndarray, np.ndarray]:
    """Split ``W`` into per-component Gaussians and the summed interference.

    Returns ``(diagonal, interference)`` where ``diagonal[k]`` is the
    contribution of ``|c_k|^2 |a_k><a_k|`` and ``interference`` collects all
    cross dyads.  ``diagonal.sum(0) + interference`` equals :func:`wigner`.
    """
    state.require_normalized()
    xb, pb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    alpha = (xb + 1j * pb).ravel()
    c, a = state.coeffs, state.alphas
    diag = np.abs(c)[:, None] ** 2 * np.exp(-2.0 * np.abs(alpha[None, :] - a[:, None]) ** 2)
    diag = W_BOUND * diag
    total = dyad_sum(state, alpha).real
    inter = total - diag.sum(axis=0)
    return diag.reshape((len(c),) + xb.shape), inter.reshape(xb.shape)


def wigner_cross_section(state: ModeState, p: float, x_min: float, x_max: float,
                         n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample ``W`` on the line ``Im(alpha) = p``; returns ``(x, w)`` arrays."""
    if n < 2:
        raise InvalidArgumentError("cross section needs n >= 2")
    xs = np.linspace(x_min, x_max, n)
    return xs, wigner(state, xs, p)


def wigner_peak_x(state: ModeState, search_lo: float, search_hi: float) -> float:
    """Abscissa of the global maximum of ``W(X, 0)`` on ``[search_lo, search_hi]``."""
    if not search_hi > search_lo:
        raise InvalidArgumentError("empty peak search interval")
    state.require_normalized()

    def w(xs: np.ndarray) -> np.ndarray:
        return dyad_sum(state, xs).real

    def dw(x: float) -> float:
        return float(dyad_sum(state, [x], derivative=True).real[0])

    xs = np.linspace(search_lo, search_hi, PEAK_SCAN_POINTS)
    ys = w(xs)
    if ys.max() - ys.min() < 1e-14:
        raise NoPeakError("W(X, 0) is flat on the search interval")
    return scan_maximize(w, search_lo, search_hi, PEAK_SCAN_POINTS, PEAK_XTOL, dfdx=dw).x


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    x_count: int
    p_min: float
    p_max: float
    p_count: int

    def __post_init__(self):
        if self.x_count < 2 or self.p_count < 2:
            raise InvalidArgumentError("grid counts must be >= 2")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise InvalidArgumentError("grid max must exceed min on both axes")

    @classmethod
    def around(cls, state: ModeState, count: int = 161, margin: float = GRID_MARGIN) -> "GridSpec":
        """Square grid spanning ``+-(max|alpha_i| + margin)``."""
        half = float(np.max(np.abs(state.alphas), initial=0.0)) + margin
        return cls(-half, half, count, -half, half, count)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.x_count)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.p_count)


@dataclass(frozen=True)
class WignerGrid:
    spec: GridSpec
    values: np.ndarray  # shape (p_count, x_count); x varies fastest

    @property
    def dx(self) -> float:
        s = self.spec
        return (s.x_max - s.x_min) / (s.x_count - 1)

    @property
    def dp(self) -> float:
        s = self.spec
        return (s.p_max - s.p_min) / (s.p_count - 1)

    def integral(self) -> float:
        return float(self.values.sum() * self.dx * self.dp)

    def write_csv(self, dest: str | Path | TextIO) -> None:
        """``x,p,w`` rows, p-major, 17 significant digits."""
        if isinstance(dest, (str, Path)):
            with open(dest, "w", newline="") as fh:
                self.write_csv(fh)
            return
        xs, ps = self.spec.xs, self.spec.ps
        dest.write("x,p,w\n")
        for j, p in enumerate(ps):
            row = self.values[j]
            dest.write("".join(f"{x:.17g},{p:.17g},{v:.17g}\n" for x, v in zip(xs, row)))

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def wigner_grid(state: ModeState, spec: GridSpec | None = None) -> WignerGrid:
    if spec is None:
        spec = GridSpec.around(state)
    X, P = np.meshgrid(spec.xs, spec.ps)  # rows follow p, columns follow x
    return WignerGrid(spec, wigner(state, X, P))
