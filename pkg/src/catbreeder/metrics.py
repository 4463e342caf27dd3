"""Fidelities, best-fit cat amplitudes and superposition-case labels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ._optimize import scan_maximize
from .coherent import ModeState, Parity, overlap_matrix, parity_sign
from .errors import InvalidArgumentError

FIT_SCAN_POINTS = 1001
FIT_XTOL = 1e-9
CASE_REL_TOL = 1e-12

CaseLabel = Literal["I", "II", "III", "non-cat"]


def fidelity(a: ModeState, b: ModeState) -> float:
    """``F = |<a|b>|`` for normalized states."""
    a.require_normalized("first state")
    b.require_normalized("second state")
    return min(abs(a.inner(b)), 1.0)


@dataclass(frozen=True)
class CatFit:
    alpha3: float
    phi_fit: float
    fidelity: float
    at_boundary: bool = False


def _family_fidelity(state: ModeState, sign: int | None):
    """Vectorized fidelity of ``state`` against a one-parameter family.

    ``sign=None`` is the coherent family ``|a>``; otherwise the cat family
    ``N(a) (|a> + sign |-a>)`` with real ``a``.
    """
    c, alphas = state.coeffs, state.alphas

    def f(a_grid: np.ndarray) -> np.ndarray:
        a_grid = np.asarray(a_grid, dtype=float)
        amp = overlap_matrix(a_grid, alphas) @ c
        if sign is None:
            return np.abs(amp)
        amp = amp + sign * (overlap_matrix(-a_grid, alphas) @ c)
        norm_sq = 2.0 + 2.0 * sign * np.exp(-2.0 * a_grid ** 2)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.abs(amp) / np.sqrt(norm_sq)
        return np.where(norm_sq > 1e-24, out, 0.0)

    return f


def _fit(state: ModeState, sign: int | None, search_hi: float) -> tuple[float, float, bool]:
    state.require_normalized()
    if not (math.isfinite(search_hi) and search_hi > 0):
        raise InvalidArgumentError("search_hi must be positive")
    f = _family_fidelity(state, sign)
    # the odd cat is undefined at a = 0; start one grid step in
    lo = search_hi / (FIT_SCAN_POINTS - 1) if sign == -1 else 0.0
    best = scan_maximize(f, lo, search_hi, FIT_SCAN_POINTS, FIT_XTOL)
    return best.x, min(best.value, 1.0), best.at_upper


def default_search_hi(state: ModeState) -> float:
    """Fit domain upper bound: the two largest component amplitudes plus one."""
    mags = sorted({round(abs(a), 12) for a in state.alphas}, reverse=True)
    return sum(mags[:2]) + 1.0


def fit_cat(state: ModeState, parity: Parity, search_hi: float | None = None) -> CatFit:
    """Ideal cat of the given parity with maximal fidelity to ``state``."""
    sign = parity_sign(parity)
    if search_hi is None:
        search_hi = default_search_hi(state)
    a, fid, boundary = _fit(state, sign, search_hi)
    return CatFit(a, 0.0 if sign > 0 else math.pi, fid, boundary)


def fit_coherent(state: ModeState, search_hi: float | None = None) -> CatFit:
    """Real coherent amplitude with maximal fidelity to ``state``."""
    if search_hi is None:
        search_hi = default_search_hi(state)
    a, fid, boundary = _fit(state, None, search_hi)
    return CatFit(a, 0.0, fid, boundary)


def classify_case(c1: float, c2: float) -> CaseLabel:
    """Label ``c1|a1> + c2|a2>`` (``a1 > a2``) by which way interference pushes the peak.

    I: outward past ``a1``; II: inward past ``a2``; III: in between.
    Equal-and-opposite or single-component weights are ``non-cat``.
    """
    if c1 == 0 and c2 == 0:
        raise InvalidArgumentError("classify_case needs a nonzero coefficient")
    if c1 == 0 or c2 == 0:
        return "non-cat"
    if c1 * c2 > 0:
        return "III"
    scale = max(abs(c1), abs(c2))
    if abs(abs(c1) - abs(c2)) < CASE_REL_TOL * scale:
        return "non-cat"
    return "I" if abs(c1) > abs(c2) else "II"


def previous_limit(alpha0: float, beta0: float) -> float:
    """Largest output amplitude reachable by heralding a single cat: ``hypot(alpha0, beta0)``."""
    if alpha0 < 0 or beta0 < 0:
        raise InvalidArgumentError("amplitudes must be nonnegative")
    return math.hypot(alpha0, beta0)
