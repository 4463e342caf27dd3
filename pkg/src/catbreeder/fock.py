"""Truncated photon-number representation used as an independent check.

Nothing here reuses the closed-form coherent-state machinery beyond reading a
state's (coefficient, amplitude) list: states are expanded in the number
basis, the coupler is exponentiated numerically, and heralding is a slice of
the two-mode amplitude matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coherent import ModeState, ZERO_NORM_SQ
from .coupler import CouplerParams, TwoModeState
from .errors import AdequacyError, InvalidArgumentError, ZeroProbabilityError

TAIL_TOL = 1e-10
TAIL_WINDOW = 5


def default_cutoff(*amplitudes) -> int:
    """``ceil(M^2 + 10 M + 20)`` for the largest amplitude ``M`` supplied."""
    big = 0.0
    for arr in amplitudes:
        big = max(big, float(np.max(np.abs(np.asarray(arr, dtype=complex)), initial=0.0)))
    return math.ceil(big * big + 10 * big + 20)


def coherent_fock(alpha: complex, cutoff: int) -> np.ndarray:
    """Number-basis amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n <= cutoff``."""
    out = np.empty(cutoff + 1, dtype=complex)
    out[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


@dataclass(frozen=True)
class FockVector:
    cutoff: int
    amps: np.ndarray
    tail_mass: float = 0.0

    @property
    def adequate(self) -> bool:
        return self.tail_mass < TAIL_TOL

    def inner(self, other: "FockVector") -> complex:
        n = min(self.cutoff, other.cutoff) + 1
        return complex(np.vdot(self.amps[:n], other.amps[:n]))


@dataclass(frozen=True)
class TwoModeFock:
    amps: np.ndarray  # shape (cutoff1 + 1, cutoff2 + 1)

    @property
    def cutoffs(self) -> tuple[int, int]:
        return self.amps.shape[0] - 1, self.amps.shape[1] - 1

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def total_number_distribution(self) -> np.ndarray:
        n1, n2 = self.amps.shape
        probs = np.abs(self.amps) ** 2
        totals = np.add.outer(np.arange(n1), np.arange(n2))
        return np.bincount(totals.ravel(), weights=probs.ravel())


def _tail(amps: np.ndarray, exact_norm_sq: float) -> float:
    kept = float(np.sum(np.abs(amps[: max(len(amps) - TAIL_WINDOW, 0)]) ** 2))
    return max(exact_norm_sq - kept, 0.0) / exact_norm_sq


def to_fock(state: ModeState, cutoff: int | None = None, strict: bool = True) -> FockVector:
    """Expand ``state`` in the number basis up to ``cutoff`` photons, renormalized."""
    if cutoff is None:
        cutoff = default_cutoff(state.alphas)
    if cutoff < 1:
        raise InvalidArgumentError("cutoff must be >= 1")
    if state.norm_sq <= ZERO_NORM_SQ:
        raise InvalidArgumentError("cannot expand the zero state")
    amps = np.zeros(cutoff + 1, dtype=complex)
    for c, a in zip(state.coeffs, state.alphas):
        amps += c * coherent_fock(a, cutoff)
    tail = _tail(amps, state.norm_sq)
    if strict and tail >= TAIL_TOL:
        raise AdequacyError(tail, cutoff)
    amps /= math.sqrt(float(np.sum(np.abs(amps) ** 2)))
    return FockVector(cutoff, amps, tail)


def to_fock_two_mode(state: TwoModeState, cutoff1: int | None = None,
                     cutoff2: int | None = None, strict: bool = True) -> TwoModeFock:
    if cutoff1 is None:
        cutoff1 = default_cutoff(state.alphas_a, state.alphas_b)
    if cutoff2 is None:
        cutoff2 = cutoff1
    amps = np.zeros((cutoff1 + 1, cutoff2 + 1), dtype=complex)
    for c, a, b in zip(state.coeffs, state.alphas_a, state.alphas_b):
        amps += c * np.outer(coherent_fock(a, cutoff1), coherent_fock(b, cutoff2))
    if strict:
        for axis, cut in ((1, cutoff1), (0, cutoff2)):
            marginal = np.sum(np.abs(amps) ** 2, axis=axis)
            tail = _tail(np.sqrt(marginal), state.norm_sq)
            if tail >= TAIL_TOL:
                raise AdequacyError(tail, cut)
    amps /= math.sqrt(float(np.sum(np.abs(amps) ** 2)))
    return TwoModeFock(amps)


@lru_cache(maxsize=64)
def _block_unitaries(cutoff1: int, cutoff2: int, theta: float) -> tuple[np.ndarray, ...]:
    """``exp(-i theta (a1^dag a2 + a2^dag a1))`` restricted to each total-number block.

    Block ``n`` spans ``|k, n-k>`` for the ``k`` allowed by both cutoffs.  The
    generator is tridiagonal there; blocks with ``n <= min(cutoffs)`` are
    complete, so their exponential is exact.
    """
    blocks = []
    for n in range(cutoff1 + cutoff2 + 1):
        ks = np.arange(max(0, n - cutoff2), min(n, cutoff1) + 1)
        off = np.sqrt((ks[:-1] + 1.0) * (n - ks[:-1]))
        gen = np.diag(off, 1) + np.diag(off, -1)
        w, v = np.linalg.eigh(gen)
        blocks.append((v * np.exp(-1j * theta * w)) @ v.conj().T)
    return tuple(blocks)


def evolve_fock(state: TwoModeFock, params: CouplerParams) -> TwoModeFock:
    c1, c2 = state.cutoffs
    out = np.zeros_like(state.amps)
    for n, u in enumerate(_block_unitaries(c1, c2, params.mu * params.z)):
        ks = np.arange(max(0, n - c2), min(n, c1) + 1)
        out[ks, n - ks] = u @ state.amps[ks, n - ks]
    return TwoModeFock(out)


def project_mode2(state: TwoModeFock, m: int) -> tuple[FockVector, float]:
    """Mode-1 vector conditioned on ``m`` photons in mode 2, and its probability."""
    if m < 0 or m > state.cutoffs[1]:
        raise InvalidArgumentError(f"m={m} outside 0..{state.cutoffs[1]}")
    column = state.amps[:, m]
    prob = float(np.sum(np.abs(column) ** 2))
    if prob < ZERO_NORM_SQ:
        raise ZeroProbabilityError(prob, m)
    return FockVector(state.cutoffs[0], column / math.sqrt(prob)), prob


def expectations(state: FockVector) -> tuple[float, float]:
    """Mean photon number and photon-number parity."""
    probs = np.abs(state.amps) ** 2
    n = np.arange(len(probs))
    return float(n @ probs), float(np.sum(probs[::2]) - np.sum(probs[1::2]))


def fock_fidelity(a: FockVector, b: FockVector) -> float:
    return abs(a.inner(b))
