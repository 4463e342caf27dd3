"""Exact algebra over finite superpositions of coherent states.

A single-mode state is stored as a list of weighted coherent components
``sum_i c_i |alpha_i>``.  Nothing is truncated: overlaps, norms and Wigner
functions are all closed-form contractions of coherent-state pairs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import ContractViolationError, InvalidArgumentError, ZeroStateError

Parity = Literal["even", "odd"]

MERGE_TOL = 1e-12
ZERO_NORM_SQ = 1e-24
NORM_TOL = 1e-10

PARITY_PHASE = {"even": 0.0, "odd": math.pi}


def unit_phase(phi: float) -> complex:
    """``exp(i*phi)``, exact at multiples of pi/2 so parity signs stay exact."""
    quarter = phi / (math.pi / 2)
    k = round(quarter)
    if abs(quarter - k) < 1e-15:
        return (1, 1j, -1, -1j)[k % 4]
    return cmath.exp(1j * phi)


def parity_sign(parity: Parity) -> int:
    if parity == "even":
        return 1
    if parity == "odd":
        return -1
    raise InvalidArgumentError(f"parity must be 'even' or 'odd', got {parity!r}")


def _check_finite(*values: complex) -> None:
    for v in values:
        if not cmath.isfinite(v):
            raise InvalidArgumentError(f"non-finite amplitude or coefficient: {v!r}")


def coherent_overlap(a: complex, b: complex) -> complex:
    """Return ``<a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)``.

    Evaluated as ``exp(-|a-b|^2/2 + i Im(conj(a) b))`` so the modulus never
    exceeds one through rounding.
    """
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    return cmath.exp(complex(-0.5 * abs(a - b) ** 2, (a.conjugate() * b).imag))


def overlap_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gram block ``G[i, j] = <a_i|b_j>`` for two amplitude arrays."""
    a = np.asarray(a, dtype=complex)[:, None]
    b = np.asarray(b, dtype=complex)[None, :]
    return np.exp(-0.5 * np.abs(a - b) ** 2 + 1j * (np.conj(a) * b).imag)


@dataclass(frozen=True)
class CoherentTerm:
    coeff: complex
    alpha: complex

    def __post_init__(self):
        _check_finite(self.coeff, self.alpha)


def _merge(coeffs: Iterable[complex], alphas: Iterable[complex]):
    out_c: list[complex] = []
    out_a: list[complex] = []
    for c, a in zip(coeffs, alphas):
        c, a = complex(c), complex(a)
        _check_finite(c, a)
        for k, existing in enumerate(out_a):
            if abs(existing - a) <= MERGE_TOL:
                out_c[k] += c
                break
        else:
            out_c.append(c)
            out_a.append(a)
    keep = [k for k, c in enumerate(out_c) if c != 0]
    return [out_c[k] for k in keep], [out_a[k] for k in keep]


def _frozen(values: Sequence[complex]) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


class ModeState:
    """Single-mode pure state ``sum_i c_i |alpha_i>`` (not necessarily normalized).

    Components whose amplitudes agree within ``MERGE_TOL`` are merged on
    construction and exactly-cancelled components are dropped, so two terms
    never share an amplitude.
    """

    __slots__ = ("coeffs", "alphas", "norm_sq")

    def __init__(self, coeffs: Iterable[complex], alphas: Iterable[complex]):
        c, a = _merge(coeffs, alphas)
        self.coeffs = _frozen(c)
        self.alphas = _frozen(a)
        if len(c):
            gram = overlap_matrix(self.alphas, self.alphas)
            value = np.conj(self.coeffs) @ gram @ self.coeffs
            self.norm_sq = max(float(value.real), 0.0)
        else:
            self.norm_sq = 0.0

    @classmethod
    def from_terms(cls, terms: Iterable[CoherentTerm]) -> "ModeState":
        terms = list(terms)
        return cls([t.coeff for t in terms], [t.alpha for t in terms])

    @classmethod
    def coherent(cls, alpha: complex) -> "ModeState":
        return cls([1.0], [alpha])

    @property
    def terms(self) -> tuple[CoherentTerm, ...]:
        return tuple(CoherentTerm(complex(c), complex(a)) for c, a in zip(self.coeffs, self.alphas))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) <= NORM_TOL

    def scaled(self, factor: complex) -> "ModeState":
        return ModeState(self.coeffs * factor, self.alphas)

    def inner(self, other: "ModeState") -> complex:
        """``<self|other>``; no normalization is applied."""
        if not len(self.coeffs) or not len(other.coeffs):
            return 0j
        gram = overlap_matrix(self.alphas, other.alphas)
        return complex(np.conj(self.coeffs) @ gram @ other.coeffs)

    def require_normalized(self, what: str = "state") -> None:
        if not self.is_normalized:
            raise ContractViolationError(f"{what} must be normalized (norm_sq={self.norm_sq!r})")

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        body = ", ".join(f"({c:.6g}, {a:.6g})" for c, a in zip(self.coeffs, self.alphas))
        return f"ModeState([{body}], norm_sq={self.norm_sq:.12g})"


def normalize(state: ModeState) -> ModeState:
    if state.norm_sq <= ZERO_NORM_SQ:
        raise ZeroStateError(f"cannot normalize: norm_sq={state.norm_sq:.3e}")
    return state.scaled(1.0 / math.sqrt(state.norm_sq))


@dataclass(frozen=True)
class CatSpec:
    """Cat ``|a> + exp(i phi)|-a>`` with ``a = alpha0 * direction``."""

    alpha0: float
    phi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.alpha0) or self.alpha0 < 0:
            raise InvalidArgumentError(f"alpha0 must be finite and >= 0, got {self.alpha0!r}")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise InvalidArgumentError(f"phi must lie in [0, 2pi), got {self.phi!r}")

    @classmethod
    def of_parity(cls, alpha0: float, parity: Parity) -> "CatSpec":
        parity_sign(parity)
        return cls(alpha0, PARITY_PHASE[parity])


def make_cat(spec: CatSpec, direction: complex = 1.0) -> ModeState:
    """Normalized cat state built from ``spec``.

    ``direction`` rotates the amplitude in phase space; ``direction=1j``
    gives the cat on the imaginary axis fed into the second waveguide.
    """
    a = spec.alpha0 * complex(direction)
    return normalize(ModeState([1.0, unit_phase(spec.phi)], [a, -a]))


def cat(alpha: complex, parity: Parity) -> ModeState:
    """Normalized even (``|a> + |-a>``) or odd (``|a> - |-a>``) cat."""
    return normalize(ModeState([1.0, parity_sign(parity)], [alpha, -alpha]))


def superpose(states: Sequence[tuple[complex, ModeState]]) -> ModeState:
    """Normalized ``sum_k w_k |psi_k>`` with coincident components merged."""
    if not states:
        raise InvalidArgumentError("superpose needs at least one state")
    coeffs: list[complex] = []
    alphas: list[complex] = []
    for weight, st in states:
        coeffs.extend(complex(weight) * st.coeffs)
        alphas.extend(st.alphas)
    if not any(c != 0 for c in coeffs):
        raise ZeroStateError("all superposition weights are zero")
    return normalize(ModeState(coeffs, alphas))
