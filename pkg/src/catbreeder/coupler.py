"""Two-mode coupled-waveguide evolution and photon-number-resolved heralding.

Two-mode states are finite sums of coherent products
``sum_k c_k |a_k> (x) |b_k>``.  The coupler acts on each product through the
transmission matrix ``U = [[t, -i r], [-i r, t]]`` with ``t = cos(mu z)`` and
``r = sin(mu z)``; with a cat on the imaginary axis in waveguide 2 every
output amplitude in waveguide 1 is real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .coherent import (
    MERGE_TOL,
    NORM_TOL,
    ZERO_NORM_SQ,
    ModeState,
    Parity,
    _check_finite,
    _frozen,
    cat,
    normalize,
    overlap_matrix,
    parity_sign,
    unit_phase,
    PARITY_PHASE,
)
from .errors import (
    ContractViolationError,
    InvalidArgumentError,
    ZeroProbabilityError,
    ZeroStateError,
)


@dataclass(frozen=True)
class CouplerParams:
    mu: float = 1.0
    z: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise InvalidArgumentError(f"coupling strength mu must be > 0, got {self.mu!r}")
        if not (math.isfinite(self.z) and self.z >= 0):
            raise InvalidArgumentError(f"coupling length z must be >= 0, got {self.z!r}")

    @property
    def t(self) -> float:
        return math.cos(self.mu * self.z)

    @property
    def r(self) -> float:
        return math.sin(self.mu * self.z)

    @property
    def matrix(self) -> np.ndarray:
        t, r = self.t, self.r
        return np.array([[t, -1j * r], [-1j * r, t]])


class TwoModeState:
    """``sum_k c_k |a_k>|b_k>`` with coincident amplitude pairs merged."""

    __slots__ = ("coeffs", "alphas_a", "alphas_b", "norm_sq")

    def __init__(self, coeffs: Iterable[complex], alphas_a: Iterable[complex],
                 alphas_b: Iterable[complex]):
        cs: list[complex] = []
        aa: list[complex] = []
        bb: list[complex] = []
        for c, a, b in zip(coeffs, alphas_a, alphas_b):
            c, a, b = complex(c), complex(a), complex(b)
            _check_finite(c, a, b)
            for k in range(len(cs)):
                if abs(aa[k] - a) <= MERGE_TOL and abs(bb[k] - b) <= MERGE_TOL:
                    cs[k] += c
                    break
            else:
                cs.append(c)
                aa.append(a)
                bb.append(b)
        keep = [k for k, c in enumerate(cs) if c != 0]
        self.coeffs = _frozen([cs[k] for k in keep])
        self.alphas_a = _frozen([aa[k] for k in keep])
        self.alphas_b = _frozen([bb[k] for k in keep])
        if keep:
            gram = overlap_matrix(self.alphas_a, self.alphas_a) * overlap_matrix(self.alphas_b, self.alphas_b)
            self.norm_sq = max(float((np.conj(self.coeffs) @ gram @ self.coeffs).real), 0.0)
        else:
            self.norm_sq = 0.0

    @property
    def terms(self) -> tuple[tuple[complex, complex, complex], ...]:
        return tuple((complex(c), complex(a), complex(b))
                     for c, a, b in zip(self.coeffs, self.alphas_a, self.alphas_b))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) <= NORM_TOL

    def require_normalized(self) -> None:
        if not self.is_normalized:
            raise ContractViolationError(f"two-mode state must be normalized (norm_sq={self.norm_sq!r})")

    def normalized(self) -> "TwoModeState":
        if self.norm_sq <= ZERO_NORM_SQ:
            raise ZeroStateError(f"cannot normalize two-mode state: norm_sq={self.norm_sq:.3e}")
        s = 1.0 / math.sqrt(self.norm_sq)
        return TwoModeState(self.coeffs * s, self.alphas_a, self.alphas_b)

    def inner(self, other: "TwoModeState") -> complex:
        gram = (overlap_matrix(self.alphas_a, other.alphas_a)
                * overlap_matrix(self.alphas_b, other.alphas_b))
        return complex(np.conj(self.coeffs) @ gram @ other.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        body = ", ".join(f"({c:.6g}, {a:.6g}, {b:.6g})" for c, a, b in self.terms)
        return f"TwoModeState([{body}], norm_sq={self.norm_sq:.12g})"


def product_state(a: ModeState, b: ModeState) -> TwoModeState:
    a.require_normalized("mode-1 input")
    b.require_normalized("mode-2 input")
    coeffs = np.outer(a.coeffs, b.coeffs).ravel()
    aa = np.repeat(a.alphas, len(b.alphas))
    bb = np.tile(b.alphas, len(a.alphas))
    return TwoModeState(coeffs, aa, bb).normalized()


def _mix(state: TwoModeState, t: float, r: float) -> TwoModeState:
    a, b = state.alphas_a, state.alphas_b
    return TwoModeState(state.coeffs, t * a - 1j * r * b, -1j * r * a + t * b)


def evolve(state: TwoModeState, params: CouplerParams) -> TwoModeState:
    """Propagate through a coupler of length ``params.z``.

    Each product ``|a>|b>`` maps to ``|t a - i r b>|-i r a + t b>``; the
    coefficients are untouched, so the norm is preserved exactly up to the
    rounding in the amplitudes.
    """
    state.require_normalized()
    return _mix(state, params.t, params.r)


def fock_amplitude(beta, m: int):
    """``<m|beta> = exp(-|beta|^2/2) beta^m / sqrt(m!)`` (vectorized over beta)."""
    beta = np.asarray(beta, dtype=complex)
    if m == 0:
        return np.exp(-0.5 * np.abs(beta) ** 2)
    mag = np.abs(beta)
    with np.errstate(divide="ignore"):
        log_mag = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)), -np.inf)
    amp = np.exp(-0.5 * mag ** 2 + m * log_mag - 0.5 * math.lgamma(m + 1))
    return amp * np.exp(1j * m * np.angle(beta))


@dataclass(frozen=True)
class HeraldOutcome:
    m: int
    state: ModeState
    probability: float


def _check_m(m: int) -> None:
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise InvalidArgumentError(f"photon count must be a nonnegative integer, got {m!r}")


def herald(state: TwoModeState, m: int) -> HeraldOutcome:
    """Condition waveguide 1 on detecting ``m`` photons in waveguide 2.

    The projected mode-1 state has coefficients ``c_k <m|b_k>``; its squared
    norm is the success probability.  Global phases (such as ``i**m``) are
    discarded because only the ray matters.
    """
    _check_m(m)
    state.require_normalized()
    projected = ModeState(state.coeffs * fock_amplitude(state.alphas_b, int(m)), state.alphas_a)
    prob = projected.norm_sq
    if prob < ZERO_NORM_SQ:
        raise ZeroProbabilityError(prob, int(m))
    return HeraldOutcome(int(m), normalize(projected), min(prob, 1.0))


def default_m_max(state: TwoModeState) -> int:
    b = float(np.max(np.abs(state.alphas_b), initial=0.0))
    return math.ceil(b * b + 10 * b + 20)


def herald_distribution(state: TwoModeState, m_max: int | None = None) -> np.ndarray:
    """Probabilities ``P(0..m_max)`` of every mode-2 photon count."""
    state.require_normalized()
    if m_max is None:
        m_max = default_m_max(state)
    _check_m(m_max)
    gram = overlap_matrix(state.alphas_a, state.alphas_a)
    probs = np.empty(m_max + 1)
    for m in range(m_max + 1):
        v = state.coeffs * fock_amplitude(state.alphas_b, m)
        probs[m] = max(float((np.conj(v) @ gram @ v).real), 0.0)
    return probs


def scenario_input(parity1: Parity, parity2: Parity, alpha0: float, beta0: float) -> TwoModeState:
    """Cat of amplitude ``alpha0`` in waveguide 1 times a cat of ``i beta0`` in waveguide 2."""
    return product_state(cat(alpha0, parity1), cat(1j * beta0, parity2))


@dataclass(frozen=True)
class ScenarioCoefficients:
    """Heralded output written as ``c1 (|a1> +- |-a1>) + c2 (|a2> +- |-a2>)``.

    The cats inside the brackets are unnormalized, matching the closed-form
    output; ``parity`` selects the sign.  ``degenerate`` marks the coupling
    lengths where ``t alpha0 +- r beta0`` vanishes.
    """

    c1: float
    c2: float
    alpha1: float
    alpha2: float
    parity: Parity
    degenerate: bool = False
    branch: str = field(default="r>=0")

    def to_state(self) -> ModeState:
        s = parity_sign(self.parity)
        return normalize(ModeState(
            [self.c1, s * self.c1, self.c2, s * self.c2],
            [self.alpha1, -self.alpha1, self.alpha2, -self.alpha2],
        ))

    def coherent_part(self) -> ModeState:
        """Normalized ``c1|a1> + c2|a2>``, the positive-axis half of the output."""
        return normalize(ModeState([self.c1, self.c2], [self.alpha1, self.alpha2]))


def _signum(x: float) -> float:
    if abs(x) <= MERGE_TOL:
        return 0.0
    return math.copysign(1.0, x)


def scenario_coefficients(parity1: Parity, parity2: Parity, alpha0: float, beta0: float,
                          params: CouplerParams, m: int = 0) -> ScenarioCoefficients:
    """Closed-form heralded output for cats ``|alpha0>``, ``|i beta0>`` of given parities.

    With ``A = t a0 + r b0``, ``B = t a0 - r b0``, ``u = t b0 - r a0`` and
    ``v = t b0 + r a0`` the heralded state is

        g(u) (|A> + s|-A>) + sigma g(v) (|B> + s|-B>),

    ``g(x) = exp(-x^2/2) x^m / sqrt(m!)``, ``s = (-1)^m e^{i(phi1+phi2)}`` and
    ``sigma = (-1)^m e^{i phi2}``.  For odd output cats a negative amplitude
    flips the bracket's sign (the signum factors).  When ``r < 0`` the labels
    are swapped so that index 1 still carries the larger amplitude.
    """
    if not (alpha0 > 0 and beta0 > 0):
        raise InvalidArgumentError("alpha0 and beta0 must be positive")
    _check_m(m)
    phi1, phi2 = PARITY_PHASE[parity1], PARITY_PHASE[parity2]
    parity_sign(parity1), parity_sign(parity2)
    sign_m = -1 if m % 2 else 1
    s = sign_m * unit_phase((phi1 + phi2) % (2 * math.pi)).real
    sigma = sign_m * unit_phase(phi2).real
    out_parity: Parity = "even" if s > 0 else "odd"

    t, r = params.t, params.r
    A, B = t * alpha0 + r * beta0, t * alpha0 - r * beta0
    u, v = t * beta0 - r * alpha0, t * beta0 + r * alpha0

    def g(x: float) -> float:
        return math.exp(-0.5 * x * x) * x ** m / math.sqrt(math.factorial(m))

    def flip(x: float) -> float:
        return 1.0 if out_parity == "even" else _signum(x)

    degenerate = abs(A) <= MERGE_TOL or abs(B) <= MERGE_TOL
    if r >= 0:
        c1, c2 = g(u) * flip(A), sigma * g(v) * flip(B)
        a1, a2, branch = abs(A), abs(B), "r>=0"
    else:
        c1, c2 = g(v) * flip(B), sigma * g(u) * flip(A)
        a1, a2, branch = abs(B), abs(A), "r<0"
    if c1 == 0 and c2 == 0:
        raise ZeroStateError("both superposition coefficients vanish")
    return ScenarioCoefficients(c1, c2, a1, a2, out_parity, degenerate, branch)


def coefficient_ratio(alpha0: float, beta0: float, params: CouplerParams) -> float:
    """``|c1/c2| = exp(2 t r alpha0 beta0)`` for zero-photon heralding."""
    return math.exp(2 * params.t * params.r * alpha0 * beta0)
