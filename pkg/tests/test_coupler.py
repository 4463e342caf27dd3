import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import poisson

from catbreeder.coherent import ModeState, cat, normalize
from catbreeder.coupler import (
    CouplerParams,
    TwoModeState,
    coefficient_ratio,
    default_m_max,
    evolve,
    herald,
    herald_distribution,
    product_state,
    scenario_coefficients,
    scenario_input,
)
from catbreeder.errors import ContractViolationError, InvalidArgumentError, ZeroProbabilityError
from catbreeder.fock import expectations, project_mode2, to_fock, to_fock_two_mode, evolve_fock
from catbreeder.metrics import fidelity

A0, B0 = 1.7, 0.8
PAIRS = [("odd", "odd"), ("even", "even"), ("even", "odd"), ("odd", "even")]


def ray_fidelity(s1: TwoModeState, s2: TwoModeState) -> float:
    return abs(s1.inner(s2)) / math.sqrt(s1.norm_sq * s2.norm_sq)


def test_params_validation_and_matrix():
    p = CouplerParams(1.3, 0.7)
    assert p.t ** 2 + p.r ** 2 == pytest.approx(1, abs=1e-12)
    u = p.matrix
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-14)
    for bad in [dict(mu=0), dict(mu=-1), dict(z=-0.1), dict(z=float("nan"))]:
        with pytest.raises(InvalidArgumentError):
            CouplerParams(**bad)


def test_product_of_coherents():
    s = product_state(ModeState.coherent(0.3), ModeState.coherent(1j))
    assert s.terms == ((1, 0.3, 1j),)


def test_product_of_odd_cats_sign_pattern():
    s = product_state(cat(A0, "odd"), cat(1j * B0, "odd"))
    assert len(s) == 4
    signs = {(round(a.real, 9), round(b.imag, 9)): np.sign(c.real) for c, a, b in s.terms}
    assert signs == {(1.7, 0.8): 1, (1.7, -0.8): -1, (-1.7, 0.8): -1, (-1.7, -0.8): 1}
    mags = np.abs(s.coeffs)
    np.testing.assert_allclose(mags, mags[0], rtol=1e-14)
    assert s.is_normalized


def test_product_cat_vacuum():
    s = product_state(cat(A0, "even"), ModeState.coherent(0))
    assert len(s) == 2
    assert all(b == 0 for _, _, b in s.terms)


def test_product_requires_normalized():
    with pytest.raises(ContractViolationError):
        product_state(ModeState([2.0], [0]), ModeState.coherent(0))


def test_evolve_identity():
    s = scenario_input("odd", "even", A0, B0)
    out = evolve(s, CouplerParams(1, 0))
    assert out.terms == s.terms


def test_evolve_swap():
    s = product_state(ModeState.coherent(0.5), ModeState.coherent(0.2 + 0.1j))
    out = evolve(s, CouplerParams(1, math.pi / 2))
    (_, a, b), = out.terms
    assert a == pytest.approx(-1j * (0.2 + 0.1j), abs=1e-15)
    assert b == pytest.approx(-0.5j, abs=1e-15)


def test_evolve_odd_cats_amplitude_structure():
    p = CouplerParams(1, 0.14 * math.pi)
    t, r = p.t, p.r
    out = evolve(scenario_input("odd", "odd", A0, B0), p)
    mode1 = sorted(np.round(out.alphas_a.real, 12))
    expect = sorted(np.round([t * A0 + r * B0, -(t * A0 + r * B0), t * A0 - r * B0, -(t * A0 - r * B0)], 12))
    assert mode1 == expect
    np.testing.assert_allclose(out.alphas_a.imag, 0, atol=1e-15)
    np.testing.assert_allclose(out.alphas_b.real, 0, atol=1e-15)
    mode2 = sorted(np.round(out.alphas_b.imag, 12))
    expect2 = sorted(np.round([t * B0 - r * A0, -(t * B0 - r * A0), t * B0 + r * A0, -(t * B0 + r * A0)], 12))
    assert mode2 == expect2


amp = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(amp, amp, amp, amp, amp, amp), min_size=8, max_size=8),
       st.floats(0, 3), st.floats(0, 3))
def test_unitarity_and_composition(raw, z1, z2):
    s = TwoModeState([complex(a, b) for a, b, *_ in raw],
                     [complex(c, d) for _, _, c, d, _, _ in raw],
                     [complex(e, f) for *_, e, f in raw])
    if s.norm_sq < 1e-6:
        return
    s = s.normalized()
    one = evolve(s, CouplerParams(1, z1))
    assert one.norm_sq == pytest.approx(1, abs=1e-10)
    two = evolve(one.normalized(), CouplerParams(1, z2))
    direct = evolve(s, CouplerParams(1, z1 + z2))
    assert ray_fidelity(two, direct) >= 1 - 1e-10


def test_herald_zero_length_odd():
    s = evolve(scenario_input("odd", "odd", A0, B0), CouplerParams(1, 0))
    with pytest.raises(ZeroProbabilityError) as info:
        herald(s, 0)
    assert info.value.probability < 1e-24


def test_herald_zero_length_even():
    s = evolve(scenario_input("even", "even", A0, B0), CouplerParams(1, 0))
    out = herald(s, 0)
    assert fidelity(out.state, cat(A0, "even")) == pytest.approx(1, abs=1e-12)
    vac = ModeState.coherent(0)
    assert out.probability == pytest.approx(abs(vac.inner(cat(1j * B0, "even"))) ** 2, abs=1e-14)


def test_herald_reference_probability():
    s = evolve(scenario_input("odd", "odd", A0, B0), CouplerParams(1, 0.14 * math.pi))
    out = herald(s, 0)
    assert out.probability == pytest.approx(0.395, abs=5e-4)
    assert out.state.is_normalized


def test_herald_rejects_bad_m():
    s = product_state(ModeState.coherent(0), ModeState.coherent(1))
    for m in (-1, 1.5, True):
        with pytest.raises(InvalidArgumentError):
            herald(s, m)


def test_distribution_vacuum():
    s = product_state(cat(1.0, "odd"), ModeState.coherent(0))
    p = herald_distribution(s, 10)
    assert p[0] == pytest.approx(1, abs=1e-14)
    np.testing.assert_allclose(p[1:], 0, atol=1e-300)


def test_distribution_poisson():
    beta = 1.1 - 0.4j
    s = product_state(cat(0.9, "even"), ModeState.coherent(beta))
    p = herald_distribution(s, 30)
    np.testing.assert_allclose(p, poisson.pmf(np.arange(31), abs(beta) ** 2), atol=1e-14)


def test_distribution_reference_completeness():
    s = evolve(scenario_input("odd", "odd", A0, B0), CouplerParams(1, 0.14 * math.pi))
    p = herald_distribution(s)
    assert len(p) == default_m_max(s) + 1
    assert p[0] == pytest.approx(0.395, abs=5e-4)
    assert p.sum() == pytest.approx(1, abs=1e-10)
    # number-basis oracle on the same state
    fock = evolve_fock(to_fock_two_mode(scenario_input("odd", "odd", A0, B0)), CouplerParams(1, 0.14 * math.pi))
    for m in range(6):
        assert project_mode2(fock, m)[1] == pytest.approx(p[m], abs=1e-9)


@pytest.mark.parametrize("parity1,parity2", PAIRS)
def test_zero_photon_weights_are_gaussians(parity1, parity2):
    rng = np.random.default_rng(5)
    for z in rng.uniform(0.02, 1.5, 5):
        p = CouplerParams(1, z)
        t, r = p.t, p.r
        evolved = evolve(scenario_input(parity1, parity2, A0, B0), p)
        out = herald(evolved, 0).state
        ratios = []
        for c, a, b in evolved.terms:
            x = abs(b.imag)
            assert min(abs(x - abs(t * B0 - r * A0)), abs(x - abs(t * B0 + r * A0))) < 1e-12
            k = int(np.argmin(np.abs(out.alphas - a)))
            ratios.append(out.coeffs[k] / (c * math.exp(-0.5 * x * x)))
        # one common factor: normalization times a global phase
        np.testing.assert_allclose(ratios, ratios[0], atol=1e-12)


@pytest.mark.parametrize("parity1,parity2", PAIRS)
@pytest.mark.parametrize("m", [0, 1, 2])
def test_scenario_equivalence(parity1, parity2, m):
    rng = np.random.default_rng(PAIRS.index((parity1, parity2)) * 10 + m)
    for z in rng.uniform(0.01, math.pi / 2 - 0.01, 20):
        p = CouplerParams(1, z)
        sc = scenario_coefficients(parity1, parity2, A0, B0, p, m)
        try:
            out = herald(evolve(scenario_input(parity1, parity2, A0, B0), p), m)
        except ZeroProbabilityError:
            continue
        assert fidelity(sc.to_state(), out.state) >= 1 - 1e-10
        assert sc.alpha1 >= 0 and sc.alpha2 >= 0


def test_scenario_equivalence_negative_r_branch():
    for z in (3.5, 4.2, 5.0, 6.0):
        p = CouplerParams(1, z)
        sc = scenario_coefficients("even", "odd", A0, B0, p)
        assert sc.branch == "r<0"
        out = herald(evolve(scenario_input("even", "odd", A0, B0), p), 0)
        assert fidelity(sc.to_state(), out.state) >= 1 - 1e-10


def test_scenario_examples():
    p = CouplerParams(1, 0.14 * math.pi)
    odd = scenario_coefficients("odd", "odd", A0, B0, p)
    assert odd.c1 * odd.c2 < 0 and abs(odd.c1) > abs(odd.c2) and odd.parity == "even"
    even = scenario_coefficients("even", "even", A0, B0, p)
    assert even.c1 * even.c2 > 0 and even.parity == "even"
    mixed = scenario_coefficients("even", "odd", A0, B0, p)
    assert mixed.parity == "odd"
    t, r = p.t, p.r
    assert mixed.alpha1 == pytest.approx(t * A0 + r * B0, abs=1e-14)
    assert mixed.alpha2 == pytest.approx(abs(t * A0 - r * B0), abs=1e-14)


def test_scenario_degenerate_branch():
    z = math.atan2(A0, B0)  # t a0 = r b0
    sc = scenario_coefficients("even", "even", A0, B0, CouplerParams(1, z))
    assert sc.degenerate
    assert sc.alpha2 == pytest.approx(0, abs=1e-12)
    out = herald(evolve(scenario_input("even", "even", A0, B0), CouplerParams(1, z)), 0)
    assert fidelity(sc.to_state(), out.state) >= 1 - 1e-10


def test_scenario_rejects_nonpositive():
    with pytest.raises(InvalidArgumentError):
        scenario_coefficients("odd", "odd", 0, 0.8, CouplerParams(1, 0.3))


def test_ratio_values():
    assert coefficient_ratio(A0, B0, CouplerParams(1, 0)) == 1
    # exp(1.36), mpmath
    assert coefficient_ratio(A0, B0, CouplerParams(1, math.pi / 4)) == pytest.approx(3.8961933017952146, rel=1e-14)


def test_ratio_matches_coefficients():
    rng = np.random.default_rng(9)
    for z in rng.uniform(0.01, math.pi / 2 - 0.01, 20):
        p = CouplerParams(1, z)
        sc = scenario_coefficients("odd", "odd", A0, B0, p)
        assert abs(sc.c1 / sc.c2) == pytest.approx(coefficient_ratio(A0, B0, p), rel=1e-12)


@pytest.mark.parametrize("z", [0.2, 0.5, 1.1])
def test_photon_number_conservation(z):
    alpha, beta = 1.2, 0.7 - 0.3j
    s = product_state(ModeState.coherent(alpha), cat(beta, "odd"))
    nbar = abs(alpha) ** 2 + expectations(to_fock(cat(beta, "odd")))[0]
    out = evolve(s, CouplerParams(1, z))
    probs = herald_distribution(out)
    total = 0.0
    for m, pm in enumerate(probs):
        if pm < 1e-16:
            continue
        n1 = expectations(to_fock(herald(out, m).state))[0]
        total += (m + n1) * pm
    assert total == pytest.approx(nbar, abs=1e-8)
