"""Breeding large Schrödinger cat states by superposing two smaller cats.

Two cats enter a pair of coupled waveguides; detecting a fixed photon number
in the second guide leaves a superposition of two cats in the first whose
interference can push the effective amplitude beyond either input.
"""

from .coherent import (
    CatSpec,
    CoherentTerm,
    ModeState,
    cat,
    coherent_overlap,
    make_cat,
    normalize,
    superpose,
)
from .coupler import (
    CouplerParams,
    HeraldOutcome,
    ScenarioCoefficients,
    TwoModeState,
    coefficient_ratio,
    evolve,
    herald,
    herald_distribution,
    product_state,
    scenario_coefficients,
    scenario_input,
)
from .metrics import CatFit, classify_case, fidelity, fit_cat, fit_coherent, previous_limit
from .phase_space import (
    GridSpec,
    PhasePoint,
    WignerGrid,
    wigner_cross_section,
    wigner_grid,
    wigner_peak_x,
    wigner_point,
)
from .sweep import Scenario, SweepRow, evaluate_point, find_optimum, reproduce, run_sweep, verify

__version__ = "0.1.0"
