"""Coupling-length sweeps, optimum search, figure data and oracle verification."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Literal, Sequence, TextIO

import numpy as np

from .coherent import ModeState, Parity, normalize, parity_sign
from .coupler import (
    CouplerParams,
    TwoModeState,
    _mix,
    coefficient_ratio,
    evolve,
    herald,
    herald_distribution,
    scenario_coefficients,
    scenario_input,
)
from .errors import (
    InfeasibleError,
    InvalidArgumentError,
    NoPeakError,
    ZeroProbabilityError,
    ZeroStateError,
)
from .fock import evolve_fock, fock_fidelity, project_mode2, to_fock, to_fock_two_mode
from .metrics import classify_case, fidelity, fit_cat, fit_coherent
from .phase_space import wigner_cross_section, wigner_decomposition, wigner_peak_x

log = logging.getLogger(__name__)

THREADS_ENV = "CATBREEDER_THREADS"
MIN_THRESHOLD_FIDELITY = 0.98

Objective = Literal["max-amplitude", "max-probability", "threshold"]


@dataclass(frozen=True)
class Scenario:
    parity1: Parity = "odd"
    parity2: Parity = "odd"
    alpha0: float = 1.7
    beta0: float = 0.8
    mu: float = 1.0
    m: int = 0

    def __post_init__(self):
        parity_sign(self.parity1)
        parity_sign(self.parity2)
        for name in ("alpha0", "beta0", "mu"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be a positive number, got {v!r}")
        if int(self.m) != self.m or self.m < 0:
            raise InvalidArgumentError(f"m must be a nonnegative integer, got {self.m!r}")

    def params(self, z: float) -> CouplerParams:
        return CouplerParams(self.mu, z)

    def describe(self) -> str:
        return " ".join(f"{k}={v}" for k, v in asdict(self).items())


@dataclass(frozen=True)
class SweepRow:
    z: float
    alpha1: float
    alpha2: float
    c1: float
    c2: float
    ratio: float
    alpha3: float | None
    fidelity: float | None
    probability: float
    case: str
    peak_x: float | None

    @property
    def z_over_pi(self) -> float:
        return self.z / math.pi


CSV_COLUMNS = ["z_pi"] + [f.name for f in fields(SweepRow)][1:]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def evaluate_point(scenario: Scenario, z: float) -> SweepRow:
    """Full pipeline at one coupling length: product, evolve, herald, fit, classify."""
    params = scenario.params(z)
    sc = scenario_coefficients(scenario.parity1, scenario.parity2, scenario.alpha0,
                               scenario.beta0, params, scenario.m)
    ratio = coefficient_ratio(scenario.alpha0, scenario.beta0, params)
    case = classify_case(sc.c1, sc.c2)
    base = dict(z=z, alpha1=sc.alpha1, alpha2=sc.alpha2, c1=sc.c1, c2=sc.c2,
                ratio=ratio, case=case)
    state = evolve(scenario_input(scenario.parity1, scenario.parity2,
                                  scenario.alpha0, scenario.beta0), params)
    try:
        out = herald(state, scenario.m)
    except ZeroProbabilityError:
        return SweepRow(alpha3=None, fidelity=None, probability=0.0, peak_x=None, **base)
    fit = fit_cat(out.state, sc.parity)
    if fit.at_boundary:
        log.warning("cat fit at z=%.6g hit the search boundary", z)
    try:
        half = sc.coherent_part()
        peak = wigner_peak_x(half, 0.0, sc.alpha1 + sc.alpha2 + 1.0)
    except (NoPeakError, ZeroStateError):
        peak = None
    return SweepRow(alpha3=fit.alpha3, fidelity=fit.fidelity, probability=out.probability,
                    peak_x=peak, **base)


def _threads() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got {cap!r}")
    return n


def z_grid(z_min: float, z_max: float, steps: int) -> np.ndarray:
    if not (0 <= z_min < z_max):
        raise InvalidArgumentError("need 0 <= z_min < z_max")
    if steps < 2:
        raise InvalidArgumentError("steps must be >= 2")
    return np.linspace(z_min, z_max, steps)


def run_sweep(scenario: Scenario, z_min: float, z_max: float, steps: int) -> list[SweepRow]:
    """One row per coupling length on a uniform grid (z in length units)."""
    zs = [float(z) for z in z_grid(z_min, z_max, steps)]
    threads = _threads()
    if threads == 1:
        return [evaluate_point(scenario, z) for z in zs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda z: evaluate_point(scenario, z), zs))


def write_sweep_csv(rows: Sequence[SweepRow], dest: TextIO, header: Iterable[str] = ()) -> None:
    for line in header:
        dest.write(f"# {line}\n")
    dest.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        values = [row.z_over_pi] + [getattr(row, c) for c in CSV_COLUMNS[1:]]
        dest.write(",".join(_fmt(v) for v in values) + "\n")


def find_optimum(scenario: Scenario, z_min: float, z_max: float, objective: Objective,
                 threshold: float | None = None, steps: int = 200,
                 rows: Sequence[SweepRow] | None = None) -> SweepRow:
    """Best sweep row for ``objective``.

    ``threshold`` maximizes success probability among rows whose fitted
    amplitude reaches ``threshold`` with fidelity at least 0.98.
    """
    if rows is None:
        rows = run_sweep(scenario, z_min, z_max, steps)
    fitted = [r for r in rows if r.alpha3 is not None]
    if not fitted:
        raise InfeasibleError("no coupling length in range gives a nonzero herald probability")
    best_alpha3 = max(r.alpha3 for r in fitted)
    if objective == "max-amplitude":
        return max(fitted, key=lambda r: r.alpha3)
    if objective == "max-probability":
        return max(rows, key=lambda r: r.probability)
    if objective == "threshold":
        if threshold is None:
            raise InvalidArgumentError("threshold objective needs a threshold value")
        ok = [r for r in fitted if r.alpha3 >= threshold and r.fidelity >= MIN_THRESHOLD_FIDELITY]
        if not ok:
            raise InfeasibleError(
                f"no z reaches alpha3 >= {threshold} with fidelity >= {MIN_THRESHOLD_FIDELITY}; "
                f"best achievable alpha3 = {best_alpha3:.6f}", best_alpha3)
        return max(ok, key=lambda r: r.probability)
    raise InvalidArgumentError(f"unknown objective {objective!r}")


# -- figure data ---------------------------------------------------------------

FIGURE_SCENARIOS = {
    "fig4": Scenario("odd", "odd", 1.7, 0.8),
    "fig5": Scenario("even", "even", 1.7, 0.8),
    "fig6": Scenario("even", "odd", 1.7, 0.8),
    "fig7": Scenario("odd", "even", 0.8, 1.7),
}
FIGURE_Z_PI = (0.01, 0.49, 241)  # step 0.002 pi, so 0.14 pi is a grid point

PAIR_PROFILE = dict(alpha1=1.7, alpha2=1.4, c1=0.2)
PAIR_PROFILE_C2 = (-0.4, -0.3, -0.2, -0.1, -0.05, 0.1, 0.2)
PAIR_PROFILE_X = (0.0, 4.0, 401)
COHERENT_LIKE_FIDELITY = 0.9


@dataclass(frozen=True)
class CoherentPairFit:
    c2: float
    case: str
    peak_x: float
    alpha3_coherent: float
    fidelity_coherent: float
    alpha3_cat: float
    fidelity_cat: float

    @property
    def coherent_like(self) -> bool:
        return self.fidelity_coherent >= COHERENT_LIKE_FIDELITY


def coherent_pair(c2: float, alpha1: float = 1.7, alpha2: float = 1.4, c1: float = 0.2) -> ModeState:
    return normalize(ModeState([c1, c2], [alpha1, alpha2]))


def analyze_coherent_pair(c2: float, alpha1: float = 1.7, alpha2: float = 1.4,
                          c1: float = 0.2) -> CoherentPairFit:
    """Peak position and best fits for ``N(c1|a1> + c2|a2>)`` and its even-cat analogue."""
    pair = coherent_pair(c2, alpha1, alpha2, c1)
    hi = alpha1 + alpha2 + 1.0
    peak = wigner_peak_x(pair, 0.0, hi)
    coh = fit_coherent(pair, hi)
    cats = normalize(ModeState([c1, c1, c2, c2], [alpha1, -alpha1, alpha2, -alpha2]))
    catfit = fit_cat(cats, "even", hi)
    return CoherentPairFit(c2, classify_case(c1, c2), peak, coh.alpha3, coh.fidelity,
                           catfit.alpha3, catfit.fidelity)


def _write_rows(path: Path, columns: Sequence[str], rows: Iterable[Sequence], header: Iterable[str]) -> None:
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def reproduce(figure: str, out_dir: str | Path) -> list[Path]:
    """Write the data behind one figure into ``out_dir``; returns the file paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if figure in FIGURE_SCENARIOS:
        sc = FIGURE_SCENARIOS[figure]
        lo, hi, n = FIGURE_Z_PI
        rows = run_sweep(sc, lo * math.pi, hi * math.pi, n)
        path = out_dir / f"{figure}.csv"
        with open(path, "w", newline="") as fh:
            write_sweep_csv(rows, fh, [f"catbreeder reproduce {figure}", sc.describe(),
                                       f"z_pi_min={lo} z_pi_max={hi} steps={n}"])
        return [path]
    if figure == "figA":
        a1, a2, c1 = PAIR_PROFILE["alpha1"], PAIR_PROFILE["alpha2"], PAIR_PROFILE["c1"]
        header = [f"catbreeder reproduce figA alpha1={a1} alpha2={a2} c1={c1}"]
        profile_rows = []
        fit_rows = []
        for c2 in PAIR_PROFILE_C2:
            pair = coherent_pair(c2, a1, a2, c1)
            xs, ws = wigner_cross_section(pair, 0.0, *PAIR_PROFILE_X)
            diag, inter = wigner_decomposition(pair, xs, 0.0)
            profile_rows.extend((c2, x, w, d1, d2, wi)
                                for x, w, d1, d2, wi in zip(xs, ws, diag[0], diag[1], inter))
            r = analyze_coherent_pair(c2, a1, a2, c1)
            fit_rows.append((c2, r.case, r.peak_x, r.alpha3_coherent, r.fidelity_coherent,
                             r.alpha3_cat, r.fidelity_cat, int(r.coherent_like)))
        p1, p2 = out_dir / "figA_profiles.csv", out_dir / "figA_fits.csv"
        _write_rows(p1, ["c2", "x", "w", "w1", "w2", "w_int"], profile_rows, header)
        _write_rows(p2, ["c2", "case", "peak_x", "alpha3_coherent", "fidelity_coherent",
                         "alpha3_cat", "fidelity_cat", "coherent_like"], fit_rows, header)
        return [p1, p2]
    raise InvalidArgumentError(f"unknown figure {figure!r}; choose from fig4..fig7, figA")


# -- oracle verification ---------------------------------------------------------

ORACLE_FID_TOL = 1e-8
ORACLE_PROB_TOL = 1e-8
SCENARIO_FID_TOL = 1e-10
PARITY_PAIRS = (("odd", "odd"), ("even", "even"), ("even", "odd"), ("odd", "even"))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{tag}  {self.name:<44s} residual={self.residual:.3e}{extra}"


def _oracle_point(parity1: Parity, parity2: Parity, alpha0: float, beta0: float,
                  z: float, sign: float) -> list[Check]:
    params = CouplerParams(1.0, z)
    tag = f"{parity1}/{parity2} z={z / math.pi:.4f}pi"
    product = scenario_input(parity1, parity2, alpha0, beta0)
    analytic = herald(_mix(product, params.t, sign * params.r), 0)

    fock_out = evolve_fock(to_fock_two_mode(product), params)
    vec, prob = project_mode2(fock_out, 0)
    fid = fock_fidelity(to_fock(analytic.state, vec.cutoff, strict=False), vec)
    dp = abs(prob - analytic.probability)

    sc = scenario_coefficients(parity1, parity2, alpha0, beta0, params)
    sfid = fidelity(sc.to_state(), analytic.state)
    return [
        Check(f"oracle fidelity {tag}", 1 - fid <= ORACLE_FID_TOL, 1 - fid),
        Check(f"oracle probability {tag}", dp <= ORACLE_PROB_TOL, dp),
        Check(f"closed-form branch {tag}", 1 - sfid <= SCENARIO_FID_TOL, 1 - sfid,
              f"branch {sc.branch}"),
    ]


def _convention_point(alpha0: float, beta0: float, z: float, sign: float) -> list[Check]:
    # Cat inputs are blind to r -> -r (mode-2 parity symmetry), so the coupler
    # convention is pinned with the bare coherent product |alpha0>|i beta0>.
    params = CouplerParams(1.0, z)
    t, r = params.t, params.r
    tag = f"z={z / math.pi:.4f}pi"
    product = TwoModeState([1.0], [alpha0], [1j * beta0])
    moved = _mix(product, t, sign * r)
    expected = (t * alpha0 + r * beta0, 1j * (t * beta0 - r * alpha0))
    dev = max(abs(moved.alphas_a[0] - expected[0]), abs(moved.alphas_b[0] - expected[1]))

    fock_out = evolve_fock(to_fock_two_mode(product), params).amps
    analytic = to_fock_two_mode(moved, *(s - 1 for s in fock_out.shape)).amps
    fid = abs(np.vdot(analytic, fock_out))
    return [
        Check(f"coupler amplitude map {tag}", dev <= 1e-12, dev),
        Check(f"oracle coherent product {tag}", 1 - fid <= ORACLE_FID_TOL, 1 - fid),
    ]


def verify(seed: int = 2024, samples: int = 10, tamper_sign: bool = False,
           alpha0: float = 1.7, beta0: float = 0.8) -> list[Check]:
    """Cross-check the analytic pipeline against the number-basis oracle.

    ``tamper_sign`` flips ``r -> -r`` in the analytic coupler only; it is a
    negative control and must produce failures.
    """
    sign = -1.0 if tamper_sign else 1.0
    rng = np.random.default_rng(seed)
    checks: list[Check] = []
    for p1, p2 in PARITY_PAIRS:
        for z in np.sort(rng.uniform(0.02 * math.pi, 0.48 * math.pi, samples)):
            checks.extend(_oracle_point(p1, p2, alpha0, beta0, float(z), sign))
    for z in np.linspace(0.05 * math.pi, 0.45 * math.pi, 5):
        checks.extend(_convention_point(alpha0, beta0, float(z), sign))

    # z = 0, odd/odd: the odd cat in waveguide 2 has no vacuum component
    product = scenario_input("odd", "odd", alpha0, beta0)
    try:
        herald(product, 0)
        checks.append(Check("zero-probability herald at z=0 odd/odd", False, 1.0,
                            "analytic herald unexpectedly succeeded"))
    except ZeroProbabilityError as exc:
        fock_p = float(np.sum(np.abs(to_fock_two_mode(product).amps[:, 0]) ** 2))
        res = max(exc.probability, fock_p)
        checks.append(Check("zero-probability herald at z=0 odd/odd", res < 1e-20, res,
                            "expected zero probability"))

    state = _mix(product, math.cos(0.14 * math.pi), sign * math.sin(0.14 * math.pi))
    total = float(herald_distribution(state).sum())
    checks.append(Check("herald completeness odd/odd z=0.14pi", abs(total - 1) <= 1e-10, abs(total - 1)))
    return checks
