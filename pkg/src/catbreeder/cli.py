"""Command-line front end: ``catbreeder {breed,sweep,wigner,reproduce,optimize,verify}``.

Coupling lengths are given in units of pi (``--z 0.14`` means 0.14*pi); append
``rad`` for a raw value (``--z 0.44rad``).  Options can also come from a flat
``key = value`` file passed with ``--config``; command-line flags win.

Exit codes: 0 success, 1 runtime or I/O error, 2 usage error, 3 failed verification.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import fields
from pathlib import Path

from . import sweep as sw
from .coherent import ModeState, cat, normalize
from .coupler import evolve, herald, scenario_input
from .errors import CatBreederError, InfeasibleError, InvalidArgumentError
from .phase_space import GridSpec, wigner_grid

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3

SCENARIO_DEFAULTS = dict(parity1="odd", parity2="odd", alpha0=1.7, beta0=0.8, mu=1.0, m=0)


class UsageError(Exception):
    pass


def parse_z(text: str) -> float:
    """Coupling length from ``'0.14'`` / ``'0.14pi'`` (units of pi) or ``'0.44rad'``."""
    s = str(text).strip().lower()
    try:
        if s.endswith("rad"):
            return float(s[:-3])
        if s.endswith("pi"):
            s = s[:-2]
        return float(s) * math.pi
    except ValueError:
        raise UsageError(f"cannot parse coupling length {text!r}") from None


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment, keys may use '-' or '_'."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _add_scenario(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scenario")
    g.add_argument("--parity1", choices=["even", "odd"])
    g.add_argument("--parity2", choices=["even", "odd"])
    g.add_argument("--alpha0", type=float, help="cat amplitude in waveguide 1")
    g.add_argument("--beta0", type=float, help="cat amplitude (times i) in waveguide 2")
    g.add_argument("--mu", type=float, help="coupling strength (default 1)")
    g.add_argument("--m", type=int, help="heralded photon count (default 0)")


def _add_range(p: argparse.ArgumentParser) -> None:
    p.add_argument("--z-min", dest="z_min", help="sweep start, units of pi (default 0.01)")
    p.add_argument("--z-max", dest="z_max", help="sweep end, units of pi (default 0.49)")
    p.add_argument("--steps", type=int, help="number of sweep points (default 200)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catbreeder", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key = value file with default options")
        p.add_argument("--out", help="output path (stdout when omitted)")
        return p

    p = command("breed", "evaluate one coupling length and print the result")
    _add_scenario(p)
    p.add_argument("--z", help="coupling length, units of pi (default 0.14)")

    p = command("sweep", "sweep the coupling length and write CSV")
    _add_scenario(p)
    _add_range(p)

    p = command("wigner", "write a Wigner-function grid as CSV")
    _add_scenario(p)
    p.add_argument("--z", help="heralded state at this coupling length (units of pi)")
    p.add_argument("--cat", type=float, help="ideal cat of this amplitude instead of a heralded state")
    p.add_argument("--cat-parity", choices=["even", "odd"], default="even")
    p.add_argument("--term", action="append", metavar="C:ALPHA",
                   help="coherent component; repeat for a superposition, e.g. --term 0.2:1.7")
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--p-min", type=float)
    p.add_argument("--p-max", type=float)
    p.add_argument("--count", type=int, default=161, help="points per axis")

    p = command("reproduce", "write the data underlying a figure")
    p.add_argument("figure", choices=["fig4", "fig5", "fig6", "fig7", "figA"])

    p = command("optimize", "pick the best coupling length in a range")
    _add_scenario(p)
    _add_range(p)
    p.add_argument("--objective", choices=["max-amplitude", "max-probability", "threshold"])
    p.add_argument("--threshold", type=float, help="amplitude target for --objective threshold")

    p = command("verify", "cross-check against the number-basis oracle")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--samples", type=int, default=10, help="random z values per parity pair")
    p.add_argument("--tamper-sign", action="store_true",
                   help="negative control: flip r -> -r in the analytic coupler")
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if not getattr(args, "config", None):
        return args
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    for key, value in cfg.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _scenario(args: argparse.Namespace) -> sw.Scenario:
    kw = {}
    for f in fields(sw.Scenario):
        v = getattr(args, f.name, None)
        if v is None:
            v = SCENARIO_DEFAULTS[f.name]
        try:
            kw[f.name] = type(SCENARIO_DEFAULTS[f.name])(v)
        except ValueError:
            raise UsageError(f"bad value for {f.name}: {v!r}") from None
    try:
        return sw.Scenario(**kw)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None


def _z_range(args: argparse.Namespace) -> tuple[float, float, int]:
    lo = parse_z(args.z_min if args.z_min is not None else "0.01")
    hi = parse_z(args.z_max if args.z_max is not None else "0.49")
    steps = int(args.steps) if args.steps is not None else 200
    if not (0 <= lo < hi) or steps < 2:
        raise UsageError("need 0 <= z-min < z-max and steps >= 2")
    return lo, hi, steps


def _open_out(args: argparse.Namespace):
    if args.out:
        return open(args.out, "w", newline="")
    return sys.stdout


def _print_row(row: sw.SweepRow, out) -> None:
    out.write(f"z_pi: {row.z_over_pi:.17g}\n")
    for f in fields(row):
        v = getattr(row, f.name)
        out.write(f"{f.name}: {'' if v is None else (f'{v:.17g}' if isinstance(v, float) else v)}\n")


def _cmd_breed(args) -> int:
    sc = _scenario(args)
    z = parse_z(args.z if args.z is not None else "0.14")
    row = sw.evaluate_point(sc, z)
    out = _open_out(args)
    try:
        _print_row(row, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_sweep(args) -> int:
    sc = _scenario(args)
    lo, hi, steps = _z_range(args)
    rows = sw.run_sweep(sc, lo, hi, steps)
    out = _open_out(args)
    try:
        sw.write_sweep_csv(rows, out, ["catbreeder sweep", sc.describe(),
                                       f"z_pi_min={lo / math.pi:.17g} z_pi_max={hi / math.pi:.17g} steps={steps}"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _parse_term(text: str) -> tuple[complex, complex]:
    try:
        c, a = text.split(":")
        return complex(c.replace(" ", "")), complex(a.replace(" ", ""))
    except ValueError:
        raise UsageError(f"--term expects C:ALPHA, got {text!r}") from None


def _cmd_wigner(args) -> int:
    if args.term:
        terms = [_parse_term(t) for t in args.term]
        state = normalize(ModeState([c for c, _ in terms], [a for _, a in terms]))
    elif args.cat is not None:
        if args.cat < 0:
            raise UsageError("--cat amplitude must be >= 0")
        state = cat(args.cat, args.cat_parity)
    else:
        sc = _scenario(args)
        z = parse_z(args.z if args.z is not None else "0.14")
        product = scenario_input(sc.parity1, sc.parity2, sc.alpha0, sc.beta0)
        state = herald(evolve(product, sc.params(z)), sc.m).state
    auto = GridSpec.around(state, args.count)
    try:
        spec = GridSpec(
            args.x_min if args.x_min is not None else auto.x_min,
            args.x_max if args.x_max is not None else auto.x_max, args.count,
            args.p_min if args.p_min is not None else auto.p_min,
            args.p_max if args.p_max is not None else auto.p_max, args.count,
        )
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    grid = wigner_grid(state, spec)
    out = _open_out(args)
    try:
        grid.write_csv(out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    for path in sw.reproduce(args.figure, args.out or "."):
        print(path)
    return EXIT_OK


def _cmd_optimize(args) -> int:
    sc = _scenario(args)
    lo, hi, steps = _z_range(args)
    objective = args.objective or "max-amplitude"
    threshold = float(args.threshold) if args.threshold is not None else None
    if objective == "threshold" and threshold is None:
        raise UsageError("--objective threshold requires --threshold")
    try:
        row = sw.find_optimum(sc, lo, hi, objective, threshold, steps)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    out = _open_out(args)
    try:
        out.write(f"objective: {objective}\n")
        _print_row(row, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_verify(args) -> int:
    checks = sw.verify(seed=int(args.seed), samples=int(args.samples), tamper_sign=args.tamper_sign)
    out = _open_out(args)
    try:
        for c in checks:
            out.write(c.line() + "\n")
        failed = sum(not c.passed for c in checks)
        out.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "breed": _cmd_breed,
    "sweep": _cmd_sweep,
    "wigner": _cmd_wigner,
    "reproduce": _cmd_reproduce,
    "optimize": _cmd_optimize,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (CatBreederError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
