"""Command-line front end: kernel profiles, Green's functions, dispersion, energy, validation.

Every command writes CSV (header row, comma separated, 17 significant digits)
to --out or stdout; ``validate`` writes a versioned JSON report.
Exit codes: 0 ok, 1 usage, 2 numerical failure, 3 IO.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from fracwave import kernels, wright
from fracwave.green import (
    Which,
    green1d,
    green3d_aniso,
    green3d_isotropic,
    green3d_neutral_aniso,
)
from fracwave.oracle import FieldGrid, energy_check
from fracwave.quadrature import DEFAULT_QUAD
from fracwave.symbols import FracParams, SphericalMeasure, dispersion, load_measure

__all__ = ["main", "build_parser", "REPORT_SCHEMA"]

log = logging.getLogger("fracwave")

REPORT_SCHEMA = "fracwave.validate/1"

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

FIGURE_RECIPES = """\
figure recipes (CSV only; plot with any tool):
  Z_alpha profiles (sign change at alpha=1.9, nonnegative at alpha=1):
    fracwave kernel --fn z_alpha --alpha 1.9 --grid 0:5:501
    fracwave kernel --fn z_alpha --alpha 1.0 --grid 0:5:501
  M_gamma for several gamma (maximum at z>0 for gamma=2/3):
    fracwave kernel --fn m_wright --gamma 0.6666666666666666 --grid 0:5:501
  M_{2/3} and N_{2/3} from the Airy/Bessel forms:
    fracwave kernel --fn m_wright_23 --grid 0:5:501
    fracwave kernel --fn n_wright_23 --grid 0:5:501
  G^(1) and G^(3) at gamma=2/3 (alpha=1.5 with beta=1, alpha=1.9 with beta=1.2666):
    fracwave green --dim 1 --beta 1 --alpha 1.5 --t 1 --grid 0.05:4:80
    fracwave green --dim 3 --beta 1.2666666666666666 --alpha 1.9 --t 1 --grid 0.05:4:80
  Attenuation and phase velocity:
    fracwave dispersion --beta 1.5 --alpha 1.9 --grid 100:1e6:41 --log
"""


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def parse_grid(text: str, log_spaced: bool = False) -> np.ndarray:
    """'a:b:n' -> n points from a to b (inclusive)."""
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError as exc:
        raise UsageError(f"grid must look like a:b:n, got {text!r}") from exc
    if n < 1:
        raise UsageError("grid must contain at least one point")
    if log_spaced:
        if a <= 0 or b <= 0:
            raise UsageError("a log-spaced grid needs positive end points")
        return np.logspace(math.log10(a), math.log10(b), n)
    return np.linspace(a, b, n)


def write_csv(columns: dict, out: str | None) -> None:
    buf = io.StringIO()
    data = np.column_stack([np.asarray(v, dtype=float) for v in columns.values()])
    np.savetxt(buf, data, delimiter=",", fmt="%.17g", header=",".join(columns), comments="")
    _emit(buf.getvalue(), out)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _quad(args):
    overrides = {name: getattr(args, f"quad_{name}") for name in
                 ("mellin_nodes", "mellin_panel", "sphere_nodes_phi", "sphere_nodes", "contour_nodes")
                 if getattr(args, f"quad_{name}", None) is not None}
    return dataclasses.replace(DEFAULT_QUAD, **overrides) if overrides else DEFAULT_QUAD


def _params(args) -> FracParams:
    if args.beta is None or args.alpha is None:
        raise UsageError("--beta and --alpha are required")
    return FracParams(args.beta, args.alpha, args.rho, args.mass)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

_KERNEL_FNS = {
    "x_alpha": ("alpha", kernels.x_alpha),
    "y_alpha": ("alpha", kernels.y_alpha),
    "x3_alpha": ("alpha", kernels.x3_alpha),
    "z_alpha": ("alpha", kernels.z_alpha),
    "m_wright": ("gamma", wright.m_wright),
    "n_wright": ("gamma", wright.n_wright),
    "m_wright_23": (None, wright.m_wright_23),
    "n_wright_23": (None, wright.n_wright_23),
}


def cmd_kernel(args) -> int:
    order_name, fn = _KERNEL_FNS[args.fn]
    grid = parse_grid(args.grid)
    if order_name is None:
        values = fn(grid)
    else:
        order = getattr(args, order_name)
        if order is None:
            raise UsageError(f"--{order_name} is required for {args.fn}")
        values = fn(order, grid)
    write_csv({"y" if order_name == "alpha" else "z": grid, args.fn: values}, args.out)
    return EXIT_OK


def cmd_green(args) -> int:
    params = _params(args)
    r = parse_grid(args.grid)
    quad = _quad(args)
    which = Which(args.which)
    measure = None
    if args.measure is not None:
        measure = load_measure(args.measure)
    elif args.uniform:
        measure = SphericalMeasure.uniform(1.0)
    if args.dim == 1:
        if measure is not None:
            raise UsageError("a measure applies to --dim 3 only")
        values = green1d(params, args.t, r, which, quad)
    elif measure is None:
        values = green3d_isotropic(params, args.t, r, which, quad)
    else:
        d = np.array([float(v) for v in args.direction.split(",")])
        if d.shape != (3,) or not np.linalg.norm(d) > 0:
            raise UsageError("--direction must be three numbers, not all zero")
        pts = r[:, None] * (d / np.linalg.norm(d))
        # the measure carries the elastic constant; rho still scales the symbol
        if params.beta == params.alpha:
            values = green3d_neutral_aniso(measure, params.alpha, args.t, pts, which, quad, rho=params.rho)
        else:
            values = green3d_aniso(measure, params, args.t, pts, which, quad)
    write_csv({"r" if args.dim == 3 else "x": r, which.value: values}, args.out)
    return EXIT_OK


def cmd_dispersion(args) -> int:
    params = _params(args)
    omega = parse_grid(args.grid, log_spaced=args.log)
    if np.any(omega <= 0):
        raise UsageError("omega must be positive")
    att, vel = dispersion(params, omega)
    write_csv({"omega": omega, "attenuation": att, "phase_velocity": vel}, args.out)
    hi = omega >= args.fit_from
    if np.count_nonzero(hi) >= 2 and np.all(att[hi] > 0):
        slope = float(np.polyfit(np.log(omega[hi]), np.log(att[hi]), 1)[0])
    else:
        slope = 0.0
    print(f"attenuation log-slope: {slope:.17g} (gamma = {params.gamma:.17g})", file=sys.stderr)
    return EXIT_OK


def cmd_energy(args) -> int:
    params = _params(args)
    grid = FieldGrid.empty(args.n, args.extent)
    alpha = args.symbol_alpha if args.symbol_alpha is not None else params.alpha
    mass = params.mass_m
    series, drift = energy_check(params, lambda k: -mass * np.abs(k) ** alpha, grid, args.horizon, args.steps)
    _emit(series.to_csv(), args.out)
    print(f"max relative drift: {drift:.3e}; min stored energy: {series.stored.min():.3e}", file=sys.stderr)
    return EXIT_OK


def _validation_suite(suite: str, measure: SphericalMeasure | None):
    """(name, thunk returning residual, tolerance) triples."""
    from fracwave import validation as v

    checks = []
    for a in (0.5, 1.0, 1.2, 1.5, 1.9):
        checks.append((f"normalization_X_{a}", lambda a=a: abs(v.kernel_mass(a, "X") - 1), 1e-7))
        checks.append((f"normalization_Y_{a}", lambda a=a: abs(v.kernel_mass(a, "Y") - 1), 1e-7))
    for b, a in v.PAIRS:
        checks.append((f"identity_G_{b}_{a}", lambda b=b, a=a: v.identity_residual(b, a, "G"), 1e-6))
        checks.append((f"identity_H_{b}_{a}", lambda b=b, a=a: v.identity_residual(b, a, "H"), 1e-5))
    for name, tol in (("m23_bessel_airy_vs_series", 1e-8), ("m12_gaussian", 1e-10),
                      ("e1_exponential", 1e-12), ("e2_cosine", 1e-12)):
        checks.append((f"closed_form_{name}", lambda n=name: v.closed_form_residuals()[n], tol))
    for name, tol in (("contraction", 1e-9), ("euler_q", 1e-9), ("euler_v", 1e-9),
                      ("hessian_symmetry", 1e-9), ("hessian_nsd", 1e-9)):
        checks.append((f"constitutive_{name}", lambda n=name: v.constitutive_residuals()[n], tol))
    checks.append(("dispersion_slope", lambda: abs(v.attenuation_slope(FracParams(1.5, 1.9)) / (1.5 / 1.9) - 1),
                   1e-2))
    if measure is not None:
        from fracwave.symbols import f_direction
        pts = np.random.default_rng(0).normal(size=(64, 3))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        checks.append(("measure_file_positive_symbol",
                       lambda: float(max(0.0, -np.min(f_direction(measure, 1.5, pts)))), 0.0))
    if suite == "full":
        for b, a in v.PAIRS:
            for d in (1, 3):
                checks.append((f"oracle_{d}d_{b}_{a}", lambda b=b, a=a, d=d: v.oracle_residual(b, a, "G", d), 1e-4))
        checks.append(("alpha2_branch", lambda: v.alpha2_residuals(1.5)["branch"], 1e-8))
        aniso = {}

        def aniso_get(key):
            if not aniso:
                aniso.update(v.anisotropy_residuals())
            return aniso[key]
        checks.append(("anisotropy_uniform", lambda: max(aniso_get("uniform_neutral"),
                                                         aniso_get("uniform_subordinated")), 1e-4))
        checks.append(("anisotropy_equivariance", lambda: aniso_get("equivariance"), 1e-10))
        checks.append(("anisotropy_wave_fft", v.wave_alpha2_residual, 1e-3))
        energy = {}

        def energy_get(key):
            if not energy:
                energy.update(v.energy_residuals())
            return energy[key]
        checks.append(("energy_beta2_drift", lambda: energy_get("drift_beta2_alpha2"), 1e-10))
        checks.append(("energy_beta15_drift", lambda: energy_get("drift_beta15"), 1e-3))
        checks.append(("energy_beta15_nonnegative", lambda: max(0.0, -energy_get("min_stored_beta15")), 0.0))
    return checks


def cmd_validate(args) -> int:
    from fracwave.validation import CheckResult

    measure = load_measure(args.measure) if args.measure is not None else None
    results = []
    for name, thunk, tol in _validation_suite(args.suite, measure):
        t0 = time.perf_counter()
        try:
            res = float(thunk())
        except ArithmeticError as exc:
            log.warning("%s failed: %s", name, exc)
            res = math.inf
        results.append({**CheckResult(name, res, tol).as_dict(), "seconds": time.perf_counter() - t0})
    report = {"schema": REPORT_SCHEMA, "suite": args.suite,
              "passed": all(r["passed"] for r in results), "checks": results}
    _emit(json.dumps(report, indent=2, default=float) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, orders=True):
    if orders:
        p.add_argument("--beta", type=float, help="time order, 0 < beta <= alpha")
        p.add_argument("--alpha", type=float, help="space order, alpha <= 2")
    p.add_argument("--rho", type=float, default=1.0, help="density (default 1)")
    p.add_argument("--mass", type=float, default=1.0, help="elastic constant M (default 1)")
    p.add_argument("--out", help="output path (default stdout)")


def _quad_flags(p: argparse.ArgumentParser):
    p.add_argument("--quad-mellin-nodes", type=int, dest="quad_mellin_nodes")
    p.add_argument("--quad-mellin-panel", type=float, dest="quad_mellin_panel")
    p.add_argument("--quad-sphere-nodes-phi", type=int, dest="quad_sphere_nodes_phi")
    p.add_argument("--quad-sphere-nodes", type=int, dest="quad_sphere_nodes")
    p.add_argument("--quad-contour-nodes", type=int, dest="quad_contour_nodes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracwave",
        description="Fundamental solutions of space-time fractional wave equations.",
        epilog=FIGURE_RECIPES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="kernel profiles X, Y, X3, Z, M, N",
                       epilog=FIGURE_RECIPES, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--fn", required=True, choices=sorted(_KERNEL_FNS))
    p.add_argument("--alpha", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--grid", default="0:5:101", help="a:b:n (default 0:5:101)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("green", help="G or H profiles in 1D or 3D",
                       epilog=FIGURE_RECIPES, formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(p)
    p.add_argument("--dim", type=int, choices=(1, 3), default=1)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--which", choices=("G", "H"), default="G")
    p.add_argument("--grid", default="0.05:4:80", help="radii a:b:n")
    p.add_argument("--measure", help="JSON spherical measure (3D anisotropic)")
    p.add_argument("--uniform", action="store_true", help="uniform measure through the anisotropic path")
    p.add_argument("--direction", default="1,0,0", help="direction of the sampled ray (anisotropic)")
    _quad_flags(p)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("dispersion", help="attenuation and phase velocity")
    _common(p)
    p.add_argument("--grid", default="100:1e6:41")
    p.add_argument("--log", action="store_true", help="log-spaced frequencies")
    p.add_argument("--fit-from", type=float, default=100.0, dest="fit_from",
                   help="lowest frequency in the slope fit")
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("energy", help="1D energy balance series")
    _common(p)
    p.add_argument("--symbol-alpha", type=float, dest="symbol_alpha",
                   help="exponent of the symbol if different from --alpha (e.g. beta=2, alpha=1.5)")
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--extent", type=float, default=64.0)
    p.add_argument("--horizon", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=400)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("validate", help="run the invariant suite, JSON report")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    p.add_argument("--measure", help="also check a measure file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"fracwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fracwave: io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArithmeticError as exc:
        print(f"fracwave: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
