"""Command-line front end: curve tables as CSV and the verification suites.

Subcommands: ``fig1``, ``curves``, ``psi-compare``, ``verify``.  Defaults
can be overridden through ``SQZ_DEFAULT_CUTOFF`` and ``SQZ_SEED``; explicit
flags win over the environment.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import entanglement as ent
from .fock import chi_from_tau, tau_from_chi
from .verify import SUITES, run_suite

DEFAULT_CHI = (1.0, 50.0)
DEFAULT_POINTS = 200
DEFAULT_SEED = 7
DEFAULT_SAMPLES = 200


class ConfigError(ValueError):
    """Invalid flags, grid or environment; maps to exit code 2."""


def fmt(x: float) -> str:
    """12 significant digits, scientific below 1e-4, locale-independent."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return format(x, ".12g")


def env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name}={raw!r} is not an integer") from None


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

@dataclass
class CurveTable:
    points: list
    chi_min: float
    chi_max: float
    count: int
    spacing: str

    def header(self) -> list[str]:
        return [f"# squeezent {__version__} fig1: deltaS = S(chi) - ln chi",
                f"# grid chi=[{fmt(self.chi_min)}, {fmt(self.chi_max)}] points={self.count} "
                f"spacing={self.spacing}"]

    def to_csv(self) -> str:
        out = io.StringIO()
        for line in self.header():
            out.write(line + "\n")
        out.write("chi,tau,S,E,lnchi,deltaS\n")
        for p in self.points:
            out.write(",".join(fmt(v) for v in (p.chi, p.tau, p.S, p.E, p.lnchi, p.deltaS)) + "\n")
        return out.getvalue()


def chi_grid(chi_min: float, chi_max: float, points: int, spacing: str) -> np.ndarray:
    if not (1 <= chi_min < chi_max) or not math.isfinite(chi_max):
        raise ConfigError(f"need 1 <= chi-min < chi-max, got [{chi_min}, {chi_max}]")
    if points < 2:
        raise ConfigError(f"need at least 2 points, got {points}")
    if spacing == "linear":
        grid = np.linspace(chi_min, chi_max, points)
    elif spacing == "log":
        grid = np.geomspace(chi_min, chi_max, points)
    else:
        raise ConfigError(f"unknown spacing {spacing!r}")
    grid[0], grid[-1] = chi_min, chi_max
    if np.any(np.diff(grid) <= 0):
        raise ConfigError("grid is not strictly increasing")
    return grid


def fig1_table(chi_min=DEFAULT_CHI[0], chi_max=DEFAULT_CHI[1], points=DEFAULT_POINTS,
               spacing="linear") -> CurveTable:
    grid = chi_grid(chi_min, chi_max, points, spacing)
    return CurveTable([ent.curve_chi(float(c)) for c in grid], chi_min, chi_max, points, spacing)


def curves_csv(taus=None, chis=None) -> str:
    """Rows carry both parametrizations: ``tau, chi, S(tau), E(tau), S(chi), E(chi)``."""
    rows = []
    for tau in taus or []:
        if not tau > 0:
            raise ConfigError(f"tau must be > 0, got {tau}")
        rows.append((tau, chi_from_tau(tau)))
    for chi in chis or []:
        if not chi >= 1:
            raise ConfigError(f"chi must be >= 1, got {chi}")
        rows.append((tau_from_chi(chi), chi))
    out = io.StringIO()
    out.write(f"# squeezent {__version__} curves\n")
    out.write("tau,chi,S_tau,E_tau,S_chi,E_chi\n")
    for tau, chi in rows:
        if math.isinf(tau):
            s_tau = e_tau = 0.0
        else:
            s_tau, e_tau = ent.entropy_closed_form(tau), ent.energy_closed_form(tau)
        pt = ent.curve_chi(chi)
        out.write(",".join(fmt(v) for v in (tau, chi, s_tau, e_tau, pt.S, pt.E)) + "\n")
    return out.getvalue()


def psi_compare_csv(n_max: int) -> str:
    if n_max < 2:
        raise ConfigError(f"N-max must be >= 2, got {n_max}")
    out = io.StringIO()
    out.write(f"# squeezent {__version__} psi-compare: squeezed vacuum vs |Psi_N> at equal energy\n")
    out.write("N,E_psi,S_psi,S_chi,deltaS\n")
    for n in range(2, n_max + 1):
        e, s = ent.psi_N_stats(n)
        s_chi = ent.entropy_chi(n)
        out.write(",".join([str(n)] + [fmt(v) for v in (e, s, s_chi, s_chi - s)]) + "\n")
    return out.getvalue()


def write_output(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}") from None


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezent",
                                     description="Two-mode squeezing entanglement tables and checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def grid_flags(p):
        p.add_argument("--chi-min", type=float, default=DEFAULT_CHI[0])
        p.add_argument("--chi-max", type=float, default=DEFAULT_CHI[1])
        p.add_argument("--points", type=int, default=DEFAULT_POINTS)
        p.add_argument("--spacing", choices=("linear", "log"), default="linear")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p = sub.add_parser("fig1", help="deltaS(chi) curve as CSV")
    grid_flags(p)

    p = sub.add_parser("curves", help="S and E in both parametrizations")
    grid_flags(p)
    p.add_argument("--tau", type=_float_list, help="comma-separated tau values")
    p.add_argument("--chi", type=_float_list, help="comma-separated chi values")

    p = sub.add_parser("psi-compare", help="squeezed vacuum against |Psi_N>")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run the relation suites")
    p.add_argument("suite_pos", nargs="?", choices=("all",) + SUITES, metavar="SUITE")
    p.add_argument("--suite", choices=("all",) + SUITES)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--summary", help="write tab-separated check lines here")
    return parser


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else env_int("SQZ_SEED", DEFAULT_SEED)
    cutoff = args.cutoff if args.cutoff is not None else env_int("SQZ_DEFAULT_CUTOFF", None)
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES
    if args.suite and args.suite_pos and args.suite != args.suite_pos:
        raise ConfigError("conflicting suite names")
    suite = args.suite or args.suite_pos or "all"
    if cutoff is not None and cutoff < 2:
        raise ConfigError(f"cutoff must be >= 2, got {cutoff}")
    if samples < 1:
        raise ConfigError(f"samples must be >= 1, got {samples}")
    reports = run_suite(suite, seed=seed, samples=samples, cutoff=cutoff)
    for rep in reports:
        print(rep.render())
    if args.summary:
        lines = [line for rep in reports for line in rep.summary_lines()]
        write_output("\n".join(lines) + "\n", args.summary)
    failed = sum(len(rep.failed) for rep in reports)
    print(f"overall: {'fail' if failed else 'pass'} ({failed} failed)")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fig1":
            table = fig1_table(args.chi_min, args.chi_max, args.points, args.spacing)
            write_output(table.to_csv(), args.out)
        elif args.command == "curves":
            taus, chis = args.tau, args.chi
            if not taus and not chis:
                chis = chi_grid(args.chi_min, args.chi_max, args.points, args.spacing).tolist()
            write_output(curves_csv(taus, chis), args.out)
        elif args.command == "psi-compare":
            write_output(psi_compare_csv(args.n_max), args.out)
        elif args.command == "verify":
            return cmd_verify(args)
    except ConfigError as exc:
        print(f"squeezent: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
