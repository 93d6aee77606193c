"""mzdist command line for the Fisher, distinguishability and Monte Carlo tools.

Examples:
  mzdist fisher --family noon --n 10 --theta 0.3
  mzdist disting --family phase --gamma 0.5pi --n 20 --chi pi --delta 1e-3
  mzdist fig2 --out fig2.csv
  mzdist estimate --family phase --n 10 --theta 1.0 --window 1.0,0.6 --k 100 --trials 2000 --seed 7

Angles accept decimal radians or multiples of pi: pi, 0.5pi, 3pi/4, -pi/2.
Output goes to --out, else to <$MZDIST_OUTPUT_DIR>/<command>.<format>, else stdout.
Exit codes: 0 success, 2 bad arguments, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .disting import (DistinguishabilityQuery, QuadratureRule, QuadratureSpec, disting, disting_sweep,
                      local_approx)
from .errors import MZError, UnsupportedDimension
from .estimation import DEFAULT_GRID_POINTS, MISID_RULES, exact_binary_misid, misid_experiment, mse_experiment
from .fisher import closed_form_fisher, energy_discrepancy_curve, fisher_curve
from .info import distribution, type_bounds
from .rotation import evolve
from .spin import FockZ, Noon, PhaseState, SpinJ, make_probe

OUTPUT_DIR_ENV = "MZDIST_OUTPUT_DIR"
EXIT_OK, EXIT_ARGS, EXIT_IO = 0, 2, 3


# Argument parsing helpers

def parse_angle(text: str) -> float:
    s = text.strip().lower().replace(" ", "").replace("π", "pi")
    try:
        if "pi" not in s:
            value = float(s)
        else:
            coef, _, rest = s.partition("pi")
            coef = coef.rstrip("*")
            c = {"": 1.0, "+": 1.0, "-": -1.0}.get(coef)
            c = float(coef) if c is None else c
            if rest and not rest.startswith("/"):
                raise ValueError
            value = c * math.pi / (float(rest[1:]) if rest else 1.0)
        if not math.isfinite(value):
            raise ValueError
        return value
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def parse_angle_list(text: str) -> List[float]:
    return [parse_angle(t) for t in text.split(",") if t.strip()]


def parse_int_list(text: str) -> List[int]:
    """Comma list of integers and inclusive ranges lo:hi, e.g. 5:50 or 6,10,20."""
    out = []
    try:
        for part in text.split(","):
            if ":" in part:
                lo, hi = part.split(":")
                out.extend(range(int(lo), int(hi) + 1))
            elif part.strip():
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    return out


def parse_m(text: str):
    s = text.strip()
    if s in ("j", "+j", "-j"):
        return s
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"m must be a number, j, +j or -j: {text!r}") from None


def parse_window(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("window must be 'center,width'")
    return parse_angle(parts[0]), parse_angle(parts[1])


def family_from_args(args):
    if args.family == "noon":
        return Noon(args.zeta)
    if args.family == "fockz":
        return FockZ(args.m)
    return PhaseState(args.gamma)


# Output

@dataclass
class Table:
    columns: List[str]
    rows: List[list] = field(default_factory=list)


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    return str(v)


def _json_cell(v):
    if isinstance(v, (float, np.floating)):
        v = float("%.12g" % v)
        return None if not math.isfinite(v) else v
    if isinstance(v, np.integer):
        return int(v)
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        objs = [dict(zip(table.columns, map(_json_cell, row))) for row in table.rows]
        return json.dumps(objs, indent=1, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def output_path(args) -> Optional[Path]:
    if args.out:
        return Path(args.out)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{args.command}.{args.format}"
    return None


def emit(table: Table, args) -> int:
    text = render(table, args.format)
    path = output_path(args)
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(text.encode("utf-8"))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# Commands

def cmd_fisher(args) -> Table:
    fam = family_from_args(args)
    j = SpinJ(args.n)
    probe = make_probe(fam, j)
    thetas = np.asarray(args.theta if args.theta else [0.0])
    a, _ = fisher_curve(probe, thetas)
    b, _ = energy_discrepancy_curve(probe, thetas)
    c = closed_form_fisher(fam, j).value
    t = Table(["family", "n", "theta", "fisher_prob_derivative", "fisher_energy_discrepancy",
               "fisher_closed_form", "max_rel_disagreement"])
    for th, x, y in zip(thetas, a, b):
        vals = np.array([x, y, c])
        spread = (vals.max() - vals.min()) / max(abs(c), 1e-300)
        t.rows.append([fam.label, args.n, th, x, y, c, spread])
    return t


def _quadrature(args) -> QuadratureSpec:
    return QuadratureSpec(args.nodes, QuadratureRule(args.rule), not args.no_split)


def cmd_disting(args) -> Table:
    fam = family_from_args(args)
    probe = make_probe(fam, SpinJ(args.n))
    q = DistinguishabilityQuery(probe, args.chi, args.delta, _quadrature(args))
    res = disting(q)
    t = Table(["family", "n", "chi", "delta", "D_value", "clamped_fraction", "nodes_used", "local_approx"])
    t.rows.append([fam.label, args.n, args.chi, args.delta, res.value, res.clamped_fraction,
                   res.nodes_used, local_approx(probe, args.chi, args.delta)])
    return t


FIG2_FAMILIES = (Noon(0.0), FockZ(0.0), FockZ("+j"), PhaseState(math.pi / 2))


def cmd_fig2(args) -> Table:
    fams = [family_from_args(args)] if args.family else list(FIG2_FAMILIES)
    n_list = args.n_list or list(range(5, 51))
    if not n_list or min(n_list) < 1 or max(n_list) > 200:
        raise MZError("n values must lie in [1, 200]")
    chis = args.chi_list or [math.pi / 2, 3 * math.pi / 4, math.pi]
    deltas = args.delta_list or [1e-3, math.pi]
    rows = disting_sweep(fams, n_list, chis, deltas, _quadrature(args), workers=args.workers)
    t = Table(["family", "n", "chi", "delta", "D_value", "clamped_fraction", "nodes_used", "flag"])
    for r in rows:
        t.rows.append([r.family, r.n, r.chi, r.delta, r.value, r.clamped_fraction, r.nodes_used, r.flag])
    return t


def cmd_estimate(args) -> Table:
    fam = family_from_args(args)
    probe = make_probe(fam, SpinJ(args.n))
    theta = args.theta[0] if args.theta else 1.0
    window = args.window or (theta, 0.6)
    run = mse_experiment(probe, theta, window, args.k[0], args.trials, args.seed, args.grid_points)
    t = Table(["family", "n", "theta_true", "k", "empirical_mse", "mse_stderr", "crb", "ratio", "trials", "seed"])
    t.rows.append([fam.label, args.n, theta, args.k[0], run.empirical_mse, run.mse_stderr, run.crb,
                   run.ratio, run.trials, run.seed])
    return t


def _two_distributions(args):
    fam = family_from_args(args)
    probe = make_probe(fam, SpinJ(args.n))
    thetas = args.theta or [math.pi / 2, math.pi / 3]
    if len(thetas) != 2:
        raise MZError("--theta needs exactly two angles: the phase behind P1, then P2")
    return fam, [distribution(evolve(probe, th)) for th in thetas]


def cmd_misid(args) -> Table:
    _, (p1, p2) = _two_distributions(args)
    t = Table(["k", "rule", "p_empirical", "p_exact", "lower", "upper", "exponent", "empirical_exponent"])
    for k in args.k:
        p_emp, b = misid_experiment(p1, p2, k, args.trials, args.seed, args.rule)
        try:
            p_exact = exact_binary_misid(p1, p2, k, args.rule)
        except UnsupportedDimension:
            p_exact = float("nan")
        emp_exp = -math.log2(p_emp) / k if p_emp > 0 else float("inf")
        t.rows.append([k, args.rule, p_emp, p_exact, b.lower, b.upper, b.exponent, emp_exp])
    return t


def cmd_bounds(args) -> Table:
    _, (p1, p2) = _two_distributions(args)
    t = Table(["k", "exponent", "lower", "upper", "log2_lower", "log2_upper"])
    for k in args.k:
        b = type_bounds(p1, p2, k)
        t.rows.append([k, b.exponent, b.lower, b.upper, b.log2_lower, b.log2_upper])
    return t


COMMANDS = {"fisher": cmd_fisher, "disting": cmd_disting, "fig2": cmd_fig2,
            "estimate": cmd_estimate, "misid": cmd_misid, "bounds": cmd_bounds}


def _add_common(p, family=None, n=10, m=0.0):
    p.add_argument("--family", choices=["noon", "fockz", "phase"], default=family)
    p.add_argument("--n", type=int, default=n, help="photon number 2j")
    p.add_argument("--m", type=parse_m, default=m, help="J_z eigenvalue for fockz: number, j, +j or -j")
    p.add_argument("--zeta", type=parse_angle, default=0.0, help="NOON relative phase")
    p.add_argument("--gamma", type=parse_angle, default=0.0, help="phase-state ramp")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help=f"output file (default: stdout, or ${OUTPUT_DIR_ENV}/<command>.<format>)")


def _add_quadrature(p):
    p.add_argument("--nodes", type=int, default=None, help="nodes per axis (default scales with n and delta)")
    p.add_argument("--rule", choices=[r.value for r in QuadratureRule], default="GaussLegendre")
    p.add_argument("--no-split", action="store_true", help="plain tensor rule without splitting at zeros")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mzdist", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fisher", help="Fisher information by both routes and closed form")
    _add_common(p, family="noon")
    p.add_argument("--theta", type=parse_angle_list, default=None)

    p = sub.add_parser("disting", help="distinguishability for one window")
    _add_common(p, family="noon")
    _add_quadrature(p)
    p.add_argument("--chi", type=parse_angle, default=math.pi)
    p.add_argument("--delta", type=parse_angle, default=math.pi)

    p = sub.add_parser("fig2", help="distinguishability over the standard grid")
    _add_common(p, n=None)
    _add_quadrature(p)
    p.add_argument("--n-list", dest="n_list", type=parse_int_list, default=None, help="e.g. 5:50 or 6,10,20")
    p.add_argument("--chi", dest="chi_list", type=parse_angle_list, default=None)
    p.add_argument("--delta", dest="delta_list", type=parse_angle_list, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("estimate", help="grid MLE mean-squared error against the Cramer-Rao bound")
    _add_common(p, family="phase")
    p.add_argument("--theta", type=parse_angle_list, default=None, help="true phase")
    p.add_argument("--window", type=parse_window, default=None, help="center,width")
    p.add_argument("--k", type=parse_int_list, default=[100])
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=DEFAULT_GRID_POINTS)

    for name, text in (("misid", "Monte Carlo misidentification against the type bounds"),
                       ("bounds", "type bounds for two phases")):
        p = sub.add_parser(name, help=text)
        # one photon in one port: the binary case the exact oracle covers
        _add_common(p, family="fockz", n=1, m=0.5)
        p.add_argument("--theta", type=parse_angle_list, default=None, help="phases behind P1 and P2")
        p.add_argument("--k", type=parse_int_list, default=[100])
        if name == "misid":
            p.add_argument("--trials", type=int, default=20000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--rule", choices=MISID_RULES, default="type_class")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        table = COMMANDS[args.command](args)
    except (MZError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ARGS
    return emit(table, args)


if __name__ == "__main__":
    raise SystemExit(main())
