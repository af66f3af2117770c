"""Command line: ``pvi-heat verify`` and ``pvi-heat numeric``."""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import nullcontext

from .checks import CHECKS
from .forms import SingularLocusError, Theta
from .report import reports_to_json, run_check

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

HEAT_ORDER_MIN = 1.95
LEGENDRE_MAX = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _theta(text: str) -> Theta:
    try:
        return Theta.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _rational_theta(text: str) -> Theta:
    theta = _theta(text)
    if not theta.is_rational:
        raise UsageError("numeric commands need four rational exponents")
    return theta


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _seed(args) -> int:
    env = os.environ.get("PVI_HEAT_SEED")
    if env is None:
        return args.seed
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"PVI_HEAT_SEED must be an integer, got {env!r}") from None


def _tolerances(**kw):
    from .numerics import Tolerances

    try:
        return Tolerances(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _open_csv(path):
    return open(path, "w", newline="", encoding="utf-8") if path else nullcontext(None)


def cmd_verify(args) -> int:
    if args.all == bool(args.check):
        raise UsageError("give exactly one of --all or --check NAME...")
    names = list(CHECKS) if args.all else args.check
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check {unknown[0]!r}; choose from {', '.join(CHECKS)}")
    theta = _theta(args.theta)
    seed = _seed(args)
    reports = []
    for name in dict.fromkeys(names):
        r = run_check(name, theta, seed)
        reports.append(r)
        print(f"{r.status.upper():5} {r.check_name:12} {r.elapsed_ms:>7} ms  {r.detail}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))
    return EXIT_PASS if all(r.status == "pass" for r in reports) else EXIT_FAIL


def cmd_pvi(args) -> int:
    from .numerics import integrate_pvi, write_trajectory_csv

    theta = _rational_theta(args.theta)
    tol = _tolerances(rtol=args.rtol, atol=args.atol, exclusion_radius=args.exclusion_radius)
    traj = integrate_pvi(theta, args.x0, args.u0, args.du0, args.x_end, tol)
    print(f"{traj.termination}: {len(traj.x)} accepted steps, {traj.n_rejected} rejected; "
          f"u({traj.x[-1]:.12g}) = {traj.u[-1]:.15g}, u' = {traj.u_prime[-1]:.15g}")
    if traj.message:
        print(traj.message)
    with _open_csv(args.csv) as fh:
        if fh:
            write_trajectory_csv(fh, traj)
    return EXIT_PASS if traj.reached_end else EXIT_FAIL


def cmd_heat_check(args) -> int:
    from .numerics import heat_residual_sweep, initial_grid, integrate_pvi, write_residual_csv

    theta = _rational_theta(args.theta)
    xs, nodes = _floats(args.xs), _floats(args.nodes)
    tol = _tolerances(rtol=args.rtol, atol=args.atol, exclusion_radius=args.exclusion_radius,
                      richardson_levels=args.levels)
    reach = max(abs(x - args.x0) for x in xs) + args.h
    right = integrate_pvi(theta, args.x0, args.u0, args.du0, args.x0 + reach, tol)
    left = integrate_pvi(theta, args.x0, args.u0, args.du0, args.x0 - reach, tol)
    for traj in (right, left):
        if not traj.reached_end:
            print(f"trajectory stopped early: {traj.message}")
            return EXIT_FAIL
    grid = initial_grid(theta, args.x0, args.u0, args.du0, nodes, args.psi0, args.dpsi0, tol=tol)
    rows = []
    for x in xs:
        traj = right if x >= args.x0 else left
        rows.extend(heat_residual_sweep(traj, grid, [x], args.h))
    ok = True
    for r in rows:
        good = min(r.orders) >= HEAT_ORDER_MIN and r.residual_h2 < r.residual_h
        ok &= good
        print(f"t = {r.t:<8.5g} x = {r.x:<8.5g} residual(h) = {r.residual_h:.3e}  "
              f"residual(h/2) = {r.residual_h2:.3e}  order = {r.order:.4f}{'' if good else '  FAIL'}")
    print(f"minimum observed order {min(min(r.orders) for r in rows):.4f} (threshold {HEAT_ORDER_MIN})")
    with _open_csv(args.csv) as fh:
        if fh:
            write_residual_csv(fh, rows)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_legendre(args) -> int:
    from .numerics import legendre_check

    points = _floats(args.points)
    worst = legendre_check(points)
    print(f"max residual {worst:.3e} over t = {points} (threshold {LEGENDRE_MAX:g})")
    return EXIT_PASS if worst <= LEGENDRE_MAX else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pvi-heat", description="Certify and numerically check the PVI heat equation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run exact certifications")
    v.add_argument("--all", action="store_true", help="run every check")
    v.add_argument("--check", nargs="+", metavar="NAME", help=f"checks to run: {', '.join(CHECKS)}")
    v.add_argument("--theta", default="symbolic", help="'symbolic' or th_inf,th0,th1,thx as rationals p/q")
    v.add_argument("--json", metavar="PATH", help="write a JSON array of check reports")
    v.add_argument("--seed", type=int, default=0, help="seed for random spot checks (env PVI_HEAT_SEED wins)")
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("numeric", help="floating-point checks")
    nsub = n.add_subparsers(dest="numeric", required=True, parser_class=_Parser)

    def tolerances(q):
        q.add_argument("--rtol", type=float, default=1e-11)
        q.add_argument("--atol", type=float, default=1e-13)
        q.add_argument("--exclusion-radius", type=float, default=1e-3)
        q.add_argument("--csv", metavar="PATH")

    pv = nsub.add_parser("pvi", help="integrate PVI")
    pv.add_argument("--theta", default="1/2,1/3,1/5,1/7")
    pv.add_argument("--x0", type=float, default=0.4)
    pv.add_argument("--u0", type=float, default=0.7)
    pv.add_argument("--du0", type=float, default=0.0)
    pv.add_argument("--x-end", type=float, default=0.6)
    tolerances(pv)
    pv.set_defaults(func=cmd_pvi)

    hc = nsub.add_parser("heat-check", help="heat-equation residuals on a transported wave function")
    hc.add_argument("--theta", default="1/2,1/3,1/5,1/7")
    hc.add_argument("--x0", type=float, default=0.4)
    hc.add_argument("--u0", type=float, default=0.7)
    hc.add_argument("--du0", type=float, default=0.0)
    hc.add_argument("--nodes", default="1.5,1.8,2.1,2.4,2.7", help="t-nodes, one real interval free of 0, 1, x, u")
    hc.add_argument("--xs", default="0.45,0.5", help="x values where the residual is evaluated")
    hc.add_argument("--h", type=float, default=1e-2)
    hc.add_argument("--levels", type=int, default=2)
    hc.add_argument("--psi0", type=complex, default=1.0)
    hc.add_argument("--dpsi0", type=complex, default=0.3)
    tolerances(hc)
    hc.set_defaults(func=cmd_heat_check)

    lg = nsub.add_parser("legendre", help="AGM check of the Picard reduction")
    lg.add_argument("--points", default="0.25,0.5,0.75")
    lg.set_defaults(func=cmd_legendre)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"pvi-heat: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularLocusError as exc:
        print(f"pvi-heat: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
