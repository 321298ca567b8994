"""``dieout`` command-line front end.

Exit codes:
  0  success
  1  trophic conditions fail (check-trophic, certify --from-trap)
  2  bad input: unreadable config, dimension mismatch, non-square system
  3  team enumeration too large (raise --cap or set --max-support)
  4  every team member is balanced (nu . C = 0): coexistence is possible
  5  the kernel is trivial, nothing to certify
  6  census failure: fewer than k coordinates under the envelope
  7  trajectory bound exceeds the certificate beta
  8  half-plane analysis needs exactly two resources
  9  simulation blew up
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import config as cfgmod
from .certificates import certificate_report, must_die_report, team_certificate, verify_dieout
from .errors import (
    AllBalanced,
    BetaMismatch,
    Blowup,
    ConfigError,
    DieOutError,
    DimensionMismatch,
    NonFinite,
    NotSquare,
    NotTrophic,
    TooLarge,
)
from .halfplanes import sign_grid, vertices, write_halfplanes_csv, write_vertices_csv
from .integrator import (
    read_trajectory_csv,
    simulate,
    trajectory_bound,
    write_events_csv,
    write_trajectory_csv,
)
from .model import format_rational, to_rational
from .nullspace import DEFAULT_SUBSET_CAP, restrict_system, team, team_report
from .trophic import check_trophic, trapping_region

EXIT_OK = 0
EXIT_NOT_TROPHIC = 1
EXIT_BAD_INPUT = 2
EXIT_TOO_LARGE = 3
EXIT_ALL_BALANCED = 4
EXIT_TRIVIAL_KERNEL = 5
EXIT_CENSUS = 6
EXIT_BETA = 7
EXIT_NOT_PLANAR = 8
EXIT_BLOWUP = 9


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def _beta_arg(text: str) -> float:
    if text.strip().lower() == "e":
        return math.e
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError("beta must be a positive finite number")
    return value


def _load(args) -> cfgmod.RunConfig:
    cfg = cfgmod.load(args.config)
    for assignment in args.set_c or []:
        cfg = cfgmod.apply_c_override(cfg, assignment)
    return cfg


def cmd_check_trophic(args, cfg, out: Path) -> int:
    report = check_trophic(cfg.spec)
    obj = report.as_dict()
    if report.passed:
        region = trapping_region(cfg.spec)
        obj["trapping_region"] = region.as_dict()
        obj["V_x0"] = float(region.V([float(x) for x in cfg.x0]))
    _write_json(out / "trophic.json", obj)
    print("trophic: pass" if report.passed else
          f"trophic: fail (T1 at {obj['t1_violations']}, T2 at {obj['t2_violations']})")
    return EXIT_OK if report.passed else EXIT_NOT_TROPHIC


def cmd_team(args, cfg, out: Path) -> int:
    spec = cfg.spec
    if args.reduce:
        if cfg.reduction is None:
            raise ConfigError("config has no 'reduction' entry")
        spec = restrict_system(spec, [i - 1 for i in cfg.reduction["focal"]],
                               [j - 1 for j in cfg.reduction["resources"]])
    t = team(spec, max_support=args.max_support, cap=args.cap)
    obj = team_report(t, spec.C)
    if args.reduce:
        obj["reduction"] = cfg.reduction
    _write_json(out / "team.json", obj)
    print(f"k={t.k} members={len(t.members)}")
    return EXIT_OK


def _choose_beta(args, cfg):
    if args.beta is not None:
        return args.beta, "flag"
    if args.from_trap:
        region = trapping_region(cfg.spec)
        V0 = region.V([float(x) for x in cfg.x0])
        return float(region.coordinate_bound(V0)), "trapping_region"
    if getattr(args, "traj", None):
        return trajectory_bound(read_trajectory_csv(args.traj)), "trajectory"
    if cfg.beta is not None:
        return cfg.beta, "config"
    traj = simulate(cfg.spec, cfg.signal, cfg.sim_config())
    return traj.beta, "simulation"


def cmd_certify(args, cfg, out: Path) -> int:
    t = team(cfg.spec, max_support=args.max_support, cap=args.cap)
    if t.k == 0:
        _write_json(out / "certificates.json", {"k": 0, "members": []})
        print("kernel is trivial")
        return EXIT_TRIVIAL_KERNEL
    must = must_die_report(t, cfg.spec.C)
    beta, source = _choose_beta(args, cfg)
    try:
        tc = team_certificate(t, cfg.spec.C, beta, cfg.x0, source)
    except AllBalanced:
        _write_json(out / "certificates.json", {
            "k": t.k, "all_balanced": True, "members": [],
            "balanced": [[int(v) for v in m.entries] for m in t.members],
            "must_die": must.as_dict(),
        })
        print("all team members are balanced (nu . C = 0); no die-out certificate")
        return EXIT_ALL_BALANCED
    obj = certificate_report(tc, cfg.spec.C, must)
    _write_json(out / "certificates.json", obj)
    print(f"k={tc.k} a*={tc.a_star:.12g} b*={tc.b_star:.12g} beta={beta:.12g} ({source})")
    for claim in obj["must_die"]["claims"]:
        print(claim["claim"])
    return EXIT_OK


def cmd_simulate(args, cfg, out: Path) -> int:
    try:
        traj = simulate(cfg.spec, cfg.signal, cfg.sim_config())
    except Blowup as exc:
        write_trajectory_csv(exc.trajectory, out / "trajectory.csv")
        print(f"blowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    write_trajectory_csv(traj, out / "trajectory.csv")
    if traj.events:
        write_events_csv(traj.events, out / "events.csv")
    print(f"samples={len(traj)} beta={traj.beta:.12g} switches={len(traj.events)}")
    return EXIT_OK


def cmd_verify(args, cfg, out: Path) -> int:
    if args.traj:
        traj = read_trajectory_csv(args.traj)
    else:
        traj = simulate(cfg.spec, cfg.signal, cfg.sim_config())
    if traj.d != cfg.spec.d:
        raise DimensionMismatch(f"trajectory has {traj.d} coordinates, system has {cfg.spec.d}")
    beta = args.beta if args.beta is not None else cfg.beta
    source = "flag" if args.beta is not None else "config"
    if beta is None:
        beta, source = traj.beta, "trajectory"
    t = team(cfg.spec, max_support=args.max_support, cap=args.cap)
    if t.k == 0:
        _write_json(out / "dieout_report.json", {"k": 0, "min_census": 0, "pass": True})
        print("kernel is trivial")
        return EXIT_TRIVIAL_KERNEL
    must = must_die_report(t, cfg.spec.C)
    try:
        if traj.beta > beta:
            raise BetaMismatch(f"trajectory bound {traj.beta:.12g} exceeds beta {beta:.12g}")
        tc = team_certificate(t, cfg.spec.C, beta, tuple(traj.X[0]), source)
        report = verify_dieout(traj, tc)
    except BetaMismatch as exc:
        print(f"beta mismatch: {exc}", file=sys.stderr)
        return EXIT_BETA
    except AllBalanced:
        print("all team members are balanced (nu . C = 0); nothing to verify")
        return EXIT_ALL_BALANCED
    obj = certificate_report(tc, cfg.spec.C, must, report)
    obj["samples"] = len(traj)
    obj["final_state"] = [float(v) for v in traj.X[-1]]
    _write_json(out / "dieout_report.json", obj)
    if not report.passed:
        print(f"census failure: first failing sample at t={report.first_failure:.12g}")
        return EXIT_CENSUS
    print(f"census ok: min_census={report.min_census} k={tc.k}")
    return EXIT_OK


def cmd_halfplanes(args, cfg, out: Path) -> int:
    if cfg.spec.dprime != 2:
        print(f"halfplanes needs dprime = 2, config has {cfg.spec.dprime}", file=sys.stderr)
        return EXIT_NOT_PLANAR
    rows = sign_grid(cfg.spec, args.grid, to_rational(args.zmax))
    verts = vertices(cfg.spec)
    write_halfplanes_csv(cfg.spec, rows, out / "halfplanes.csv")
    write_vertices_csv(verts, out / "vertices.csv")
    for v in verts:
        z = ", ".join(format_rational(q) for q in v.z)
        print(f"vertex ({z}) on {v.label()}{'' if v.positive else ' [axis]'}")
    return EXIT_OK


COMMANDS = {
    "check-trophic": cmd_check_trophic,
    "team": cmd_team,
    "certify": cmd_certify,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "halfplanes": cmd_halfplanes,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dieout",
        description="Extinction certificates, trapping regions and simulation for "
                    "generalized Lotka-Volterra systems.",
        epilog="Bundled configs: " + ", ".join(cfgmod.bundled_names()),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True,
                        help="config JSON path or bundled example name")
    common.add_argument("--out", default="out", help="output directory (default ./out)")
    common.add_argument("--set-c", action="append", metavar="I=VALUE",
                        help="override growth rate c_I (1-based, rational); repeatable")

    enum = argparse.ArgumentParser(add_help=False)
    enum.add_argument("--max-support", type=int, default=None,
                      help="only look for team members with at most this many entries")
    enum.add_argument("--cap", type=int, default=DEFAULT_SUBSET_CAP,
                      help="refuse to test more candidate supports than this")

    sub.add_parser("check-trophic", parents=[common],
                   help="check the trophic sign conditions and build a trapping region")

    p = sub.add_parser("team", parents=[common, enum], help="enumerate minimal-support null vectors")
    p.add_argument("--reduce", action="store_true",
                   help="work on the config's focal/resource subsystem")

    p = sub.add_parser("certify", parents=[common, enum], help="die-out certificates for the team")
    p.add_argument("--beta", type=_beta_arg, default=None,
                   help="bound on every coordinate ('e' accepted)")
    p.add_argument("--from-trap", action="store_true",
                   help="take beta from the trophic trapping region")
    p.add_argument("--traj", default=None, help="take beta from a trajectory CSV")

    sub.add_parser("simulate", parents=[common], help="integrate and write trajectory.csv")

    p = sub.add_parser("verify", parents=[common, enum],
                       help="check the certified census along a trajectory")
    p.add_argument("--traj", default=None,
                   help="trajectory CSV from 'simulate' (default: simulate now)")
    p.add_argument("--beta", type=_beta_arg, default=None,
                   help="certificate beta (default: config beta, else the trajectory bound)")

    p = sub.add_parser("halfplanes", parents=[common],
                       help="sign classification over a planar resource grid")
    p.add_argument("--grid", type=int, default=51, help="grid points per axis (default 51)")
    p.add_argument("--zmax", default="1", help="grid covers [0, zmax]^2 (default 1)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    try:
        cfg = _load(args)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](args, cfg, out)
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except NotTrophic as exc:
        print(f"not trophic: {exc}", file=sys.stderr)
        return EXIT_NOT_TROPHIC
    except Blowup as exc:
        print(f"blowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except (ConfigError, DimensionMismatch, NonFinite, NotSquare) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DieOutError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
