"""Command-line interface.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
invalid parameters or an unreadable/malformed file.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certify import SKIP_KEYS, run_full_verification
from .chain import RHO1_CENTERS, ChainParams, build_chain, solve_k_for_m
from .fourway import build_fourway, min_core_distance, verify_fourway
from .mesh import export_obj
from .scene import read_scene, write_scene
from .sequence import DEFAULT_BUDGET, BudgetExceededError, membership, similarity_dimension

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _point(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coordinate in {text!r}") from None
    return x, y, z


def _write_report(report, path) -> None:
    if path:
        Path(path).write_text(report.to_json(), encoding="ascii")


def cmd_build(args) -> int:
    k = solve_k_for_m(args.m) if args.k is None else args.k
    chain = build_chain(ChainParams(args.R, args.r, k, args.m), rho1_center=args.rho1_center)
    write_scene(chain, args.out)
    print(f"wrote {args.m} maps (k={k:.17g}) to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    chain = read_scene(args.scene)
    report = run_full_verification(chain.params, args.depth, skip=args.skip, workers=args.workers,
                                   chain=chain, budget=args.budget)
    _write_report(report, args.report)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_fourway(args) -> int:
    cfg = build_fourway(args.R, args.r)
    report = verify_fourway(cfg)
    _write_report(report, args.report)
    print(f"min core distance {min_core_distance(cfg):.12g}")
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_export(args) -> int:
    chain = read_scene(args.scene)
    export_obj(chain, args.level, args.out, cores=args.cores, budget=args.budget)
    print(f"wrote level {args.level} mesh ({chain.m ** args.level} components) to {args.out}")
    return EXIT_OK


def cmd_member(args) -> int:
    chain = read_scene(args.scene)
    print(membership(chain, args.point, args.depth))
    return EXIT_OK


def cmd_dim(args) -> int:
    k = solve_k_for_m(args.m) if args.k is None else args.k
    print(f"{similarity_dimension(args.m, k):.12g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genus2cantor", allow_abbrev=False,
                                     description="Build and certify genus-2 Cantor set chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        p.set_defaults(func=func)
        return p

    p = add("build", cmd_build, "place the level-1 copies and write a scene file")
    p.add_argument("--R", type=float, required=True, help="core square half-side")
    p.add_argument("--r", type=float, required=True, help="beam half-thickness")
    p.add_argument("--m", type=int, required=True, help="number of copies (multiple of 16)")
    p.add_argument("--k", type=float, help="scale factor (default: the one that tiles the core)")
    p.add_argument("--rho1-center", choices=RHO1_CENTERS, default="holecenter")
    p.add_argument("--out", required=True)

    p = add("verify", cmd_verify, "certify a scene and write a JSON report")
    p.add_argument("--scene", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--skip", action="append", choices=SKIP_KEYS, default=[])
    p.add_argument("--report", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("fourway", cmd_fourway, "certify the four-way configuration at the origin")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--report")

    p = add("export", cmd_export, "write an OBJ mesh of one level")
    p.add_argument("--scene", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--cores", action="store_true", help="also emit core polylines")
    p.add_argument("--out", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("member", cmd_member, "escape level of a point")
    p.add_argument("--scene", required=True)
    p.add_argument("--point", type=_point, required=True, help="x,y,z")
    p.add_argument("--depth", type=int, required=True)

    p = add("dim", cmd_dim, "similarity dimension log(m)/log(1/k)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=float)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
