"""``weyl-spectra`` command-line front end.

Exit codes: 0 success (or property holds / all jobs pass), 1 validation
failure / property fails / some job fails, 2 usage, parse or input errors,
3 inconclusive probe.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import report
from .curvature import ricci, scalar_curv, validate, weyl_project
from .explore import explore_conjectures
from .families import UnknownFamily, resolve_family
from .geometry import riemann_at, sample_points
from .io import TensorFormatError, load_tensor, save_tensor, tensor_to_dict
from .probes import DEFAULT_SEED, PROBES, ProbeConfig, conformal_probe
from .verify import JOBS, verify_theorems

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SEED_ENV = "WEYL_SPECTRA_SEED"


class UsageError(Exception):
    pass


def _seed_default() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _positive(kind):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _common(p: argparse.ArgumentParser, source: bool = False) -> None:
    if source:
        p.add_argument("--family", help="built-in metric family, e.g. gf:p=3,f=sum_sq")
        p.add_argument("--tensor", help="curvature tensor JSON file")
    p.add_argument("--points", type=_positive(int), help="chart points per family")
    p.add_argument("--vectors", type=_positive(int), help="samples per pseudo-sphere")
    p.add_argument("--planes", type=_positive(int), help="samples per Grassmannian")
    p.add_argument("--seed", type=lambda s: int(s, 0), help=f"RNG seed (default: ${SEED_ENV} or {DEFAULT_SEED:#x})")
    p.add_argument("--rank-tol", type=_positive(float))
    p.add_argument("--eig-tol", type=_positive(float))
    p.add_argument("--box", type=_positive(float), help="coordinate box radius for pseudo-sphere sampling")
    p.add_argument("--workers", type=_positive(int), help="threads for per-point probes")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyl-spectra",
        description="Curvature tensors, Weyl projection and Jordan-structure probes.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the symmetries of a tensor file")
    p.add_argument("file", nargs="?", help="tensor JSON file (same as --tensor)")
    p.add_argument("--tensor")
    p.add_argument("--tol", type=_positive(float), default=1e-10)
    p.add_argument("--out")

    p = sub.add_parser("tensor", help="Ricci, scalar curvature and Weyl part of a tensor file")
    p.add_argument("file", nargs="?")
    p.add_argument("--tensor")
    p.add_argument("--weyl-out", help="also write the Weyl part as a tensor file")
    p.add_argument("--out")

    p = sub.add_parser("manifold", help="curvature of a metric family at chart points")
    _common(p, source=True)
    p.add_argument("--point", help="comma-separated coordinates; default: sampled points")
    p.add_argument("--dump-weyl", help="write the Weyl tensor at the first point as a tensor file")

    p = sub.add_parser("probe", help="decide a Jordan Osserman or Ivanov-Petrova property")
    _common(p, source=True)
    p.add_argument("--property", choices=sorted(PROBES), required=True)
    p.add_argument("--kind", choices=("spacelike", "timelike"), required=True)

    p = sub.add_parser("verify", help="run the verification job suite")
    _common(p)
    p.add_argument("--only", action="append", help=f"job id ({', '.join(JOBS)}); repeatable or comma-separated")

    p = sub.add_parser("explore", help="random sweep for counterexample candidates")
    _common(p)
    p.add_argument("--trials", type=_positive(int), default=60)
    return parser


def _config(args) -> ProbeConfig:
    seed = args.seed if getattr(args, "seed", None) is not None else _seed_default()
    kw = {
        "seed": seed,
        "n_points": getattr(args, "points", None),
        "n_vectors": getattr(args, "vectors", None),
        "n_planes": getattr(args, "planes", None),
        "rank_tol": getattr(args, "rank_tol", None),
        "eig_tol": getattr(args, "eig_tol", None),
        "box": getattr(args, "box", None),
        "workers": getattr(args, "workers", None),
    }
    return ProbeConfig(**{k: v for k, v in kw.items() if v is not None})


def _tensor_path(args) -> str:
    paths = [x for x in (getattr(args, "file", None), args.tensor) if x]
    if len(paths) != 1:
        raise UsageError("give exactly one tensor file")
    return paths[0]


def _source(args):
    if bool(args.family) == bool(args.tensor):
        raise UsageError("give exactly one of --family or --tensor")
    if args.family:
        return "family", resolve_family(args.family)
    return "tensor", load_tensor(args.tensor)


def cmd_validate(args, out) -> int:
    A = load_tensor(_tensor_path(args))
    rep = validate(A, args.tol)
    report.write(report.to_json(rep.to_dict()), args.out, out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_tensor(args, out) -> int:
    A = load_tensor(_tensor_path(args))
    rep = validate(A)
    doc = {"validate": rep.to_dict()}
    if A.m >= 3:
        W = weyl_project(A)
        doc.update(
            ricci=ricci(A).tolist(),
            scalar=float(scalar_curv(A)),
            weyl=tensor_to_dict(W, tol=1e-14),
        )
        if args.weyl_out:
            save_tensor(W, args.weyl_out, tol=1e-14)
    report.write(report.to_json(doc), args.out, out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_manifold(args, out) -> int:
    if args.tensor or not args.family:
        raise UsageError("manifold needs --family")
    gf = resolve_family(args.family)
    cfg = _config(args)
    if args.point:
        try:
            points = np.array([[float(c) for c in args.point.split(",")]])
        except ValueError:
            raise UsageError(f"cannot parse --point {args.point!r}") from None
    else:
        points = sample_points(gf, cfg.n_points, cfg.rng(0))
    frames = []
    for x in points:
        f = riemann_at(gf, x)
        frames.append(
            {
                "point": f.point.tolist(),
                "gram": f.gram.tolist(),
                "christoffel": f.christoffel.tolist(),
                "riemann": tensor_to_dict(f.riemann, tol=1e-14),
                "weyl": tensor_to_dict(f.weyl, tol=1e-14),
                "max_ricci": float(np.abs(ricci(f.riemann)).max()),
                "validate": validate(f.riemann, 1e-9).to_dict(),
            }
        )
        if args.dump_weyl and len(frames) == 1:
            save_tensor(f.weyl, args.dump_weyl)
    doc = {"family": gf.name, "coordinates": list(gf.coordinates), "frames": frames}
    if args.format == "csv":
        rows = [["point", "max_ricci", "max_weyl", "valid"]]
        for fr in frames:
            w = max((abs(e[4]) for e in fr["weyl"]["components"]), default=0.0)
            rows.append([" ".join(map(repr, fr["point"])), repr(fr["max_ricci"]), repr(w), str(fr["validate"]["passed"])])
        report.write(report.to_csv(rows), args.out, out)
    else:
        report.write(report.to_json(doc), args.out, out)
    return EXIT_OK


def cmd_probe(args, out) -> int:
    cfg = _config(args)
    kind, src = _source(args)
    try:
        if kind == "family":
            verdict = conformal_probe(src, args.property, args.kind, cfg)
        else:
            verdict = PROBES[args.property](src, args.kind, cfg)
    except ValueError as exc:
        # e.g. no timelike directions in a definite signature
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        report.write(report.to_csv(report.probe_rows(verdict)), args.out, out)
    else:
        doc = {
            "source": args.family or args.tensor,
            "config": report.config_dict(cfg),
            "note": "holds=true means no violation was found among the sampled and searched points",
            **verdict.to_dict(),
        }
        report.write(report.to_json(doc), args.out, out)
    return {True: EXIT_OK, False: EXIT_FAIL, None: EXIT_INCONCLUSIVE}[verdict.holds]


def cmd_verify(args, out) -> int:
    cfg = _config(args)
    only = [j.strip() for item in (args.only or []) for j in item.split(",") if j.strip()] or None
    try:
        results = verify_theorems(cfg, only)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    jobs = [r.to_dict() for r in results]
    if args.format == "csv":
        report.write(report.to_csv(report.job_rows(jobs)), args.out, out)
    else:
        doc = {
            "config": report.config_dict(cfg),
            "jobs": jobs,
            "summary": {
                "passed": sum(j["verdict"] == "pass" for j in jobs),
                "failed": sum(j["verdict"] == "fail" for j in jobs),
            },
        }
        report.write(report.to_json(doc), args.out, out)
    return EXIT_OK if all(j["verdict"] == "pass" for j in jobs) else EXIT_FAIL


def cmd_explore(args, out) -> int:
    cfg = _config(args)
    doc = {"config": report.config_dict(cfg), **explore_conjectures(cfg, args.trials)}
    if args.format == "csv":
        report.write(report.to_csv(report.explore_rows(doc)), args.out, out)
    else:
        report.write(report.to_json(doc), args.out, out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "tensor": cmd_tensor,
    "manifold": cmd_manifold,
    "probe": cmd_probe,
    "verify": cmd_verify,
    "explore": cmd_explore,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, UnknownFamily, TensorFormatError, OSError) as exc:
        print(f"weyl-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
