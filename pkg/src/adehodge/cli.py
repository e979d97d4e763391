"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .defect import (
    SPECIALIZATIONS,
    build_condition_matrix,
    build_vanishing_matrix,
    defect_double,
    defect_nfold,
    defect_triple,
    rank,
)
from .errors import AdeHodgeError, InputError, StageError, Undecided, UnsupportedCover
from .gallery import EXAMPLE_NAMES, bundle_manifest, run_example, verify_inventory
from .hodge import CoverSpec, euler_check, hodge_big_cover, hodge_small, path_independence_check
from .numbers import DEFAULT_PRECISION
from .poly import MultiPoly, ProjectivePoint, parse_poly
from .singular import A, SingularPointRecord, inventory_of

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNDECIDED = 3


@dataclass
class JobConfig:
    command: str
    precision: int = DEFAULT_PRECISION
    backend: str = "auto"
    format: str = "text"


class _Uncertified(Exception):
    def __init__(self, report):
        self.report = report


def _precision(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("precision must be an integer") from None
    if not 64 <= p <= 4096:
        raise argparse.ArgumentTypeError("precision must lie in [64, 4096]")
    return p


def _read_surface(path: str | None, nvars: int | None = None) -> MultiPoly:
    if path is None:
        raise InputError("--surface is required")
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    body = " ".join(lines)
    if nvars is None:
        nvars = 5 if "y4" in body else 4
    return parse_poly(body, nvars, assert_homogeneous=True)


def _read_points(path: str | None) -> list:
    """Points or records from a ``.pts`` file; ``none`` means an empty list."""
    if path is None or path == "none":
        return []
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(data, list):
        raise InputError(f"{path}: expected a JSON array")
    out = []
    for item in data:
        if isinstance(item, dict):
            out.append(SingularPointRecord.from_json(item))
        elif isinstance(item, list):
            out.append(ProjectivePoint.from_json(item))
        else:
            raise InputError(f"{path}: entries must be coordinate arrays or records")
    return out


def _records(args, cfg: JobConfig):
    B = _read_surface(args.surface)
    pts = _read_points(args.points)
    for p in pts:
        pt = p.point if isinstance(p, SingularPointRecord) else p
        if len(pt) != B.nvars:
            raise InputError(f"point {pt!r} has {len(pt)} coordinates, surface has {B.nvars} variables")
    return B, verify_inventory(B, pts, cfg.precision)


def _check_certified(report, ranks):
    report["certified"] = all(r.certified for r in ranks)
    if not report["certified"]:
        raise _Uncertified(report)
    return report


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args, cfg: JobConfig) -> dict:
    _, recs = _records(args, cfg)
    return {
        "records": [r.to_json() for r in recs],
        "inventory": inventory_of(recs),
        "verified": "local",
    }


def cmd_rank(args, cfg: JobConfig) -> dict:
    if args.degree is None:
        raise InputError("--degree is required")
    if args.kind == "vanishing":
        pts = [p.point if isinstance(p, SingularPointRecord) else p for p in _read_points(args.points)]
        M = build_vanishing_matrix(args.degree, pts)
    else:
        B, recs = _records(args, cfg)
        M = build_condition_matrix(args.degree, recs, args.kind, B)
    if args.dump:
        Path(args.dump).write_text(M.to_csv(cfg.precision))
        Path(args.dump).with_suffix(".json").write_text(json.dumps(M.sidecar_json(cfg.precision), sort_keys=True))
    rr = rank(M, cfg.backend, cfg.precision)
    report = rr.to_json()
    report["shape"] = list(M.shape)
    return _check_certified(report, [rr])


def _defect_for(d: int, n: int, recs, B, cfg: JobConfig):
    if n == 3 and all(r.ade == A(2) for r in recs):
        return defect_triple(d, recs, B, cfg.backend, cfg.precision)
    if n == 2:
        return defect_double(d, recs, B, cfg.backend, cfg.precision)
    if all(r.ade == A(1) for r in recs):
        return defect_nfold(d, n, recs, cfg.backend, cfg.precision)
    raise UnsupportedCover(f"no defect formula for {n}-fold covers with {sorted(inventory_of(recs))}")


def cmd_defect(args, cfg: JobConfig) -> dict:
    if args.cover is None:
        raise InputError("--cover is required")
    B, recs = _records(args, cfg)
    d = B.homogeneous_degree
    if args.degree is not None and args.degree != d:
        raise InputError(f"--degree {args.degree} disagrees with the surface degree {d}")
    res = _defect_for(d, args.cover, recs, B, cfg)
    report = res.to_json()
    report["inventory"] = inventory_of(recs)
    return _check_certified(report, res.ranks)


def cmd_hodge(args, cfg: JobConfig) -> dict:
    if args.cover is None or args.degree is None:
        raise InputError("--cover and --degree are required")
    if args.points in (None, "none"):
        recs, B = [], None
    else:
        B, recs = _records(args, cfg)
        if B.homogeneous_degree != args.degree:
            raise InputError(f"--degree {args.degree} disagrees with the surface degree {B.homogeneous_degree}")
    spec = CoverSpec(args.degree, args.cover, inventory_of(recs))
    res = _defect_for(args.degree, args.cover, recs, B, cfg)
    big = hodge_big_cover(spec, res.delta, res.ranks)
    small = None
    try:
        small = hodge_small(spec, res.ranks)
    except UnsupportedCover:
        pass
    if small is not None:
        checks = [euler_check(small, spec), path_independence_check(spec, small, big)]
        small.checks = checks
        big.checks = checks
    report = {
        "cover": spec.to_json(),
        "defect": res.to_json(),
        "big": big.to_json(),
        "small": small.to_json() if small is not None else None,
    }
    return _check_certified(report, res.ranks)


def cmd_gallery(args, cfg: JobConfig) -> dict:
    if args.name == "list":
        return {"examples": list(EXAMPLE_NAMES)}
    if args.manifest:
        return bundle_manifest(args.name)
    report = run_example(args.name, cfg.precision, cfg.backend)
    if not report["certified"]:
        raise _Uncertified(report)
    return report


COMMANDS = {
    "classify": cmd_classify,
    "rank": cmd_rank,
    "defect": cmd_defect,
    "hodge": cmd_hodge,
    "gallery": cmd_gallery,
}


# ---------------------------------------------------------------------------
# output


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, sort_keys=True)}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, (dict, list)) for x in v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    return "\n".join(_text(report))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION, help="working precision in bits (64..4096)")
    common.add_argument("--backend", choices=("exact", "numeric", "auto"), default="auto")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--surface", help="file with one polynomial in y0..y3 (or y0..y4)")
    common.add_argument("--points", help="JSON array of points or records, or 'none'")
    common.add_argument("--cover", type=int, help="cover degree n")
    common.add_argument("--degree", type=int, help="degree of the branch surface or of the forms")

    parser = argparse.ArgumentParser(prog="adehodge", description="Defects and Hodge numbers of A-D-E threefolds.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="verify and type singular points")
    p = sub.add_parser("rank", parents=[common], help="rank of a condition matrix")
    p.add_argument("--kind", choices=("vanishing",) + SPECIALIZATIONS, default="vanishing")
    p.add_argument("--dump", help="write the matrix as CSV (plus a JSON sidecar)")
    sub.add_parser("defect", parents=[common], help="defect of a cyclic cover")
    sub.add_parser("hodge", parents=[common], help="Hodge numbers of a cyclic cover")
    p = sub.add_parser("gallery", parents=[common], help="reproduce a bundled example")
    p.add_argument("name", help="example name, or 'list'")
    p.add_argument("--manifest", action="store_true", help="print the bundle manifest instead of running it")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    cfg = JobConfig(args.command, args.precision, args.backend, args.format)
    out = sys.stdout
    try:
        report = COMMANDS[args.command](args, cfg)
    except _Uncertified as unc:
        print(render(unc.report, cfg.format), file=out)
        print("error: rank not certified", file=sys.stderr)
        return EXIT_UNDECIDED
    except (AdeHodgeError, OSError) as err:
        cause = err.cause if isinstance(err, StageError) else err
        stage = err.stage if isinstance(err, StageError) else args.command
        code = EXIT_UNDECIDED if isinstance(cause, Undecided) else EXIT_INPUT
        partial = {"error": type(cause).__name__, "message": str(cause), "stage": stage}
        print(render(partial, cfg.format), file=out)
        print(f"error: {stage}: {cause}", file=sys.stderr)
        return code
    print(render(report, cfg.format), file=out)
    return EXIT_OK


__all__ = ["main", "build_parser", "render", "JobConfig"]
