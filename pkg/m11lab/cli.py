"""m11lab command line.

Every command prints compact JSON lines on stdout (one per candidate for
search-lambda, one per figure for plot) and exits 0; domain errors exit 2,
failed certifications 3 and exhausted searches 4, with
{"error", "detail", "command"} on stdout.
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import mpmath

from . import cm_points, config, reduction_lab, ring_f0, schemas, triangle_group
from .cyclotomic import klein_J
from .errors import DomainError, InvariantViolation, M11Error, SearchExhausted

logger = logging.getLogger("m11lab")

EXIT_CODES = {DomainError: 2, InvariantViolation: 3, SearchExhausted: 4}


class CertificationFailed(InvariantViolation):
    pass


def _setup_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"{text!r} is not a rational number") from e


def _j_value(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return ring_f0.parse(text)


def _emit(args, payload) -> None:
    if hasattr(payload, "model_dump"):
        payload = payload.model_dump()
    text = json.dumps(payload, separators=(",", ":"))
    if getattr(args, "out", None) and args.command != "plot":
        Path(args.out).write_text(text + "\n")
    print(text)


def _open_cache():
    if config.settings.M11_CACHE_DIR in ("", "none"):
        return None
    from sqlalchemy.orm import sessionmaker

    from .count_cache import CountCache
    from .database import get_database_engine, initialize_database

    engine = get_database_engine(config.settings.database_url())
    initialize_database(bind=engine)
    return CountCache(sessionmaker(autocommit=False, autoflush=False, bind=engine)())


# Geometry


def cmd_certify_group(args) -> None:
    relations = triangle_group.certify_relations()
    failed = [name for name, ok in relations.items() if not ok]
    if failed:
        raise CertificationFailed(f"relations failed: {failed}")
    _emit(args, schemas.RelationsResponse(status="success", relations=relations, certified=True))


def cmd_fixed_points(args) -> None:
    fixed = triangle_group.special_fixed_points()
    points = [schemas.PointRecord.from_point(name, z) for name, z in fixed.items()]
    P, Q, R = fixed["P"], fixed["Q"], fixed["R"]
    area = triangle_group.triangle_area()
    tol = triangle_group.tolerance()
    angles = {
        "P": (triangle_group.vertex_angle(P, Q, R), mpmath.pi / 10),
        "Q": (triangle_group.vertex_angle(Q, R, P), mpmath.pi / 3),
        "R": (triangle_group.vertex_angle(R, P, Q), mpmath.pi / 2),
    }
    failed = [name for name, (got, want) in angles.items() if abs(got - want) > tol]
    if abs(area - mpmath.pi / 15) > tol:
        failed.append("area")
    if failed:
        raise CertificationFailed(f"fixed point triangle checks failed: {failed}")
    _emit(args, {
        "status": "success",
        "points": [p.model_dump() for p in points],
        "area": schemas.format_number(area),
        "certified": True,
    })


def cmd_forms(args) -> None:
    forms = [schemas.FormRecord.from_form(f) for f in cm_points.FORMS.values()]
    _emit(args, schemas.FormListResponse(status="success", forms=forms))


def _parse_S(items: Optional[Sequence[str]]) -> List[ring_f0.F0Elem]:
    return [ring_f0.parse(s) for s in items or ()]


def cmd_search_lambda(args) -> None:
    found = cm_points.lambda_search(
        args.norm_bound or config.settings.M11_NORM_BOUND,
        S=_parse_S(args.S),
        box=config.settings.M11_BOX,
        workers=config.settings.M11_WORKERS,
    )
    lines = [schemas.LambdaRecord.from_candidate(c).model_dump_json() for c in found]
    text = "\n".join(lines)
    if args.out:
        Path(args.out).write_text(text + "\n" if text else "")
    if text:
        print(text)


def cmd_cm_locate(args) -> None:
    lam = ring_f0.parse(args.lam)
    points = cm_points.locate_cm_points(lam, config.settings.M11_BOX)
    _emit(args, {
        "schema_version": cm_points.SCHEMA_VERSION,
        "points": [schemas.CMPointRecord.from_point(lam, cm).model_dump() for cm in points],
    })


def cmd_density(args) -> None:
    if args.params:
        items = [float(x) for x in args.params]
    else:
        items = cm_points.lambda_search(
            args.norm_bound or config.settings.M11_NORM_BOUND,
            box=config.settings.M11_BOX,
            workers=config.settings.M11_WORKERS,
        )
    result = cm_points.density_diagnostic(items, bins=args.bins, box=config.settings.M11_BOX)
    _emit(args, schemas.DensityRecord(**result))


def cmd_plot(args) -> None:
    from . import plotting

    if not (args.triangle or args.geodesic):
        raise DomainError("plot needs --triangle or --geodesic")
    out = Path(args.out or ".")
    if args.triangle:
        _emit(args, {"figure": "triangle", "file": str(plotting.plot_triangle(out / "triangle.svg"))})
    if args.geodesic:
        extra = []
        if args.lam:
            lam = ring_f0.parse(args.lam)
            for cm in cm_points.locate_cm_points(lam, config.settings.M11_BOX):
                extra.append((cm.order_tag.value, cm.point))
        _emit(args, {"figure": "geodesic", "file": str(plotting.plot_geodesic(out / "geodesic.svg", extra))})


# Reduction


def cmd_count(args) -> None:
    t = _rational(args.t)
    n = reduction_lab.count_points(t, args.q)
    _emit(args, schemas.CountRecord(t=str(t), q=args.q, count=n))


def cmd_lpoly(args) -> None:
    t = _rational(args.t)
    L = reduction_lab.l_polynomial(t, args.p, method=args.method)
    _emit(args, schemas.LPolyRecord.from_lpoly(t, L))


def cmd_newton(args) -> None:
    t = _rational(args.t)
    L = reduction_lab.l_polynomial(t, args.p, method=args.method)
    polygon = reduction_lab.newton_polygon(L)
    _emit(args, schemas.NewtonRecord.from_polygon(t, polygon, reduction_lab.classify_np(polygon)))


def cmd_scan_basic(args) -> None:
    t = _rational(args.t)
    klein_J(t)
    cache = None if args.no_cache else _open_cache()
    report = reduction_lab.scan_basic(
        t,
        args.p_bound or config.settings.M11_PMAX,
        workers=config.settings.M11_WORKERS,
        cache=cache,
    )
    _emit(args, schemas.ScanReportRecord.from_report(report))


def cmd_census(args) -> None:
    ts = [_rational(t) for t in args.t]
    for t in ts:
        klein_J(t)
    cache = None if args.no_cache else _open_cache()
    census = reduction_lab.basic_prime_census(
        ts,
        args.p_bound or config.settings.M11_PMAX,
        workers=config.settings.M11_WORKERS,
        cache=cache,
    )
    _emit(args, schemas.CensusRecord.from_census(census))


def cmd_hypotheses(args) -> None:
    J = _j_value(args.J)
    h = reduction_lab.theorem_hypotheses(J)
    _emit(args, schemas.HypothesesRecord.from_hypotheses(J, h))


def cmd_st_predict(args) -> None:
    lam = ring_f0.parse(args.lam)
    rows = reduction_lab.st_predict_above(lam, args.p)
    _emit(args, {
        "lam": str(lam),
        "p": args.p,
        "primes": [{"prime": str(pi), "prediction": pred.value} for pi, pred in rows],
    })


def cmd_cache_export(args) -> None:
    cache = _open_cache()
    if cache is None:
        raise DomainError("no cache configured")
    n = cache.export_csv(args.path)
    _emit(args, {"status": "success", "rows": n, "path": args.path})


def cmd_cache_import(args) -> None:
    cache = _open_cache()
    if cache is None:
        raise DomainError("no cache configured")
    n = cache.import_csv(args.path)
    _emit(args, {"status": "success", "added": n, "path": args.path})


COMMANDS: Dict[str, Callable] = {
    "certify-group": cmd_certify_group,
    "fixed-points": cmd_fixed_points,
    "forms": cmd_forms,
    "search-lambda": cmd_search_lambda,
    "cm-locate": cmd_cm_locate,
    "density": cmd_density,
    "plot": cmd_plot,
    "count": cmd_count,
    "lpoly": cmd_lpoly,
    "newton": cmd_newton,
    "scan-basic": cmd_scan_basic,
    "census": cmd_census,
    "hypotheses": cmd_hypotheses,
    "st-predict": cmd_st_predict,
    "cache-export": cmd_cache_export,
    "cache-import": cmd_cache_import,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="mpmath decimal digits (M11_PRECISION)")
    common.add_argument("--box", type=int, help="coefficient box for norm-equation searches (M11_BOX)")
    common.add_argument("--workers", type=int, help="worker processes (M11_WORKERS)")
    common.add_argument("--cache-dir", dest="cache_dir", help="count cache directory (M11_CACHE_DIR)")
    common.add_argument("--out", help="also write the JSON output to this file; for plot, the SVG directory")
    common.add_argument("--json", action="store_true", help="JSON lines on stdout; this is the only output format")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="m11lab", description="Verification toolkit for the M[11] Shimura curve")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("certify-group", parents=[common], help="check the triangle group relations exactly")
    sub.add_parser("fixed-points", parents=[common], help="fixed points of A_P, A_Q, A_R and the triangle area")
    sub.add_parser("forms", parents=[common], help="the quadratic forms q_QR, q_QP, q_PR")

    p = sub.add_parser("search-lambda", parents=[common], help="admissible CM discriminants, as JSON lines")
    p.add_argument("--norm-bound", type=int, dest="norm_bound")
    p.add_argument("--S", nargs="*", help="primes of Z[u] that must split in F0(sqrt(-lambda))")

    p = sub.add_parser("cm-locate", parents=[common], help="the two CM points on G_QP for lambda")
    p.add_argument("--lambda", dest="lam", required=True)

    p = sub.add_parser("density", parents=[common], help="histogram of CM parameters along G_QP")
    p.add_argument("--norm-bound", type=int, dest="norm_bound")
    p.add_argument("--params", nargs="*", help="explicit geodesic parameters instead of a search")
    p.add_argument("--bins", type=int, default=10)

    p = sub.add_parser("plot", parents=[common], help="SVG of the fundamental triangle or of G_QP")
    p.add_argument("--triangle", action="store_true")
    p.add_argument("--geodesic", action="store_true")
    p.add_argument("--lambda", dest="lam", help="also mark the CM points of this lambda on G_QP")

    p = sub.add_parser("count", parents=[common], help="#C_t(F_q)")
    p.add_argument("--t", required=True)
    p.add_argument("--q", type=int, required=True)

    for name, help_text in (("lpoly", "L-polynomial of C_t over F_p"), ("newton", "Newton polygon of C_t at p")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--t", required=True)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--method", choices=["auto", "counts", "characters"], default="auto")

    p = sub.add_parser("scan-basic", parents=[common], help="classify C_t at every good prime below a bound")
    p.add_argument("--t", required=True)
    p.add_argument("--pmax", "--p-bound", type=int, dest="p_bound", help="primes below this bound (M11_PMAX)")
    p.add_argument("--no-cache", action="store_true", dest="no_cache")

    p = sub.add_parser("census", parents=[common], help="scan several t and tally labels by p mod 5")
    p.add_argument("--t", nargs="+", required=True)
    p.add_argument("--pmax", "--p-bound", type=int, dest="p_bound", help="primes below this bound (M11_PMAX)")
    p.add_argument("--no-cache", action="store_true", dest="no_cache")

    p = sub.add_parser("hypotheses", parents=[common], help="basic-reduction hypotheses for J")
    p.add_argument("--J", required=True)

    p = sub.add_parser("st-predict", parents=[common], help="residue-symbol prediction at the primes above p")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("cache-export", parents=[common], help="write the count cache as checksummed CSV")
    p.add_argument("path")
    p = sub.add_parser("cache-import", parents=[common], help="load a checksummed CSV into the count cache")
    p.add_argument("path")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    config.override(
        M11_PRECISION=args.precision,
        M11_BOX=args.box,
        M11_WORKERS=args.workers,
        M11_CACHE_DIR=args.cache_dir,
    )
    try:
        COMMANDS[args.command](args)
    except M11Error as e:
        code = next((c for cls, c in EXIT_CODES.items() if isinstance(e, cls)), 1)
        logger.error("%s failed: %s", args.command, e)
        print(schemas.ErrorResponse(error=type(e).__name__, detail=str(e), command=args.command).model_dump_json())
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
