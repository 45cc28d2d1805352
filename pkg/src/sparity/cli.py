"""Command-line front end.

Every command prints a self-contained JSON run report to stdout and
writes byte-stable artifact files (sorted keys, no timestamps), so a
rerun with the same inputs and seed reproduces the files exactly.
Timing lives only in the stdout report.

Exit codes: 0 success; 2 argument or file parse error; 3 reserved for
delta overflow (unreachable with arbitrary-precision integers); 4
construction attempts exhausted; 5 precondition failed; 6 search space
too large.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from pathlib import Path

from . import FORMAT_VERSION, __version__
from .codec import (
    constructed_to_json,
    random_fill,
    verify_constructed,
    write_matrix_text,
)
from .errors import (
    AttemptsExhaustedError,
    MaskFormatError,
    PreconditionFailedError,
    SearchSpaceTooLargeError,
    SparityError,
)
from .gf import make_field, next_prime, next_prime_power
from .grs import grs_dual_construct, grs_to_json, mds_verify, window_mask
from .mask import Mask, analyze, k66_mask
from .certificate import (
    bundle_from_json,
    bundle_to_json,
    certificate_search,
    verify_certificate,
)
from .families import (
    FamilySpec,
    best_distance,
    grid,
    grid_result_to_json,
    grid_to_csv,
    grid_to_svg,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DELTA_OVERFLOW = 3  # reserved
EXIT_ATTEMPTS = 4
EXIT_PRECONDITION = 5
EXIT_SEARCH_SPACE = 6


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=1) + "\n")


def _report(command: str, inputs: dict, started: float) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": {},
        "timing_seconds": round(time.time() - started, 3),
        "verification": [],
        "flags": {"truncated": False, "empirical": False, "warnings": []},
    }


def _load_mask(path: str) -> Mask:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return Mask.from_json(text)
    return Mask.from_text(text)


def _write(path: str, content: str) -> None:
    Path(path).write_text(content)


def _analysis_obj(mask: Mask) -> dict:
    from .errors import FieldTooLargeError

    a = analyze(mask)
    try:
        suggested = next_prime(a.delta + 1)
    except FieldTooLargeError:
        suggested = None  # delta itself stays exact; only the hint is capped
    return {
        "m": mask.m,
        "n": mask.n,
        "rho": a.rho,
        "tau": a.tau,
        "dmin_star": a.dmin_star,
        "delta": a.delta,
        "suggested_q": suggested,
        "matching_witness": [list(p) for p in a.matching_witness],
        "violator_witness": list(a.violator_witness) if a.violator_witness else None,
        "zero_code": a.tau == mask.n,
    }


def cmd_analyze(args) -> int:
    started = time.time()
    mask = _load_mask(args.mask)
    rep = _report("analyze", {"mask": args.mask}, started)
    obj = _analysis_obj(mask)
    rep["analysis"] = obj
    if obj["zero_code"]:
        rep["flags"]["warnings"].append("kernel is the zero code (tau = n)")
    rep["timing_seconds"] = round(time.time() - started, 3)
    _emit(rep)
    return EXIT_OK


def cmd_construct(args) -> int:
    started = time.time()
    mask = _load_mask(args.mask)
    a = analyze(mask)
    if args.q == "auto":
        q = next_prime(a.delta + 1)
    else:
        q = int(args.q)
    f = make_field(q)
    rep = _report(
        "construct",
        {"mask": args.mask, "q": q, "seed": args.seed, "attempts": args.attempts},
        started,
    )
    if q <= a.delta:
        rep["flags"]["warnings"].append(
            f"q = {q} <= delta(M) = {a.delta}: generic success is not guaranteed"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        code = random_fill(
            mask, f, seed=args.seed, max_attempts=args.attempts,
            workers=args.threads, analysis=a,
        )
    checks = verify_constructed(code, workers=args.threads)
    rep["verification"] = [{"check": name, "pass": ok} for name, ok in checks]
    rep["result"] = {
        "n": mask.n,
        "dimension": code.dimension,
        "d_min": code.d_min,
        "rank": code.rank,
        "attempts": code.attempts,
    }
    if args.out:
        _write(args.out, constructed_to_json(code))
        rep["outputs"]["code"] = args.out
    if args.matrix_out:
        _write(args.matrix_out, write_matrix_text(code.H))
        rep["outputs"]["matrix"] = args.matrix_out
    rep["timing_seconds"] = round(time.time() - started, 3)
    _emit(rep)
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_ATTEMPTS


def cmd_mds(args) -> int:
    started = time.time()
    if args.window:
        n, m, w = args.window
        mask = window_mask(n, m, w)
        src = f"window({n},{m},{w})"
    else:
        mask = _load_mask(args.mask)
        src = args.mask
    n, m = mask.n, mask.m
    q = next_prime_power(n + m - 1) if args.q == "auto" else int(args.q)
    f = make_field(q)
    rep = _report("mds", {"mask": src, "q": q, "seed": args.seed}, started)
    g = grs_dual_construct(mask, f, seed=args.seed, max_attempts=args.attempts)
    ok, counterexample = mds_verify(g.H)
    rep["verification"] = [
        {"check": "mask_obedience", "pass": g.H.obeys(mask)},
        {"check": "mds_kernel", "pass": ok},
    ]
    rep["result"] = {
        "n": n,
        "m": m,
        "q": q,
        "dimension": n - m,
        "d_min": m + 1 if m < n else n + 1,
        "points": list(g.points),
    }
    if counterexample:
        rep["result"]["counterexample"] = list(counterexample)
    if args.out:
        _write(args.out, grs_to_json(g))
        rep["outputs"]["parity_check"] = args.out
    if args.matrix_out:
        _write(args.matrix_out, write_matrix_text(g.H))
        rep["outputs"]["matrix"] = args.matrix_out
    rep["timing_seconds"] = round(time.time() - started, 3)
    _emit(rep)
    return EXIT_OK if ok else EXIT_PRECONDITION


def cmd_grid(args) -> int:
    started = time.time()
    rep = _report(
        "grid",
        {
            "n": args.n,
            "family": args.family,
            "cyclic_mode": args.cyclic_mode,
            "cell": args.cell,
            "max_masks": args.max_masks,
        },
        started,
    )
    # single-cell runs are exact by default; full grids get a per-cell
    # ceiling so heavy cells come back flagged truncated instead of hanging
    ceiling = args.max_masks
    if ceiling == 0:
        ceiling = None
    elif ceiling is None and not args.cell:
        ceiling = 200_000
    if args.cell:
        m, w = args.cell
        spec = FamilySpec(
            args.n, m, w, args.family, args.cyclic_mode, not args.no_canonicalization
        )
        cell = best_distance(spec, max_masks=ceiling)
        rep["result"] = {
            "m": m,
            "w": w,
            "D": cell.D,
            "count_optimal": cell.count_optimal,
            "truncated": cell.truncated,
            "masks_examined": cell.masks_examined,
            "argmax": cell.argmax.to_json_obj() if cell.argmax else None,
        }
        rep["flags"]["truncated"] = cell.truncated
    else:
        g = grid(
            args.n,
            args.family,
            m_range=range(args.m_min, (args.m_max or args.n) + 1),
            w_range=range(args.w_min, (args.w_max or args.n) + 1),
            cyclic_mode=args.cyclic_mode,
            canonicalization=not args.no_canonicalization,
            max_masks_per_cell=ceiling,
        )
        csv = grid_to_csv(g)
        if args.out:
            _write(args.out, csv)
            rep["outputs"]["csv"] = args.out
        else:
            rep["csv"] = csv
        if args.svg:
            _write(args.svg, grid_to_svg(g))
            rep["outputs"]["svg"] = args.svg
        if args.json_out:
            _write(args.json_out, grid_result_to_json(g))
            rep["outputs"]["json"] = args.json_out
        rep["flags"]["truncated"] = any(c.truncated for c in g.cells.values())
    rep["timing_seconds"] = round(time.time() - started, 3)
    _emit(rep)
    return EXIT_OK


def cmd_cert(args) -> int:
    started = time.time()
    if args.cert_action == "verify":
        bundle = bundle_from_json(Path(args.bundle).read_text())
        ok, failures = verify_certificate(bundle)
        rep = _report("cert verify", {"bundle": args.bundle}, started)
        names = ["mask_obedience", "distinct_points", "rank_H", "rank_A", "factorization"]
        rep["verification"] = [
            {"check": nm, "pass": nm not in failures} for nm in names
        ]
        rep["result"] = {"ok": ok, "r": bundle.r, "distance_certified": bundle.r + 1 if ok else None}
        rep["timing_seconds"] = round(time.time() - started, 3)
        _emit(rep)
        return EXIT_OK
    mask = _load_mask(args.mask)
    f = make_field(args.q)
    rep = _report(
        "cert search",
        {
            "mask": args.mask,
            "r": args.r,
            "q": args.q,
            "mode": args.mode,
            "budget": args.budget,
            "seed": args.seed,
        },
        started,
    )
    res = certificate_search(
        mask, f, args.r, budget=args.budget, seed=args.seed, mode=args.mode,
        max_work=args.ceiling,
    )
    rep["result"] = {
        "status": res.status,
        "attempts": res.attempts,
        "notes": list(res.notes),
    }
    rep["flags"]["empirical"] = res.empirical
    if res.status == "none_budget":
        rep["flags"]["warnings"].append(
            "empirical result only: heuristic search cannot prove nonexistence"
        )
    if res.bundle is not None:
        ok, failures = verify_certificate(res.bundle)
        rep["verification"] = [{"check": "bundle_reverify", "pass": ok}]
        if args.out:
            _write(args.out, bundle_to_json(res.bundle))
            rep["outputs"]["bundle"] = args.out
        else:
            rep["bundle"] = json.loads(bundle_to_json(res.bundle))
    rep["timing_seconds"] = round(time.time() - started, 3)
    _emit(rep)
    return EXIT_OK


def cmd_k66(args) -> int:
    started = time.time()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    mask = k66_mask()
    rep = _report("k66", {"q": args.q, "seed": args.seed, "out": args.out}, started)
    obj = _analysis_obj(mask)
    a = analyze(mask)
    q = next_prime(a.delta + 1) if args.q == "auto" else int(args.q)
    f = make_field(q)
    _write(str(outdir / "k66.mask"), mask.to_text())
    _write(str(outdir / "analysis.json"), json.dumps(obj, sort_keys=True, indent=1) + "\n")
    rep["outputs"]["mask"] = str(outdir / "k66.mask")
    rep["outputs"]["analysis"] = str(outdir / "analysis.json")
    if q <= a.delta:
        rep["flags"]["warnings"].append(
            f"q = {q} <= delta(M) = {a.delta}: generic success is not guaranteed"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        code = random_fill(mask, f, seed=args.seed, max_attempts=args.attempts,
                           workers=args.threads, analysis=a)
    checks = verify_constructed(code, workers=args.threads)
    _write(str(outdir / "code.json"), constructed_to_json(code))
    rep["outputs"]["code"] = str(outdir / "code.json")
    probe = certificate_search(
        mask, make_field(args.probe_q), 5, budget=args.probe_budget,
        seed=args.seed, mode="heuristic",
    )
    probe_obj = {
        "q": args.probe_q,
        "r": 5,
        "budget": args.probe_budget,
        "status": probe.status,
        "attempts": probe.attempts,
        "notes": list(probe.notes),
        "empirical": probe.empirical,
    }
    _write(
        str(outdir / "certificate_probe.json"),
        json.dumps(probe_obj, sort_keys=True, indent=1) + "\n",
    )
    rep["outputs"]["certificate_probe"] = str(outdir / "certificate_probe.json")
    rep["verification"] = (
        [{"check": "analysis_values", "pass": (a.rho, a.tau, a.dmin_star) == (12, 5, 6)}]
        + [{"check": f"construction_{name}", "pass": ok} for name, ok in checks]
        + [{"check": "probe_found_no_certificate", "pass": probe.status != "found"}]
    )
    rep["flags"]["empirical"] = True
    rep["result"] = {
        "analysis": {"rho": a.rho, "tau": a.tau, "dmin_star": a.dmin_star, "delta": a.delta},
        "code": {"q": q, "dimension": code.dimension, "d_min": code.d_min, "attempts": code.attempts},
        "probe": probe_obj,
    }
    rep["timing_seconds"] = round(time.time() - started, 3)
    _emit(rep)
    ok_all = all(item["pass"] for item in rep["verification"])
    return EXIT_OK if ok_all else EXIT_ATTEMPTS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sparity",
        description="Support-constrained parity-check analysis and constructions",
    )
    p.add_argument(
        "--version", action="version",
        version=f"sparity {__version__} (format {FORMAT_VERSION})",
    )
    p.add_argument(
        "--threads", type=int,
        default=int(os.environ.get("SPARITY_THREADS", "1")),
        help="worker count for subset verification (default SPARITY_THREADS or 1)",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    pa = sub.add_parser("analyze", help="structural analysis of a mask file")
    pa.add_argument("mask")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("construct", help="randomized optimal-distance filling")
    pc.add_argument("mask")
    pc.add_argument("--q", default="auto", help="field order or 'auto' (next prime above delta)")
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--attempts", type=int, default=25)
    pc.add_argument("--out", default=None)
    pc.add_argument("--matrix-out", dest="matrix_out", default=None,
                    help="also write H in the plain matrix text format")
    pc.set_defaults(func=cmd_construct)

    pm = sub.add_parser("mds", help="GRS parity check in the MDS regime")
    pm.add_argument("mask", nargs="?", default=None)
    pm.add_argument("--window", nargs=3, type=int, metavar=("N", "M", "W"))
    pm.add_argument("--q", default="auto", help="field order or 'auto' (prime power >= n+m-1)")
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--attempts", type=int, default=200)
    pm.add_argument("--out", default=None)
    pm.add_argument("--matrix-out", dest="matrix_out", default=None,
                    help="also write H in the plain matrix text format")
    pm.set_defaults(func=cmd_mds)

    pg = sub.add_parser("grid", help="distance grids over structured families")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--family", choices=("regular", "cyclic", "balanced_cyclic"), required=True)
    pg.add_argument("--cyclic-mode", dest="cyclic_mode",
                    choices=("consecutive_shifts", "all_shift_multisets"),
                    default="consecutive_shifts")
    pg.add_argument("--cell", nargs=2, type=int, metavar=("M", "W"))
    pg.add_argument("--m-min", type=int, default=1)
    pg.add_argument("--m-max", type=int, default=None)
    pg.add_argument("--w-min", type=int, default=1)
    pg.add_argument("--w-max", type=int, default=None)
    pg.add_argument("--max-masks", type=int, default=None,
                    help="per-cell work ceiling; exceeded cells are flagged "
                    "truncated (default: unbounded for --cell, 200000 for "
                    "full grids; 0 = unbounded)")
    pg.add_argument("--no-canonicalization", action="store_true")
    pg.add_argument("--out", default=None)
    pg.add_argument("--svg", default=None)
    pg.add_argument("--json-out", default=None)
    pg.set_defaults(func=cmd_grid)

    pcert = sub.add_parser("cert", help="Vandermonde certificate verify/search")
    certsub = pcert.add_subparsers(dest="cert_action", required=True)
    pv = certsub.add_parser("verify")
    pv.add_argument("bundle")
    pv.set_defaults(func=cmd_cert)
    ps = certsub.add_parser("search")
    ps.add_argument("mask")
    ps.add_argument("--r", type=int, required=True)
    ps.add_argument("--q", type=int, required=True)
    ps.add_argument("--mode", choices=("exhaustive", "heuristic"), default="heuristic")
    ps.add_argument("--budget", type=int, default=10000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--ceiling", type=int, default=2_000_000)
    ps.add_argument("--out", default=None)
    ps.set_defaults(func=cmd_cert)

    pk = sub.add_parser("k66", help="one-shot demonstration suite")
    pk.add_argument("--q", default="auto")
    pk.add_argument("--seed", type=int, default=0)
    pk.add_argument("--attempts", type=int, default=25)
    pk.add_argument("--probe-q", type=int, default=8)
    pk.add_argument("--probe-budget", type=int, default=1000)
    pk.add_argument("--out", required=True)
    pk.set_defaults(func=cmd_k66)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "mds" and not args.window and not args.mask:
        parser.error("mds requires a mask file or --window N M W")
    try:
        return args.func(args)
    except MaskFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, IsADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionFailedError as e:
        print(f"error: precondition failed: {e}", file=sys.stderr)
        if getattr(e, "violator", None):
            print(f"violating column set: {list(e.violator)}", file=sys.stderr)
        return EXIT_PRECONDITION
    except AttemptsExhaustedError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.diagnostics:
            print(f"diagnostics: {json.dumps(e.diagnostics, sort_keys=True, default=str)}", file=sys.stderr)
        return EXIT_ATTEMPTS
    except SearchSpaceTooLargeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SEARCH_SPACE
    except SparityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
