"""``bv``: analyse groups given as construction specs.

    bv analyze "C(3) x C(3)"
    bv structures "C(3) x C(3)" --minimal
    bv fixtures --suite paper-tables
    bv scan --family thm8 --range 7..43
    bv scan --no-div-3
    bv verify --thm 8 --p 7

Exit codes: 0 success, 1 fixture or verification mismatch, 2 parse error,
3 construction error, 4 degenerate input (trivial or not 2-generated).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator

from . import __version__
from .catalog import FAMILIES, PRESETS, Member, expand_presets, family_members, load_fixtures, parse_range
from .core import beauville_dimension, iter_structures
from .dsl import build
from .errors import BeauvilleError, ConstructionError, DegenerateInput, PremiseFailed, SpecError
from .fp import DEFAULT_MAX_COSETS
from .groups import DEFAULT_ORDER_CAP
from .report import (
    analysis_csv,
    analysis_text,
    analyze,
    error_kind,
    run_fixture,
    structures_report,
    to_csv,
    to_json,
)

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_CONSTRUCTION, EXIT_DEGENERATE = range(5)

log = logging.getLogger("beauville")


def _add_common(p: argparse.ArgumentParser, top: bool) -> None:
    # Subcommands repeat the global flags with suppressed defaults, so the
    # flags work on either side of the subcommand name.
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=["text", "json", "csv"], default=d("text"))
    p.add_argument("--threads", type=int, default=d(os.cpu_count() or 1), help="worker count (default: all CPUs)")
    p.add_argument("--max-order", type=int, default=d(None), help=f"order cap (default {DEFAULT_ORDER_CAP})")
    p.add_argument("--max-cosets", type=int, default=d(DEFAULT_MAX_COSETS))
    p.add_argument("--no-timing", action="store_true", default=d(False), help="omit timings from reports")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bv",
        description="Sigma sets, Beauville structures and the Beauville dimension of finite groups.",
        epilog="presets (write @NAME inside a spec, or NAME alone): " + ", ".join(PRESETS),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="order, carriers, d and a witness for one group")
    a.add_argument("spec")
    _add_common(a, top=False)

    s = sub.add_parser("structures", help="list non-derived structures")
    s.add_argument("spec")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--minimal", dest="all", action="store_false", help="only families of size d (default)")
    g.add_argument("--all", dest="all", action="store_true", help="non-derived families of every size")
    s.add_argument("--limit", type=int, default=100)
    _add_common(s, top=False)

    f = sub.add_parser("fixtures", help="run the bundled table fixtures")
    f.add_argument("--suite", default="paper-tables")
    _add_common(f, top=False)

    sc = sub.add_parser("scan", help="compute d over a family of groups")
    sc.add_argument("--family", choices=sorted(FAMILIES))
    sc.add_argument("--range", dest="params", type=parse_range, help="parameter range N or A..B")
    sc.add_argument("--no-div-3", action="store_true", help="only orders coprime to 3; flag any d > 2")
    sc.add_argument("--up-to", type=int, default=1000, help="largest group order scanned (default 1000)")
    _add_common(sc, top=False)

    v = sub.add_parser("verify", help="check a structural theorem against brute force")
    v.add_argument("--thm", required=True, choices=["1", "2", "3", "8", "cor1", "lemma2b", "families"])
    v.add_argument("--g", help="spec of G (thm 1)")
    v.add_argument("--h", help="spec of H (thm 1)")
    v.add_argument("--p", type=int, action="append", help="prime for thm 8 (repeatable)")
    v.add_argument("--k", type=int, default=2, help="largest k for thm 3 (groups C(3^k) x C(3^k))")
    v.add_argument("--spec", help="group for lemma2b")
    v.add_argument("--limit", type=int, default=50)
    _add_common(v, top=False)
    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def _cap(args) -> int:
    return args.max_order or DEFAULT_ORDER_CAP


def _parallel_map(fn: Callable, items: list, threads: int) -> Iterator:
    """Ordered map; results come back in input order whatever the worker count."""
    if threads <= 1 or len(items) <= 1:
        return map(fn, items)
    pool = ProcessPoolExecutor(max_workers=min(threads, len(items)))

    def gen():
        with pool:
            yield from pool.map(fn, items)

    return gen()


# --- commands -------------------------------------------------------------------


def cmd_analyze(args) -> int:
    rep = analyze(
        args.spec, cap=_cap(args), max_cosets=args.max_cosets, workers=args.threads, timing=not args.no_timing
    )
    if args.format == "json":
        _emit(to_json(rep))
    elif args.format == "csv":
        _emit(analysis_csv(rep))
    else:
        _emit(analysis_text(rep))
    return EXIT_OK


def cmd_structures(args) -> int:
    G = build(expand_presets(args.spec), cap=_cap(args), max_cosets=args.max_cosets)
    result = beauville_dimension(G, workers=args.threads)
    families = list(iter_structures(G, minimal_only=not args.all, limit=args.limit))
    rep = structures_report(args.spec, G, result, families)
    if args.format == "json":
        _emit(to_json(rep))
    elif args.format == "csv":
        rows = [
            [i, fam["classification"], j, p["x"], p["y"], p["z"], p["sigma_size"]]
            for i, fam in enumerate(rep["families"])
            for j, p in enumerate(fam["pairs"])
        ]
        _emit(to_csv(["family", "classification", "pair", "x", "y", "z", "sigma_size"], rows))
    else:
        lines = [f"d = {rep['d']}"]
        if rep["blocking_element"] is not None:
            lines.append(f"no structures: {rep['blocking_element']} lies in every carrier")
        for i, fam in enumerate(rep["families"]):
            pairs = "  ".join(f"({p['x']}, {p['y']})" for p in fam["pairs"])
            lines.append(f"[{i}] {fam['classification']:<12} {pairs}")
        _emit("\n".join(lines) + "\n")
    return EXIT_OK


def _fixture_job(job):
    row, cap, max_cosets = job
    return run_fixture(row, cap, max_cosets)


def cmd_fixtures(args) -> int:
    rows = load_fixtures(args.suite)
    jobs = [(r, _cap(args), args.max_cosets) for r in rows]
    results = []
    for res in _parallel_map(_fixture_job, jobs, args.threads):
        results.append(res)
        if args.format == "text":
            status = "PASS" if res["ok"] else "FAIL"
            got = res["error"] or f"d={res['d']} order={res['order']}"
            _emit(f"{status}  expected d={res['expected_d']}  {got:<18} {res['provenance']}\n")
    failures = sum(not r["ok"] for r in results)
    if args.format == "json":
        _emit(to_json({"version": __version__, "suite": args.suite, "passed": failures == 0, "failures": failures, "rows": results}))
    elif args.format == "csv":
        keys = ["expected_d", "d", "expected_order", "order", "ok", "spec", "provenance", "error"]
        _emit(to_csv(keys, [[r[k] if r[k] is not None else "" for k in keys] for r in results]))
    else:
        _emit(f"{len(results) - failures}/{len(results)} fixtures passed\n")
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def _scan_job(job) -> dict:
    member, cap, max_cosets = job
    out = {"family": member.family, "params": list(member.params), "spec": member.spec, "order": member.order}
    try:
        G = build(member.spec, cap=cap, max_cosets=max_cosets)
        r = beauville_dimension(G)
        out.update(d=r.d, sigma_count=r.sigma_count, error=None)
    except (BeauvilleError, KeyError) as exc:
        out.update(d=None, sigma_count=None, error=f"{error_kind(exc)}: {exc}")
    return out


def _scan_members(args) -> list[Member]:
    names = [args.family] if args.family else sorted(FAMILIES)
    if not args.family and not args.no_div_3:
        raise SystemExit("bv scan: give --family, or --no-div-3 to scan every family")
    members: list[Member] = []
    seen = set()
    for name in names:
        for m in family_members(name, args.params, max_order=min(args.up_to, _cap(args))):
            if args.no_div_3 and m.order % 3 == 0:
                continue
            if m.spec not in seen:
                seen.add(m.spec)
                members.append(m)
    return members


def cmd_scan(args) -> int:
    members = _scan_members(args)
    jobs = [(m, _cap(args), args.max_cosets) for m in members]
    keys = ["family", "params", "spec", "order", "d", "sigma_count", "hit", "error"]
    if args.format == "csv":
        _emit(to_csv(keys, []))
    hits = 0
    for res in _parallel_map(_scan_job, jobs, args.threads):
        res["hit"] = bool(args.no_div_3 and res["d"] is not None and res["d"] > 2)
        hits += res["hit"]
        if args.format == "json":
            _emit(to_json(res).replace("\n", "").replace("  ", "") + "\n")
        elif args.format == "csv":
            _emit(to_csv(keys, [[res[k] if res[k] is not None else "" for k in keys]]).split("\n", 1)[1])
        else:
            got = res["error"] or f"d={res['d']}"
            flag = "  <-- d > 2 with order coprime to 3" if res["hit"] else ""
            _emit(f"{res['family']:<11} order {res['order']:>4}  {got:<8} {res['spec']}{flag}\n")
    if args.format == "text":
        summary = f"{len(jobs)} groups scanned"
        if args.no_div_3:
            summary += f", {hits} with d > 2"
        _emit(summary + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verifiers as V

    cap = _cap(args)
    reports: list[V.Report] = []
    if args.thm == "1":
        if not (args.g and args.h):
            raise SystemExit("bv verify --thm 1 needs --g and --h")
        reports.append(V.verify_direct_product(args.g, args.h, cap=cap))
    elif args.thm == "2":
        reports.append(V.verify_abelian_beauville(args.max_order or 100, cap=cap))
    elif args.thm == "3":
        reports.extend(V.verify_order3_census(k, cap=cap) for k in range(1, args.k + 1))
    elif args.thm == "8":
        reports.extend(V.verify_thm8(p, cap=cap) for p in args.p or [7, 13, 19])
    elif args.thm == "cor1":
        reports.append(V.verify_abelian_classification(args.max_order or 100, cap=cap))
    elif args.thm == "lemma2b":
        if not args.spec:
            raise SystemExit("bv verify --thm lemma2b needs --spec")
        reports.append(V.verify_lemma2b(expand_presets(args.spec), limit=args.limit, cap=cap))
    else:
        reports.extend(V.verify_all_families_d4(cap=cap))
    ok = all(r.passed for r in reports)
    if args.format == "json":
        _emit(to_json({"version": __version__, "passed": ok, "reports": [r.to_dict() for r in reports]}))
    elif args.format == "csv":
        rows = [[r.title, c.name, c.expected, c.observed, c.ok] for r in reports for c in r.checks]
        _emit(to_csv(["report", "check", "expected", "observed", "ok"], rows))
    else:
        for r in reports:
            _emit(f"{'PASS' if r.passed else 'FAIL'}  {r.title}\n")
            for c in r.checks:
                mark = "ok " if c.ok else "BAD"
                _emit(f"  {mark} {c.name}: expected {c.expected}, observed {c.observed}\n")
            for note in r.notes:
                _emit(f"  note: {note}\n")
    return EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {
    "analyze": cmd_analyze,
    "structures": cmd_structures,
    "fixtures": cmd_fixtures,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def main(argv: Iterable[str] | None = None) -> int:
    args = build_parser().parse_args(None if argv is None else list(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (SpecError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"bv: parse error: {msg}", file=sys.stderr)
        return EXIT_PARSE
    except ConstructionError as exc:
        print(f"bv: construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except DegenerateInput as exc:
        print(f"bv: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PremiseFailed as exc:
        print(f"bv: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
