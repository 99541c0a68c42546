"""Command-line entry point.

Every command prints one JSON document on stdout (``--pretty`` indents it,
``--table`` prints a short human summary instead).  Errors go to stderr as
JSON.  Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 engine
error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .affinization import (
    FAMILIES,
    SUITES,
    CharacterEngine,
    ModuleLabel,
    dual_equation,
    highest_weight,
    make_equation,
    suite_instances,
    verify_equation,
    verify_table1,
)
from .cartan import build_cartan
from .cluster import (
    ALGEBRAS,
    DEFAULT_PAYLOAD_BUDGET,
    build_initial_seed,
    classify_record,
    compile_schedule,
    families_for,
    run_schedule,
)
from .errors import (
    ConstraintViolated,
    InvalidLabel,
    InvalidRank,
    QClusterError,
    Unsupported,
    WindowTooSmall,
)
from .qchar import CACHE_ENV, CharacterCache, TruncationRegion, iota_monomial, is_anti_special, is_special

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3
USAGE_ERRORS = (InvalidLabel, InvalidRank, ConstraintViolated, Unsupported, WindowTooSmall)

# rank-4 suite members are checked on the certified region rather than in full
def suite_region(name: str, n: int):
    if name in ("c4-examples", "c3-dual-examples") and n >= 4:
        return "auto"
    return None


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _k(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad multiplicity vector {text!r}") from exc


def _cache(args) -> CharacterCache | None:
    if args.no_cache:
        return None
    return CharacterCache(args.cache_dir)


def _engine(args, n: int) -> CharacterEngine:
    return CharacterEngine(build_cartan(n), _cache(args), args.budget)


def _region(text: str | None):
    if text is None or text == "none":
        return None
    if text == "auto":
        return "auto"
    try:
        return TruncationRegion.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad truncation {text!r}") from exc


def _label(text: str, n: int | None) -> ModuleLabel:
    label = ModuleLabel.parse(text)
    if n is not None and label.variant != "sl2" and label.n != n:
        raise InvalidLabel(f"label {text} has rank {label.n}, expected {n}")
    return label


def _report_one(job) -> dict:
    """Worker: verify one catalog instance; returns a JSON-ready dict."""
    family, n, s, k, region, mode, budget, cache_dir, no_cache = job
    cache = None if no_cache else CharacterCache(cache_dir)
    engine = CharacterEngine(build_cartan(n), cache, budget)
    eq = make_equation(family, n, s, k)
    if mode == "table1":
        res = verify_table1(eq, engine, region or "auto")
        return {"equation": eq.to_dict(), "verdict": "table1" if res["ok"] else "fail", "table1": res}
    rep = verify_equation(eq, engine, region)
    out = rep.to_dict()
    out.pop("seconds", None)
    return out


# ---------------------------------------------------------------- commands


def cmd_cartan(args) -> tuple:
    cd = build_cartan(args.n)
    out = cd.to_dict()
    out["fingerprint"] = cd.fingerprint()
    return out, EXIT_OK


def cmd_hw(args) -> tuple:
    label = _label(args.label, args.n)
    cd = build_cartan(args.n or (1 if label.variant == "sl2" else label.n))
    hw = highest_weight(label, cd)
    out = {"label": label.to_text(), "highest_weight": hw.to_text(), "mirror": label.mirror().to_text()}
    return out, EXIT_OK


def cmd_qchar(args) -> tuple:
    label = _label(args.label, args.n)
    engine = _engine(args, args.n)
    region = _region(args.trunc)
    if region == "auto":
        from .affinization import auto_region

        region = auto_region(engine.cd, highest_weight(label, engine.cd))
    q = engine.character(label, region)
    out = {
        "label": label.to_text(),
        "route": engine.route(label),
        "terms": len(q),
        "complete": q.complete,
        "dominant": [[m.to_text(), c] for m, c in q.dominant_monomials()],
        "special": is_special(q, engine.cd),
        "anti_special": is_anti_special(q, engine.cd),
    }
    if not args.summary:
        out["character"] = q.to_dict()
    return out, EXIT_OK


def _custom_jobs(args) -> list:
    if not (args.family and args.n and args.k is not None):
        raise UsageError("custom verification needs --family, --n and --k")
    return [(args.family, args.n, args.s, _k(args.k))]


def cmd_verify(args) -> tuple:
    if args.suite:
        if args.suite not in SUITES:
            raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
        specs = SUITES[args.suite]
        region = _region(args.trunc) if args.trunc else None
        name = args.suite
    else:
        specs = _custom_jobs(args)
        make_equation(*specs[0])
        region = _region(args.trunc)
        name = "custom"
    mode = "table1" if name == "table1-sample" else "identity"
    jobs = []
    for f, n, s, k in specs:
        where = region if region is not None or args.trunc else suite_region(name, n)
        jobs.append((f, n, s, k, where, mode, args.budget, args.cache_dir, args.no_cache))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_report_one, jobs))
    else:
        reports = [_report_one(j) for j in jobs]
    passed = all(r["verdict"] in ("exact", "regional/certified", "table1") for r in reports)
    out = {"suite": name, "passed": passed, "count": len(reports), "reports": reports}
    code = EXIT_OK if passed else EXIT_FAIL
    if args.golden:
        with open(args.golden) as fh:
            golden = json.load(fh)
        out["golden_match"] = golden == json.loads(json.dumps(out, sort_keys=True))
        if not out["golden_match"]:
            code = EXIT_FAIL
    return out, code


def cmd_dual(args) -> tuple:
    if args.label:
        label = _label(args.label, args.n)
        n = label.n
        hw = highest_weight(label)
        out = {
            "label": label.to_text(),
            "mirror": label.mirror().to_text(),
            "iota_highest_weight": iota_monomial(hw, n).to_text(),
            "mirror_lowest_weight": iota_monomial(highest_weight(label.mirror()), n).to_text(),
        }
        return out, EXIT_OK
    eq = make_equation(*_custom_jobs(args)[0])
    return {"equation": eq.to_dict(), "dual": dual_equation(eq).to_dict()}, EXIT_OK


def cmd_seed(args) -> tuple:
    seed = build_initial_seed(args.algebra, build_cartan(args.n), args.depth)
    if args.dot:
        return seed.to_dot(), EXIT_OK
    return seed.to_dict(), EXIT_OK


def _schedule(args):
    cd = build_cartan(args.n)
    k = _k(args.k)
    if len(k) != args.n:
        raise UsageError(f"--k needs {args.n} entries")
    return cd, compile_schedule(args.case, cd, k, args.depth, args.algebra)


def cmd_schedule(args) -> tuple:
    _, sched = _schedule(args)
    return sched.to_dict(), EXIT_OK


def cmd_replay(args) -> tuple:
    cd, sched = _schedule(args)
    engine = _engine(args, args.n) if args.payloads else None
    seed = build_initial_seed(args.algebra, cd, sched.depth)
    _, records = run_schedule(seed, sched, engine, args.payload_budget)
    families = families_for(args.algebra)
    rows = []
    counts = {"msystem": 0, "tsys": 0, "unmatched": 0, "untrusted": 0}
    payload_ok = True
    for rec in records:
        row = rec.to_dict(cd.rank)
        if not rec.trusted:
            counts["untrusted"] += 1
            row["match"] = None
            rows.append(row)
            continue
        hit = classify_record(rec, cd, families)
        row["match"] = hit.to_dict() if hit else None
        counts[hit.kind if hit else "unmatched"] += 1
        if rec.payload_status == "exact":
            label = rec.new.label(cd.rank)
            same = label is not None and engine.character(label).poly == rec.new.payload
            row["payload_matches_label"] = same
            payload_ok = payload_ok and same
        rows.append(row)
    allowed = ("msystem",) if args.strict else ("msystem", "tsys")
    matched = all(r["match"] and r["match"]["kind"] in allowed for r in rows if r["trusted"])
    out = {
        "schedule": sched.to_dict(),
        "counts": counts,
        "all_matched": matched,
        "payloads_ok": payload_ok,
        "records": rows,
    }
    return out, EXIT_OK if matched and payload_ok else EXIT_FAIL


def cmd_cache(args) -> tuple:
    cache = CharacterCache(args.cache_dir)
    if cache.directory is None:
        raise UsageError(f"no cache directory; pass --cache-dir or set {CACHE_ENV}")
    if args.action == "clear":
        return {"directory": str(cache.directory), "removed": cache.clear()}, EXIT_OK
    files = cache.entries()
    size = sum(f.stat().st_size for f in files)
    return {"directory": str(cache.directory), "entries": len(files), "bytes": size}, EXIT_OK


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser):
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    p.add_argument("--json", action="store_true", help="compact JSON output (the default)")
    p.add_argument("--table", action="store_true", help="short human-readable summary")
    p.add_argument("--budget", type=int, default=None, help="max monomials per FM run (default: none)")
    p.add_argument("--no-cache", action="store_true", help="bypass the character cache")
    p.add_argument("--cache-dir", default=None, help=f"cache directory (default: ${CACHE_ENV})")


def _equation_args(p: argparse.ArgumentParser):
    p.add_argument("--family", choices=FAMILIES, default=None, help="equation family")
    p.add_argument("--n", type=int, default=None, help="rank")
    p.add_argument("--s", type=int, default=0, help="family shift (default: 0)")
    p.add_argument("--k", default=None, help="second left factor multiplicities, e.g. 1,0,1")


def _schedule_args(p: argparse.ArgumentParser):
    p.add_argument("--case", type=int, choices=(1, 2), required=True, help="mutation sequence case")
    p.add_argument("--k", required=True, help="multiplicities, e.g. 1,0,1")
    p.add_argument("--n", type=int, default=3, help="rank (default: 3)")
    p.add_argument("--depth", type=int, default=12, help="window depth in rows (default: 12)")
    p.add_argument("--algebra", choices=ALGEBRAS, default="A", help="primal or dual algebra (default: A)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcluster", description="q-characters, M-systems and cluster mutations in type C")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cartan", help="Cartan data of type C_n (sl2 for n = 1)")
    p.add_argument("--n", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("hw", help="highest weight of a label")
    p.add_argument("--label", required=True, help="VARIANT:s:k1,...,kn")
    p.add_argument("--n", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_hw)

    p = sub.add_parser("qchar", help="q-character of a label")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--label", required=True, help="VARIANT:s:k1,...,kn (sl2:s:k for n = 1)")
    p.add_argument("--trunc", default=None, help="none, auto, 's<=B' or 'i:B,...' (default: none)")
    p.add_argument("--summary", action="store_true", help="omit the character itself")
    _common(p)
    p.set_defaults(func=cmd_qchar)

    p = sub.add_parser("verify", help="verify a suite or a single catalog equation")
    p.add_argument("--suite", default=None, help=f"one of {sorted(SUITES)}")
    _equation_args(p)
    p.add_argument("--trunc", default=None, help="none, auto or a region (default: per suite)")
    p.add_argument("--golden", default=None, help="compare the report with this JSON file")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default: 1)")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="mirror a label or dualize a catalog equation")
    p.add_argument("--label", default=None)
    _equation_args(p)
    _common(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("seed", help="initial seed of A or Atilde")
    p.add_argument("--algebra", choices=ALGEBRAS, default="A")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--dot", action="store_true", help="GraphViz output instead of JSON")
    _common(p)
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("schedule", help="compile a Case 1 / Case 2 mutation schedule")
    _schedule_args(p)
    _common(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("replay", help="run a schedule and match its exchange relations")
    _schedule_args(p)
    p.add_argument("--payloads", action="store_true", help="carry characters and divide exactly")
    p.add_argument("--payload-budget", type=int, default=DEFAULT_PAYLOAD_BUDGET,
                   help=f"max term pairs per exchange product (default: {DEFAULT_PAYLOAD_BUDGET})")
    p.add_argument("--strict", action="store_true", help="require M-system matches only")
    _common(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("cache", help="inspect or clear the character cache")
    p.add_argument("action", choices=("info", "clear"))
    _common(p)
    p.set_defaults(func=cmd_cache)
    return parser


def _table(out) -> str:
    if isinstance(out, str):
        return out
    lines = []
    if "reports" in out:
        for r in out["reports"]:
            eq = r["equation"]
            lines.append(f"{r['verdict']:<20} {eq['family']:<9} n={eq['n']} s={eq['s']} k={','.join(map(str, eq['k']))}")
        lines.append(f"passed: {out['passed']}")
    elif "records" in out:
        for r in out["records"]:
            m = r.get("match")
            tag = f"{m['kind']}:{m['family']}" if m else ("untrusted" if not r["trusted"] else "unmatched")
            lines.append(f"{r['step']:>3} {str(tuple(r['vertex'])):<10} {r['old']['hw']:<28} -> {r['new']['hw']:<28} {tag}")
        lines.append(f"counts: {out['counts']}")
    else:
        for key, value in out.items():
            if key != "character":
                lines.append(f"{key}: {value}")
    return "\n".join(lines)


def _emit(out, args):
    if isinstance(out, str) or args.table:
        print(_table(out))
    elif args.pretty:
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(json.dumps(out, sort_keys=True, separators=(",", ":")))


def _fail(code: int, kind: str, message: str, extra=None) -> int:
    err = {"error": kind, "message": message}
    if extra:
        err.update(extra)
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "UsageError", str(exc))
    except USAGE_ERRORS as exc:
        return _fail(EXIT_USAGE, exc.code, str(exc), exc.to_dict())
    except QClusterError as exc:
        return _fail(EXIT_ENGINE, exc.code, str(exc), exc.to_dict())
    except MemoryError:
        return _fail(EXIT_ENGINE, "MemoryError", "out of memory")
    _emit(out, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
