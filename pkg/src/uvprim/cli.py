"""Batch front-end: screening sweeps, membership verification, survey rows,
and exact-count oracles, with JSON/CSV reports.

Subcommands

  screen   bound-based screening over a range (or --survey for one omega row,
           or --needs-check-only for the fast full-range sweep)
  verify   exhaustive membership checks (element set: logs/ie; pair set: brute)
  oracle   exact counts (N, M) and the four classic special cases

Reports are deterministic: records sorted ascending by q, identical inputs
give identical bytes apart from the elapsed-time fields.  Exact rationals are
serialized as "num/den" strings with a 12-significant-digit decimal
convenience field alongside.  Exit codes: 0 success (and --expect match),
1 --expect mismatch, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from . import __version__
from . import ntcore, screening, verify
from .errors import NotAPrimePowerError

_CACHE_ENV = "UVPRIM_CACHE_DIR"


# --------------------------------------------------------------------------
# serialization helpers

def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _frac_decimal(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _config_dict(cfg: screening.SieveConfig | None) -> dict | None:
    if cfg is None:
        return None
    return {
        "k": cfg.k,
        "s": cfg.s,
        "sieving_primes": list(cfg.sieving_primes),
        "delta2": _frac(cfg.delta2),
        "delta3": _frac(cfg.delta3),
        "delta4": _frac(cfg.delta4),
    }


def _witness_dict(rep: screening.BoundReport | None) -> dict | None:
    if rep is None:
        return None
    out = {
        "theorem": rep.theorem,
        "bound": _frac(rep.lower_bound),
        "bound_decimal": _frac_decimal(rep.lower_bound),
        "config": _config_dict(rep.config),
    }
    if rep.epsilon is not None:
        out["epsilon"] = rep.epsilon
    return out


def _emit(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        records = report["records"]
        cols = sorted({k for r in records for k in r})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in records:
            w.writerow(
                ""
                if (v := r.get(c)) is None
                else v
                if isinstance(v, (int, float, str))
                else json.dumps(v, sort_keys=True)
                for c in cols
            )
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# per-q workers (top level so process pools can pickle them)

def _screen_record(q: int) -> dict:
    t0 = time.perf_counter()
    verdict = screening.screen(q)
    pp = ntcore.prime_power_decompose(q)
    return {
        "q": q,
        "p": pp.p,
        "r": pp.r,
        "omega": ntcore.profile(q - 1).omega,
        "status": verdict.status,
        "witness": _witness_dict(verdict.witness),
        "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 3),
    }


def _verify_record(job: tuple[str, str, int]) -> dict:
    which, algo, q = job
    t0 = time.perf_counter()
    if which == "pair":
        res = verify.check_pair_membership(q)
        stats: dict = res.stats
    elif algo == "logs":
        res = verify.check_element_membership_logs(q)
        stats = res.stats
    elif algo == "ie":
        res = verify.check_element_membership_cover(q)
        stats = res.stats
    else:  # both, cross-checked
        a = verify.check_element_membership_logs(q)
        b = verify.check_element_membership_cover(q)
        if (a.member, a.failures) != (b.member, b.failures):
            raise RuntimeError(f"algorithm disagreement at q={q}: {a.failures} vs {b.failures}")
        res = a
        stats = {"logs": a.stats, "ie": b.stats}
    pp = ntcore.prime_power_decompose(q)
    return {
        "q": q,
        "p": pp.p,
        "r": pp.r,
        "omega": ntcore.profile(q - 1).omega,
        "set": res.set,
        "member": res.member,
        "algorithm": algo if which == "element" else "brute",
        "failures": [list(f) for f in res.failures],
        "stats": stats,
        "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 3),
    }


def _map_jobs(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


# --------------------------------------------------------------------------
# subcommand drivers

def _q_list(args, parser) -> list[int]:
    if args.q:
        try:
            for q in args.q:
                ntcore.prime_power_decompose(q)
        except NotAPrimePowerError as e:
            parser.error(str(e))
        return sorted(set(args.q))
    if args.max is None:
        parser.error("provide --q or a --min/--max range")
    lo = args.min if args.min is not None else 2
    if lo > args.max:
        parser.error(f"empty range [{lo}, {args.max}]")
    qs = [pp.q for pp in ntcore.enumerate_prime_powers(lo, args.max)]
    return qs


def run_screen(args, parser) -> tuple[dict, int]:
    if args.survey is not None:
        if not 1 <= args.survey <= screening.MAX_SURVEY_OMEGA:
            parser.error(f"--survey takes 1..{screening.MAX_SURVEY_OMEGA}")
        t0 = time.perf_counter()
        row = screening.survey(args.survey)
        rec = {
            "omega": row.omega,
            "chosen_s": row.chosen_s,
            "q_min": row.q_min,
            "q_max": row.q_max,
            "candidates": row.candidates,
            "failing_primes": list(row.failing_primes),
            "failing_prime_powers": list(row.failing_prime_powers),
            "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 3),
        }
        totals = {
            "failing": len(row.failing_list),
            "failing_primes": len(row.failing_primes),
            "failing_prime_powers": len(row.failing_prime_powers),
        }
        return {"command": _echo(args), "records": [rec], "totals": totals}, 0

    if args.needs_check_only:
        if args.max is None:
            parser.error("--needs-check-only requires --max")
        lo = args.min if args.min is not None else 3
        _, verdicts = screening.sweep(lo, args.max)
        records = []
        for v in verdicts:
            pp = ntcore.prime_power_decompose(v.q)
            records.append(
                {
                    "q": v.q,
                    "p": pp.p,
                    "r": pp.r,
                    "omega": ntcore.profile(v.q - 1).omega,
                    "status": v.status,
                    "witness": _witness_dict(v.witness),
                    "elapsed_ms": None,
                }
            )
        totals = {
            "records": len(records),
            "primes": sum(1 for r in records if r["r"] == 1),
            "prime_powers": sum(1 for r in records if r["r"] > 1),
            "pair_proved": sum(1 for r in records if r["status"] == screening.PAIR_PROVED),
            "needs_check": sum(1 for r in records if r["status"] == screening.NEEDS_CHECK),
            "omega_ge_7": sum(1 for r in records if r["omega"] >= 7),
        }
        return {"command": _echo(args), "records": records, "totals": totals}, 0

    qs = _q_list(args, parser)
    if args.omega is not None:
        qs = [q for q in qs if ntcore.profile(q - 1).omega == args.omega]
    records = _map_jobs(_screen_record, qs, args.jobs)
    records.sort(key=lambda r: r["q"])
    totals = {"records": len(records)}
    for st in (screening.ELEMENT_PROVED, screening.PAIR_PROVED, screening.NEEDS_CHECK):
        totals[st] = sum(1 for r in records if r["status"] == st)
    return {"command": _echo(args), "records": records, "totals": totals}, 0


def run_verify(args, parser) -> tuple[dict, int]:
    which = {"T": "element", "S": "pair", "element": "element", "pair": "pair"}[args.set]
    algo = args.algo
    if which == "pair":
        if algo is None:
            algo = "brute"
        if algo != "brute":
            parser.error("the pair set supports --algo brute only")
    else:
        if algo is None:
            algo = "logs"
        if algo not in ("logs", "ie", "both"):
            parser.error("the element set supports --algo logs|ie|both")
    qs = _q_list(args, parser)
    records = _map_jobs(_verify_record, [(which, algo, q) for q in qs], args.jobs)
    records.sort(key=lambda r: r["q"])
    non_members = [r["q"] for r in records if not r["member"]]
    totals = {"records": len(records), "members": len(records) - len(non_members), "non_members": non_members}
    report = {"command": _echo(args), "records": records, "totals": totals}
    code = 0
    if args.expect:
        with open(args.expect) as fh:
            expected = sorted(json.load(fh))
        scanned = set(qs)
        expected_here = [q for q in expected if q in scanned]
        report["expect"] = {"file": args.expect, "expected": expected_here, "match": expected_here == non_members}
        code = 0 if report["expect"]["match"] else 1
    return report, code


_ORACLE_GUARDS = {"N": 10**4, "M": 10**6, "cases": 10**4}


def run_oracle(args, parser) -> tuple[dict, int]:
    q = args.q
    try:
        ntcore.prime_power_decompose(q)
    except NotAPrimePowerError as e:
        parser.error(str(e))
    if q > _ORACLE_GUARDS[args.kind]:
        parser.error(f"oracle {args.kind} is brute-force; q <= {_ORACLE_GUARDS[args.kind]} only")
    es = None
    if args.e:
        try:
            es = [int(x) for x in args.e.split(",")]
        except ValueError:
            parser.error(f"bad --e list: {args.e!r}")
    t0 = time.perf_counter()
    if args.kind == "N":
        if es is not None and len(es) != 4:
            parser.error("oracle N takes --e E1,E2,E3,E4")
        query = verify.PairCountQuery(q, args.u, args.v, *(es or (None,) * 4))
        rec = {
            "kind": "N",
            "q": q,
            "u": args.u,
            "v": args.v,
            "e": es,
            "count": verify.count_pairs_free(query),
        }
    elif args.kind == "M":
        if es is not None and len(es) != 2:
            parser.error("oracle M takes --e E1,E2")
        query = verify.SingleCountQuery(q, args.u, args.v, *(es or (None,) * 2))
        rec = {
            "kind": "M",
            "q": q,
            "u": args.u,
            "v": args.v,
            "e": es,
            "count": verify.count_single_free(query),
        }
    else:
        cases = {
            name: {"exists": ok, "witness": list(w) if isinstance(w, tuple) else w}
            for name, (ok, w) in verify.special_case_witnesses(q).items()
        }
        rec = {"kind": "cases", "q": q, "cases": cases}
    rec["elapsed_ms"] = round((time.perf_counter() - t0) * 1e3, 3)
    return {"command": _echo(args), "records": [rec], "totals": {"records": 1}}, 0


def _echo(args) -> list[str]:
    return list(args._argv)


# --------------------------------------------------------------------------
# prime-cache persistence

def _load_prime_cache(cache_dir: str) -> None:
    path = os.path.join(cache_dir, "primes.npz")
    try:
        with np.load(path) as z:
            primes, limit = z["primes"], int(z["limit"])
    except (OSError, KeyError, ValueError):
        return
    if limit > ntcore._prime_cache_limit:
        ntcore._prime_cache = primes.astype(np.int64)
        ntcore._prime_cache_limit = limit


def _save_prime_cache(cache_dir: str) -> None:
    path = os.path.join(cache_dir, "primes.npz")
    try:
        os.makedirs(cache_dir, exist_ok=True)
        np.savez(path, primes=ntcore._prime_cache, limit=np.int64(ntcore._prime_cache_limit))
    except OSError:
        pass


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uvprim", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_range=True):
        if with_range:
            sp.add_argument("--q", type=int, nargs="+", help="explicit prime powers (overrides the range)")
            sp.add_argument("--min", type=int, help="range start (inclusive)")
            sp.add_argument("--max", type=int, help="range end (inclusive)")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes (default: all cores)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the report to this file instead of stdout")

    sp = sub.add_parser("screen", help="bound-based screening")
    common(sp)
    sp.add_argument("--omega", type=int, help="restrict to q with this omega(q-1)")
    sp.add_argument("--survey", type=int, metavar="OMEGA", help="emit one worst-case survey row")
    sp.add_argument(
        "--needs-check-only",
        action="store_true",
        help="fast sweep emitting only the q not provable by element bounds",
    )
    sp.set_defaults(func=run_screen)

    sp = sub.add_parser("verify", help="exhaustive membership verification")
    common(sp)
    sp.add_argument("--set", required=True, choices=("T", "S", "element", "pair"), help="which membership set")
    sp.add_argument("--algo", choices=("logs", "ie", "both", "brute"))
    sp.add_argument("--expect", help="JSON file with the expected non-member q list")
    sp.set_defaults(func=run_verify)

    sp = sub.add_parser("oracle", help="exact brute-force counts and witnesses")
    sp.add_argument("kind", choices=("N", "M", "cases"))
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--u", type=int, default=1)
    sp.add_argument("--v", type=int, default=1)
    sp.add_argument("--e", help="comma-separated freeness divisors (4 for N, 2 for M)")
    common(sp, with_range=False)
    sp.set_defaults(func=run_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    cache_dir = os.environ.get(_CACHE_ENV)
    if cache_dir:
        _load_prime_cache(cache_dir)
    report, code = args.func(args, parser)
    if cache_dir:
        _save_prime_cache(cache_dir)
    _emit(report, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
