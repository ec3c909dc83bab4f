"""Command line entry point: ``kummerprime <command> ...``.

Exit codes for ``certify``: 0 prime, 1 composite, 2 unknown, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from . import formats, oracle
from .certify import (COMPOSITE, PRIME, UNKNOWN, BoundViolated, InputError, Verdict,
                      certify, minimal_n, validate_task)
from .kummer import MAX_START_M, StartVectorTooLarge, start_vector
from .sqrt5synth import BoundTooSmall, DegenerateSamples, MapInvalid, synthesize

EXIT = {PRIME: 0, COMPOSITE: 1, UNKNOWN: 2}
EXIT_INPUT = 3

log = logging.getLogger("kummerprime")


def _append(path, line):
    if path:
        with open(path, "a") as fh:
            fh.write(line + "\n")


def _check_seed(h, alpha, beta):
    if h == 0:
        raise SystemExit("error: h must be nonzero")
    if beta * beta != alpha ** 5 + h:
        raise SystemExit("error: (%d, %d) is not on y^2 = x^5 + %d" % (alpha, beta, h))


def cmd_precompute_map(args) -> int:
    _check_seed(args.h, args.alpha, args.beta)
    try:
        smap = synthesize(args.h, args.alpha, args.beta, B=args.basis_bound, npairs=args.pairs,
                          degree=args.degree, trials=args.trials, primes=args.primes,
                          method=args.method)
    except (DegenerateSamples, MapInvalid, BoundTooSmall) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    formats.write_map(args.out, smap)
    print("wrote %s (degree %d, %d terms)" % (args.out, smap.degree,
                                              sum(len(smap.terms(i)) for i in range(4))))
    return 0


def cmd_start_vector(args) -> int:
    _check_seed(args.h, args.alpha, args.beta)
    try:
        coords = start_vector(args.h, args.alpha, args.beta, args.m, cap=args.cap)
    except StartVectorTooLarge as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    sv = formats.StartVector(args.h, args.alpha, args.beta, args.m, coords)
    formats.write_start(args.out, sv)
    print("wrote %s (%d digits)" % (args.out, max(len(formats._dec(abs(c))) for c in coords)))
    return 0


@lru_cache(maxsize=16)
def _load(map_path, start_path):
    # scans reuse the same files for every n; parse and hash them once
    return (formats.read_map(map_path), formats.read_start(start_path),
            formats.file_sha256(map_path), formats.file_sha256(start_path))


def run_certify(m, n, map_path, start_path):
    """(verdict, record line) for one task; raises on input errors."""
    smap, sv, map_sha, start_sha = _load(str(map_path), str(start_path))
    if sv.h != smap.h:
        raise InputError("map is for h=%d, start vector for h=%d" % (smap.h, sv.h))
    if sv.m != m:
        raise InputError("start vector is for m=%d, not %d" % (sv.m, m))
    task = validate_task(m, n)
    if isinstance(task, Verdict):
        verdict = task
    else:
        verdict = certify(task, smap, sv.coords, h=sv.h)
    rec = formats.verdict_record(m, n, verdict, map_sha, start_sha, smap.h)
    return verdict, rec


def cmd_certify(args) -> int:
    try:
        verdict, rec = run_certify(args.m, args.n, args.map, args.start)
    except (InputError, BoundViolated, formats.FormatError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    print(rec)
    _append(args.results, rec)
    if verdict.outcome == UNKNOWN:
        print("note: %s; retry with another alpha, beta" % verdict.reason, file=sys.stderr)
    return EXIT[verdict.outcome]


def _scan_one(job):
    m, n, packs = job
    task = validate_task(m, n)
    if isinstance(task, Verdict):
        return n, [formats.verdict_record(m, n, task)], task.outcome
    recs = []
    outcome = UNKNOWN
    for pdir in packs:
        pack = formats.load_pack(pdir)
        if not pack.has(m):
            continue
        verdict, rec = run_certify(m, n, pack.map_path, pack.start_path(m))
        recs.append(rec)
        outcome = verdict.outcome
        if outcome != UNKNOWN:
            break
    return n, recs, outcome


def cmd_scan(args) -> int:
    packs = [p for p in args.packs.split(",") if p]
    if not packs:
        print("error: no packs given", file=sys.stderr)
        return EXIT_INPUT
    try:
        for p in packs:
            formats.load_pack(p)
    except formats.FormatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    n0 = minimal_n(args.m)
    ns = [n for n in range(max(args.n_from, n0), args.n_to) if n % 2 or args.include_even]
    jobs = [(args.m, n, packs) for n in ns]
    primes, unknown = [], []
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_scan_one, jobs))
    else:
        results = map(_scan_one, jobs)
    for n, recs, outcome in results:  # single writer, in n order
        for rec in recs:
            if args.verbose:
                print(rec)
            _append(args.results, rec)
        if outcome == PRIME:
            primes.append(n)
        elif outcome == UNKNOWN:
            unknown.append(n)
    print(json.dumps({"m": args.m, "n_from": args.n_from, "n_to": args.n_to,
                      "primes": primes, "unknown": unknown}))
    return 0


def cmd_oracle(args) -> int:
    try:
        if args.which == "group-structure":
            rep = oracle.group_structure(args.m, args.n, args.h, seed=args.seed)
        else:
            mode = "exhaustive" if args.h_seeds == "exhaustive" else "sampled"
            r = oracle.indeterminate_fraction(args.m, args.n, mode, samples=args.samples,
                                              seed=args.seed)
            rep = r.as_dict()
            rep["within_bound"] = r.fraction <= r.bound
    except oracle.OracleRefused as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(rep, sort_keys=True, default=str))
    return 0


def cmd_pack(args) -> int:
    _check_seed(args.h, args.alpha, args.beta)
    out = Path(args.out)
    if (out / "map.txt").exists() and not args.remap:
        smap = formats.read_map(out / "map.txt")
    else:
        smap = synthesize(args.h, args.alpha, args.beta)
    starts = [formats.StartVector(args.h, args.alpha, args.beta, m,
                                  start_vector(args.h, args.alpha, args.beta, m))
              for m in args.m]
    formats.save_pack(out, smap, starts)
    print("pack %s: h=%d, m=%s" % (out, args.h, ",".join(map(str, args.m))))
    return 0


def _ints(s):
    return [int(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kummerprime",
                                 description="Primality of 4 m^2 5^n - 1 via the Kummer surface of y^2 = x^5 + h.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def seed_args(p):
        p.add_argument("--h", type=int, required=True)
        p.add_argument("--alpha", type=int, required=True)
        p.add_argument("--beta", type=int, required=True)

    p = sub.add_parser("precompute-map", help="interpolate and validate the [sqrt 5] map")
    seed_args(p)
    p.add_argument("--basis-bound", type=int, default=4)
    p.add_argument("--pairs", type=int, default=120)
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--primes", type=int, default=5)
    p.add_argument("--method", choices=("modular", "bareiss"), default="modular")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_precompute_map)

    p = sub.add_parser("start-vector", help="kappa(4 m^2 Q0) as coprime integers")
    seed_args(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--cap", type=int, default=MAX_START_M)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_start_vector)

    p = sub.add_parser("certify", help="decide one lambda = 4 m^2 5^n - 1")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--results", help="append the record to this file")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scan", help="certify a range of n, trying packs in order")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-from", type=int, default=1)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--packs", required=True, help="comma-separated pack directories")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--include-even", action="store_true")
    p.add_argument("--results")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="brute-force structure checks")
    p.add_argument("which", choices=("group-structure", "indeterminate-fraction"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, default=3)
    p.add_argument("--h-seeds", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("pack", help="build a seed pack directory (map plus start vectors)")
    seed_args(p)
    p.add_argument("--m", type=_ints, required=True, help="comma-separated m values")
    p.add_argument("--out", required=True)
    p.add_argument("--remap", action="store_true", help="recompute an existing map")
    p.set_defaults(func=cmd_pack)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
