"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_backends.py [--repeat 3] [--json out.json] [--skip-scan]

Each kernel is timed directly through both modules; the last row times a
whole m = 1 scan (odd n < 500) in a subprocess per backend, since
the backend is chosen at import time.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from kummerprime import formats, kernels
from kummerprime.certify import _program_mod

ROOT = Path(__file__).resolve().parent.parent
PACK = ROOT / "packs" / "h3-a1-b2"


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    smap, sv = formats.load_pack(PACK).load(1)
    out = []
    for n in (69, 339):
        lam = 4 * 5 ** n - 1
        prog = _program_mod(smap, lam)
        v = tuple(c % lam for c in sv.coords)
        out.append(("iterate m=1 n=%d" % n,
                    lambda k, prog=prog, v=v, lam=lam, n=n: k.iterate_until_identity(prog, v, lam, 2 * n)))
    out.append(("enumerate J(F_199)", lambda k: list(k.jac_enumerate(199, 3))))
    rng = random.Random(0)
    elems = list(kernels.jac_enumerate(499, 3))
    pts = [rng.choice(elems) for _ in range(300)]
    out.append(("300 jac_mul in J(F_499)",
                lambda k: [k.jac_mul(499, 3, P, 4 * 5 ** 6 + 17) for P in pts]))
    out.append(("seed sweep p=59", lambda k: k.count_seeds_killed(59, 4 * 25)))
    p = 2 ** 31 - 1
    A = np.array([[rng.randrange(p) for _ in range(224)] for _ in range(300)], dtype=np.int64)
    out.append(("rref 300x224 mod p", lambda k: k.rref_mod_p(A.copy(), p)))
    return out


def scan_time(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["KUMMERPRIME_PURE_PYTHON"] = "1"
    cmd = [sys.executable, "-m", "kummerprime", "scan", "--m", "1", "--n-from", "3",
           "--n-to", "500", "--packs", str(PACK)]
    t0 = time.perf_counter()
    subprocess.run(cmd, env=env, check=True, capture_output=True)
    return time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results here")
    ap.add_argument("--skip-scan", action="store_true")
    args = ap.parse_args(argv)

    impls = kernels.backends()
    if "compiled" not in impls:
        print("compiled backend not built; timing the Python fallback only", file=sys.stderr)
    rows = []
    for name, fn in cases():
        row = {"case": name}
        for label, mod in impls.items():
            row[label] = best_of(lambda: fn(mod), args.repeat)
        rows.append(row)
    if not args.skip_scan:
        row = {"case": "scan m=1, n<500 (end to end)", "python": scan_time(True)}
        if "compiled" in impls:
            row["compiled"] = scan_time(False)
        rows.append(row)

    print("%-34s %12s %12s %8s" % ("case", "python [s]", "compiled [s]", "speedup"))
    for row in rows:
        c = row.get("compiled")
        print("%-34s %12.4f %12s %8s" % (row["case"], row["python"],
                                          "-" if c is None else "%.4f" % c,
                                          "-" if c is None else "%.1fx" % (row["python"] / c)))
    if args.json:
        Path(args.json).write_text(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
