"""Compare the compiled elimination kernel against the numpy fallback.

The backend is chosen at import time from KOSZULKIT_PURE_PYTHON, so the
parent process re-runs this script once per backend and diffs the timings.
Workloads cover what the checkers actually feed the kernels: dense-ish rank,
sparse rref, and a real bar-differential slice.

Usage: python benchmarks/bench_elimination.py [--trials N] [--seed N]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time


def _random_matrix(rng, rows, cols, density, p):
    triples = [
        (r, c, rng.randrange(1, p))
        for r in range(rows)
        for c in range(cols)
        if rng.random() < density
    ]
    return rows, cols, triples


def _workloads(seed):
    rng = random.Random(seed)
    yield "rank 200x300 d=0.5", "rank", _random_matrix(rng, 200, 300, 0.5, 101)
    yield "rank 400x400 d=0.3", "rank", _random_matrix(rng, 400, 400, 0.3, 101)
    yield "rref 600x600 d=0.02", "rref", _random_matrix(rng, 600, 600, 0.02, 101)


def _run_child(trials, seed):
    from koszulkit.bar_homology import bar_slice
    from koszulkit.exact_linalg import BACKEND, FieldSpec, SparseMatrix, rank, rref
    from koszulkit.graded_algebra import augmentation_map
    from koszulkit.grassmann import pluecker_ring

    gf = FieldSpec.gf(101)
    ops = {"rank": rank, "rref": rref}
    results = {}

    for label, op, (rows, cols, triples) in _workloads(seed):
        m = SparseMatrix.from_entries(gf, rows, cols, triples)
        best = min(_timed(lambda: ops[op](m)) for _ in range(trials))
        results[label] = best

    r, _ = pluecker_ring(4, gf, j_max=4)
    _, aug = augmentation_map(r)
    sl = bar_slice(r, aug, 3, 4)
    results["bar d(3,4) Gr(2,4)"] = min(
        _timed(lambda: rank(sl.d_out)) for _ in range(trials)
    )

    print(json.dumps({"backend": BACKEND, "timings": results}))


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=20240901)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        _run_child(args.trials, args.seed)
        return

    runs = {}
    for pure in ("0", "1"):
        env = dict(os.environ, KOSZULKIT_PURE_PYTHON=pure)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child",
             "--trials", str(args.trials), "--seed", str(args.seed)],
            env=env, capture_output=True, text=True, check=True,
        )
        rep = json.loads(out.stdout)
        runs[rep["backend"]] = rep["timings"]

    if len(runs) == 1:
        (name,) = runs
        print(f"only one backend available ({name}); no comparison to make")
        for label, t in runs[name].items():
            print(f"  {label:<24} {t * 1e3:9.2f} ms")
        return

    fast, slow = "compiled", "python"
    print(f"{'workload':<24} {fast:>12} {slow:>12} {'speedup':>9}")
    for label in runs[fast]:
        a, b = runs[fast][label], runs[slow][label]
        print(f"{label:<24} {a * 1e3:9.2f} ms {b * 1e3:9.2f} ms {b / a:8.1f}x")


if __name__ == "__main__":
    main()
