"""Benchmark: compiled vs pure-Python elimination kernel on real workloads.

Workloads are integer row matrices taken from the package's own hot paths:
differential blocks of the largest built-in cotangent algebra, a Laplacian
kernel computation, and a wedge-Gram inversion.  Both kernels run on
identical inputs and their outputs are checked to be bit-identical.

Usage: python benchmarks/bench_echelon.py [--repeat N]
"""

import argparse
import time

from gradedlie import _echelon_py

try:
    from gradedlie import _echelon_cy
except ImportError:
    _echelon_cy = None

from gradedlie.algebra import cotangent
from gradedlie.cochain import complex_cache
from gradedlie.hodge import identity_metric, metric_context, random_diagonal_metric
from gradedlie.linalg import Matrix, _integer_rows, hstack
from gradedlie.registry import registry_get

import random


def workloads():
    g = cotangent(registry_get("free-nilp-2-3"))
    cache = complex_cache(g)
    rng = random.Random(2024)
    ctx = metric_context(g, random_diagonal_metric(g, rng))

    out = []
    for (k, j) in [(2, 3), (2, 4), (3, 4), (3, 5)]:
        d = cache.differential(k, j)
        rows = _integer_rows(d)
        out.append((f"rref d: C^{k}_{j} -> C^{k+1}_{j} ({d.rows}x{d.cols})", rows, d.cols))

    lap = ctx.laplacian(2, 3)
    rows = _integer_rows(lap)
    out.append((f"kernel of Laplacian on C^2_3 ({lap.rows}x{lap.cols})", rows, lap.cols))

    gram = ctx.induced_gram(2, 4)
    aug = hstack(gram, Matrix.identity(gram.rows))
    rows = _integer_rows(aug)
    out.append((f"invert wedge Gram on C^2_4 ({gram.rows}x{gram.cols})", rows, gram.cols))
    return out


def run(kernel, rows, ncols, repeat):
    best = None
    result = None
    for _ in range(repeat):
        work = [r[:] for r in rows]
        t0 = time.perf_counter()
        pivots = kernel.echelon(work, len(rows[0]), ncols)
        dt = time.perf_counter() - t0
        if best is None or dt < best:
            best = dt
            result = (pivots, work)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"{'workload':<46} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, rows, ncols in workloads():
        t_py, res_py = run(_echelon_py, rows, ncols, args.repeat)
        if _echelon_cy is None:
            print(f"{name:<46} {t_py * 1e3:>8.1f}ms {'n/a':>10} {'-':>8}")
            continue
        t_cy, res_cy = run(_echelon_cy, rows, ncols, args.repeat)
        assert res_py == res_cy, f"kernels disagree on {name}"
        print(
            f"{name:<46} {t_py * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms {t_py / t_cy:>7.2f}x"
        )


if __name__ == "__main__":
    main()
