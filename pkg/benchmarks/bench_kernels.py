"""Compare the compiled kernels against the pure-Python reference.

Two workloads dominate real runs: partition refinement inside the
automorphism/canonical-labeling engine, and the per-line counters of the
orbit-union walk. Usage:

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import time

import unitals.kernels as kernels
from unitals.autgroup import blocks_to_graph, graph_certificate
from unitals.design import Unital, induced_design
from unitals.geometry import desarguesian_plane, hermitian_unital
from unitals.search import OrbitFamily, orbit_union_search


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_certificate(q):
    plane, members = hermitian_unital(q)
    d = induced_design(plane, Unital.from_points(plane, members, q))
    g = blocks_to_graph(d.v, d.blocks)
    return lambda: graph_certificate(g), f"canonical certificate, q={q} induced design"


def bench_walk():
    plane = desarguesian_plane(4)
    fam = OrbitFamily.singletons(plane.v)

    def run():
        res = orbit_union_search(plane, 2, fam, node_budget=None,
                                 time_budget=None, prune=True)
        assert len(res.hits) == 280

    return run, "orbit-union walk, PG(2,4) singleton family"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--q", type=int, default=3, choices=(2, 3, 4, 5),
                    help="hermitian parameter for the certificate workload")
    args = ap.parse_args()

    workloads = [bench_certificate(args.q), bench_walk()]
    names = ["python"]
    try:
        kernels.get_backend("cython")
        names.append("cython")
    except ImportError:
        print("compiled kernels unavailable; timing the pure backend only")

    rows = []
    for fn, label in workloads:
        timings = {}
        for name in names:
            os.environ["UNITALS_KERNELS"] = name
            kernels._CACHE.clear()
            timings[name] = time_call(fn, args.repeat)
        rows.append((label, timings))
    os.environ.pop("UNITALS_KERNELS", None)
    kernels._CACHE.clear()

    width = max(len(r[0]) for r in rows) + 2
    header = f"{'workload':<{width}}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, timings in rows:
        line = f"{label:<{width}}"
        for n in names:
            line += f"{timings[n] * 1000:>10.1f}ms"
        if len(names) == 2:
            line += f"{timings['python'] / timings['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
