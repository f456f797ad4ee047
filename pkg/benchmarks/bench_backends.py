"""Compare the numba kernels with the numpy fallback.

Times the numerical plate pressure (Poisson form) at a few separations for
each available backend and checks that both give the same result.

    python benchmarks/bench_backends.py --repeat 3
"""
import argparse
import time

from casimir_lab import _kernels, lifshitz
from casimir_lab.quantities import ALUMINIUM, EvaluationPoint


def time_backend(name, separations_um, repeat):
    _kernels.use_backend(name)
    # the first call compiles (or loads the cache) and is not timed
    lifshitz._poisson_harmonics.cache_clear()
    lifshitz.force_plates_poisson(EvaluationPoint(1e-6), ALUMINIUM)
    rows = []
    for a_um in separations_um:
        point = EvaluationPoint(a_um * 1e-6)
        best, value = float("inf"), None
        for _ in range(repeat):
            lifshitz._poisson_harmonics.cache_clear()
            start = time.perf_counter()
            value = lifshitz.force_plates_poisson(point, ALUMINIUM).total
            best = min(best, time.perf_counter() - start)
        rows.append((a_um, best, value))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--separations", default="0.1,1,5", help="um, comma separated")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    separations = [float(s) for s in args.separations.split(",")]

    results = {name: time_backend(name, separations, args.repeat)
               for name in _kernels.available_backends()}
    print(f"{'a_um':>6} " + " ".join(f"{n + ' [s]':>12}" for n in results) + "   speedup  max rel diff")
    for i, a_um in enumerate(separations):
        times = {n: r[i][1] for n, r in results.items()}
        values = [r[i][2] for r in results.values()]
        spread = (max(values) - min(values)) / abs(values[0])
        speedup = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{a_um:6g} " + " ".join(f"{t:12.4f}" for t in times.values())
              + f"   {speedup:7.1f}  {spread:.1e}")
    _kernels.use_backend("auto")


if __name__ == "__main__":
    main()
