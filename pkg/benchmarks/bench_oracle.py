"""Time the compiled and pure-Python map-enumeration kernels on the same profiles.

    python benchmarks/bench_oracle.py [--repeat 3] [--max-darts 14]
"""
import argparse
import time

from todamaps import oracle

PROFILES = [(3, 3), (1, 1, 3, 3), (3, 3, 3, 3), (1, 1, 3, 3, 3, 3), (3,) * 6]


def best_time(profile, backend, repeat):
    best, census = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        census = oracle.genus_census(profile, max_darts=sum(profile), backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, census


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--max-darts", type=int, default=14, help="skip the pure-Python run above this size")
    args = parser.parse_args()
    if oracle.BACKEND != "compiled":
        parser.error("compiled kernel not built; run `pip install -e . --no-build-isolation` with Cython available")
    print(f"{'profile':<22}{'darts':>6}{'matchings':>12}{'compiled s':>12}{'python s':>12}{'speedup':>9}")
    for profile in PROFILES:
        darts = sum(profile)
        t_c, c_c = best_time(profile, "compiled", args.repeat)
        if darts <= args.max_darts:
            t_p, c_p = best_time(profile, "python", args.repeat)
            if c_p != c_c:
                raise SystemExit(f"kernels disagree on {profile}: {c_p} vs {c_c}")
            py, speed = f"{t_p:12.4f}", f"{t_p / t_c:9.1f}"
        else:
            py, speed = f"{'-':>12}", f"{'-':>9}"
        print(f"{str(profile):<22}{darts:>6}{c_c.matchings_examined:>12}{t_c:12.4f}{py}{speed}")


if __name__ == "__main__":
    main()
