"""Smallest total time at which each path's smoothed error drops below a target.

The smoothed error is monotone only on average, so the search walks a
log-spaced grid upwards until the target is met and then bisects between the
last two grid points.
"""

import argparse
import math

from adiabatic_search.dynamics import EvolutionConfig
from adiabatic_search.lab.sweep import DEFAULT_PATHS, smoothed_error_at


def first_crossing(r, name, target, t_min, t_max, factor, config):
    lo, T = None, t_min
    while T <= t_max:
        if smoothed_error_at(r, name, T, config) <= target:
            break
        lo, T = T, T * factor
    else:
        return math.nan
    if lo is None:
        return T
    hi = T
    for _ in range(20):
        mid = math.sqrt(lo * hi)
        if smoothed_error_at(r, name, mid, config) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--m", type=int, default=1)
    parser.add_argument("--target", type=float, default=1e-6)
    parser.add_argument("--paths", default=",".join(DEFAULT_PATHS))
    parser.add_argument("--tmin", type=float, default=10.0)
    parser.add_argument("--tmax", type=float, default=2e4)
    parser.add_argument("--factor", type=float, default=1.25)
    args = parser.parse_args()

    r = args.m / args.n
    config = EvolutionConfig()
    print(f"N={args.n} M={args.m} target delta={args.target:g}")
    for name in args.paths.split(","):
        T = first_crossing(r, name, args.target, args.tmin, args.tmax, args.factor, config)
        print(f"{name:>7}: T = {T:.1f}")


if __name__ == "__main__":
    main()
