"""Write the data and plot scripts of every figure into one directory and report their checks."""

import argparse
import sys

from adiabatic_search.lab.figures import FIGURES, reproduce_figure


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="figures")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--only", nargs="*", choices=FIGURES, default=list(FIGURES))
    args = parser.parse_args()

    failed = []
    for fig in args.only:
        report = reproduce_figure(fig, args.out, workers=args.workers)
        print(f"{fig}: {len(report.files)} files")
        for check in report.checks:
            print("   ", check.line())
        if not report.passed:
            failed.append(fig)
    if failed:
        print("figures with failing checks:", ", ".join(failed))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
