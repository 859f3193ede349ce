"""Run every list crosscheck at its default range and print the reports."""

import argparse
import time

from pretzel_chi.classifier import crosscheck

RANGES = {"1.2": 4, "1.4": 6, "1.6": 5, "1.7": 5}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for check_id, bound in RANGES.items():
        start = time.monotonic()
        report = crosscheck(check_id, bound, jobs=args.jobs)
        print(report.summary(), f"[{time.monotonic() - start:.1f} s]")


if __name__ == "__main__":
    main()
