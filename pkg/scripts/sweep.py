"""Classify every class with m strands and |p_i| <= bound; write CSV and JSON tables."""

import argparse
import sys

from pretzel_chi.cli import main as cli_main


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--strands", type=int, nargs="+", default=[3, 4])
    ap.add_argument("--max", type=int, default=6)
    ap.add_argument("--out", default="sweep")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for m in args.strands:
        stem = f"{args.out}_m{m}_b{args.max}"
        code = cli_main(["enumerate", "--strands", str(m), "--max", str(args.max), "--jobs", str(args.jobs),
                         "--csv", stem + ".csv", "--json", stem + ".json", "--no-timing"])
        if code:
            sys.exit(code)
        print(f"wrote {stem}.csv and {stem}.json")


if __name__ == "__main__":
    main()
