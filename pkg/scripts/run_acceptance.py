"""Run the acceptance suite and print one line per criterion."""
import argparse
import sys

from kazhdan.acceptance import CRITERIA, Scale, run_criterion


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    args = ap.parse_args()
    scale = Scale.quick() if args.quick else Scale()
    wanted = args.only or [num for num, *_ in CRITERIA]
    failed = 0
    for num in wanted:
        res = run_criterion(num, scale, args.seed)
        print(res.line(), flush=True)
        failed += not (res.passed and res.within_time)
    print(f"{len(wanted) - failed}/{len(wanted)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
