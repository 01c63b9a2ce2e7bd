"""Spectral gap, mixing time and the proven lower bound for small SL_n(F_p) Cayley graphs."""
import argparse
import sys

from kazhdan.errors import SizeError
from kazhdan.spectral import compare_bounds

DEFAULT_CASES = ("2:2", "2:3", "2:5", "2:7", "3:2", "3:3")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cases", nargs="*", default=DEFAULT_CASES, help="n:p pairs")
    ap.add_argument("--cap", type=int, default=100_000)
    ap.add_argument("--no-mixing", action="store_true")
    args = ap.parse_args()
    print("n,p,order,degree,beta,lambda_2,method,mixing_steps,lower_bound,lower_ok")
    for case in args.cases:
        n, p = (int(x) for x in case.split(":"))
        try:
            rep = compare_bounds(n, p, args.cap, with_mixing=not args.no_mixing)
        except SizeError as err:
            print(f"# {case}: {err}", file=sys.stderr)
            continue
        lower = rep.bound_checks.get("lower", {})
        print(f"{n},{p},{rep.order},{rep.degree},{rep.beta:.6f},{rep.lambda_2:.6f},{rep.method},"
              f"{'' if rep.mixing_steps is None else rep.mixing_steps},{lower.get('bound', '')},{lower.get('pass', '')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
