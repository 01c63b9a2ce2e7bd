"""Tabulate the dimension-dependent bounds and how much slack each closed form leaves.

Writes a CSV with, per n: the DP value of h(n), its closed-form cap, the three
Kazhdan lower bounds, the upper bound, and the recursion oracle against its
closed form.
"""
import argparse
import csv
import sys
from dataclasses import dataclass

from kazhdan import constants as C


@dataclass
class SweepConfig:
    lo: int = 3
    hi: int = 10**4
    step: int = 1
    out: str = "-"


def rows(cfg: SweepConfig):
    F = C.recursion_oracle(C.PAPER_RECURSION, cfg.hi)
    for rep in C.sweep_rows(cfg.lo, cfg.hi):
        n = rep.n
        if (n - cfg.lo) % cfg.step:
            continue
        rec = C.recursion_closed_form(C.PAPER_RECURSION, n) if n >= C.PAPER_RECURSION.n0 else None
        yield {
            "n": n,
            "h_dp": rep.h_dp,
            "h_closed": rep.h_closed,
            "h_slack": rep.h_closed - rep.h_dp,
            "kazhdan_A": rep.kazhdan_lower_A,
            "kazhdan_Aprime": rep.kazhdan_lower_Aprime,
            "kazhdan_Adoubleprime": rep.kazhdan_lower_Adoubleprime,
            "kazhdan_upper": rep.kazhdan_upper,
            "recursion_F": F[n] if n >= C.PAPER_RECURSION.n0 else "",
            "recursion_closed": "" if rec is None else rec,
        }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = SweepConfig()
    for name, default in vars(cfg).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    writer = None
    for row in rows(cfg):
        if writer is None:
            writer = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
            writer.writeheader()
        writer.writerow(row)
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
