"""The acceptance criteria as runnable checks, shared by the test suite and ``kazhdan report``."""
from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Callable

from . import constants as C
from .errors import InvalidOperationError
from .factor import factor_full, log_levels, random_sl, verify_certificate
from .spectral import compare_bounds, displacement_upper_bound, enumerate_group
from .constants import sl_order
from .torus import check_Bp_Cp, check_mapping_identities, check_partition
from .vecsys import OP_BOUNDS, POLICIES, VectorSystem, reduce_to_standard


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit_seconds: float
    detail: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.seconds <= self.limit_seconds

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.seconds:.2f}s / {self.limit_seconds:.0f}s"
        if not self.within_time:
            timing += " (over time)"
        return f"[{status}] {self.number}. {self.name} ({timing})"

    def to_json(self, with_timing: bool = False) -> dict:
        out = asdict(self)
        if not with_timing:
            out.pop("seconds")
        return out


@dataclass(frozen=True)
class Scale:
    """Sweep sizes; ``quick`` shrinks them without changing what is checked."""

    h_max: int = 10**5
    recursion_max: int = 10**5
    chain_max: int = 10**4
    systems_per_policy: int = 500
    factor_cases: int = 1000
    grids: tuple[int, ...] = (4, 64, 512)

    @classmethod
    def quick(cls) -> "Scale":
        return cls(h_max=10**3, recursion_max=10**3, chain_max=10**3, systems_per_policy=60,
                   factor_cases=100, grids=(4, 16, 64))


def _decimal_sig_match(x: float, exact: Decimal, digits: int = 12) -> bool:
    if exact == 0:
        return x == 0
    return abs(Decimal(x) - exact) <= abs(exact) * Decimal(10) ** (-digits)


def criterion_constants(scale: Scale) -> tuple[bool, dict]:
    getcontext().prec = 50
    rows = {}
    ok = True
    for n in (3, 10, 100, 1000):
        kb = C.kazhdan_bounds(n)
        root = Decimal(n).sqrt()
        exact_ap = 1 / (42 * root + 860)
        exact_up = (Decimal(2) / n).sqrt()
        good = _decimal_sig_match(kb["kazhdan_lower_Aprime"], exact_ap) and _decimal_sig_match(kb["kazhdan_upper"], exact_up)
        rows[n] = {"Aprime": kb["kazhdan_lower_Aprime"], "upper": kb["kazhdan_upper"], "ok": good}
        ok &= good
    ok &= C.kazhdan_bounds(100)["kazhdan_lower_Aprime"] == 1 / 1280
    return ok, rows


def criterion_h_bound(scale: Scale) -> tuple[bool, dict]:
    bad = C.h_dp_within_closed(scale.h_max)
    # sqrt2/(90 sqrt n + 4000) >= 1/(64 sqrt n + 2850) for every n, coefficientwise:
    # 64 >= 45 sqrt2 and 2850 >= 2000 sqrt2, squared to integers
    coefficientwise = 64**2 >= 2 * 45**2 and 2850**2 >= 2 * 2000**2
    sample = all(C.closed_h_implies("A", n) for n in range(3, min(scale.h_max, 2000) + 1))
    return not bad and coefficientwise and sample, {"violations": len(bad), "n_max": scale.h_max,
                                                   "theorem_A_for_all_n": coefficientwise}


def criterion_recursion(scale: Scale) -> tuple[bool, dict]:
    p = C.PAPER_RECURSION
    F = C.recursion_oracle(p, scale.recursion_max)
    bad = [n for n in range(p.n0, scale.recursion_max + 1) if C.recursion_closed_form(p, n) < F[n]]
    margin = C.recursion_margin(p, scale.recursion_max)
    return not bad, {"violations": len(bad), "min_margin": round(margin, 6), "n_max": scale.recursion_max}


def criterion_chains(scale: Scale) -> tuple[bool, dict]:
    r2 = C.verify_chain_R2()
    rp = C.verify_chain_Rp(scale.chain_max)
    rpq = C.verify_chain_Rpq(scale.chain_max, scale.chain_max)
    ok = r2.ok and rp.ok and rpq.ok
    ok &= r2.checks["sum_plus_origin"] and r2.checks["max_plus_half"]
    return ok, {
        "R2": r2.ok, "Rp_violations": len(rp.violations), "Rpq_violations": len(rpq.violations), "cap": scale.chain_max,
    }


def random_complete_system(rng: random.Random, k: int, n: int, bound: int = 1000, modulus=None) -> VectorSystem:
    while True:
        vecs = [[rng.randint(-bound, bound) for _ in range(k)] for _ in range(n)]
        try:
            return VectorSystem.from_vectors(vecs, modulus)
        except InvalidOperationError:
            continue


def _policy_size(policy: str, k: int) -> int:
    return {"Z-3k": 3 * k, "Z-2k1": 2 * k + 1, "Fp-2k": 2 * k}[policy]


def criterion_reduction(scale: Scale, seed: int = 0) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for idx, policy in enumerate(POLICIES):
        rng = random.Random(seed * 1000 + idx)
        worst, failures = 0, 0
        for _ in range(scale.systems_per_policy):
            k = rng.randint(1, 6)
            n = max(_policy_size(policy, k) + rng.randint(0, 2), 2 if policy == "Fp-2k" else 3)
            modulus = rng.choice((2, 3, 7, 10007)) if policy == "Fp-2k" else None
            trace = reduce_to_standard(random_complete_system(rng, k, n, modulus=modulus), policy)
            worst = max(worst, trace.op_count)
            failures += not trace.verify()
        good = failures == 0 and worst <= OP_BOUNDS[policy]
        detail[policy] = {"worst_ops": worst, "bound": OP_BOUNDS[policy], "replay_failures": failures}
        ok &= good
    return ok, detail


def criterion_factor(scale: Scale, seed: int = 0) -> tuple[bool, dict]:
    rng = random.Random(seed * 1000 + 12)
    failures, over = 0, 0
    worst_bits = 0
    for case in range(scale.factor_cases):
        n = rng.randint(3, 12)
        g = random_sl(n, rng.randint(0, 50), seed * 100_000 + case)
        cert = factor_full(g)
        failures += not verify_certificate(cert, g)
        over += cert.generalized_count > 5 * log_levels(n) + cert.base_count
        worst_bits = max(worst_bits, cert.max_bits)
    return failures == 0 and over == 0, {
        "cases": scale.factor_cases, "verify_failures": failures, "over_bound": over, "max_entry_bits": worst_bits,
    }


def criterion_torus(scale: Scale) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for Q in scale.grids:
        part = check_partition(Q)["violations"]
        ident = check_mapping_identities(Q)["violations"]
        detail[f"Q={Q}"] = {"partition": part, "identities": ident}
        ok &= part == 0 and ident == 0
    for p, Q in ((3, 8), (4, 4)):
        v = check_Bp_Cp(p, Q)["violations"]
        detail[f"BpCp p={p} Q={Q}"] = v
        ok &= v == 0
    return ok, detail


def criterion_spectral(scale: Scale) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for n, p in ((3, 2), (3, 3)):
        order = enumerate_group(n, p).order
        rep = compare_bounds(n, p, with_mixing=False)
        lower = 1 / (4 * (31 * math.sqrt(n) + 700) ** 2)
        disp = displacement_upper_bound(n, p)
        good = order == sl_order(n, p) and rep.beta >= lower and disp == Fraction(2, n)
        detail[f"({n},{p})"] = {"order": order, "beta": rep.beta, "lower": lower, "displacement_sq": str(disp)}
        ok &= good
    return ok, detail


def criterion_consistency(scale: Scale) -> tuple[bool, dict]:
    rep = C.consistency_report(range(3, 1001))
    names = [f["name"] for f in rep["flags"]]
    expected = ["proof_line_50_vs_theorem_A_64", "remark_33_317_vs_Aprime_42_860"]
    no_false_positive = rep["closed_h_implies"]["A"]["implied_for_all"]
    return names == expected and no_false_positive, {"flags": names, "theorem_A_implied": no_false_positive}


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "constant reproduction", 1, criterion_constants),
    (2, "h-bound verification", 10, criterion_h_bound),
    (3, "recursion lemma", 60, criterion_recursion),
    (4, "inequality chains", 30, criterion_chains),
    (5, "vector-system reduction", 300, criterion_reduction),
    (6, "factorization round trip", 600, criterion_factor),
    (7, "torus geometry", 120, criterion_torus),
    (8, "spectral bounds", 300, criterion_spectral),
    (9, "consistency flags", 60, criterion_consistency),
]


def run_criterion(number: int, scale: Scale | None = None, seed: int = 0) -> CriterionResult:
    scale = scale or Scale()
    for num, name, limit, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            if fn in (criterion_reduction, criterion_factor):
                passed, detail = fn(scale, seed)
            else:
                passed, detail = fn(scale)
            return CriterionResult(num, name, bool(passed), time.perf_counter() - start, limit, detail)
    raise KeyError(number)


def run_all(quick: bool = False, seed: int = 0) -> list[CriterionResult]:
    scale = Scale.quick() if quick else Scale()
    return [run_criterion(num, scale, seed) for num, *_ in CRITERIA]
