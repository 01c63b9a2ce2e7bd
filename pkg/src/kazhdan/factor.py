"""Bounded-length factorization of SL_n(Z) into generalized transvections.

Each peeling level treats the first k columns of the current matrix as a
complete system of n vectors in Z^k, reduces it to the standard system with a
few generalized operations, and strips one more operation off the right. What
remains lives in an embedded SL_{n-k}(Z), which is handled recursively down to
dimension 3, where tracked Euclidean elimination takes over.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import asdict, dataclass, field
from functools import lru_cache

from .errors import DimensionError, NotSpecialError, PolicyError, SizeError
from .linalg import (
    ElemTransvection,
    GenTransvection,
    IntMat,
    ModMat,
    det_exact,
    generalized_from_matrix,
)
from .vecsys import check_policy, plan_reduction

SCHEDULES = ("auto", "3k", "2k1")
BASE_DIMENSION = 3


@dataclass(frozen=True)
class Factor:
    kind: str  # "generalized" or "elementary"
    payload: GenTransvection | ElemTransvection
    side: str = "left"
    level: int = 0

    def matrix(self) -> IntMat:
        return self.payload.to_matrix()

    def generalized(self) -> GenTransvection:
        p = self.payload
        return p if isinstance(p, GenTransvection) else p.as_generalized()

    def word_length(self) -> int:
        return sum(abs(m) for _, _, m in self.generalized().entries())

    def to_json(self) -> dict:
        base = {"kind": self.kind, "side": self.side, "level": self.level}
        p = self.payload
        if isinstance(p, ElemTransvection):
            base.update(i=p.i, j=p.j, m=p.m)
        else:
            base.update(I=list(p.I), J=list(p.J), alpha=[list(r) for r in p.alpha])
        return base


@dataclass(frozen=True)
class LevelRecord:
    dimension: int
    k: int
    policy: str
    reduction_ops: int


@dataclass(frozen=True)
class FactorCertificate:
    n: int
    factors: tuple[Factor, ...]
    base_count: int
    product_hash: str
    levels: tuple[LevelRecord, ...] = field(default=())
    max_bits: int = 0

    @property
    def generalized_count(self) -> int:
        return len(self.factors)

    @property
    def level_count(self) -> int:
        return self.generalized_count - self.base_count

    @property
    def elementary_word_length(self) -> int:
        return sum(f.word_length() for f in self.factors)

    def product(self, modulus: int | None = None) -> IntMat:
        return product_of(self.factors, self.n, modulus)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "factors": [f.to_json() for f in self.factors],
            "generalized_count": self.generalized_count,
            "base_count": self.base_count,
            "elementary_word_length": self.elementary_word_length,
            "levels": [asdict(lv) for lv in self.levels],
            "max_bits": self.max_bits,
            "product_hash": self.product_hash,
        }


def matrix_digest(m: IntMat) -> str:
    text = ";".join(",".join(str(x) for x in r) for r in m.rows)
    return hashlib.sha256(text.encode()).hexdigest()


def product_of(factors, n: int, modulus: int | None = None) -> IntMat:
    """Left-to-right product, applying each factor as column operations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for f in factors:
        for target, source, m in f.generalized().entries():
            # P @ (I + m e_{target,source}): column source += m * column target
            for r in rows:
                r[source] += m * r[target]
        if modulus is not None:
            rows = [[x % modulus for x in r] for r in rows]
    return IntMat(rows)


def _require_special(g: IntMat) -> None:
    if not g.is_square():
        raise DimensionError(f"expected a square matrix, got {g.shape}")
    d = det_exact(g)
    if d != 1:
        raise NotSpecialError(f"determinant is {d}, not 1")


@dataclass(frozen=True)
class BlockDecomposition:
    """g == left[0] ... left[-1] @ core @ right."""

    left: tuple[Factor, ...]
    core: IntMat
    right: Factor | None
    k: int
    policy: str


def decompose_block(g: IntMat, k: int, policy: str = "Z-3k", level: int = 0) -> BlockDecomposition:
    _require_special(g)
    n = g.nrows
    if k < 1:
        raise PolicyError("block size must be positive")
    check_policy(k, n, policy, None)
    rows = [list(r[:k]) for r in g.rows]
    ops, _ = plan_reduction(rows, k, policy)
    residual = [list(r) for r in g.rows]
    for op in ops:
        op.apply_rows(residual)
    # residual == [[I, B], [0, D]]
    assert all(residual[i][j] == (i == j) for i in range(n) for j in range(k))
    b = [r[k:] for r in residual[:k]]
    right = GenTransvection(n, tuple(range(k, n)), tuple(range(k)), tuple(tuple(b[j][a] for j in range(k)) for a in range(n - k)))
    core = [[int(i == j) for j in range(n)] for i in range(k)] + [[0] * k + r[k:] for r in residual[k:]]
    left = tuple(Factor("generalized", op.inverse(), "left", level) for op in ops)
    right_factor = None if right.is_identity() else Factor("generalized", right, "right", level)
    return BlockDecomposition(left, IntMat(core), right_factor, k, policy)


def base_case_sl3(g: IntMat, offset: int = 0, n: int | None = None, level: int = 0) -> list[Factor]:
    """Euclidean elimination with nearest-integer quotients, tracked as factors.

    The factors are embedded at ``offset`` in dimension ``n``.
    """
    _require_special(g)
    if g.nrows != 3:
        raise DimensionError("base case is SL_3")
    n = 3 if n is None else n
    h = g.tolist()
    applied: list[tuple[int, int, int]] = []

    def add(i, j, m):  # row i += m * row j
        if m:
            h[i] = [a + m * b for a, b in zip(h[i], h[j])]
            applied.append((i, j, m))

    for c in range(2):
        while True:
            live = [r for r in range(c, 3) if h[r][c]]
            pivot = min(live, key=lambda r: (abs(h[r][c]), r))
            others = [r for r in live if r != pivot]
            if not others:
                break
            for r in others:
                # nearest-integer quotient keeps remainders small
                q = (2 * h[r][c] + h[pivot][c]) // (2 * h[pivot][c])
                add(r, pivot, -q)
        if pivot != c:
            add(c, pivot, 1)
            add(pivot, c, -h[pivot][c] * h[c][c])
        if h[c][c] == -1:
            d = c + 1
            # (-1, 0) -> (-1, 1) -> (1, 1) -> (1, 0) on column c of rows c, d
            add(d, c, -1)
            add(c, d, 2)
            add(d, c, -1)
        for r in range(3):
            if r != c:
                add(r, c, -h[r][c])
    add(0, 2, -h[0][2])
    add(1, 2, -h[1][2])
    assert h == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    # E_t ... E_1 g = I, so g = E_1^-1 ... E_t^-1
    return [Factor("elementary", ElemTransvection(n, i + offset, j + offset, -m), "left", level) for i, j, m in applied]


def _level_options(m: int):
    """(k, policy, worst-case factor count) choices at dimension m."""
    for k in range(1, m - BASE_DIMENSION + 1):
        if k == 1:
            yield k, "Z-3k", 4
            continue
        if m >= 3 * k:
            yield k, "Z-3k", 5
        if m >= 2 * k + 1:
            yield k, "Z-2k1", 6


@lru_cache(maxsize=None)
def schedule_cost(m: int) -> int:
    """Worst-case peeling factor count from dimension m down to 3."""
    if m <= BASE_DIMENSION:
        return 0
    return min(c + schedule_cost(m - k) for k, _, c in _level_options(m))


def choose_level(m: int, schedule: str) -> tuple[int, str]:
    if schedule == "3k":
        return max(1, min(m // 3, m - BASE_DIMENSION)), "Z-3k"
    if schedule == "2k1":
        return max(1, min((m - 1) // 2, m - BASE_DIMENSION)), "Z-2k1"
    if schedule != "auto":
        raise PolicyError(f"unknown schedule {schedule!r}; choose from {', '.join(SCHEDULES)}")
    best = min(
        _level_options(m),
        key=lambda o: (o[2] + schedule_cost(m - o[0]), -o[0], o[1] != "Z-3k"),
    )
    return best[0], best[1]


def log_levels(n: int) -> int:
    """Exact ceil(log_{3/2}(n/3)): smallest L with 3^(L+1) >= n * 2^L."""
    level = 0
    while 3 ** (level + 1) < n * 2**level:
        level += 1
    return level


def level_bound(n: int) -> int:
    return 5 * log_levels(n)


def _embed(core_rows, offset: int, n: int) -> IntMat:
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, r in enumerate(core_rows):
        out[offset + i][offset:] = r
    return IntMat(out)


def factor_full(g: IntMat, schedule: str = "auto") -> FactorCertificate:
    _require_special(g)
    n = g.nrows
    if n < BASE_DIMENSION:
        raise DimensionError("factorization needs n >= 3")
    left: list[Factor] = []
    right: list[Factor] = []
    levels: list[LevelRecord] = []
    base: list[Factor] = []
    offset, level = 0, 0
    current = g
    max_bits = g.max_bits()
    while True:
        m = n - offset
        block = current.submatrix(range(offset, n), range(offset, n))
        if block.is_identity():
            break
        single = generalized_from_matrix(block) if m > BASE_DIMENSION else None
        if single is not None:
            left.append(Factor("generalized", single.shifted(offset, n), "left", level))
            break
        if m == BASE_DIMENSION:
            base = base_case_sl3(block, offset, n, level)
            break
        k, policy = choose_level(m, schedule)
        dec = decompose_block(block, k, policy, level)
        left.extend(Factor(f.kind, f.payload.shifted(offset, n), f.side, level) for f in dec.left)
        if dec.right is not None:
            right.append(Factor("generalized", dec.right.payload.shifted(offset, n), "right", level))
        levels.append(LevelRecord(m, k, policy, len(dec.left)))
        max_bits = max(max_bits, dec.core.max_bits())
        offset += k
        level += 1
        current = _embed(dec.core.submatrix(range(k, m), range(k, m)).rows, offset, n)
    factors = tuple(left + base + right[::-1])
    return FactorCertificate(n, factors, len(base), matrix_digest(g), tuple(levels), max_bits)


WORD_LIMIT = 10**7


def elementary_runs(cert: FactorCertificate) -> list[tuple[int, int, int]]:
    """Run-length form of the elementary word: (i, j, m) stands for |m| copies of I + sign(m) e_ij."""
    return [(t, s, m) for f in cert.factors for t, s, m in f.generalized().entries()]


def expand_to_elementary(cert: FactorCertificate, limit: int = WORD_LIMIT) -> list[tuple[int, int, int]]:
    """Word of (i, j, sign) generators I + sign * e_ij whose product is the certified matrix.

    Entries within one generalized factor commute, so they are expanded in
    row-major order of its block.
    """
    length = cert.elementary_word_length
    if length > limit:
        raise SizeError(f"elementary word has {length} letters, above the limit {limit}")
    word = []
    for target, source, m in elementary_runs(cert):
        sign = 1 if m > 0 else -1
        word.extend([(target, source, sign)] * abs(m))
    return word


def word_product(word, n: int, modulus: int | None = None) -> IntMat:
    factors = [Factor("elementary", ElemTransvection(n, i, j, s)) for i, j, s in word]
    return product_of(factors, n, modulus)


def verify_certificate(cert: FactorCertificate, g: IntMat | ModMat) -> bool:
    if g.shape != (cert.n, cert.n):
        return False
    if isinstance(g, ModMat):
        return cert.product(g.p).rows == g.rows
    return cert.product() == g


def random_sl(n: int, word_length: int, seed: int) -> IntMat:
    """Product of word_length uniformly chosen generators I +- e_ij."""
    if n < 2:
        raise DimensionError("need n >= 2")
    rng = random.Random(seed)
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(word_length):
        i, j = rng.sample(range(n), 2)
        s = rng.choice((1, -1))
        rows[i] = [a + s * b for a, b in zip(rows[i], rows[j])]
    return IntMat(rows)
