"""Reduction of complete vector systems to the standard system.

A system of n vectors in Z^k (or F_p^k) is handled internally as a list of
n rows of length k. ``VectorSystem.mat`` is the transpose: column j holds v_j.
Every operation is a GenTransvection acting by v_j += sum_i alpha_ij v_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from sympy import factorint

from .errors import DimensionError, InvalidOperationError, NoSolutionError, PolicyError
from .linalg import (
    GenTransvection,
    IntMat,
    det_exact,
    gcd_all,
    inverse_unimodular,
    is_complete,
    lattice_index,
    nullspace_mod_p,
    rank_exact,
    rank_mod_p,
    size_reduce,
    smith_normal_form,
    solve_integer,
    solve_mod_p,
    solve_rational,
    xgcd_list,
)
from .primes import dirichlet_prime, is_prime

POLICIES = ("Z-3k", "Z-2k1", "Fp-2k")
OP_BOUNDS = {"Z-3k": 4, "Z-2k1": 5, "Fp-2k": 3}


@dataclass(frozen=True)
class VectorSystem:
    """n vectors in Z^k (modulus None) or F_p^k, stored as a k x n matrix."""

    mat: IntMat
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None:
            if not is_prime(self.modulus):
                raise ValueError(f"modulus {self.modulus} is not prime")
            object.__setattr__(self, "mat", IntMat([[x % self.modulus for x in r] for r in self.mat.rows], ncols=self.mat.ncols))
        if self.k > self.n:
            raise DimensionError(f"{self.n} vectors cannot generate a rank-{self.k} group")
        if not self.complete():
            raise InvalidOperationError("vector system is not complete")

    @classmethod
    def from_vectors(cls, vectors, modulus: int | None = None) -> "VectorSystem":
        vectors = [list(v) for v in vectors]
        k = len(vectors[0]) if vectors else 0
        return cls(IntMat(vectors, ncols=k).transpose(), modulus)

    @classmethod
    def standard(cls, k: int, n: int, modulus: int | None = None) -> "VectorSystem":
        return cls(IntMat([[int(i == j) for j in range(n)] for i in range(k)], ncols=n), modulus)

    @property
    def k(self) -> int:
        return self.mat.nrows

    @property
    def n(self) -> int:
        return self.mat.ncols

    @property
    def ring(self) -> str:
        return "Z" if self.modulus is None else f"F_{self.modulus}"

    def vectors(self) -> list[list[int]]:
        return [list(c) for c in self.mat.columns()]

    def complete(self) -> bool:
        if self.modulus is None:
            return is_complete(self.mat)
        return rank_mod_p(self.mat.rows, self.modulus) == self.k

    def is_standard(self) -> bool:
        return all(x == (i == j) for i, r in enumerate(self.mat.rows) for j, x in enumerate(r))


@dataclass(frozen=True)
class ReductionTrace:
    policy: str
    initial: VectorSystem
    ops: tuple[GenTransvection, ...]
    final: VectorSystem
    primes: tuple[int, ...] = field(default=())

    @property
    def op_count(self) -> int:
        return len(self.ops)

    def replay(self) -> VectorSystem:
        system = self.initial
        for op in self.ops:
            system = apply_generalized(system, op)
        return system

    def verify(self) -> bool:
        return self.replay() == self.final and self.final.is_standard() and self.op_count <= OP_BOUNDS[self.policy]


def _apply_rows(rows: list[list[int]], op: GenTransvection, modulus: int | None) -> list[list[int]]:
    out = [list(r) for r in rows]
    op.apply_rows(out, modulus)
    return out


def apply_generalized(system: VectorSystem, op: GenTransvection) -> VectorSystem:
    """Apply one operation; the result is checked for completeness."""
    if op.n != system.n:
        raise InvalidOperationError(f"operation on {op.n} indices applied to {system.n} vectors")
    rows = _apply_rows(system.vectors(), op, system.modulus)
    return VectorSystem.from_vectors(rows, system.modulus) if rows else system


def is_prime_system(w, primes=None) -> bool:
    """k vectors in Z^k whose span has quotient a product of distinct prime cyclic groups.

    Equivalent to |det w| being squarefree and > 1. If ``primes`` is given the
    determinant is checked against their product instead of being factored.
    """
    m = w if isinstance(w, IntMat) else IntMat(w)
    if not m.is_square():
        raise DimensionError("prime system must be square")
    d = abs(det_exact(m))
    if d < 2:
        return False
    if primes is not None:
        product = 1
        for p in primes:
            product *= p
        return len(set(primes)) == len(primes) and all(is_prime(p) for p in primes) and product == d
    return all(e == 1 for e in factorint(d).values())


# --------------------------------------------------------------------------
# helpers on row lists


def _first_independent(rows: list[list[int]], candidates, k: int, modulus: int | None = None) -> list[int]:
    """Greedy lexicographically first independent subset, up to k indices."""
    chosen: list[int] = []
    for i in candidates:
        trial = [rows[j] for j in chosen] + [rows[i]]
        r = rank_exact(trial) if modulus is None else rank_mod_p(trial, modulus)
        if r == len(trial):
            chosen.append(i)
            if len(chosen) == k:
                break
    return chosen


def _choose_prime_block(rows: list[list[int]], k: int) -> list[int]:
    n = len(rows)
    block = list(range(k))
    rest = list(range(k, n))
    if rank_exact([rows[i] for i in rest]) == k:
        return block
    independent = set(_first_independent(rows, range(n), k))
    return [i for i in range(n) if i not in independent][:k]


def _column_hermite(m: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Upper-triangular H = m @ U by column operations, rows handled bottom-up."""
    k = len(m)
    h = [list(r) for r in m]
    u = [[int(i == j) for j in range(k)] for i in range(k)]

    def col_op(dst, src, q):  # col dst -= q * col src
        for r in h:
            r[dst] -= q * r[src]
        for r in u:
            r[dst] -= q * r[src]

    def col_swap(a, b):
        for r in h:
            r[a], r[b] = r[b], r[a]
        for r in u:
            r[a], r[b] = r[b], r[a]

    for i in range(k - 1, -1, -1):
        # gather the gcd of h[i][0..i] into column i
        for j in range(i):
            while h[i][j]:
                q = h[i][i] // h[i][j]
                col_op(i, j, q)
                col_swap(i, j)
    return h, u


def _centred(x: int, m: int) -> int:
    return (x + m // 2) % m - m // 2


def make_prime_block(rows: list[list[int]], k: int) -> tuple[GenTransvection, list[int], list[int]]:
    """One operation turning the vectors at ``block`` into a prime system.

    Returns (operation, block indices, primes).
    """
    n = len(rows)
    if n < 2 * k:
        raise PolicyError(f"prime-making needs n >= 2k, got n={n}, k={k}")
    block = _choose_prime_block(rows, k)
    rest = [i for i in range(n) if i not in block]
    # greedy choice is the lexicographically first basis (matroid property)
    reference = _first_independent(rows, rest, k)
    bound = abs(det_exact(IntMat([rows[i] for i in reference]))) + 1

    m_cols = IntMat([rows[b] for b in block], ncols=k).transpose()  # k x k
    n_cols = IntMat([rows[i] for i in rest], ncols=k).transpose()  # k x |rest|
    snf = smith_normal_form(n_cols)
    d = snf.invariant_factors
    primes: list[int] = []
    if all(x == 1 for x in d):
        # span(N) is all of Z^k, so any block works: take diag(primes)
        for _ in range(k):
            primes.append(dirichlet_prime(0, 1, bound, distinct_from=primes))
        w = IntMat([[primes[i] if i == j else 0 for j in range(k)] for i in range(k)])
    else:
        shifted = (snf.U @ m_cols).tolist()
        h, u = _column_hermite(shifted)
        for i in range(k):
            primes.append(dirichlet_prime(h[i][i], d[i], bound, distinct_from=primes))
        # entries above the diagonal only matter modulo d_i
        t = [[_centred(h[i][j], d[i]) if j > i else (primes[i] if i == j else 0) for j in range(k)] for i in range(k)]
        w = inverse_unimodular(snf.U) @ IntMat(t) @ inverse_unimodular(IntMat(u))
    # N @ beta = W - M, solved through the Smith form of N
    rhs = (snf.U @ (w - m_cols)).tolist()
    y = [[0] * k for _ in rest]
    for i in range(k):
        for c in range(k):
            q, r = divmod(rhs[i][c], d[i])
            if r:
                raise NoSolutionError("prime block residues inconsistent")
            y[i][c] = q
    beta = (snf.V @ IntMat(y, ncols=k)).tolist()
    # shorten each column modulo the integer kernel of N
    kernel = [list(col) for col in snf.V.columns()[k:]]
    columns = [size_reduce([r[c] for r in beta], kernel) for c in range(k)]
    beta = [[columns[c][i] for c in range(k)] for i in range(len(rest))]
    op = GenTransvection(n, tuple(rest), tuple(block), tuple(map(tuple, beta)))
    return op, block, primes


def make_prime_system(system: VectorSystem) -> tuple[GenTransvection, VectorSystem, list[int]]:
    if system.modulus is not None:
        raise PolicyError("prime systems exist only over Z")
    op, _, primes = make_prime_block(system.vectors(), system.k)
    return op, apply_generalized(system, op), primes


# --------------------------------------------------------------------------
# reductions over Z


def _nonzero(op: GenTransvection) -> bool:
    return not op.is_identity()


class _PrimeBlockSolver:
    """Integer solutions of sum_g a_g v_g = x over G = block + extras.

    The block spans a sublattice of squarefree index prod(primes). The extra
    coefficients are fixed prime by prime (CRT) so that the remainder lies in
    the block lattice, which is then solved exactly over Q.
    """

    def __init__(self, rows, block, primes, extras):
        self.block_cols = IntMat([rows[b] for b in block]).transpose()
        self.extra_rows = [rows[e] for e in extras]
        self.modulus = 1
        for p in primes:
            self.modulus *= p
        self.parts = []
        for p in primes:
            y = nullspace_mod_p([rows[b] for b in block], p)[0]
            images = [sum(a * b for a, b in zip(y, v)) % p for v in self.extra_rows]
            pick = next(a for a, img in enumerate(images) if img)
            idem = self.modulus // p * pow(self.modulus // p, -1, p)
            self.parts.append((p, y, pick, pow(images[pick], -1, p), idem))

    def solve(self, x):
        m = self.modulus
        a_extra = [0] * len(self.extra_rows)
        for p, y, pick, inv, idem in self.parts:
            need = sum(a * b for a, b in zip(y, x)) * inv % p
            a_extra[pick] = (a_extra[pick] + idem * need) % m
        a_extra = [_centred(v, m) for v in a_extra]
        rest = [xi - sum(c * v[i] for c, v in zip(a_extra, self.extra_rows)) for i, xi in enumerate(x)]
        a_block = solve_rational(self.block_cols, rest)
        if any(v.denominator != 1 for v in a_block):
            raise NoSolutionError("remainder left the block lattice")
        return [int(v) for v in a_block] + a_extra


def _finish(rows: list[list[int]], k: int, generating: list[int], prime_block=None) -> list[GenTransvection]:
    """Three operations from a generating index set G to the standard system.

    ``prime_block`` = (block, primes) when G starts with a prime block.
    """
    n = len(rows)
    ops = []
    gset = set(generating)
    outside = [i for i in range(n) if i not in gset]
    preferred = [i for i in outside if i < k] + [i for i in outside if i >= k]
    chosen = preferred[:k]
    taken = {r for r in chosen if r < k}
    free_targets = iter(t for t in range(k) if t not in taken)
    target = {r: (r if r < k else next(free_targets)) for r in chosen}

    # op2: each chosen vector becomes its target basis vector
    if prime_block is not None:
        block, primes = prime_block
        solve = _PrimeBlockSolver(rows, block, primes, generating[len(block):]).solve
    else:
        g_cols = IntMat([rows[g] for g in generating], ncols=k).transpose()

        def solve(goal):
            return solve_integer(g_cols, goal)

    alpha = [[0] * len(chosen) for _ in generating]
    for b, r in enumerate(chosen):
        goal = [int(t == target[r]) - x for t, x in enumerate(rows[r])]
        coeffs = solve(goal)
        for a in range(len(generating)):
            alpha[a][b] = coeffs[a]
    ops.append(GenTransvection(n, tuple(generating), tuple(chosen), tuple(map(tuple, alpha))))
    rows = _apply_rows(rows, ops[-1], None)

    # op3: fill in the remaining standard positions
    heads = [j for j in range(k) if j not in taken]
    alpha = [[int(target[r] == j) - rows[j][target[r]] for j in heads] for r in chosen]
    if heads:
        ops.append(GenTransvection(n, tuple(chosen), tuple(heads), tuple(map(tuple, alpha))))
        rows = _apply_rows(rows, ops[-1], None)

    # op4: clear everything past the first k
    tail = list(range(k, n))
    alpha = [[-rows[j][i] for j in tail] for i in range(k)]
    ops.append(GenTransvection(n, tuple(range(k)), tuple(tail), tuple(map(tuple, alpha))))
    return [op for op in ops if _nonzero(op)]


def _is_standard_rows(rows: list[list[int]]) -> bool:
    return all(x == (i == j) for i, r in enumerate(rows) for j, x in enumerate(r))


def _reduce_rank_one(values: list[int]) -> list[GenTransvection]:
    """Three operations for a single vector system (k = 1), n >= 3."""
    n = len(values)
    ops: list[GenTransvection] = []
    v = list(values)
    if gcd_all(v[1:]) == 0 or (1 - v[0]) % gcd_all(v[1:]) != 0:
        tail_gcd = gcd_all(v[2:])
        if tail_gcd != 0:
            # make v_1 a prime coprime to the tail
            sources = [0] + list(range(2, n))
            g = gcd_all(v[i] for i in sources)
            pi = dirichlet_prime(v[1], g, abs(tail_gcd))
            coeffs = solve_integer(IntMat([[v[i] for i in sources]]), [pi - v[1]])
            ops.append(GenTransvection(n, tuple(sources), (1,), tuple((c,) for c in coeffs)))
            v[1] = pi
        else:
            # only v_0, v_1 nonzero: build a unit in v_2 first
            _, (x, y) = xgcd_list(v[:2])
            ops.append(GenTransvection(n, (0, 1), (2,), ((x,), (y,))))
            rest = [j for j in range(n) if j != 2]
            ops.append(GenTransvection(n, (2,), tuple(rest), (tuple([1 - v[0]] + [-v[j] for j in rest[1:]]),)))
            ops.append(GenTransvection(n, (0,), (2,), ((-1,),)))
            return ops
    sources = list(range(1, n))
    coeffs = solve_integer(IntMat([[v[i] for i in sources]]), [1 - v[0]])
    ops.append(GenTransvection(n, tuple(sources), (0,), tuple((c,) for c in coeffs)))
    ops.append(GenTransvection(n, (0,), tuple(sources), (tuple(-v[j] for j in sources),)))
    return [op for op in ops if _nonzero(op)]


def _generating_extension(rows: list[list[int]], k: int, block: list[int]) -> list[int]:
    """Greedy indices outside block that strictly lower the lattice index to 1."""
    chosen = list(block)
    index = lattice_index([rows[i] for i in chosen], k)
    for i in range(len(rows)):
        if index == 1:
            break
        if i in chosen:
            continue
        trial = lattice_index([rows[j] for j in chosen + [i]], k)
        if index == 0 or (trial != 0 and trial < index):
            chosen.append(i)
            index = trial
    return chosen


def _plan_3k(rows: list[list[int]], k: int) -> tuple[list[GenTransvection], list[int]]:
    op, block, primes = make_prime_block(rows, k)
    ops = [op] if _nonzero(op) else []
    rows = _apply_rows(rows, op, None)
    generating = _generating_extension(rows, k, block)
    return ops + _finish(rows, k, generating, (block, primes)), primes


def _plan_2k1(rows: list[list[int]], k: int) -> tuple[list[GenTransvection], list[int]]:
    n = len(rows)
    op, block, primes = make_prime_block(rows, k)
    ops = [op] if _nonzero(op) else []
    rows = _apply_rows(rows, op, None)
    c = next(i for i in range(n) if i not in block)
    others = [i for i in range(n) if i not in block and i != c]

    # Z^k / span(block) is cyclic of order m = prod(primes); for each prime p
    # a functional y_p vanishing on the block mod p detects the p-part.
    m = 1
    for p in primes:
        m *= p
    lam = [0] * len(others)
    for p in primes:
        y = nullspace_mod_p([rows[b] for b in block], p)[0]

        def image(x, y=y, p=p):
            return sum(a * b for a, b in zip(y, x)) % p

        if image(rows[c]) == 0:
            # some other vector must hit the p-part, since the system is complete;
            # the CRT idempotent sets its coefficient to 1 mod p and 0 mod the rest
            pick = next(a for a, i in enumerate(others) if image(rows[i]))
            lam[pick] = (lam[pick] + m // p * pow(m // p, -1, p)) % m
    lam = [(x + m // 2) % m - m // 2 for x in lam]
    extra = GenTransvection(n, tuple(others), (c,), tuple((x,) for x in lam))
    if _nonzero(extra):
        ops.append(extra)
        rows = _apply_rows(rows, extra, None)
    return ops + _finish(rows, k, block + [c], (block, primes)), primes


def _plan_field(rows: list[list[int]], k: int, p: int) -> list[GenTransvection]:
    n = len(rows)
    ops: list[GenTransvection] = []
    top = list(range(k))
    bottom = list(range(k, n))
    span = _first_independent(rows, bottom, k, p)
    if len(span) < k:
        lifts = []
        basis = [rows[i] for i in span]
        for t in top:
            if rank_mod_p(basis + [rows[t]], p) == len(basis) + 1:
                basis.append(rows[t])
                lifts.append(t)
        free = [b for b in bottom if b not in span][: len(lifts)]
        alpha = [[int(fi == li) for fi in range(len(free))] for li in range(len(lifts))]
        # each lifted top row goes into its own free bottom row
        op = GenTransvection(n, tuple(lifts), tuple(free), tuple(map(tuple, alpha)))
        ops.append(op)
        rows = _apply_rows(rows, op, p)
    bottom_cols = [[rows[b][i] for b in bottom] for i in range(k)]
    alpha = [[0] * k for _ in bottom]
    for j in top:
        goal = [(int(i == j) - rows[j][i]) % p for i in range(k)]
        coeffs = solve_mod_p(bottom_cols, goal, p)
        for a in range(len(bottom)):
            alpha[a][j] = coeffs[a]
    ops.append(GenTransvection(n, tuple(bottom), tuple(top), tuple(map(tuple, alpha))))
    rows = _apply_rows(rows, ops[-1], p)
    alpha = [[(-rows[j][i]) % p for j in bottom] for i in top]
    ops.append(GenTransvection(n, tuple(top), tuple(bottom), tuple(map(tuple, alpha))))
    return [op for op in ops if _nonzero(op)]


def check_policy(k: int, n: int, policy: str, modulus: int | None) -> None:
    if policy not in POLICIES:
        raise PolicyError(f"unknown policy {policy!r}; choose from {', '.join(POLICIES)}")
    if policy == "Fp-2k":
        if modulus is None:
            raise PolicyError("Fp-2k needs a system over F_p")
        if n < 2 * k:
            raise PolicyError(f"Fp-2k needs n >= 2k, got n={n}, k={k}")
        return
    if modulus is not None:
        raise PolicyError(f"{policy} needs a system over Z")
    if k == 1 and n >= 3:
        return
    need = 3 * k if policy == "Z-3k" else 2 * k + 1
    if n < need:
        raise PolicyError(f"{policy} needs n >= {need}, got n={n}, k={k}")


def plan_reduction(rows: list[list[int]], k: int, policy: str, modulus: int | None = None):
    """Operations taking the row list to the standard system, plus primes used."""
    n = len(rows)
    check_policy(k, n, policy, modulus)
    if _is_standard_rows(rows):
        return [], []
    if policy == "Fp-2k":
        return _plan_field(rows, k, modulus), []
    if k == 1:
        return _reduce_rank_one([r[0] for r in rows]), []
    if policy == "Z-3k":
        return _plan_3k(rows, k)
    return _plan_2k1(rows, k)


def reduce_to_standard(system: VectorSystem, policy: str = "Z-3k") -> ReductionTrace:
    ops, primes = plan_reduction(system.vectors(), system.k, policy, system.modulus)
    current = system
    for op in ops:
        current = apply_generalized(current, op)
    if not current.is_standard():
        raise AssertionError("reduction did not reach the standard system")
    return ReductionTrace(policy, system, tuple(ops), current, tuple(primes))
