"""Exact integer and mod-p linear algebra.

Vector systems and SL_n elements share one action convention: a generalized
transvection E_{I,J,alpha} acts by *left* multiplication on a matrix whose
rows are the vectors, adding ``alpha[i][j] * row_i`` into ``row_j`` for
i in I, j in J. All indices are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import DimensionError, InvalidOperationError, NoSolutionError, NotUnimodularError, ParseError
from .primes import is_prime


class IntMat:
    """Immutable dense matrix of Python ints."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise DimensionError("ragged rows")
            width = widths.pop()
        else:
            width = ncols or 0
        if ncols is not None and ncols != width:
            raise DimensionError(f"expected {ncols} columns, got {width}")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMat":
        return cls([[0] * n for _ in range(m)], ncols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self._rows[i][j]
        return self._rows[ij]

    def transpose(self) -> "IntMat":
        return IntMat(zip(*self._rows), ncols=self.nrows) if self.nrows else IntMat.zeros(self.ncols, 0)

    @property
    def T(self) -> "IntMat":
        return self.transpose()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMat":
        return IntMat([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return IntMat(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
            ncols=other.ncols,
        )

    def __neg__(self) -> "IntMat":
        return IntMat([[-x for x in r] for r in self._rows], ncols=self.ncols)

    def __add__(self, other: "IntMat") -> "IntMat":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return IntMat([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], ncols=self.ncols)

    def __sub__(self, other: "IntMat") -> "IntMat":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntMat):
            return self.shape == other.shape and self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"IntMat({self.tolist()})"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_identity(self) -> bool:
        return self.is_square() and all(
            x == (i == j) for i, r in enumerate(self._rows) for j, x in enumerate(r)
        )

    def max_bits(self) -> int:
        return max((abs(x).bit_length() for r in self._rows for x in r), default=0)


class ModMat:
    """Immutable matrix over F_p; the modulus is checked for primality."""

    __slots__ = ("_rows", "nrows", "ncols", "p")

    def __init__(self, rows: Iterable[Iterable[int]], p: int, ncols: int | None = None):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        m = IntMat(rows, ncols=ncols)
        self._rows = tuple(tuple(x % p for x in r) for r in m.rows)
        self.nrows, self.ncols = m.shape
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int) -> "ModMat":
        return cls(IntMat.identity(n).rows, p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self):
        return self._rows

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def lift(self) -> IntMat:
        return IntMat(self._rows, ncols=self.ncols)

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            return self._rows[ij[0]][ij[1]]
        return self._rows[ij]

    def __matmul__(self, other: "ModMat") -> "ModMat":
        if self.p != other.p:
            raise ValueError("moduli differ")
        return ModMat((self.lift() @ other.lift()).rows, self.p, ncols=other.ncols)

    def __eq__(self, other) -> bool:
        if isinstance(other, ModMat):
            return self.p == other.p and self.shape == other.shape and self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self._rows))

    def __repr__(self) -> str:
        return f"ModMat({self.tolist()}, p={self.p})"

    def key(self) -> tuple[int, ...]:
        """Row-major entry tuple; the canonical hash key of the element."""
        return tuple(x for r in self._rows for x in r)

    def rank(self) -> int:
        return rank_mod_p(self._rows, self.p)


@dataclass(frozen=True)
class ElemTransvection:
    """I + m * e_ij in dimension n."""

    n: int
    i: int
    j: int
    m: int = 1

    def __post_init__(self):
        if self.i == self.j:
            raise InvalidOperationError("elementary transvection needs i != j")
        if not (0 <= self.i < self.n and 0 <= self.j < self.n):
            raise InvalidOperationError(f"indices ({self.i}, {self.j}) out of range for n={self.n}")

    def to_matrix(self) -> IntMat:
        rows = IntMat.identity(self.n).tolist()
        rows[self.i][self.j] += self.m
        return IntMat(rows)

    def inverse(self) -> "ElemTransvection":
        return ElemTransvection(self.n, self.i, self.j, -self.m)

    def as_generalized(self) -> "GenTransvection":
        # row i += m * row j, i.e. source index j feeds target index i
        return GenTransvection(self.n, (self.j,), (self.i,), ((self.m,),))


@dataclass(frozen=True)
class GenTransvection:
    """E_{I,J,alpha}: v_j += sum_i alpha[i][j] v_i, for i in I, j in J.

    ``alpha`` is indexed by position in ``I`` and ``J`` (|I| x |J|).
    """

    n: int
    I: tuple[int, ...]
    J: tuple[int, ...]
    alpha: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(int(i) for i in self.I))
        object.__setattr__(self, "J", tuple(int(j) for j in self.J))
        object.__setattr__(self, "alpha", tuple(tuple(int(x) for x in r) for r in self.alpha))
        I, J = self.I, self.J
        if set(I) & set(J):
            raise InvalidOperationError(f"index sets overlap: {sorted(set(I) & set(J))}")
        if len(set(I)) != len(I) or len(set(J)) != len(J):
            raise InvalidOperationError("repeated index")
        if any(not 0 <= x < self.n for x in I + J):
            raise InvalidOperationError("index out of range")
        if len(self.alpha) != len(I) or any(len(r) != len(J) for r in self.alpha):
            raise InvalidOperationError(f"alpha must be {len(I)}x{len(J)}")

    def to_matrix(self) -> IntMat:
        rows = IntMat.identity(self.n).tolist()
        for a, i in enumerate(self.I):
            for b, j in enumerate(self.J):
                rows[j][i] += self.alpha[a][b]
        return IntMat(rows)

    def inverse(self) -> "GenTransvection":
        return GenTransvection(self.n, self.I, self.J, tuple(tuple(-x for x in r) for r in self.alpha))

    def is_identity(self) -> bool:
        return all(x == 0 for r in self.alpha for x in r)

    def entries(self):
        """Nonzero (target row j, source column i, amount) triples, row-major in alpha."""
        for a, i in enumerate(self.I):
            for b, j in enumerate(self.J):
                m = self.alpha[a][b]
                if m:
                    yield j, i, m

    def shifted(self, offset: int, n: int) -> "GenTransvection":
        """Embed into dimension n with every index shifted by offset."""
        return GenTransvection(n, tuple(i + offset for i in self.I), tuple(j + offset for j in self.J), self.alpha)

    def apply_rows(self, rows: list[list[int]], modulus: int | None = None) -> None:
        """In-place left multiplication of a row-list matrix."""
        for a, i in enumerate(self.I):
            src = rows[i]
            for b, j in enumerate(self.J):
                m = self.alpha[a][b]
                if m:
                    tgt = rows[j]
                    for c, x in enumerate(src):
                        if x:
                            tgt[c] += m * x
        if modulus is not None:
            for j in self.J:
                rows[j] = [x % modulus for x in rows[j]]


def to_matrix(t: ElemTransvection | GenTransvection) -> IntMat:
    return t.to_matrix()


def generalized_from_matrix(g: IntMat) -> GenTransvection | None:
    """Recognize g as a single generalized transvection, or return None."""
    if not g.is_square():
        return None
    n = g.nrows
    support = [(i, j, g[i, j] - (i == j)) for i in range(n) for j in range(n) if g[i, j] != (i == j)]
    targets = sorted({i for i, _, _ in support})
    sources = sorted({j for _, j, _ in support})
    if set(targets) & set(sources):
        return None
    alpha = [[0] * len(targets) for _ in sources]
    ti = {j: b for b, j in enumerate(targets)}
    si = {i: a for a, i in enumerate(sources)}
    for row, col, m in support:
        alpha[si[col]][ti[row]] = m
    return GenTransvection(n, tuple(sources), tuple(targets), tuple(map(tuple, alpha)))


def mul(a: IntMat, b: IntMat) -> IntMat:
    return a @ b


def det_exact(a: IntMat) -> int:
    """Fraction-free Bareiss elimination."""
    if not a.is_square():
        raise DimensionError(f"determinant of non-square {a.shape} matrix")
    n = a.nrows
    if n == 0:
        return 1
    m = a.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def inverse_unimodular(a: IntMat) -> IntMat:
    if not a.is_square():
        raise DimensionError("inverse of non-square matrix")
    d = det_exact(a)
    if abs(d) != 1:
        raise NotUnimodularError(f"determinant {d} is not a unit")
    n = a.nrows
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = []
    for r in aug:
        row = []
        for x in r[n:]:
            if x.denominator != 1:
                raise NotUnimodularError("inverse has non-integral entries")
            row.append(x.numerator)
        out.append(row)
    return IntMat(out)


def reduce_mod_p(a: IntMat, p: int) -> ModMat:
    return ModMat(a.rows, p, ncols=a.ncols)


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V == D, with U, V unimodular and D diagonal in divisibility order."""

    U: IntMat
    D: IntMat
    V: IntMat

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(self.D.shape)
        return tuple(self.D[i, i] for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for r in m:
        r[i], r[j] = r[j], r[i]


def _nearest(x: int, d: int) -> int:
    """Nearest-integer quotient, so remainders are centred."""
    return (2 * x + d) // (2 * d)


def smith_normal_form(a: IntMat) -> SmithForm:
    """Smith form by repeated smallest-magnitude pivoting.

    Deterministic: ties in pivot magnitude are broken by row-major position.
    """
    m, n = a.shape
    D = a.tolist()
    U = IntMat.identity(m).tolist()
    V = IntMat.identity(n).tolist()
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return SmithForm(IntMat(U, ncols=m), IntMat(D, ncols=n), IntMat(V, ncols=n))
            _, pi, pj = best
            if pi != t:
                _swap_rows(D, t, pi)
                _swap_rows(U, t, pi)
            if pj != t:
                _swap_cols(D, t, pj)
                _swap_cols(V, t, pj)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = _nearest(D[i][t], piv)
                if q:
                    D[i] = [x - q * y for x, y in zip(D[i], D[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = _nearest(D[t][j], piv)
                if q:
                    for r in D:
                        r[j] -= q * r[t]
                    for r in V:
                        r[j] -= q * r[t]
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(IntMat(U, ncols=m), IntMat(D, ncols=n), IntMat(V, ncols=n))


def _invariant_factors_mod(rows: list[list[int]], modulus: int) -> tuple[int, ...]:
    """Invariant factors of a lattice known to contain modulus * Z^k.

    Every entry is kept as a centred residue, which is the same as adding
    multiples of the columns modulus * e_i, so the lattice never changes.
    """
    k = len(rows)
    d = [[_centred(x, modulus) for x in r] for r in rows]
    n = len(d[0]) if d else 0
    out = []
    for t in range(k):
        while True:
            best = None
            for i in range(t, k):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                out.extend([modulus] * (k - t))
                return tuple(out)
            _, pi, pj = best
            d[t], d[pi] = d[pi], d[t]
            for r in d:
                r[t], r[pj] = r[pj], r[t]
            piv = d[t][t]
            clean = True
            for i in range(t + 1, k):
                q = _nearest(d[i][t], piv)
                d[i] = [_centred(x - q * y, modulus) for x, y in zip(d[i], d[t])]
                clean = clean and not d[i][t]
            for j in range(t + 1, n):
                q = _nearest(d[t][j], piv)
                for r in d:
                    r[j] = _centred(r[j] - q * r[t], modulus)
                clean = clean and not d[t][j]
            if not clean:
                continue
            bad = next((i for i in range(t + 1, k) for j in range(t + 1, n) if d[i][j] % piv), None)
            if bad is None:
                break
            d[t] = [_centred(x + y, modulus) for x, y in zip(d[t], d[bad])]
        out.append(gcd(d[t][t], modulus))
    return tuple(out)


def _centred(x: int, m: int) -> int:
    return (x + m // 2) % m - m // 2


def invariant_factors(a: IntMat) -> tuple[int, ...]:
    """Invariant factors of the column lattice of a.

    With full row rank the computation runs modulo a nonzero maximal minor,
    so intermediate entries never outgrow it.
    """
    k, n = a.shape
    if 0 < k <= n:
        cols = a.columns()
        pick: list[int] = []
        for j in range(n):
            if rank_exact([cols[i] for i in pick] + [cols[j]]) == len(pick) + 1:
                pick.append(j)
                if len(pick) == k:
                    break
        if len(pick) == k:
            minor = abs(det_exact(a.submatrix(range(k), pick)))
            if minor == 1:
                return (1,) * k
            return _invariant_factors_mod(a.tolist(), minor)
    return smith_normal_form(a).invariant_factors


def lattice_index(vectors: Sequence[Sequence[int]], k: int) -> int:
    """Index in Z^k of the lattice spanned by ``vectors``; 0 if not full rank."""
    if not vectors:
        return 1 if k == 0 else 0
    cols = IntMat(vectors, ncols=k).transpose()
    d = invariant_factors(cols)
    if len(d) < k or any(x == 0 for x in d[:k]):
        return 0
    out = 1
    for x in d[:k]:
        out *= x
    return out


def is_complete(v: IntMat) -> bool:
    """True iff the columns of the k x n matrix generate Z^k."""
    k, n = v.shape
    if k > n:
        raise DimensionError(f"system of {n} vectors in Z^{k}: need k <= n")
    if k == 0:
        return True
    d = invariant_factors(v)
    return len(d) >= k and all(x == 1 for x in d[:k])


def integer_kernel(g: IntMat) -> list[list[int]]:
    """Basis (as rows) of the integer vectors a with g @ a == 0."""
    sf = smith_normal_form(g)
    r = sf.rank
    return [list(col) for col in sf.V.columns()[r:]]


def size_reduce(x: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int]:
    """Shorten x modulo the lattice spanned by ``basis``.

    LLL-reduces the basis, then applies nearest-plane rounding, so the result
    is within a small factor of the shortest vector in x + lattice.
    """
    x = list(x)
    if not basis or not any(x):
        return x
    dm = DomainMatrix([[ZZ(v) for v in b] for b in basis], (len(basis), len(x)), ZZ)
    reduced = [[int(v) for v in row] for row in dm.lll().to_Matrix().tolist()]
    reduced = [b for b in reduced if any(b)]
    # exact Gram-Schmidt over Q
    ortho: list[list[Fraction]] = []
    for b in reduced:
        v = [Fraction(c) for c in b]
        for o in ortho:
            mu = sum(a * c for a, c in zip(v, o)) / sum(c * c for c in o)
            v = [a - mu * c for a, c in zip(v, o)]
        ortho.append(v)
    for b, o in zip(reversed(reduced), reversed(ortho)):
        mu = sum(a * c for a, c in zip(x, o)) / sum(c * c for c in o)
        q = round(mu)
        if q:
            x = [a - q * c for a, c in zip(x, b)]
    return x


def solve_integer(g: IntMat, x: Sequence[int], reduce: bool = True) -> list[int]:
    """An integer vector a with g @ a == x, or NoSolutionError.

    With ``reduce`` the particular solution is shortened modulo the integer
    kernel of g, which keeps entry sizes from compounding across steps.
    """
    k, m = g.shape
    if len(x) != k:
        raise DimensionError("right-hand side length mismatch")
    sf = smith_normal_form(g)
    ux = [sum(u * xi for u, xi in zip(row, x)) for row in sf.U.rows]
    d = sf.invariant_factors
    y = [0] * m
    for i in range(k):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ux[i] != 0:
                raise NoSolutionError("inconsistent system")
            continue
        q, r = divmod(ux[i], di)
        if r:
            raise NoSolutionError("no integral solution")
        y[i] = q
    a = [sum(v * yi for v, yi in zip(row, y)) for row in sf.V.rows]
    if reduce:
        a = size_reduce(a, [list(col) for col in sf.V.columns()[sf.rank:]])
    return a


def solve_rational(a: IntMat, b: Sequence[int]) -> list[Fraction]:
    """Unique solution over Q of a @ x == b for nonsingular square a."""
    n = a.nrows
    aug = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(a.rows, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise NoSolutionError("singular system")
        aug[c], aug[p] = aug[p], aug[c]
        for i in range(c + 1, n):
            if aug[i][c] != 0:
                f = aug[i][c] / aug[c][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        x[i] = (aug[i][n] - sum(aug[i][j] * x[j] for j in range(i + 1, n))) / aug[i][i]
    return x


def rank_exact(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of integer rows."""
    if not rows:
        return 0
    m = [[Fraction(x) for x in r] for r in rows]
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        p = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def nullspace_mod_p(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {a : rows @ a == 0} over F_p."""
    m = [[x % p for x in r] for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = -m[i][free] % p
        basis.append(v)
    return basis


def solve_mod_p(g: Sequence[Sequence[int]], x: Sequence[int], p: int) -> list[int]:
    """Some a with g @ a == x over F_p (g given as rows)."""
    k = len(g)
    m = len(g[0]) if k else 0
    aug = [[v % p for v in row] + [xi % p] for row, xi in zip(g, x)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, k) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(k):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(v - f * w) % p for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][m] for i in range(r, k)):
        raise NoSolutionError("inconsistent system over F_p")
    a = [0] * m
    for i, c in enumerate(pivots):
        a[c] = aug[i][m]
    return a


def xgcd_list(values: Sequence[int]) -> tuple[int, list[int]]:
    """(g, coeffs) with g = gcd(values) >= 0 and sum(c * v) == g."""
    g, coeffs = 0, [0] * len(values)
    for idx, v in enumerate(values):
        if v == 0:
            continue
        # extended Euclid on (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[idx] = old_t
        g = old_r
    return g, coeffs


# --------------------------------------------------------------------------
# text format: "rows cols" header, then one row of decimal integers per line


def format_matrix(a: IntMat | ModMat) -> str:
    lines = [f"{a.nrows} {a.ncols}"]
    lines += [" ".join(str(x) for x in r) for r in a.rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> IntMat:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input", line=1)
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise ParseError("header must be 'rows cols'", line=1)
    m, n = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} rows, found {len(lines) - 1}", line=len(lines) + (1 if len(lines) - 1 < m else 0))
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != n:
            raise ParseError(f"expected {n} entries, found {len(parts)}", line=lineno)
        try:
            rows.append([int(p) for p in parts])
        except ValueError:
            raise ParseError(f"non-integer entry in {line!r}", line=lineno) from None
    return IntMat(rows, ncols=n)


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
