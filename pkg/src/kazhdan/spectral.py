"""Cayley graphs of SL_n(F_p) over the elementary generators, their spectral gap and mixing time."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .constants import kazhdan_Adoubleprime, sl_order
from .errors import ConvergenceError, DimensionError, SizeError
from .primes import is_prime

DENSE_LIMIT = 4000
MIX_LIMIT = 10_000
DEFAULT_CAP = 100_000
EIG_TOL = 1e-8


def elementary_generators(n: int, p: int) -> np.ndarray:
    """I + e_ij and I - e_ij mod p for i != j, shape (2n(n-1), n, n); duplicates kept."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for s in (1, -1):
                g = np.eye(n, dtype=np.int64)
                g[i, j] = s % p
                gens.append(g)
    return np.array(gens)


@dataclass
class GroupTable:
    n: int
    p: int
    elements: np.ndarray  # (N, n, n) entries mod p; id 0 is the identity
    codes: np.ndarray  # sorted canonical codes
    code_ids: np.ndarray  # element id for each sorted code

    @property
    def order(self) -> int:
        return len(self.elements)

    def encode(self, mats: np.ndarray) -> np.ndarray:
        return _encode(mats, self.p)

    def lookup(self, mats: np.ndarray) -> np.ndarray:
        codes = self.encode(mats)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, len(self.codes) - 1)
        if not np.all(self.codes[pos] == codes):
            raise KeyError("matrix not in group table")
        return self.code_ids[pos]


def _encode(mats: np.ndarray, p: int) -> np.ndarray:
    """Row-major entries read as a base-p integer."""
    flat = mats.reshape(len(mats), -1)
    weights = p ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def enumerate_group(n: int, p: int, size_cap: int = DEFAULT_CAP) -> GroupTable:
    """Breadth-first closure of the identity under the elementary generators."""
    if n < 1:
        raise DimensionError("n must be positive")
    if not is_prime(p):
        raise DimensionError(f"p must be prime, got {p}")
    order = sl_order(n, p)
    if order > size_cap:
        raise SizeError(f"|SL_{n}(F_{p})| = {order} exceeds the cap {size_cap}")
    if n * n * math.log2(p) >= 62:
        raise SizeError("matrix encoding does not fit in 64 bits")
    gens = elementary_generators(n, p) if n > 1 else np.eye(1, dtype=np.int64)[None]
    ident = np.eye(n, dtype=np.int64)[None]
    elements = [ident]
    seen = {int(_encode(ident, p)[0])}
    frontier = ident
    while len(frontier):
        prod = np.einsum("aij,gjk->agik", frontier, gens) % p
        prod = prod.reshape(-1, n, n)
        codes = _encode(prod, p)
        _, first = np.unique(codes, return_index=True)
        fresh = [i for i in sorted(first) if int(codes[i]) not in seen]
        seen.update(int(codes[i]) for i in fresh)
        frontier = prod[fresh]
        if len(frontier):
            elements.append(frontier)
    elements = np.concatenate(elements)
    if len(elements) != order:
        raise DimensionError(f"closure has {len(elements)} elements, expected {order}")
    codes = _encode(elements, p)
    perm = np.argsort(codes)
    return GroupTable(n, p, elements, codes[perm], perm)


@dataclass
class Graph:
    """Regular graph as a neighbour array; row v lists v*s for every generator s."""

    neighbours: np.ndarray
    name: str = ""

    @property
    def order(self) -> int:
        return self.neighbours.shape[0]

    @property
    def degree(self) -> int:
        return self.neighbours.shape[1]

    def adjacency(self) -> sp.csr_matrix:
        """Normalized adjacency A/d with multi-edges summed."""
        N, d = self.neighbours.shape
        rows = np.repeat(np.arange(N), d)
        data = np.full(N * d, 1.0 / d)
        return sp.csr_matrix((data, (rows, self.neighbours.ravel())), shape=(N, N))

    def is_symmetric(self) -> bool:
        a = self.adjacency()
        return abs(a - a.T).max() < 1e-15 if a.nnz else True


def cayley_graph(table: GroupTable) -> Graph:
    gens = elementary_generators(table.n, table.p)
    prod = np.einsum("aij,gjk->agik", table.elements, gens) % table.p
    ids = table.lookup(prod.reshape(-1, table.n, table.n))
    return Graph(ids.reshape(table.order, len(gens)), f"SL_{table.n}(F_{table.p})")


def cyclic_cayley(m: int, steps) -> Graph:
    """Cayley graph of Z/m with the given (symmetric) step multiset."""
    v = np.arange(m)[:, None]
    return Graph((v + np.asarray(steps)[None, :]) % m, f"Z/{m}")


def cycle_graph(m: int) -> Graph:
    return cyclic_cayley(m, [1, -1])


def complete_graph(m: int) -> Graph:
    return cyclic_cayley(m, list(range(1, m)))


@dataclass
class SpectralReport:
    n: Optional[int]
    p: Optional[int]
    order: int
    degree: int
    beta: float
    lambda_2: float
    lambda_min: float
    method: str
    mixing_steps: Optional[int] = None
    displacement_sq: Optional[str] = None
    bound_checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def _deflated_operator(a: sp.csr_matrix) -> LinearOperator:
    N = a.shape[0]

    def mv(x):
        x = np.ravel(x)
        x = x - x.mean()
        y = a @ x
        return y - y.mean()

    return LinearOperator((N, N), matvec=mv, dtype=np.float64)


def spectrum_extremes(graph: Graph, method: str = "auto") -> tuple[float, float, str]:
    """(lambda_2, lambda_min) of the normalized adjacency."""
    N = graph.order
    if N == 1:
        return 1.0, 1.0, "trivial"
    a = graph.adjacency()
    if method == "auto":
        method = "dense" if N <= DENSE_LIMIT else "iterative"
    if method == "dense":
        ev = np.linalg.eigvalsh(a.toarray())
        return float(ev[-2]), float(ev[0]), "dense"
    if method != "iterative":
        raise ValueError(f"unknown method {method!r}")
    op = _deflated_operator(a)
    rng = np.random.default_rng(0)
    v0 = rng.standard_normal(N)
    try:
        top, vec = eigsh(op, k=1, which="LA", tol=EIG_TOL, maxiter=10**6, v0=v0)
        low, vec_low = eigsh(op, k=1, which="SA", tol=EIG_TOL, maxiter=10**6, v0=v0)
    except ArpackNoConvergence as err:
        raise ConvergenceError("eigensolver did not converge", residual=float("nan")) from err
    lam2 = float(top[0])
    residual = float(np.linalg.norm(op @ vec[:, 0] - lam2 * vec[:, 0]))
    if residual > 1e-6:
        raise ConvergenceError("second eigenvector residual too large", residual=residual)
    return lam2, min(float(low[0]), lam2), "iterative"


def spectral_gap(graph: Graph, method: str = "auto") -> SpectralReport:
    lam2, lam_min, used = spectrum_extremes(graph, method)
    return SpectralReport(
        n=None, p=None, order=graph.order, degree=graph.degree,
        beta=1.0 - lam2 if graph.order > 1 else 0.0,
        lambda_2=lam2, lambda_min=lam_min, method=used,
    )


def lazy_step(graph: Graph, x: np.ndarray) -> np.ndarray:
    # the graph is regular and symmetric, so pulling from v*s equals pushing along s^-1
    return 0.5 * x + 0.5 * x[graph.neighbours].mean(axis=1)


def tv_to_uniform(x: np.ndarray) -> float:
    return 0.5 * float(np.abs(x - 1.0 / len(x)).sum())


def mixing_time(graph: Graph, threshold: float = 0.25, max_steps: int = 10**6, start: int = 0) -> int:
    """Smallest t with TV(lazy walk after t steps, uniform) <= threshold."""
    if graph.order > MIX_LIMIT:
        raise SizeError(f"graph has {graph.order} vertices, mixing is computed up to {MIX_LIMIT}")
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    x = np.zeros(graph.order)
    x[start] = 1.0
    for t in range(max_steps + 1):
        if tv_to_uniform(x) <= threshold:
            return t
        x = lazy_step(graph, x)
    raise ConvergenceError("walk did not mix within the step cap", residual=tv_to_uniform(x))


def displacement_upper_bound(n: int, p: int) -> Fraction:
    """max over generators of ||g v - v||^2 for v uniform on the standard basis of l^2(F_p^n)."""
    if n < 2 or p < 2:
        raise DimensionError("need n >= 2 and p >= 2")
    basis = {tuple(int(i == k) for k in range(n)) for i in range(n)}
    best = Fraction(0)
    for g in elementary_generators(n, p):
        image = {tuple(int(x) for x in (g @ np.array(e)) % p) for e in basis}
        # v and gv take the value 1/sqrt(n) on their supports
        best = max(best, Fraction(len(basis ^ image), n))
    return best


def compare_bounds(n: int, p: int, size_cap: int = DEFAULT_CAP, with_mixing: bool = True) -> SpectralReport:
    table = enumerate_group(n, p, size_cap)
    graph = cayley_graph(table)
    rep = spectral_gap(graph)
    rep.n, rep.p = n, p
    rep.displacement_sq = str(displacement_upper_bound(n, p))
    if with_mixing and table.order <= MIX_LIMIT:
        rep.mixing_steps = mixing_time(graph)
    checks: dict = {}
    if n >= 3:
        K = kazhdan_Adoubleprime(n)
        lower = K * K / 4
        checks["lower"] = {"bound": lower, "pass": rep.beta >= lower}
        checks["upper_1_over_n"] = {"bound": 1 / n, "holds": rep.beta <= 1 / n, "asserted": False}
        if rep.mixing_steps is not None and rep.beta > 0:
            envelope = 10 / rep.beta * math.log(table.order)
            checks["mixing_envelope"] = {"bound": envelope, "holds": rep.mixing_steps <= envelope}
    else:
        checks["lower"] = {"applicable": False}
        checks["upper_1_over_n"] = {"applicable": False}
    rep.bound_checks = checks
    return rep
