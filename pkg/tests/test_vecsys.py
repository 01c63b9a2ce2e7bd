import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import isprime

from kazhdan.errors import BudgetError, InvalidOperationError, NoSolutionError, PolicyError
from kazhdan.linalg import GenTransvection, IntMat, det_exact, is_complete, lattice_index
from kazhdan.primes import dirichlet_prime, is_prime
from kazhdan.vecsys import (
    OP_BOUNDS,
    POLICIES,
    VectorSystem,
    apply_generalized,
    is_prime_system,
    make_prime_system,
    reduce_to_standard,
)


def sympy_dirichlet(a, d, lower, excluded=()):
    q = lower + 1
    while not (q % d == a % d and q not in excluded and isprime(q)):
        q += 1
    return q


def random_system(rng, k, n, bound=1000, modulus=None):
    while True:
        vecs = [[rng.randint(-bound, bound) for _ in range(k)] for _ in range(n)]
        try:
            return VectorSystem.from_vectors(vecs, modulus)
        except InvalidOperationError:
            continue


# -- primes


def test_is_prime_matches_sympy():
    for n in range(-5, 20_000):
        assert is_prime(n) == isprime(n)
    rng = random.Random(1)
    for _ in range(300):
        n = rng.getrandbits(rng.choice((40, 64, 90, 128)))
        assert is_prime(n) == isprime(n)
    # strong pseudoprime to several small bases
    assert not is_prime(3215031751)


def test_dirichlet_examples():
    assert dirichlet_prime(1, 4, 10) == 13
    assert dirichlet_prime(2, 3, 5, {11}) == 17
    with pytest.raises(NoSolutionError):
        dirichlet_prime(2, 4, 0)
    with pytest.raises(BudgetError):
        dirichlet_prime(1, 2, 10**6, budget=1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 60), st.integers(-50, 50), st.integers(-10, 500))
def test_dirichlet_is_smallest_in_progression(d, a, lower):
    from math import gcd

    if gcd(a, d) != 1:
        return
    assert dirichlet_prime(a, d, lower) == sympy_dirichlet(a, d, lower)


# -- systems and operations


def test_apply_generalized_examples():
    v = VectorSystem.from_vectors([[6], [10], [15]])
    zero = GenTransvection(3, (1, 2), (0,), ((0,), (0,)))
    assert apply_generalized(v, zero) == v
    moved = apply_generalized(v, GenTransvection(3, (1, 2), (0,), ((1,), (1,))))
    assert moved.vectors() == [[31], [10], [15]]
    assert is_prime(31)
    with pytest.raises(InvalidOperationError):
        GenTransvection(3, (0, 1), (1,), ((1,), (1,)))


def test_incomplete_system_rejected():
    with pytest.raises(InvalidOperationError):
        VectorSystem.from_vectors([[4], [6]])


def test_apply_preserves_completeness_and_sources():
    rng = random.Random(5)
    for _ in range(1000):
        k = rng.randint(1, 3)
        n = rng.randint(k + 1, 6)
        v = random_system(rng, k, n, bound=20)
        idx = rng.sample(range(n), n)
        a = rng.randint(1, n - 1)
        I, J = idx[:a], idx[a:]
        t = GenTransvection(n, I, J, [[rng.randint(-9, 9) for _ in J] for _ in I])
        w = apply_generalized(v, t)
        assert is_complete(w.mat)
        assert all(w.vectors()[i] == v.vectors()[i] for i in I)


def test_is_prime_system_examples():
    assert is_prime_system([[3, 0], [0, 5]])
    assert not is_prime_system([[3, 0], [0, 3]])
    assert is_prime_system([[101, 7], [0, 103]])
    assert is_prime_system([[101, 7], [0, 103]], primes=[101, 103])
    assert not is_prime_system(IntMat.identity(2))


def _check_prime_system(v, op, w, primes):
    k = v.k
    block = list(op.J)
    assert len(block) == k
    block_vectors = [w.vectors()[b] for b in block]
    assert is_prime_system(IntMat(block_vectors).transpose(), primes)
    assert len(set(primes)) == k
    # quotient order is the product of the primes
    assert lattice_index(block_vectors, k) == abs(det_exact(IntMat(block_vectors)))
    # primes exceed the determinant of the lexicographically first basis outside the block
    rest = [i for i in range(v.n) if i not in block]
    vecs = v.vectors()
    for subset in combinations(rest, k):
        d = det_exact(IntMat([vecs[i] for i in subset]))
        if d:
            assert all(p > abs(d) + 1 for p in primes)
            break


def test_make_prime_system_examples():
    v = VectorSystem.from_vectors([[6], [10], [15]])
    op, w, primes = make_prime_system(v)
    assert len(primes) == 1 and is_prime(primes[0])
    _check_prime_system(v, op, w, primes)

    std = VectorSystem.standard(2, 6)
    op, w, primes = make_prime_system(std)
    _check_prime_system(std, op, w, primes)


def test_make_prime_system_random():
    rng = random.Random(9)
    for _ in range(200):
        k = rng.randint(1, 4)
        v = random_system(rng, k, rng.randint(2 * k, 3 * k), bound=50)
        op, w, primes = make_prime_system(v)
        _check_prime_system(v, op, w, primes)


def test_make_prime_system_with_incomplete_complement():
    # the vectors outside the first block only span an index-2 sublattice
    v = VectorSystem.from_vectors([[1, 0], [0, 1], [2, 0], [0, 2], [2, 2], [4, 6]])
    op, w, primes = make_prime_system(v)
    _check_prime_system(v, op, w, primes)


# -- full reductions


def test_standard_system_needs_no_ops():
    for policy, n in (("Z-3k", 6), ("Z-2k1", 5)):
        trace = reduce_to_standard(VectorSystem.standard(2, n), policy)
        assert trace.op_count == 0 and trace.final.is_standard()
    trace = reduce_to_standard(VectorSystem.standard(2, 4, 5), "Fp-2k")
    assert trace.op_count == 0


def test_rank_one_three_ops():
    v = VectorSystem.from_vectors([[6], [10], [15]])
    trace = reduce_to_standard(v, "Z-3k")
    assert trace.op_count <= 3
    assert trace.final.vectors() == [[1], [0], [0]]
    assert trace.verify()


@pytest.mark.parametrize("values", [[-1, 0, 0], [4, 9, 0], [0, 0, 1], [35, 21, 15], [2, 3, 0, 0]])
def test_rank_one_edge_cases(values):
    trace = reduce_to_standard(VectorSystem.from_vectors([[x] for x in values]), "Z-3k")
    assert trace.op_count <= 3 and trace.verify()


def test_policy_preconditions():
    with pytest.raises(PolicyError):
        reduce_to_standard(VectorSystem.standard(2, 5), "Z-3k")
    with pytest.raises(PolicyError):
        reduce_to_standard(VectorSystem.standard(2, 4), "Z-2k1")
    with pytest.raises(PolicyError):
        reduce_to_standard(VectorSystem.standard(2, 3, 7), "Fp-2k")
    with pytest.raises(PolicyError):
        reduce_to_standard(VectorSystem.standard(2, 6), "Fp-2k")
    with pytest.raises(PolicyError):
        reduce_to_standard(VectorSystem.standard(2, 6), "nope")


def _replay_each_step_complete(trace):
    current = trace.initial
    for op in trace.ops:
        current = apply_generalized(current, op)
        assert current.complete()
    assert current == trace.final


@pytest.mark.parametrize("policy", POLICIES)
def test_reduction_op_bounds_sweep(policy):
    rng = random.Random(POLICIES.index(policy))
    extra = {"Z-3k": lambda k: 3 * k, "Z-2k1": lambda k: 2 * k + 1, "Fp-2k": lambda k: 2 * k}[policy]
    worst = 0
    for _ in range(500):
        k = rng.randint(1, 6)
        n = max(extra(k) + rng.randint(0, 2), 3 if policy != "Fp-2k" else 2)
        modulus = rng.choice((2, 3, 7, 10007)) if policy == "Fp-2k" else None
        v = random_system(rng, k, n, modulus=modulus)
        trace = reduce_to_standard(v, policy)
        assert trace.verify()
        _replay_each_step_complete(trace)
        worst = max(worst, trace.op_count)
    assert worst <= OP_BOUNDS[policy]


def test_field_reduction_with_degenerate_bottom():
    # bottom rows have rank 0, so the lifting operation is needed
    v = VectorSystem.from_vectors([[2, 3], [1, 4], [0, 0], [0, 0]], 7)
    trace = reduce_to_standard(v, "Fp-2k")
    assert trace.op_count == 3 and trace.verify()
    v = VectorSystem.from_vectors([[2, 3], [1, 4], [1, 1], [2, 2], [0, 0]], 5)
    trace = reduce_to_standard(v, "Fp-2k")
    assert trace.op_count <= 3 and trace.verify()


def test_k2_n6_example():
    rng = random.Random(2024)
    v = random_system(rng, 2, 6)
    trace = reduce_to_standard(v, "Z-3k")
    assert trace.op_count <= 4 and trace.final == VectorSystem.standard(2, 6)
    assert trace.replay() == trace.final
