import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kazhdan.errors import DimensionError, InvalidOperationError, NotUnimodularError, ParseError
from kazhdan.linalg import (
    ElemTransvection,
    GenTransvection,
    IntMat,
    ModMat,
    det_exact,
    format_matrix,
    generalized_from_matrix,
    inverse_unimodular,
    invariant_factors,
    is_complete,
    lattice_index,
    nullspace_mod_p,
    parse_matrix,
    reduce_mod_p,
    smith_normal_form,
    solve_integer,
    solve_mod_p,
    xgcd_list,
)


def cofactor_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in rows[1:]])
        for j in range(len(rows))
        if rows[0][j]
    )


def determinantal_divisors(rows):
    """Invariant factors from gcds of i x i minors, independent of any elimination."""
    m, n = len(rows), len(rows[0])
    out, prev = [], 1
    for size in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), size):
            for cs in combinations(range(n), size):
                g = gcd(g, cofactor_det([[rows[i][j] for j in cs] for i in rs]))
        if g == 0:
            out.extend([0] * (min(m, n) - size + 1))
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


def small_matrix(max_dim=4, bound=9):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def test_det_examples():
    assert det_exact(IntMat.identity(3)) == 1
    assert det_exact(ElemTransvection(3, 0, 1, 5).to_matrix()) == 1
    assert det_exact(IntMat([[2, 0], [0, 3]])) == 6


def test_det_rejects_non_square():
    with pytest.raises(DimensionError):
        det_exact(IntMat([[1, 2, 3]]))


def test_det_matches_cofactor_expansion_sample():
    rng = random.Random(7)
    for _ in range(10_000):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert det_exact(IntMat(rows)) == cofactor_det(rows)


def test_det_is_exact_at_large_magnitude():
    big = 10**40
    assert det_exact(IntMat([[big, 1], [1, big]])) == big * big - 1


def test_snf_examples():
    assert smith_normal_form(IntMat([[1, 0], [0, 1]])).invariant_factors == (1, 1)
    assert smith_normal_form(IntMat([[2, 4], [6, 8]])).invariant_factors == (2, 4)
    assert determinantal_divisors([[2, 4], [6, 8]]) == (2, 4)
    assert smith_normal_form(IntMat([[6, 10, 15]])).D == IntMat([[1, 0, 0]])


def test_snf_round_trip_large_entries():
    rng = random.Random(11)
    for _ in range(500):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = IntMat([[rng.randint(-10**6, 10**6) for _ in range(n)] for _ in range(m)])
        sf = smith_normal_form(a)
        assert sf.U @ a @ sf.V == sf.D
        assert abs(det_exact(sf.U)) == 1 and abs(det_exact(sf.V)) == 1
        d = sf.invariant_factors
        assert all(sf.D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
        assert all(x >= 0 for x in d)
        assert all(d[i + 1] % d[i] == 0 if d[i] else d[i + 1] == 0 for i in range(len(d) - 1))


@settings(max_examples=200, deadline=None)
@given(small_matrix())
def test_snf_agrees_with_determinantal_divisors(rows):
    assert smith_normal_form(IntMat(rows)).invariant_factors == determinantal_divisors(rows)


@settings(max_examples=200, deadline=None)
@given(small_matrix())
def test_modular_invariant_factors_agree_with_snf(rows):
    a = IntMat(rows)
    assert invariant_factors(a) == smith_normal_form(a).invariant_factors


def test_snf_is_deterministic():
    a = IntMat([[12, 18, 7], [4, -6, 22]])
    assert smith_normal_form(a) == smith_normal_form(a)


def test_is_complete_examples():
    assert is_complete(IntMat([[1, 0, 0, 0], [0, 1, 0, 0]]))
    assert is_complete(IntMat([[6, 10, 15]]))
    assert not is_complete(IntMat([[4, 6]]))
    with pytest.raises(DimensionError):
        is_complete(IntMat([[1], [0]]))


def test_lattice_index():
    assert lattice_index([[3, 0], [0, 5]], 2) == 15
    assert lattice_index([[2, 0], [4, 0]], 2) == 0
    assert lattice_index([[6], [10], [15]], 1) == 1


def test_transvection_matrices():
    assert ElemTransvection(3, 0, 1, 1).to_matrix() == IntMat([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    # I = {3}, J = {1, 2}, alpha = [4 7] in 1-based terms: rows 1, 2 get 4, 7 times row 3
    t = GenTransvection(3, (2,), (0, 1), ((4, 7),))
    m = t.to_matrix()
    assert m == IntMat([[1, 0, 4], [0, 1, 7], [0, 0, 1]])
    x = IntMat([[1, 2], [3, 4], [5, 6]])
    assert (m @ x).rows == ((21, 26), (38, 46), (5, 6))
    assert m @ t.inverse().to_matrix() == IntMat.identity(3)


def test_single_entry_generalized_matches_elementary():
    e = ElemTransvection(4, 2, 0, -3)
    assert e.as_generalized().to_matrix() == e.to_matrix()


def test_transvection_validation():
    with pytest.raises(InvalidOperationError):
        ElemTransvection(3, 1, 1, 1)
    with pytest.raises(InvalidOperationError):
        GenTransvection(3, (0, 1), (1,), ((1,), (2,)))
    with pytest.raises(InvalidOperationError):
        GenTransvection(3, (0,), (1,), ((1, 2),))


@st.composite
def gen_transvections(draw, max_n=6):
    n = draw(st.integers(2, max_n))
    idx = draw(st.permutations(range(n)))
    a = draw(st.integers(1, n - 1))
    b = draw(st.integers(1, n - a))
    I, J = tuple(idx[:a]), tuple(idx[a:a + b])
    alpha = draw(st.lists(st.lists(st.integers(-50, 50), min_size=b, max_size=b), min_size=a, max_size=a))
    return GenTransvection(n, I, J, tuple(map(tuple, alpha)))


@settings(max_examples=300, deadline=None)
@given(gen_transvections())
def test_generalized_transvection_is_unimodular_with_negated_inverse(t):
    m = t.to_matrix()
    assert det_exact(m) == 1
    assert m @ t.inverse().to_matrix() == IntMat.identity(t.n)
    assert inverse_unimodular(m) == t.inverse().to_matrix()


@settings(max_examples=300, deadline=None)
@given(gen_transvections())
def test_generalized_matrix_recognized(t):
    found = generalized_from_matrix(t.to_matrix())
    assert found is not None and found.to_matrix() == t.to_matrix()


@settings(max_examples=200, deadline=None)
@given(gen_transvections(), st.data())
def test_completeness_invariant_under_transvections(t, data):
    k = data.draw(st.integers(1, t.n))
    rows = data.draw(st.lists(st.lists(st.integers(-5, 5), min_size=k, max_size=k), min_size=t.n, max_size=t.n))
    system = IntMat(rows, ncols=k)
    moved = t.to_matrix() @ system
    assert is_complete(system.transpose()) == is_complete(moved.transpose())


def test_inverse_and_mod_p_examples():
    e = ElemTransvection(2, 0, 1, 1).to_matrix()
    assert inverse_unimodular(e) == ElemTransvection(2, 0, 1, -1).to_matrix()
    assert reduce_mod_p(ElemTransvection(3, 0, 1, 5).to_matrix(), 5) == ModMat.identity(3, 5)
    with pytest.raises(NotUnimodularError):
        inverse_unimodular(IntMat([[2, 0], [0, 1]]))


def test_mul_inverse_round_trip_random_words():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 6)
        a = IntMat.identity(n)
        for _ in range(25):
            i, j = rng.sample(range(n), 2)
            a = a @ ElemTransvection(n, i, j, rng.choice((-2, -1, 1, 2))).to_matrix()
        assert a @ inverse_unimodular(a) == IntMat.identity(n)


def test_modmat_requires_prime():
    with pytest.raises(ValueError):
        ModMat([[1]], 6)


@settings(max_examples=200, deadline=None)
@given(small_matrix(bound=20), st.data())
def test_solve_integer_round_trip(rows, data):
    a = IntMat(rows)
    coeffs = data.draw(st.lists(st.integers(-9, 9), min_size=a.ncols, max_size=a.ncols))
    rhs = [sum(x * c for x, c in zip(r, coeffs)) for r in rows]
    sol = solve_integer(a, rhs)
    assert [sum(x * c for x, c in zip(r, sol)) for r in rows] == rhs


def test_mod_p_solvers():
    rows = [[1, 2, 3], [4, 5, 6]]
    a = solve_mod_p(rows, [1, 1], 7)
    assert [sum(x * y for x, y in zip(r, a)) % 7 for r in rows] == [1, 1]
    for v in nullspace_mod_p(rows, 7):
        assert all(sum(x * y for x, y in zip(r, v)) % 7 == 0 for r in rows)


def test_xgcd_list():
    g, c = xgcd_list([6, 10, 15])
    assert g == 1 and 6 * c[0] + 10 * c[1] + 15 * c[2] == 1
    assert xgcd_list([0, 0]) == (0, [0, 0])
    g, c = xgcd_list([-4, 6])
    assert g == 2 and -4 * c[0] + 6 * c[1] == 2


def test_text_format_round_trip():
    a = IntMat([[1, -2], [10**30, 4]])
    assert parse_matrix(format_matrix(a)) == a


@pytest.mark.parametrize(
    "text,line",
    [("", 1), ("2 x\n", 1), ("2 2\n1 2\n", 3), ("2 2\n1 2\n3\n", 3), ("1 2\n1 a\n", 2)],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_matrix(text)
    assert err.value.line == line
