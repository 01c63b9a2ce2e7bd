import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kazhdan import surd
from kazhdan.constants import (
    PAPER_A,
    PAPER_B,
    PAPER_RECURSION,
    RecursionParams,
    application_bounds,
    bound_report,
    closed_h_implies,
    consistency_report,
    h_closed,
    h_dp,
    h_dp_within_closed,
    h_table,
    h_table_naive,
    kazhdan_bounds,
    recursion_closed_form,
    recursion_margin,
    recursion_oracle,
    rel_const_k,
    rel_const_l,
    rpq_squared_form,
    shalom_bound,
    sl_order,
    ten_k_le_step,
    verify_chain_R2,
    verify_chain_Rp,
    verify_chain_Rpq,
)
from kazhdan.errors import DimensionError, KazhdanError


# -- surd comparator


def test_surd_sign_examples():
    assert surd.sign([(1, 2), (-1, 2)]) == 0
    assert surd.sign([(1, 8), (-2, 2)]) == 0
    assert surd.sign([(1, 3), (-1, 2)]) == 1
    assert surd.leq([(1, 27), (3, 1)], [(9, 1)])
    assert not surd.leq([(1, 2)], [(Fraction(141421, 100000), 1)])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(0, 50)), min_size=1, max_size=4))
def test_surd_sign_matches_sympy(terms):
    expr = sum((c * sympy.sqrt(r) for c, r in terms), sympy.Integer(0))
    expected = 0 if sympy.simplify(expr) == 0 else (1 if expr.evalf(60) > 0 else -1)
    assert surd.sign(terms) == expected


# -- relative constants


def test_rel_const_l_examples():
    assert rel_const_l(2) == pytest.approx(8.19615, abs=1e-5)
    assert rel_const_l(11) == 9
    assert rel_const_l(10**12) / math.sqrt(10**12) == pytest.approx(1, abs=1e-5)
    with pytest.raises(DimensionError):
        rel_const_l(1)


def test_rel_const_k_examples():
    assert rel_const_k(4) == pytest.approx(math.sqrt(70) + 6) == pytest.approx(14.3666, abs=1e-4)
    assert rel_const_k(8) == pytest.approx(14.9443, abs=1e-4)
    with pytest.raises(DimensionError):
        rel_const_k(3)


def test_ten_k_step_sweep():
    assert all(ten_k_le_step(n) for n in range(4, 10**6 + 1))
    for n in (4, 77, 10**6):
        assert surd.sign(
            [(10, Fraction(5 * n, 2) + 60), (60, 1), (-1, 250 * n + 6000), (-60, 1)]
        ) == 0


# -- h(n)


def test_h_dp_examples():
    assert h_dp(3) == 1416 == shalom_bound(3)
    assert h_dp(5) == 1922
    assert h_dp(7) == pytest.approx(1922 + 10 * (math.sqrt(77.5) + 6))
    assert h_dp(7) == pytest.approx(2070.03, abs=0.01)
    with pytest.raises(DimensionError):
        h_dp(2)


def test_h_dp_never_exceeds_shalom_and_is_order_independent():
    H = h_table(3000)
    assert H == h_table_naive(3000)
    assert all(H[n] <= shalom_bound(n) for n in range(3, 3001))


def test_h_dp_below_closed_form():
    assert h_dp_within_closed(10**5) == []


# -- recursion lemma


def test_recursion_constants():
    p = PAPER_RECURSION
    exact_A = sympy.sqrt(250) / (1 - sympy.sqrt(sympy.Rational(2, 3)))
    assert sympy.simplify(exact_A - (15 * sympy.sqrt(10) + 10 * sympy.sqrt(15))) == 0
    assert p.A == pytest.approx(PAPER_A, rel=1e-14)
    assert p.A == pytest.approx(86.164, abs=1e-3)
    assert PAPER_B == pytest.approx(3003.4056, abs=1e-4)
    # the defining formula does not reproduce the stated B
    exact_B = (250 * 3 + 6000) / ((1 - sympy.sqrt(sympy.Rational(2, 3))) * sympy.sqrt(250))
    assert p.B == pytest.approx(float(exact_B), rel=1e-12)
    assert p.B == pytest.approx(2326.428, abs=1e-3)
    assert p.n0_tilde == 4


def test_recursion_params_validation():
    with pytest.raises(KazhdanError):
        RecursionParams(250, 6000, 60, Fraction(2, 3), 3, 1)
    with pytest.raises(KazhdanError):
        RecursionParams(250, 6000, 60, Fraction(3, 2), 7, 1)
    with pytest.raises(KazhdanError):
        RecursionParams(-1, 6000, 60, Fraction(2, 3), 7, 1)
    with pytest.raises(DimensionError):
        recursion_closed_form(PAPER_RECURSION, 6)
    with pytest.raises(KazhdanError):
        recursion_closed_form(PAPER_RECURSION, 8, "bogus")


def test_recursion_oracle_below_closed_form():
    F = recursion_oracle(PAPER_RECURSION, 10**5)
    assert F[7] == 2692
    assert F[8] == pytest.approx(2692 + math.sqrt(8000) + 60)
    for variant in ("literal", "corrected"):
        assert recursion_margin(PAPER_RECURSION, 10**5, variant) > 0
    assert recursion_closed_form(PAPER_RECURSION, 100, "corrected") - recursion_closed_form(
        PAPER_RECURSION, 100
    ) == pytest.approx(120)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 500),
    st.integers(1, 500),
    st.integers(1, 80),
    st.sampled_from([Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]),
    st.integers(0, 6),
)
def test_recursion_oracle_bounded_for_random_params(a, b, c, lam_sq, extra):
    n0 = math.floor(1 / (1 - lam_sq)) + 1 + extra
    params = RecursionParams(a, b, c, lam_sq, n0, 100)
    assert recursion_margin(params, 5000, "corrected") > -1e-9


# -- Kazhdan and application bounds


def test_kazhdan_bound_examples():
    kb = kazhdan_bounds(100)
    assert kb["kazhdan_lower_Aprime"] == pytest.approx(7.8125e-4)
    assert kazhdan_bounds(3)["kazhdan_upper"] == pytest.approx(0.81650, abs=1e-5)
    with pytest.raises(DimensionError):
        kazhdan_bounds(2)


def test_closed_h_implies_theorem_A_sweep():
    # 90/sqrt2 < 64 and 4000/sqrt2 < 2850 make this hold for every n; check exactly on a sample
    rng = random.Random(0)
    for n in list(range(3, 300)) + [rng.randint(3, 10**6) for _ in range(200)] + [10**6]:
        assert closed_h_implies("A", n)
    for n in range(3, 10**6 + 1, 997):
        assert math.sqrt(2) / h_closed(n) >= kazhdan_bounds(n)["kazhdan_lower_A"]


def test_application_bound_examples():
    ab = application_bounds(3, p=5)
    K = 1 / (31 * math.sqrt(3) + 700)
    assert ab["spectral_lower"] == pytest.approx(K * K / 4, rel=1e-14)
    assert ab["spectral_lower"] == pytest.approx(4.40e-7, rel=1e-3)
    assert application_bounds(5)["spectral_upper"] == 0.2
    assert ab["mixing_bound"] == pytest.approx(math.log(sl_order(3, 5)) / ab["spectral_lower"])
    lit = application_bounds(3, p=5, literal=True)
    assert lit["mixing_bound"] == pytest.approx(math.log(sl_order(3, 5)) * ab["spectral_lower"])


def test_sl_order():
    assert sl_order(2, 2) == 6
    assert sl_order(2, 3) == 24
    assert sl_order(3, 2) == 168


def test_pra_bound_scales_like_n_squared():
    size = 10**50
    ratio = application_bounds(4 * 10**8, group_size=size)["pra_bound"] / application_bounds(
        10**8, group_size=size
    )["pra_bound"]
    assert ratio == pytest.approx(16, rel=0.05)
    doubled = application_bounds(10, group_size=size**2)["pra_bound"] / application_bounds(10, group_size=size)["pra_bound"]
    assert doubled == pytest.approx(2)


def test_bound_report_invariants():
    for n in range(3, 400):
        rep = bound_report(n, p=7 if n % 2 else None)
        assert rep.check_invariants() == []
        assert rep.h_dp <= rep.h_closed
        assert (rep.k is None) == (n < 4)


# -- chains


def test_chain_R2():
    rep = verify_chain_R2()
    assert rep.ok, rep.checks
    assert sympy.expand((2 + sympy.sqrt(10)) ** 2) == 14 + 4 * sympy.sqrt(10)


def test_chain_Rp():
    rep = verify_chain_Rp(10**4)
    assert rep.ok, rep.checks
    assert 2 + 6 * math.sqrt(2) + 33 == pytest.approx(43.49, abs=0.01)
    assert (math.sqrt(27) + 3) ** 2 == pytest.approx(67.18, abs=0.01)


def test_chain_Rpq():
    rep = verify_chain_Rpq(10**4, 10**4)
    assert rep.ok, rep.checks
    assert 3 * 2 + 2 * 2 + 97 + 18 * math.sqrt(2) == pytest.approx(132.46, abs=0.01)
    assert (math.sqrt(70) + 6) ** 2 == pytest.approx(206.4, abs=0.1)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 10**7), st.integers(2, 10**7))
def test_rpq_squared_form_matches_direct_comparison(p, q):
    m, lhs = rpq_squared_form(p, q)
    direct = surd.leq([(3 * p + 2 * q + 97, 1), (18, p)], [(3 * p + 2 * q + 96, 1), (12, 3 * p + 2 * q + 60)])
    assert (m > 0 and lhs <= m * m) == direct


def test_am_gm_with_square_fails():
    # with (q-1)^2 in place of (q-1) the middle bound is false for large q
    p, q = 2, 50
    y = p + 33 + 6 * math.sqrt(p)
    lhs = 2 * y + 2 * math.sqrt((q - 1) * y) + (q - 1) ** 2
    assert lhs > 3 * p + 2 * q + 97 + 18 * math.sqrt(p)


# -- consistency


def test_consistency_report():
    rep = consistency_report(range(3, 2000))
    names = [f["name"] for f in rep["flags"]]
    assert names == ["proof_line_50_vs_theorem_A_64", "remark_33_317_vs_Aprime_42_860"]
    assert rep["closed_h_implies"]["A"]["implied_for_all"]
    assert {o["name"] for o in rep["observations"]} >= {
        "recursion_B_value",
        "am_gm_square_typo",
        "Adoubleprime_31_700_vs_remark_24_100",
        "mixing_beta_vs_inverse",
    }
    with pytest.raises(DimensionError):
        consistency_report([])


def test_proof_line_50_really_fails():
    # sqrt2/(90 sqrt n + 4000) >= 1/(50 sqrt n + 2850) fails once 13.64 sqrt n > 21.6
    assert not surd.leq([(45, 2 * 10), (2000, 2)], [(50, 10), (2850, 1)])
    assert surd.leq([(45, 2 * 2), (2000, 2)], [(50, 2), (2850, 1)])
