"""Rigorous comparison of sums of rational multiples of square roots.

A term is a pair (coefficient, radicand) of rationals meaning c * sqrt(r).
Signs are decided by interval evaluation with isqrt at growing precision;
a difference that never separates from zero is settled symbolically.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import sympy

Term = tuple[Fraction, Fraction]


def _as_terms(terms: Iterable) -> list[Term]:
    out = []
    for c, r in terms:
        c, r = Fraction(c), Fraction(r)
        if r < 0:
            raise ValueError("negative radicand")
        if c and r:
            out.append((c, r))
    return out


def sqrt_bounds(r: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """lo <= sqrt(r) <= hi with hi - lo <= 2^-bits (up to the denominator)."""
    scale = 1 << (2 * bits)
    num = r.numerator * r.denominator * scale
    lo = isqrt(num)
    hi = lo if lo * lo == num else lo + 1
    den = r.denominator << bits
    return Fraction(lo, den), Fraction(hi, den)


def interval(terms: Sequence[Term], bits: int) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for c, r in terms:
        a, b = sqrt_bounds(r, bits)
        if c >= 0:
            lo += c * a
            hi += c * b
        else:
            lo += c * b
            hi += c * a
    return lo, hi


def to_sympy(terms: Sequence[Term]):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(sympy.Rational(r.numerator, r.denominator)) for c, r in terms), sympy.Integer(0))


def sign(terms: Iterable, max_bits: int = 2048) -> int:
    """Exact sign (-1, 0, 1) of sum c_i sqrt(r_i)."""
    terms = _as_terms(terms)
    if not terms:
        return 0
    bits = 64
    while bits <= max_bits:
        lo, hi = interval(terms, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    # intervals keep straddling zero: decide symbolically
    value = sympy.nsimplify(sympy.radsimp(to_sympy(terms)))
    if value == 0 or sympy.simplify(value) == 0:
        return 0
    return 1 if value.evalf(max_bits // 3) > 0 else -1


def leq(lhs: Iterable, rhs: Iterable) -> bool:
    """sum(lhs) <= sum(rhs), decided exactly."""
    diff = _as_terms(rhs) + [(-c, r) for c, r in _as_terms(lhs)]
    return sign(diff) >= 0


def value(terms: Iterable) -> float:
    lo, hi = interval(_as_terms(terms), 80)
    return float((lo + hi) / 2)
