"""Independent univariate series oracles on plain coefficient lists.

Deliberately separate from the package's sparse representation: series are
lists of Fractions indexed by degree, and division is classical long
division.  Tests expand the package's answers against these.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import List

Coeffs = List[Fraction]


def make(values) -> Coeffs:
    return [Fraction(v) for v in values]


def mul(a: Coeffs, b: Coeffs, D: int) -> Coeffs:
    out = [Fraction(0)] * (D + 1)
    for i, ai in enumerate(a[: D + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: D + 1 - i]):
            out[i + j] += ai * bj
    return out


def divide(num: Coeffs, den: Coeffs, D: int) -> Coeffs:
    """Long division num/den, requiring den[0] != 0."""
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator has zero constant term")
    num = num[: D + 1] + [Fraction(0)] * max(0, D + 1 - len(num))
    den = den[: D + 1] + [Fraction(0)] * max(0, D + 1 - len(den))
    out = [Fraction(0)] * (D + 1)
    for k in range(D + 1):
        acc = num[k]
        for j in range(1, k + 1):
            acc -= den[j] * out[k - j]
        out[k] = acc / den[0]
    return out


def expx(scale, D: int) -> Coeffs:
    """Coefficients of e^{scale * x}."""
    s = Fraction(scale)
    return [s**k / factorial(k) for k in range(D + 1)]


def one_minus_exp_neg(D: int) -> Coeffs:
    """1 - e^{-x}."""
    e = expx(-1, D)
    return [Fraction(1) - e[0]] + [-c for c in e[1:]]


def shift_down(a: Coeffs) -> Coeffs:
    """Divide by x; constant term must vanish."""
    assert a[0] == 0
    return a[1:]


def todd_factor(D: int) -> Coeffs:
    """x / (1 - e^{-x})."""
    return divide(make([1]), shift_down(one_minus_exp_neg(D + 1)), D)


def ahat_factor(D: int) -> Coeffs:
    """x / (e^{x/2} - e^{-x/2})."""
    plus = expx(Fraction(1, 2), D + 1)
    minus = expx(Fraction(-1, 2), D + 1)
    den = shift_down([p - m for p, m in zip(plus, minus)])
    return divide(make([1]), den, D)


def bhat_factor(D: int) -> Coeffs:
    """x / (e^{x/2} + e^{-x/2})."""
    plus = expx(Fraction(1, 2), D)
    minus = expx(Fraction(-1, 2), D)
    den = [p + m for p, m in zip(plus, minus)]
    ratio = divide(make([1]), den, D)
    return [Fraction(0)] + ratio[:D]


def tdstar_factor(D: int) -> Coeffs:
    """x / (1 + e^{-x})."""
    e = expx(-1, D)
    den = [Fraction(1) + e[0]] + e[1:]
    ratio = divide(make([1]), den, D)
    return [Fraction(0)] + ratio[:D]


def fb_root_factor(D: int) -> Coeffs:
    """x * (1 + e^{-x}) / (1 - e^{-x})."""
    e = expx(-1, D + 1)
    num = [Fraction(1) + e[0]] + e[1:]
    return divide(num, shift_down(one_minus_exp_neg(D + 1)), D)


def bf_root_factor(D: int) -> Coeffs:
    """x * ((1 - e^{-x}) / (1 + e^{-x}))^2."""
    e = expx(-1, D)
    plus = [Fraction(1) + e[0]] + e[1:]
    ratio = divide(one_minus_exp_neg(D), plus, D)
    squared = mul(ratio, ratio, D)
    return ([Fraction(0)] + squared)[: D + 1]
