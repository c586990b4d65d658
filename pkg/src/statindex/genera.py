"""Multiplicative genus series built from univariate generating functions.

Per-root factors:

    todd    x / (1 - e^{-x})          unit, constant term 1
    ahat    x / (e^{x/2} - e^{-x/2})  unit, constant term 1, even in x
    bhat    x / (e^{x/2} + e^{-x/2})  constant 0, linear coefficient 1/2
    tdstar  x / (1 + e^{-x})          constant 0, linear coefficient 1/2
    euler   x                         the plain root monomial

Division by a non-unit never happens implicitly: factors with a vanishing
denominator constant term are built by first dividing the denominator by
its root variable (an exact operation on series whose terms all contain
that variable) and inverting the resulting unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from threading import Lock
from typing import Dict, Tuple

from .series import TruncatedSeries
from .symmetric import CHERN, ChernPolynomial, to_chern_basis, to_pontryagin_basis

__all__ = [
    "GENUS_KINDS",
    "GenusSpec",
    "euler_class_roots",
    "generating_series",
    "genus_polynomial",
    "genus_series",
    "genus_spec",
    "root_variables",
]

GENUS_KINDS = ("todd", "ahat", "bhat", "tdstar", "euler")
_NORMALIZED = {"todd": True, "ahat": True, "bhat": False, "tdstar": False, "euler": False}


@dataclass(frozen=True)
class GenusSpec:
    kind: str
    generating_series: TruncatedSeries
    normalized: bool


def root_variables(n: int) -> Tuple[str, ...]:
    return tuple(f"x{k}" for k in range(1, n + 1))


def _check_kind(kind: str) -> None:
    if kind not in GENUS_KINDS:
        raise ValueError(f"unknown genus kind {kind!r}; expected one of {GENUS_KINDS}")


def _root_factor(kind: str, variables: Tuple[str, ...], D: int, name: str) -> TruncatedSeries:
    """The per-root factor g(x) for one root, over the full variable set."""
    one = TruncatedSeries.constant(variables, D, 1)
    x_mono = TruncatedSeries.variable(variables, D, name)
    if kind == "euler":
        return x_mono
    if kind == "todd":
        x = TruncatedSeries.variable(variables, D + 1, name)
        denom = TruncatedSeries.constant(variables, D + 1, 1) - (-x).exp()
        return denom.quotient_by(name).invert()
    if kind == "ahat":
        x = TruncatedSeries.variable(variables, D + 1, name)
        half = x * Fraction(1, 2)
        denom = half.exp() - (-half).exp()
        return denom.quotient_by(name).invert()
    if kind == "bhat":
        x = TruncatedSeries.variable(variables, D, name)
        half = x * Fraction(1, 2)
        denom = half.exp() + (-half).exp()
        return denom.invert() * x_mono
    if kind == "tdstar":
        x = TruncatedSeries.variable(variables, D, name)
        denom = one + (-x).exp()
        return denom.invert() * x_mono
    raise AssertionError(kind)


def generating_series(kind: str, D: int) -> TruncatedSeries:
    """Univariate generating series of the genus, in the variable ``x``."""
    _check_kind(kind)
    if D < 0:
        raise ValueError("truncation must be >= 0")
    if kind == "euler" and D < 1:
        raise ValueError("euler factor needs truncation >= 1")
    return _root_factor(kind, ("x",), D, "x")


def genus_spec(kind: str, D: int = 8) -> GenusSpec:
    return GenusSpec(kind, generating_series(kind, D), _NORMALIZED[kind])


def genus_series(kind: str, n_roots: int, D: int) -> TruncatedSeries:
    """Product of per-root factors over x1..xn, truncated at total degree D."""
    _check_kind(kind)
    if n_roots < 1:
        raise ValueError("need at least one root")
    if D < 0:
        raise ValueError("truncation must be >= 0")
    if kind == "euler" and D < n_roots:
        raise ValueError(
            f"euler class of {n_roots} roots has degree {n_roots} > truncation {D}"
        )
    variables = root_variables(n_roots)
    out = TruncatedSeries.constant(variables, D, 1)
    for name in variables:
        out = out * _root_factor(kind, variables, D, name)
    return out


def euler_class_roots(l: int, D: int) -> TruncatedSeries:
    """The monomial x1*...*xl."""
    if l < 1:
        raise ValueError("need at least one root")
    if D < l:
        raise ValueError(f"euler class has degree {l} > truncation {D}")
    variables = root_variables(l)
    return TruncatedSeries.monomial(variables, D, (1,) * l)


_POLY_CACHE: Dict[Tuple[str, int], ChernPolynomial] = {}
_POLY_LOCK = Lock()


def genus_polynomial(kind: str, degree: int) -> ChernPolynomial:
    """Degree-homogeneous part of the genus in class-basis form.

    Todd and Td* are returned in the Chern basis, A-hat in the Pontryagin
    basis.  B-hat, whose homogeneous parts carry one odd power of every
    root, is also returned in the Chern basis (a Pontryagin expression
    cannot exist for it).  Normalized genera (todd, ahat) are computed with
    max(degree, 2) roots, which makes the answer independent of the root
    count; results are cached per (kind, degree).
    """
    _check_kind(kind)
    if degree < 0:
        raise ValueError("degree must be >= 0")
    key = (kind, degree)
    with _POLY_LOCK:
        cached = _POLY_CACHE.get(key)
    if cached is not None:
        return cached
    if kind == "euler":
        rank = max(degree, 1)
        if degree == 0:
            poly = ChernPolynomial(CHERN, rank, 0, {(0,) * rank: Fraction(1)})
        else:
            exps = tuple(1 if k == degree - 1 else 0 for k in range(rank))
            poly = ChernPolynomial(CHERN, rank, degree, {exps: Fraction(1)})
    else:
        n = max(degree, 2)
        part = genus_series(kind, n, degree).homogeneous_part(degree)
        if kind == "ahat":
            poly = to_pontryagin_basis(part, n)
        else:
            poly = to_chern_basis(part, n)
    with _POLY_LOCK:
        _POLY_CACHE[key] = poly
    return poly
