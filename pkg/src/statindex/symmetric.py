"""Rewrite symmetric root series in elementary-symmetric (Chern) bases.

Chern classes are the elementary symmetric polynomials of the Chern roots,
and Pontryagin classes are the elementary symmetric polynomials of their
squares.  The reduction used here is the classical leading-term algorithm:
take the graded-lex leading exponent a_1 >= a_2 >= ... >= a_n of a
homogeneous symmetric polynomial, subtract the matching product
e_1^(a_1-a_2) e_2^(a_2-a_3) ... e_n^(a_n), and repeat.  Every elementary
symmetric polynomial is homogeneous, so the loop can run independently on
each homogeneous component and never interacts with the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .series import (
    Exponents,
    TruncatedSeries,
    format_rational,
    glex_key,
    parse_rational,
)

__all__ = [
    "ChernPolynomial",
    "NotSymmetricError",
    "elementary_symmetric",
    "expand_in_roots",
    "symmetry_violation",
    "to_chern_basis",
    "to_pontryagin_basis",
]

CHERN = "chern"
PONTRYAGIN = "pontryagin"


class NotSymmetricError(ValueError):
    """Input series is not symmetric (or not even) in its root variables."""

    def __init__(self, message: str, transposition: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.transposition = transposition


@dataclass(frozen=True)
class ChernPolynomial:
    """Polynomial in c_1..c_n (basis 'chern') or p_1..p_n (basis 'pontryagin').

    Exponent tuples index the generators in order; generator k+1 carries
    root-degree k+1 in the Chern basis and 2(k+1) in the Pontryagin basis.
    """

    basis: str
    rank: int
    truncation: int
    terms: Mapping[Exponents, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in (CHERN, PONTRYAGIN):
            raise ValueError(f"unknown basis {self.basis!r}")
        clean = {}
        for exps, coeff in self.terms.items():
            exps = tuple(exps)
            if len(exps) != self.rank:
                raise ValueError(f"exponent tuple {exps} has wrong arity")
            if coeff:
                clean[exps] = Fraction(coeff)
        object.__setattr__(self, "terms", clean)

    def generator_weight(self, index: int) -> int:
        """Root-degree carried by generator number index (1-based)."""
        return index if self.basis == CHERN else 2 * index

    def weighted_degree(self, exps: Exponents) -> int:
        return sum(self.generator_weight(k + 1) * m for k, m in enumerate(exps))

    def generator_names(self) -> Tuple[str, ...]:
        prefix = "c" if self.basis == CHERN else "p"
        return tuple(f"{prefix}{k}" for k in range(1, self.rank + 1))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChernPolynomial):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.rank == other.rank
            and dict(self.terms) == dict(other.terms)
        )

    def __str__(self) -> str:
        return poly_str(self)

    def to_json_dict(self) -> dict:
        return {
            "basis": self.basis,
            "rank": self.rank,
            "truncation": self.truncation,
            "terms": [
                {"exponents": list(e), "coefficient": format_rational(c)}
                for e, c in sorted(
                    self.terms.items(), key=lambda it: _display_key(self, it[0])
                )
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ChernPolynomial":
        terms = {
            tuple(item["exponents"]): parse_rational(item["coefficient"])
            for item in data["terms"]
        }
        return cls(data["basis"], int(data["rank"]), int(data["truncation"]), terms)


def _display_key(poly: ChernPolynomial, exps: Exponents) -> Tuple[int, Exponents]:
    """Weighted degree first; within it, powers of low-index generators lead."""
    return (poly.weighted_degree(exps), tuple(-e for e in exps))


def poly_str(poly: ChernPolynomial) -> str:
    """Render with a common denominator, e.g. ``(c1^2 + c2)/12``."""
    if not poly.terms:
        return "0"
    names = poly.generator_names()
    denom = 1
    for coeff in poly.terms.values():
        denom = denom * coeff.denominator // _gcd(denom, coeff.denominator)
    parts = []
    ordered = sorted(poly.terms.items(), key=lambda it: _display_key(poly, it[0]))
    for exps, coeff in ordered:
        num = coeff * denom
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if not mono:
            parts.append(str(num))
        elif num == 1:
            parts.append(mono)
        elif num == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{num}*{mono}")
    body = parts[0]
    for part in parts[1:]:
        body += " - " + part[1:] if part.startswith("-") else " + " + part
    if denom == 1:
        return body
    if len(parts) == 1 and "*" not in body.replace("-", "", 1):
        return f"{body}/{denom}"
    return f"({body})/{denom}"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- symmetry checks ---------------------------------------------------------


def symmetry_violation(series: TruncatedSeries) -> Optional[Tuple[int, int]]:
    """Return the first adjacent transposition (i, j) under which the series
    is not invariant, or None when it is fully symmetric."""
    n = len(series.variables)
    for i in range(n - 1):
        for exps, coeff in series.terms.items():
            swapped = list(exps)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            if series.terms.get(tuple(swapped), Fraction(0)) != coeff:
                return (i, i + 1)
    return None


# -- elementary symmetric expansion ------------------------------------------


def elementary_symmetric(
    variables: Sequence[str], truncation: int, k: int, squared: bool = False
) -> TruncatedSeries:
    """e_k of the variables (or of their squares when ``squared``)."""
    variables = tuple(variables)
    n = len(variables)
    if k < 0 or k > n:
        raise ValueError(f"e_{k} undefined for {n} variables")
    step = 2 if squared else 1
    terms: Dict[Exponents, Fraction] = {}
    for combo in _combinations(n, k):
        exps = [0] * n
        for idx in combo:
            exps[idx] = step
        terms[tuple(exps)] = Fraction(1)
    if k == 0:
        terms = {(0,) * n: Fraction(1)}
    return TruncatedSeries(variables, truncation, terms)


def _combinations(n: int, k: int):
    from itertools import combinations

    return combinations(range(n), k)


def _e_dict(n: int, k: int, step: int) -> Dict[Exponents, Fraction]:
    terms: Dict[Exponents, Fraction] = {}
    for combo in _combinations(n, k):
        exps = [0] * n
        for idx in combo:
            exps[idx] = step
        terms[tuple(exps)] = Fraction(1)
    return terms


def _dict_mul(a: Dict[Exponents, Fraction], b: Dict[Exponents, Fraction]) -> Dict[Exponents, Fraction]:
    out: Dict[Exponents, Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            exps = tuple(x + y for x, y in zip(ea, eb))
            acc = out.get(exps, Fraction(0)) + ca * cb
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
    return out


def _reduce_to_elementary(
    component: Dict[Exponents, Fraction], n: int, step: int
) -> Dict[Exponents, Fraction]:
    """Reduce one homogeneous symmetric component to elementary monomials.

    With ``step == 2`` the roots are the squares, i.e. exponent tuples are
    halved before comparison with e_k(x_i^2) expansions.
    """
    e_cache = {k: _e_dict(n, k, step) for k in range(1, n + 1)}
    work = dict(component)
    out: Dict[Exponents, Fraction] = {}
    while work:
        lead = max(work, key=glex_key)
        profile = tuple(e // step for e in lead)
        if any(profile[i] < profile[i + 1] for i in range(n - 1)):
            raise NotSymmetricError(
                f"leading exponent {lead} is not weakly decreasing; input not symmetric"
            )
        multi = tuple(
            profile[i] - (profile[i + 1] if i + 1 < n else 0) for i in range(n)
        )
        coeff = work[lead]
        out[multi] = out.get(multi, Fraction(0)) + coeff
        expansion: Dict[Exponents, Fraction] = {(0,) * n: Fraction(1)}
        for k, m in enumerate(multi, start=1):
            for _ in range(m):
                expansion = _dict_mul(expansion, e_cache[k])
        for exps, c in expansion.items():
            acc = work.get(exps, Fraction(0)) - coeff * c
            if acc:
                work[exps] = acc
            else:
                work.pop(exps, None)
    return out


# -- public reductions ---------------------------------------------------------


def to_chern_basis(series: TruncatedSeries, n_roots: int) -> ChernPolynomial:
    """Express a symmetric root series as a polynomial in c_1..c_n."""
    if len(series.variables) != n_roots:
        raise ValueError(
            f"series has {len(series.variables)} variables, expected {n_roots}"
        )
    violation = symmetry_violation(series)
    if violation is not None:
        i, j = violation
        raise NotSymmetricError(
            "series is not symmetric: swapping "
            f"{series.variables[i]} and {series.variables[j]} changes it",
            transposition=violation,
        )
    terms: Dict[Exponents, Fraction] = {}
    for degree in range(series.truncation + 1):
        component = {e: c for e, c in series.terms.items() if sum(e) == degree}
        if not component:
            continue
        for multi, coeff in _reduce_to_elementary(component, n_roots, 1).items():
            terms[multi] = terms.get(multi, Fraction(0)) + coeff
    return ChernPolynomial(CHERN, n_roots, series.truncation, terms)


def to_pontryagin_basis(series: TruncatedSeries, l: int) -> ChernPolynomial:
    """Express a symmetric, per-root even series as a polynomial in p_1..p_l."""
    if len(series.variables) != l:
        raise ValueError(f"series has {len(series.variables)} variables, expected {l}")
    for exps in series.terms:
        for idx, e in enumerate(exps):
            if e % 2:
                raise NotSymmetricError(
                    f"series has odd degree {e} in {series.variables[idx]}; "
                    "not expressible in Pontryagin classes"
                )
    violation = symmetry_violation(series)
    if violation is not None:
        i, j = violation
        raise NotSymmetricError(
            "series is not symmetric: swapping "
            f"{series.variables[i]} and {series.variables[j]} changes it",
            transposition=violation,
        )
    terms: Dict[Exponents, Fraction] = {}
    for degree in range(series.truncation + 1):
        component = {e: c for e, c in series.terms.items() if sum(e) == degree}
        if not component:
            continue
        for multi, coeff in _reduce_to_elementary(component, l, 2).items():
            terms[multi] = terms.get(multi, Fraction(0)) + coeff
    return ChernPolynomial(PONTRYAGIN, l, series.truncation, terms)


def expand_in_roots(
    poly: ChernPolynomial,
    variables: Optional[Sequence[str]] = None,
    truncation: Optional[int] = None,
) -> TruncatedSeries:
    """Substitute each generator by its elementary symmetric polynomial.

    This is the round-trip oracle: to_chern_basis / to_pontryagin_basis
    followed by expand_in_roots must reproduce the input exactly.
    """
    if variables is None:
        variables = tuple(f"x{k}" for k in range(1, poly.rank + 1))
    variables = tuple(variables)
    if len(variables) != poly.rank:
        raise ValueError("variable count must match the polynomial rank")
    if truncation is None:
        truncation = poly.truncation
    squared = poly.basis == PONTRYAGIN
    out = TruncatedSeries.zero(variables, truncation)
    basis_cache = {
        k: elementary_symmetric(variables, truncation, k, squared=squared)
        for k in range(1, poly.rank + 1)
    }
    for exps, coeff in poly.terms.items():
        term = TruncatedSeries.constant(variables, truncation, coeff)
        for k, m in enumerate(exps, start=1):
            if m:
                term = term * basis_cache[k] ** m
        out = out + term
    return out
