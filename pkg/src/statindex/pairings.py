"""The four statistics pairings and their index values on catalog manifolds.

Each pairing multiplies a Fock-type Chern character against a genus:

    fb  spinor character * A-hat factors          (Dirac operator)
    bb  alternating dual character * Todd / euler (de Rham operator)
    ff  spinor character * B-hat factors          (Dirac operator)
    bf  alternating dual character * Td* / euler  (de Rham operator)

Products are assembled symbolically in a small factored algebra whose
per-root atoms are x^k, e^{s x}, (1 - e^{-x})^b and (1 + e^{-x})^f; the
plus-argument variants normalize into these via

    (1 - e^{x})^n = (-1)^n e^{n x} (1 - e^{-x})^n
    (1 + e^{x})^n = e^{n x} (1 + e^{-x})^n

so exact cancellations (ff, bb) happen by integer bookkeeping, not series
manipulation.  The nondegenerate limit e^{-x} -> 0 is only ever applied to
this canonical form, where it simply erases the remaining bose/fermi
factors; applying it to an unfactored series would be meaningless.

bb and bf use the paired-root convention for the complexified tangent
bundle (roots +-x_i, i = 1..l), with the parity prefactor (-1)^{l(2l+1)}
on bb; the literal single-root products over m = 2l independent roots are
exercised by verify_identity as a separate route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import exp as _fexp
from typing import List, Optional, Sequence, Tuple, Union

from .series import TruncatedSeries, format_rational
from .symmetric import ChernPolynomial, to_chern_basis
from .genera import euler_class_roots, genus_series, root_variables
from .bundles import RootModel, chern_character, spinor_character
from .manifolds import (
    CohomologyModel,
    TangentData,
    catalog,
    evaluate_chern_polynomial,
    genus_class,
)

__all__ = [
    "FactorExpression",
    "IndexReport",
    "PAIRING_KINDS",
    "PoleError",
    "VerifyReport",
    "density_series",
    "hrr_index",
    "pairing_density",
    "pairing_index",
    "verify_identity",
]

PAIRING_KINDS = ("fb", "bb", "ff", "bf")
MODES = ("exact", "nondegenerate")


class PoleError(ValueError):
    """A factored density with an uncancelled pole cannot be lowered to a series."""


@dataclass
class _RootFactor:
    power: int = 0
    exp_coeff: Fraction = field(default_factory=lambda: Fraction(0))
    bose: int = 0
    fermi: int = 0


class FactorExpression:
    """Canonical factored product over roots x_1..x_l with a rational scalar."""

    def __init__(self, l: int):
        if l < 1:
            raise ValueError("need at least one root")
        self.scalar = Fraction(1)
        self.factors = [_RootFactor() for _ in range(l)]

    @property
    def n_roots(self) -> int:
        return len(self.factors)

    # -- atom multiplication (all normalize into the canonical atoms) ------

    def mul_scalar(self, value) -> "FactorExpression":
        self.scalar *= Fraction(value)
        return self

    def mul_power(self, i: int, k: int) -> "FactorExpression":
        self.factors[i].power += k
        return self

    def mul_exp(self, i: int, s) -> "FactorExpression":
        self.factors[i].exp_coeff += Fraction(s)
        return self

    def mul_bose_minus(self, i: int, n: int) -> "FactorExpression":
        """(1 - e^{-x_i})^n"""
        self.factors[i].bose += n
        return self

    def mul_fermi_minus(self, i: int, n: int) -> "FactorExpression":
        """(1 + e^{-x_i})^n"""
        self.factors[i].fermi += n
        return self

    def mul_bose_plus(self, i: int, n: int) -> "FactorExpression":
        """(1 - e^{x_i})^n = (-1)^n e^{n x_i} (1 - e^{-x_i})^n"""
        if n % 2:
            self.scalar = -self.scalar
        self.factors[i].exp_coeff += n
        self.factors[i].bose += n
        return self

    def mul_fermi_plus(self, i: int, n: int) -> "FactorExpression":
        """(1 + e^{x_i})^n = e^{n x_i} (1 + e^{-x_i})^n"""
        self.factors[i].exp_coeff += n
        self.factors[i].fermi += n
        return self

    # -- canonical-form consumers ------------------------------------------

    def copy(self) -> "FactorExpression":
        out = FactorExpression(self.n_roots)
        out.scalar = self.scalar
        out.factors = [
            _RootFactor(f.power, f.exp_coeff, f.bose, f.fermi) for f in self.factors
        ]
        return out

    def nondegenerate_limit(self) -> "FactorExpression":
        """Substitute e^{-x_i} -> 0: every (1 +- e^{-x_i})^n factor becomes 1."""
        out = self.copy()
        for f in out.factors:
            f.bose = 0
            f.fermi = 0
        return out

    def is_root_monomial(self) -> bool:
        """True when the expression is exactly scalar * prod x_i^{k_i}."""
        return all(
            f.exp_coeff == 0 and f.bose == 0 and f.fermi == 0 for f in self.factors
        )

    def to_series(self, D: int) -> TruncatedSeries:
        """Lower to a truncated series; inverse bose factors must be covered
        by x powers, otherwise the density has a genuine pole."""
        variables = root_variables(self.n_roots)
        out = TruncatedSeries.constant(variables, D, self.scalar)
        one = TruncatedSeries.constant(variables, D, 1)
        for i, f in enumerate(self.factors):
            name = variables[i]
            net = f.power + f.bose
            if net < 0:
                raise PoleError(
                    f"uncancelled pole at root {name}: x^{f.power} against "
                    f"(1-e^-x)^{f.bose}"
                )
            if net:
                exps = tuple(net if v == name else 0 for v in variables)
                out = out * TruncatedSeries.monomial(variables, D, exps)
            if f.bose:
                x = TruncatedSeries.variable(variables, D + 1, name)
                u = (TruncatedSeries.constant(variables, D + 1, 1) - (-x).exp()).quotient_by(name)
                out = out * (u ** f.bose if f.bose > 0 else u.invert() ** (-f.bose))
            if f.exp_coeff:
                x = TruncatedSeries.variable(variables, D, name)
                out = out * (x * f.exp_coeff).exp()
            if f.fermi:
                x = TruncatedSeries.variable(variables, D, name)
                g = one + (-x).exp()
                out = out * (g ** f.fermi if f.fermi > 0 else g.invert() ** (-f.fermi))
        return out

    def evaluate(self, values: Sequence[float], nondegenerate: bool = False) -> float:
        """Numeric value with root i set to values[i] (spectral pairings)."""
        if len(values) != self.n_roots:
            raise ValueError("need one value per root")
        out = float(self.scalar)
        for f, lam in zip(self.factors, values):
            out *= lam ** f.power
            if f.exp_coeff:
                out *= _fexp(float(f.exp_coeff) * lam)
            if not nondegenerate:
                if f.bose:
                    out *= (1.0 - _fexp(-lam)) ** f.bose
                if f.fermi:
                    out *= (1.0 + _fexp(-lam)) ** f.fermi
        return out

    def canonical_string(self) -> str:
        variables = root_variables(self.n_roots)
        pieces: List[str] = []
        if self.scalar != 1:
            pieces.append(format_rational(self.scalar))
        for name, f in zip(variables, self.factors):
            if f.power == 1:
                pieces.append(name)
            elif f.power:
                pieces.append(f"{name}^{f.power}")
            if f.exp_coeff:
                pieces.append(f"exp({format_rational(f.exp_coeff)}*{name})")
            if f.bose == 1:
                pieces.append(f"(1-exp(-{name}))")
            elif f.bose:
                pieces.append(f"(1-exp(-{name}))^{f.bose}")
            if f.fermi == 1:
                pieces.append(f"(1+exp(-{name}))")
            elif f.fermi:
                pieces.append(f"(1+exp(-{name}))^{f.fermi}")
        if not pieces:
            return "1"
        return " * ".join(pieces)


# -- pairing assembly ----------------------------------------------------------


def _check_kind(kind: str) -> None:
    if kind not in PAIRING_KINDS:
        raise ValueError(f"unknown pairing kind {kind!r}; expected one of {PAIRING_KINDS}")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def _assemble(kind: str, l: int) -> FactorExpression:
    expr = FactorExpression(l)
    half = Fraction(1, 2)
    if kind == "fb":
        for i in range(l):
            expr.mul_exp(i, half).mul_fermi_minus(i, 1)          # e^{x/2}(1+e^{-x})
            expr.mul_power(i, 1).mul_exp(i, -half).mul_bose_minus(i, -1)
    elif kind == "ff":
        for i in range(l):
            expr.mul_exp(i, half).mul_fermi_minus(i, 1)
            expr.mul_power(i, 1).mul_exp(i, -half).mul_fermi_minus(i, -1)
    elif kind == "bb":
        for i in range(l):
            expr.mul_bose_minus(i, 1).mul_bose_plus(i, 1)        # dual character, roots +-x
            expr.mul_power(i, 1).mul_bose_minus(i, -1)           # Todd factor at +x
            expr.mul_scalar(-1).mul_power(i, 1).mul_bose_plus(i, -1)  # Todd factor at -x
            expr.mul_power(i, -1)                                # 1/euler
        if (l * (2 * l + 1)) % 2:
            expr.mul_scalar(-1)
    elif kind == "bf":
        for i in range(l):
            expr.mul_bose_minus(i, 1).mul_bose_plus(i, 1)
            expr.mul_power(i, 1).mul_fermi_minus(i, -1)          # Td* factor at +x
            expr.mul_scalar(-1).mul_power(i, 1).mul_fermi_plus(i, -1)  # Td* factor at -x
            expr.mul_power(i, -1)
    else:
        raise AssertionError(kind)
    return expr


def pairing_density(kind: str, l: int, mode: str = "exact") -> FactorExpression:
    """The pairing's index density in canonical factored form."""
    _check_kind(kind)
    _check_mode(mode)
    expr = _assemble(kind, l)
    if mode == "nondegenerate":
        expr = expr.nondegenerate_limit()
    return expr


def density_series(kind: str, l: int, mode: str, D: int) -> TruncatedSeries:
    """The pairing density lowered to a truncated series over x1..xl."""
    return pairing_density(kind, l, mode).to_series(D)


# -- index evaluation -----------------------------------------------------------


@dataclass(frozen=True)
class IndexReport:
    manifold: str
    pairing: str
    mode: str
    density: ChernPolynomial
    density_form: str
    index_value: Fraction

    def to_json_dict(self) -> dict:
        return {
            "manifold": self.manifold,
            "pairing": self.pairing,
            "mode": self.mode,
            "density_form": self.density_form,
            "density_chern_basis": self.density.to_json_dict(),
            "index": format_rational(self.index_value),
        }


ManifoldLike = Union[str, Tuple[CohomologyModel, TangentData]]


def _resolve(manifold: ManifoldLike) -> Tuple[CohomologyModel, TangentData]:
    if isinstance(manifold, str):
        return catalog(manifold)
    return manifold


def pairing_index(
    kind: str, manifold: ManifoldLike, mode: str = "exact", D: Optional[int] = None
) -> IndexReport:
    """Exact rational index of a pairing on a catalog manifold.

    The density is lowered to a symmetric series, reduced to the Chern
    basis, evaluated on the tangent Chern classes and integrated.  Terms
    above the complex dimension cannot contribute to the integral, so the
    lowering is truncated there regardless of D.
    """
    model, tangent = _resolve(manifold)
    l = model.complex_dim
    if D is None:
        D = model.real_dimension
    if D < l:
        raise ValueError(
            f"truncation {D} is below the complex dimension {l}; the top "
            "degree would be lost"
        )
    expr = pairing_density(kind, l, mode)
    series = expr.to_series(l)
    poly = to_chern_basis(series, l)
    element = evaluate_chern_polynomial(poly, tangent, model)
    value = model.integrate(element)
    return IndexReport(
        manifold=model.name,
        pairing=kind,
        mode=mode,
        density=poly,
        density_form=expr.canonical_string(),
        index_value=value,
    )


def hrr_index(
    manifold: ManifoldLike, bundle: Optional[RootModel] = None, D: Optional[int] = None
) -> Fraction:
    """Holomorphic Euler characteristic: integral of ch(E) * Td(TM).

    ``bundle`` is a RootModel over the manifold's generators; None means
    the trivial line bundle, so the result is the Todd genus.
    """
    model, tangent = _resolve(manifold)
    l = model.complex_dim
    todd = genus_class("todd", model, tangent)
    if bundle is None:
        ch = model.one()
    else:
        if tuple(bundle.variables) != model.generators:
            raise ValueError(
                f"bundle roots use generators {bundle.variables}, "
                f"manifold has {model.generators}"
            )
        if bundle.truncation < l:
            raise ValueError(
                f"bundle truncation {bundle.truncation} is below the model's "
                f"complex dimension {l}"
            )
        ch = model.reduce(chern_character(bundle).truncate(l))
    return model.integrate(model.multiply(ch, todd))


# -- dual-route verification -----------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    kind: str
    l: int
    truncation: int
    ok: bool
    canonical_form: str
    chain: Tuple[str, ...]
    first_mismatch: Optional[Tuple[Tuple[int, ...], str, str]]
    literal_ok: Optional[bool]

    def to_json_dict(self) -> dict:
        return {
            "pairing": self.kind,
            "roots": self.l,
            "truncation": self.truncation,
            "ok": self.ok,
            "canonical_form": self.canonical_form,
            "chain": list(self.chain),
            "first_mismatch": None
            if self.first_mismatch is None
            else {
                "exponents": list(self.first_mismatch[0]),
                "factored_route": self.first_mismatch[1],
                "series_route": self.first_mismatch[2],
            },
            "literal_ok": self.literal_ok,
        }


def _todd_factor_negated(variables, D: int, name: str) -> TruncatedSeries:
    """(-x)/(1 - e^{x}): the Todd factor evaluated at the negated root."""
    x = TruncatedSeries.variable(variables, D + 1, name)
    q = (TruncatedSeries.constant(variables, D + 1, 1) - x.exp()).quotient_by(name)
    return -(q.invert())


def _tdstar_factor_negated(variables, D: int, name: str) -> TruncatedSeries:
    """(-x)/(1 + e^{x})."""
    x = TruncatedSeries.variable(variables, D, name)
    u = TruncatedSeries.constant(variables, D, 1) + x.exp()
    return -(u.invert() * x)


def _brute_series(kind: str, l: int, D: int) -> TruncatedSeries:
    """The pairing density by plain series arithmetic, no factored algebra.

    The bb/bf factors for one root only involve that root, so each root's
    block (dual character times both genus factors, divided once by the
    root) is assembled univariately before the cross-root product; this
    keeps the intermediate series sparse without assuming any cancellation.
    """
    if kind == "fb":
        return spinor_character(l, D) * genus_series("ahat", l, D)
    if kind == "ff":
        return spinor_character(l, D) * genus_series("bhat", l, D)
    variables = root_variables(l)
    out = TruncatedSeries.constant(variables, D, 1)
    for name in variables:
        one = TruncatedSeries.constant(variables, D + 1, 1)
        x = TruncatedSeries.variable(variables, D + 1, name)
        block = (one - (-x).exp()) * (one - x.exp())
        if kind == "bb":
            x2 = TruncatedSeries.variable(variables, D + 2, name)
            plus = (
                (TruncatedSeries.constant(variables, D + 2, 1) - (-x2).exp())
                .quotient_by(name)
                .invert()
            )
            block = block * plus * _todd_factor_negated(variables, D + 1, name)
        else:
            tds = one + (-x).exp()
            block = block * (tds.invert() * x)
            block = block * _tdstar_factor_negated(variables, D + 1, name)
        out = out * block.quotient_by(name)
    if kind == "bb" and (l * (2 * l + 1)) % 2:
        out = -out
    return out


def _literal_check(kind: str, l: int, D: int) -> Optional[bool]:
    """Single-root (unpaired) products over m = 2l independent roots.

    For bb this is the chain prod(1 - e^{-x_i}) * prod x_i/(1 - e^{-x_i}),
    which must collapse to the euler monomial over all m roots; for bf the
    analogous Td* product only reaches the monomial in the limit, so only
    route agreement is asserted.
    """
    if kind not in ("bb", "bf"):
        return None
    m = 2 * l
    if D < m:
        return None
    expr = FactorExpression(m)
    for i in range(m):
        expr.mul_bose_minus(i, 1)
        if kind == "bb":
            expr.mul_power(i, 1).mul_bose_minus(i, -1)
        else:
            expr.mul_power(i, 1).mul_fermi_minus(i, -1)
    factored = expr.to_series(D)
    variables = root_variables(m)
    brute = TruncatedSeries.constant(variables, D, 1)
    for name in variables:
        one = TruncatedSeries.constant(variables, D, 1)
        x = TruncatedSeries.variable(variables, D, name)
        block = one - (-x).exp()
        if kind == "bb":
            x2 = TruncatedSeries.variable(variables, D + 1, name)
            block = block * (
                (TruncatedSeries.constant(variables, D + 1, 1) - (-x2).exp())
                .quotient_by(name)
                .invert()
            )
        else:
            block = block * (((one + (-x).exp()).invert()) * x)
        brute = brute * block
    if factored != brute:
        return False
    if kind == "bb" and factored != euler_class_roots(m, D):
        return False
    if kind == "bf" and expr.nondegenerate_limit().to_series(D) != euler_class_roots(m, D):
        return False
    return True


_CHAINS = {
    "fb": (
        "spin character: prod_i exp(x_i/2)*(1+exp(-x_i))",
        "A-hat factors: prod_i x_i*exp(-x_i/2)/(1-exp(-x_i))",
        "product: prod_i x_i*(1+exp(-x_i))/(1-exp(-x_i))",
        "limit exp(-x)->0: prod_i x_i",
    ),
    "bb": (
        "dual character (roots +-x): prod_i (1-exp(-x_i))*(1-exp(x_i))",
        "Todd factors (roots +-x): prod_i x_i*(-x_i)/((1-exp(-x_i))*(1-exp(x_i)))",
        "divide by euler monomial, parity prefactor (-1)^(l(2l+1))",
        "product: prod_i x_i",
    ),
    "ff": (
        "spin character: prod_i exp(x_i/2)*(1+exp(-x_i))",
        "B-hat factors: prod_i x_i*exp(-x_i/2)/(1+exp(-x_i))",
        "product: prod_i x_i",
    ),
    "bf": (
        "dual character (roots +-x): prod_i (1-exp(-x_i))*(1-exp(x_i))",
        "Td* factors (roots +-x): prod_i x_i*(-x_i)/((1+exp(-x_i))*(1+exp(x_i)))",
        "divide by euler monomial",
        "product: prod_i x_i*((1-exp(-x_i))/(1+exp(-x_i)))^2",
        "limit exp(-x)->0: prod_i x_i",
    ),
}


def verify_identity(kind: str, l: int, D: Optional[int] = None) -> VerifyReport:
    """Re-derive the pairing density two independent ways and compare.

    Route (a) is the factored-algebra cancellation lowered to a series;
    route (b) is brute-force series arithmetic on the constituent
    characters and genus factors.  For ff/bb the density must additionally
    equal the euler monomial outright; for fb/bf it must equal it after
    the nondegenerate substitution.
    """
    _check_kind(kind)
    if l < 1:
        raise ValueError("need l >= 1")
    if D is None:
        D = 2 * l + 4
    expr = pairing_density(kind, l)
    factored = expr.to_series(D)
    brute = _brute_series(kind, l, D)
    mismatch: Optional[Tuple[Tuple[int, ...], str, str]] = None
    exps_all = sorted(set(factored.terms) | set(brute.terms))
    for exps in exps_all:
        a = factored.coefficient(exps)
        b = brute.coefficient(exps)
        if a != b:
            mismatch = (exps, format_rational(a), format_rational(b))
            break
    ok = mismatch is None
    euler = euler_class_roots(l, D) if D >= l else None
    if ok and euler is not None:
        if kind in ("ff", "bb"):
            ok = factored == euler
        else:
            ok = expr.nondegenerate_limit().to_series(D) == euler
    literal_ok = _literal_check(kind, l, D) if ok else None
    if literal_ok is False:
        ok = False
    return VerifyReport(
        kind=kind,
        l=l,
        truncation=D,
        ok=ok,
        canonical_form=expr.canonical_string(),
        chain=_CHAINS[kind],
        first_mismatch=mismatch,
        literal_ok=literal_ok,
    )
