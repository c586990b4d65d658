from fractions import Fraction

import pytest

from statindex.genera import euler_class_roots
from statindex.bundles import RootModel
from statindex.manifolds import catalog
from statindex.pairings import (
    FactorExpression,
    PAIRING_KINDS,
    PoleError,
    density_series,
    hrr_index,
    pairing_density,
    pairing_index,
    verify_identity,
)

import reference_series as ref


@pytest.mark.parametrize("kind", ("ff", "bb"))
@pytest.mark.parametrize("l", range(1, 7))
def test_exact_cancellation_pairings(kind, l):
    D = l + 3
    assert density_series(kind, l, "exact", D) == euler_class_roots(l, D)


def test_fb_canonical_form():
    expr = pairing_density("fb", 1)
    assert expr.canonical_string() == "x1 * (1-exp(-x1))^-1 * (1+exp(-x1))"
    f = expr.factors[0]
    assert (f.power, f.exp_coeff, f.bose, f.fermi) == (1, 0, -1, 1)


def test_bb_canonical_is_monomial_with_prefactor():
    expr = pairing_density("bb", 1)
    assert expr.is_root_monomial()
    assert expr.scalar == 1
    # dropping the parity prefactor flips the density's sign
    raw = FactorExpression(1)
    raw.mul_bose_minus(0, 1).mul_bose_plus(0, 1)
    raw.mul_power(0, 1).mul_bose_minus(0, -1)
    raw.mul_scalar(-1).mul_power(0, 1).mul_bose_plus(0, -1)
    raw.mul_power(0, -1)
    assert raw.to_series(3) == -euler_class_roots(1, 3)


def test_fb_density_matches_reference_series():
    D = 8
    series = density_series("fb", 1, "exact", D)
    assert [series.coefficient((k,)) for k in range(D + 1)] == ref.fb_root_factor(D)


def test_bf_density_matches_reference_series():
    D = 8
    series = density_series("bf", 1, "exact", D)
    assert [series.coefficient((k,)) for k in range(D + 1)] == ref.bf_root_factor(D)


def test_fb_per_root_factor_is_even():
    series = density_series("fb", 1, "exact", 9)
    assert all(sum(e) % 2 == 0 for e in series.terms)


@pytest.mark.parametrize("kind", ("fb", "bf"))
@pytest.mark.parametrize("l", range(1, 6))
def test_limit_pairings_reduce_to_euler_monomial(kind, l):
    D = l + 2
    assert density_series(kind, l, "nondegenerate", D) == euler_class_roots(l, D)
    assert not pairing_density(kind, l, "exact").is_root_monomial()


@pytest.mark.parametrize("l", range(1, 9))
def test_bb_prefactor_parity(l):
    assert (-1) ** (l * (2 * l + 1)) == (-1) ** l


@pytest.mark.parametrize("kind", PAIRING_KINDS)
@pytest.mark.parametrize("l", (1, 2, 3))
def test_verify_identity_dual_routes(kind, l):
    report = verify_identity(kind, l)
    assert report.ok
    assert report.first_mismatch is None
    if kind in ("bb", "bf"):
        assert report.literal_ok is True


def test_verify_report_serializes():
    report = verify_identity("fb", 2, 6)
    data = report.to_json_dict()
    assert data["ok"] is True
    assert data["pairing"] == "fb"
    assert data["chain"]


@pytest.mark.parametrize(
    "kind,name,mode,expected",
    [
        ("ff", "cp1", "exact", 2),
        ("bb", "cp2", "exact", 3),
        ("ff", "cp1xcp1", "exact", 4),
        ("fb", "torus1", "exact", 0),
        ("fb", "torus1", "nondegenerate", 0),
        ("fb", "cp3", "nondegenerate", 4),
        ("bf", "cp2", "nondegenerate", 3),
    ],
)
def test_pairing_index_values(kind, name, mode, expected):
    report = pairing_index(kind, name, mode)
    assert report.index_value == expected


def test_exact_fb_indices_differ_from_euler():
    # hand values: the per-root factor is 2 + x^2/6 - x^4/360 + ..., so the
    # density has only even total degrees; odd-dimensional spaces get 0,
    # cp2 gets (c1^2 - 2c2)/3 -> 1 and cp4 gets (45/45) h^4 -> 1
    assert pairing_index("fb", "cp1", "exact").index_value == 0
    assert pairing_index("fb", "cp2", "exact").index_value == 1
    assert pairing_index("fb", "cp3", "exact").index_value == 0
    assert pairing_index("fb", "cp4", "exact").index_value == 1


def test_index_report_payload():
    report = pairing_index("ff", "cp2", "exact")
    data = report.to_json_dict()
    assert data["index"] == "3"
    assert data["manifold"] == "cp2"
    assert data["density_chern_basis"]["terms"] == [
        {"exponents": [0, 1], "coefficient": "1"}
    ]


@pytest.mark.parametrize("k", range(-3, 4))
def test_hrr_on_cp1_line_bundles(k):
    model, tangent = catalog("cp1")
    bundle = RootModel.build(model.generators, 1, [({"h": Fraction(k)}, 1)])
    assert hrr_index((model, tangent), bundle) == k + 1


def test_hrr_trivial_bundles():
    assert hrr_index("cp2") == 1
    assert hrr_index("cp1xcp1") == 1
    assert hrr_index("cp1xcp2") == 1


def test_hrr_rejects_foreign_roots():
    model, tangent = catalog("cp2")
    bundle = RootModel.build(("t",), 2, [({"t": 1}, 1)])
    with pytest.raises(ValueError):
        hrr_index((model, tangent), bundle)


def test_uncancelled_pole_is_reported():
    expr = FactorExpression(1)
    expr.mul_bose_minus(0, -1)
    with pytest.raises(PoleError):
        expr.to_series(4)


def test_factor_expression_numeric_evaluation():
    import math

    expr = pairing_density("fb", 1)
    lam = math.log(2.0)
    value = expr.evaluate([lam])
    assert abs(value - lam * (1 + 0.5) / (1 - 0.5)) < 1e-15
    assert abs(expr.evaluate([lam], nondegenerate=True) - lam) < 1e-16


def test_truncation_too_low_for_index():
    with pytest.raises(ValueError):
        pairing_index("ff", "cp3", "exact", D=2)
