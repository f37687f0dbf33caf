from fractions import Fraction

import pytest

from dagwitt.dagger import FrobeniusLift, MwConnection, monomial_forms, parse_form
from dagwitt.drw.eforms import EForm
from dagwitt.errors import NotDivisible
from dagwitt.homotopy import (
    CoefficientElement,
    DPrimeElement,
    L_E_operator,
    L_operator,
    build_interpolation,
    check_coefficient_homotopy,
    check_homotopy_identity,
    homotopy_apply,
)
from dagwitt.homotopy import _residual
from dagwitt.comparison import t_f_on_forms


def F(texts, p=3, N=4):
    return FrobeniusLift.parse(texts, p, N)


W = EForm.monomial((Fraction(2),), (0,), 1, 3)


def test_L_operator_examples():
    assert L_operator(DPrimeElement({(2, False): W}, 3, 1)) == (EForm.zero(3, 1), 0)
    out, loss = L_operator(DPrimeElement({(0, True): W}, 3, 1))
    assert out == W.scale(3) and loss == 0
    out, loss = L_operator(DPrimeElement({(2, True): W}, 3, 1))
    assert out == W.scale(9) and loss == 1


def test_L_E_sign_rule():
    zero = DPrimeElement.zero(3, 1)
    xi = DPrimeElement({(0, True): W}, 3, 1)
    a, b, _ = L_E_operator(CoefficientElement(0, DPrimeElement({(1, False): W}, 3, 1), zero))
    assert a.is_zero() and b.is_zero()
    a, b, _ = L_E_operator(CoefficientElement(0, xi, zero))
    assert a == W.scale(3) and b.is_zero()
    a, b, _ = L_E_operator(CoefficientElement(0, zero, xi))
    assert a.is_zero() and b == W.scale(-3)


def test_interpolation_specializes():
    phi = build_interpolation(F(["x^3"]), F(["x^3+3x"]))
    assert phi.specializations_ok()
    with pytest.raises(NotDivisible):
        build_interpolation(F(["x^3"]), F(["x^3+x"]))


def test_equal_lifts_give_zero_residuals():
    gens = monomial_forms(3, 4, 1, 4, 0) + monomial_forms(3, 4, 1, 3, 1)
    rep = check_homotopy_identity(F(["x^3+3x"]), F(["x^3+3x"]), gens, 0)
    assert rep.passed and rep.min_precision == 4


@pytest.mark.parametrize("g", ["x", "x^2 dx", "x^5 + 2x", "(x^4 + 1) dx"])
def test_identity_on_generators(g):
    w = parse_form(g, 3, 4, 1)
    rep = check_homotopy_identity(F(["x^3"]), F(["x^3+3x"]), [w], 0)
    assert rep.passed
    assert rep.min_precision >= 2


def test_identity_fails_with_wrong_sign():
    """Negative control: the wrong orientation psi_1 - psi_2 must not match."""
    phi = build_interpolation(F(["x^3"]), F(["x^3+3x^2"]))
    failures = 0
    for g in ["x^2", "x dx", "x^4 + x"]:
        w = parse_form(g, 3, 4, 1)
        lhs, loss = homotopy_apply(phi, w, 0)
        good = t_f_on_forms(phi.L2, w) - t_f_on_forms(phi.L1, w)
        assert _residual(phi, lhs, good, loss, g, 3).vanishes
        failures += not _residual(phi, lhs, -good, loss, g, 3).vanishes
    assert failures == 3


def test_coefficient_homotopy_rank_one():
    Mt = MwConnection.parse([["x^2 dx"]], 5, 4, 1)
    gens = monomial_forms(5, 4, 1, 3, 0)
    rep = check_coefficient_homotopy(F(["x^5"], 5), F(["x^5+5x^2"], 5), Mt, gens, 0)
    assert rep.passed and rep.coefficient_residuals
