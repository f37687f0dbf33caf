from fractions import Fraction

import pytest

from dagwitt.drw import DrwForm, drw_d, drw_F, drw_V, split_integral_fractional, teichmuller_form, witt_to_drw
from dagwitt.drw.basic import basic_eform, partitions, render_basic, weight_basis
from dagwitt.drw.connection import DrwConnection, drw_connection_apply, drw_curvature
from dagwitt.drw.eforms import depth
from dagwitt.drw.rewrite import drw_normalize, parse_expression
from dagwitt.errors import NotDivisible, ParseError
from dagwitt.mpoly import parse_poly
from dagwitt.witt import parse_witt


def norm(text, N=2, nvars=1, p=3, strategy="eager"):
    return drw_normalize(parse_expression(text, nvars), p, N, nvars, strategy)


@pytest.mark.parametrize("strategy", ["eager", "rewrite"])
def test_normalize_examples(strategy):
    assert norm("[x]*d[x] + [x]*d[x]", strategy=strategy) == norm("d([x^2])", strategy=strategy)
    assert norm("d[x^3]", strategy=strategy) == norm("3*[x^2]*d[x]", strategy=strategy)
    w = norm("V[x]*dV[x]", N=3, strategy=strategy)
    assert w == norm("6*dV[x^2]", N=3, strategy=strategy)
    assert w.to_text() == "6*dV^1[x^2]"


def test_V_x_dV_x_vanishes_in_W2():
    # 6 dV[x^2] lives in Z/p^(N-1): zero for N = 2
    assert norm("V[x]*dV[x]", N=2).is_zero()


def test_drw_d_examples():
    assert drw_d(norm("[x]")) == norm("d[x]")
    assert drw_d(norm("dV[x]")).is_zero()
    assert drw_d(norm("[x]*d[y]", nvars=2)) == norm("d[x]*d[y]", nvars=2)


def test_V_F_examples():
    assert drw_F(norm("dV[x]", N=3)) == norm("d[x]", N=2)
    # V is followed by restriction, so the level stays N
    assert drw_V(norm("d[x]", N=3)) == norm("3*dV[x]", N=3)
    assert drw_V(norm("d[x]", N=2)).is_zero()
    assert drw_F(norm("d[x]", N=3)) == norm("[x^2]*d[x]", N=2)


def test_split_integral_fractional():
    a, b = split_integral_fractional(norm("[x^2]*d[x]"))
    assert b.is_zero() and not a.is_zero()
    a, b = split_integral_fractional(norm("dV[x]"))
    assert a.is_zero() and not b.is_zero()
    a, b = split_integral_fractional(norm("[x]*d[x] + dV[x]"))
    assert a == norm("[x]*d[x]") and b == norm("dV[x]")


def test_witt_vectors_embed():
    a = parse_witt("(x, x^2)", 3, 2, 1)
    assert witt_to_drw(a) == norm("[x] + V[x^2]")
    assert teichmuller_form(parse_poly("x", 1, 3, 1), 2) == norm("[x]")


def test_render_basic():
    k = (Fraction(1, 3),)
    assert render_basic(k, partitions(k, 3, 1)[0], 3) == "dV^1[x]"
    k = (Fraction(3),)
    assert render_basic(k, partitions(k, 3, 1)[0], 3) == "[x^2]·d[x]"


@pytest.mark.parametrize(
    "k",
    [(Fraction(1, 3),), (Fraction(5, 9),), (Fraction(2), Fraction(1, 3)), (Fraction(2, 3), Fraction(4, 9)), (Fraction(3), Fraction(6))],
)
def test_basic_lattice(k):
    """Basic elements have integral E-coordinates, are independent, and p^(N-u) kills them in W_N."""
    p = 3
    u = depth(k, p)
    for q in range(len(k) + 1):
        wb = weight_basis(p, k, q)
        assert len(wb.parts) == len(wb.sets)
        for P in wb.parts:
            e = basic_eform(k, P, p)
            assert all(Fraction(c).denominator == 1 for c in e.terms.values())
            N = u + 2
            w = DrwForm.from_eform(e, N)
            assert w.terms == {(k, P): 1}
            assert DrwForm.from_eform(e.scale(p ** (N - u)), N).is_zero()
            assert not DrwForm.from_eform(e.scale(p ** (N - u - 1)), N).is_zero()


def test_off_lattice_rejected():
    k = (Fraction(1, 3),)
    e = basic_eform(k, partitions(k, 3, 0)[0], 3).scale(Fraction(1, 3))
    with pytest.raises(NotDivisible):
        DrwForm.from_eform(e, 3)


def test_parse_expression_errors():
    with pytest.raises(ParseError):
        parse_expression("V[x", 1)
    with pytest.raises(ParseError):
        parse_expression("", 1)


def test_drw_connection_examples():
    zero = DrwConnection.trivial(1, 3, 2, 1)
    s = [parse_witt("[x^2]", 3, 2, 1)]
    assert drw_connection_apply(zero, s) == [norm("2*[x]*d[x]")]
    f = norm("([x] + 1)*d[x]")
    M = DrwConnection([[f]])
    assert drw_connection_apply(M, [parse_witt("[1]", 3, 2, 1)]) == [f]
    assert drw_connection_apply(M, [parse_witt("(0, 0)", 3, 2, 1)]) == [DrwForm.zero(3, 2, 1)]
    assert all(w.is_zero() for row in drw_curvature(M) for w in row)
