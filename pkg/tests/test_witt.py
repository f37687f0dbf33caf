from fractions import Fraction

import pytest

from dagwitt.errors import DepthExceeded
from dagwitt.mpoly import MPoly, parse_poly
from dagwitt.witt import (
    WittVector,
    frobenius_via_ghost,
    ghost,
    growth_profile,
    lift,
    parse_witt,
    teichmuller,
    universal_polys,
    witt_arith,
    witt_F,
    witt_V,
)


def W(text, N=2, nvars=1, p=3):
    return parse_witt(text, p, N, nvars)


def test_universal_polys_p3():
    U = universal_polys(3, 2)
    X0, X1, Y0, Y1 = (MPoly.var(i, 4) for i in range(4))
    assert U.S[0] == X0 + Y0
    assert U.S[1] == X1 + Y1 + MPoly({e: c // 3 for e, c in (X0**3 + Y0**3 - (X0 + Y0) ** 3).terms.items()}, 4)
    assert U.P[0] == X0 * Y0


def test_universal_polys_depth_guard():
    with pytest.raises(DepthExceeded):
        universal_polys(3, 9)


def test_witt_arith_examples():
    assert witt_arith(W("[x]", nvars=2), W("[y]", nvars=2), "mul") == W("(x*y, 0)", nvars=2)
    assert witt_arith(W("(x, 0)"), W("(x, 0)"), "add") == W("(2x, x^3)")
    a = W("(x^2 + 1, x)")
    assert a + WittVector.zero(3, 2, 1) == a


def test_V_and_F():
    assert witt_V(W("(1, 0)")) == W("(0, 1)")
    assert witt_V(W("(x, x^2)")) == W("(0, x)")
    assert witt_F(W("[x]", N=3)) == W("[x^3]", N=2)


def test_teichmuller_and_ghost():
    t = teichmuller(parse_poly("x", 1, 3, 1), 2)
    assert t == W("(x, 0)")
    assert teichmuller(MPoly.zero(1, 3, 1), 2).is_zero()
    g = ghost(lift(t, 2), 2)
    assert [w.to_text() for w in g] == ["x", "x^3"]
    s = t + t
    assert [w.to_text() for w in ghost(lift(s, 2), 2)] == ["2*x", "2*x^3"]


def test_frobenius_agrees_with_ghost_route():
    a = W("(x^2 + x, 2x, x^4)", N=3)
    assert witt_F(a) == frobenius_via_ghost(a)


def test_growth_profile():
    assert growth_profile(W("[x]")).pairs == ((0, 1),)
    prof = growth_profile(W("(x, x^3)"))
    assert prof.pairs == ((0, 1), (1, 3)) and prof.slope == Fraction(3, 2)
    assert growth_profile(WittVector.zero(3, 2, 1)).slope == 0
