from dagwitt.mpoly import MPoly, parse_poly, poly_arith, reduce_mod_p, substitute


def P(text, nvars=1, p=None, prec=None):
    return parse_poly(text, nvars, p, prec)


def test_poly_arith_examples():
    f, g = P("x+y", 2, 3, 1), P("x-y", 2, 3, 1)
    assert poly_arith(f, g, "mul") == P("x^2-y^2", 2, 3, 1)
    assert poly_arith(f, MPoly.const(1, 2, 3, 1), "mul") == f
    assert P("x+1", 1, 3, 1) ** 3 == P("x^3+1", 1, 3, 1)


def test_substitute_examples():
    assert substitute(P("x^2"), [P("x^3")]) == P("x^6")
    assert substitute(P("x", 1, 3, 3), [P("x^3+3x", 1, 3, 3)]) == P("x^3+3x", 1, 3, 3)
    f = substitute(P("x+y", 2, 3, 1), [P("x^3", 2, 3, 1), P("y^3", 2, 3, 1)])
    assert f == P("x+y", 2, 3, 1) ** 3


def test_reduce_mod_p():
    assert reduce_mod_p(P("3x+1", 1, 3, 2)) == P("1", 1, 3, 1)
    assert reduce_mod_p(P("0", 1, 3, 2)).is_zero()
    assert reduce_mod_p(P("4x^2+6", 1, 3, 2)) == P("x^2", 1, 3, 1)


def test_parse_and_render_round_trip():
    f = P("2*x^2*y - y^3 + 5", 2)
    assert P(f.to_text(), 2) == f
    assert f.derivative(1) == P("2x^2 - 3y^2", 2)
