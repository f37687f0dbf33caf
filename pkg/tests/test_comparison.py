import pytest

from dagwitt.comparison import (
    WittLift,
    check_integrability,
    check_quasinilpotent,
    functoriality_check,
    pushforward_connection,
    pushforward_report,
    t_f_lands_integral,
    t_f_on_forms,
    witt_lift_apply,
)
from dagwitt.dagger import DaggerSeries, FrobeniusLift, MwConnection, mw_d, parse_form
from dagwitt.drw.connection import DrwConnection
from dagwitt.drw.rewrite import drw_normalize, parse_expression
from dagwitt.errors import InvalidFrobeniusLift, NotDivisible, NotIntegrable
from dagwitt.mpoly import parse_poly
from dagwitt.witt import parse_witt


def lift(texts, p=3, N=3):
    return WittLift(FrobeniusLift.parse(texts, p, N))


def norm(text, N=3, nvars=1, p=3):
    return drw_normalize(parse_expression(text, nvars), p, N, nvars)


def test_coordinate_lift_is_teichmuller():
    L = lift(["x^3"])
    assert L.images[0] == parse_witt("[x]", 3, 3, 1)
    one = parse_witt("[1]", 3, 3, 1)
    x = parse_witt("[x]", 3, 3, 1)
    f = DaggerSeries.parse("x^2 + 2x + 1", 3, 3, 1)
    assert witt_lift_apply(L, f) == x * x + (one + one) * x + one


def test_nontrivial_lift_components():
    L = lift(["x^3 + 3x"])
    assert [c.to_text() for c in L.images[0].components] == ["x", "x", "x^7 + x"]
    one = DaggerSeries.const(1, 3, 3, 1)
    assert witt_lift_apply(L, one) == parse_witt("[1]", 3, 3, 1)


def test_ring_homomorphism_mod_pN():
    L = lift(["x^3 + 3x^2"])
    a = DaggerSeries.parse("x^2 + 3x + 1", 3, 3, 1)
    b = DaggerSeries.parse("2x^3 + x + 9", 3, 3, 1)
    ta, tb = witt_lift_apply(L, a), witt_lift_apply(L, b)
    assert witt_lift_apply(L, a * b) == ta * tb
    assert witt_lift_apply(L, a + b) == ta + tb


def test_invalid_lift_rejected():
    with pytest.raises(InvalidFrobeniusLift):
        lift(["x^3 + x"])
    assert issubclass(InvalidFrobeniusLift, NotDivisible)


def test_t_f_on_forms_examples():
    L = lift(["x^3"])
    assert t_f_on_forms(L, parse_form("dx", 3, 3, 1)) == norm("d[x]")
    assert t_f_on_forms(L, parse_form("x^2 dx", 3, 3, 1)) == norm("[x^2]*d[x]")
    assert t_f_on_forms(L, parse_form("0", 3, 3, 1)).is_zero()


def test_t_f_is_chain_map():
    L = lift(["x^3 + 3x^2 + 3y", "y^3"], N=2)
    w = parse_form("x*y dx + (y^2 + 1) dy", 3, 2, 2)
    assert t_f_on_forms(L, mw_d(w)) == t_f_on_forms(L, w).d()


def test_lands_integral():
    L = lift(["x^3"])
    assert t_f_lands_integral(L, parse_form("x dx", 3, 3, 1))
    assert t_f_lands_integral(L, parse_form("(x^5 + 2x) dx", 3, 3, 1))
    # the fractional part is real, it just is not hit
    assert not norm("dV[x]").is_zero()


def test_pushforward_affine_line():
    L = lift(["x^3"])
    Mt = MwConnection.parse([["(x^2 + 1) dx"]], 3, 3, 1)
    P = pushforward_connection(Mt, L)
    assert P.target.matrix[0][0] == norm("([x^2] + 1)*d[x]")
    assert P.diagram_commutes([DaggerSeries.parse("x + 2", 3, 3, 1)])
    zero = pushforward_connection(MwConnection.trivial(1, 3, 3, 1), L)
    assert zero.target.matrix[0][0].is_zero()


def test_pushforward_diagonal_rank_two():
    L = lift(["x^3 + 3x"])
    Mt = MwConnection.parse([["x dx", "0"], ["0", "(x^2+1) dx"]], 3, 3, 1)
    P = pushforward_connection(Mt, L)
    assert P.target.matrix[0][1].is_zero() and P.target.matrix[1][0].is_zero()
    assert check_integrability(P) and P.diagram_commutes()


def test_pushforward_integrability_two_vars():
    L = lift(["x^3", "y^3 + 3x"], N=2)
    Mt = MwConnection.parse([["y dx + x dy"]], 3, 2, 2)
    P = pushforward_connection(Mt, L, require_integrable=True)
    assert check_integrability(P)
    with pytest.raises(NotIntegrable):
        pushforward_connection(MwConnection.parse([["y dx"]], 3, 2, 2), L, require_integrable=True)


def test_quasinilpotent_proxy():
    assert check_quasinilpotent(DrwConnection.trivial(1, 3, 2, 1))
    assert check_quasinilpotent(DrwConnection([[norm("3*[x]*d[x]", N=2)]]))
    assert not check_quasinilpotent(DrwConnection([[norm("d[x]", N=2)]]))


def test_report_keys():
    L = lift(["x^3"])
    rep = pushforward_report(pushforward_connection(MwConnection.parse([["x dx"]], 3, 3, 1), L))
    assert {"diagram_commutes", "integrable", "quasinilpotent_proxy", "gauge"} <= set(rep)
    assert rep["valid_mod"] == "3^3"


def _functoriality(g_text, F1=None, F2=None):
    p, N = 3, 3
    L1 = WittLift(FrobeniusLift.parse(F1, p, N) if F1 else FrobeniusLift.coordinate(p, N, 1))
    L2 = WittLift(FrobeniusLift.parse(F2, p, N) if F2 else FrobeniusLift.coordinate(p, N, 2))
    fs = [parse_poly(t, 1, p, N) for t in ["x", "x^2 + 1", "2x^3 + x"]]
    ws = [parse_form(t, p, N, 1) for t in ["x dx", "(x^2 + 2) dx"]]
    return functoriality_check([parse_poly(g_text, 2, p, N)], L1, L2, fs, ws)


@pytest.mark.parametrize("g", ["y^2", "x*y", "x^2*y"])
def test_functoriality_compatible_maps(g):
    rep = _functoriality(g)
    assert rep.compatible and rep.functions_agree and rep.forms_agree and rep.passed


def test_functoriality_inclusion_with_matching_lifts():
    rep = _functoriality("x", ["x^3+3x"], ["x^3+3x", "y^3"])
    assert rep.compatible and rep.passed and rep.functions_agree


def test_functoriality_incompatible_map_agrees_mod_V():
    rep = _functoriality("x + y")
    assert not rep.compatible
    assert rep.agree_mod_V and rep.first_difference == 1
    assert not rep.functions_agree
