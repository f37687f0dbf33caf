import pytest

from dagwitt.dagger import (
    DaggerSeries,
    FrobeniusLift,
    MwConnection,
    MwForm,
    check_overconvergent,
    connection_apply,
    curvature,
    dagger_arith,
    frobenius_apply,
    is_integrable,
    mw_d,
    parse_form,
)
from dagwitt.errors import InvalidFrobeniusLift, NotIntegrable, ParseError
from dagwitt.dagger import require_integrable


def D(text, p=3, N=2, nvars=1):
    return DaggerSeries.parse(text, p, N, nvars)


def form(text, p=3, N=2, nvars=1):
    return parse_form(text, p, N, nvars)


def test_dagger_arith_examples():
    assert dagger_arith(D("x"), D("x"), "mul") == D("x^2")
    assert dagger_arith(D("1+3x"), D("6x"), "add") == D("1")
    a = D("2x^2 + 3x")
    assert dagger_arith(a, D("1"), "mul") == a


def test_layers():
    a = D("x + 3*x^2 + 9*x^3", N=3)
    assert a.layer_degrees() == {0: 1, 1: 2, 2: 3}


def test_check_overconvergent():
    assert check_overconvergent(D("x"), 1)
    assert not check_overconvergent(D("x + 3*x^5"), 2)
    assert check_overconvergent(D("x + 3*x^2 + 9*x^3", N=3), 1)


def test_mw_d_examples():
    assert mw_d(MwForm.function(D("x^2"))) == form("2x dx")
    assert mw_d(form("dx")).is_zero()
    w = mw_d(form("x*y dx", nvars=2))
    assert w == form("-x dx^dy", nvars=2)


def test_connection_apply_examples():
    zero = MwConnection.trivial(1, 3, 2, 1)
    assert connection_apply(zero, [D("x^2").poly]) == [form("2x dx")]
    M = MwConnection.parse([["(x+1) dx"]], 3, 2, 1)
    assert connection_apply(M, [D("1").poly]) == [form("(x+1) dx")]
    # Leibniz: (g' + f g) dx
    assert connection_apply(M, [D("x^2").poly]) == [form("(2x + x^3 + x^2) dx")]


def test_curvature():
    assert is_integrable(MwConnection.trivial(2, 3, 2, 2))
    assert is_integrable(MwConnection.parse([["x^2 dx"]], 3, 2, 1))
    bad = MwConnection.parse([["y dx"]], 3, 2, 2)
    assert curvature(bad)[0][0] == form("-dx^dy", nvars=2)
    with pytest.raises(NotIntegrable):
        require_integrable(bad)
    assert is_integrable(MwConnection.parse([["y dx + x dy"]], 3, 2, 2))


def test_frobenius_apply_examples():
    F = FrobeniusLift.parse(["x^3"], 3, 2)
    assert frobenius_apply(F, D("x")) == D("x^3")
    G = FrobeniusLift.parse(["x^3+3x"], 3, 2)
    assert frobenius_apply(G, D("x^2")) == D("x^6 + 6x^4")
    assert frobenius_apply(G, D("1")) == D("1")


def test_invalid_frobenius_lift():
    with pytest.raises(InvalidFrobeniusLift):
        FrobeniusLift.parse(["x^3 + x"], 3, 2)


def test_parse_errors():
    with pytest.raises(ParseError):
        D("x + ")
    with pytest.raises(ParseError):
        D("y", nvars=1)
