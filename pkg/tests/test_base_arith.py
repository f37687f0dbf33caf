import pytest

from dagwitt.base_arith import GlobalParams, PAdicScalar, divide_exact_p, invert_unit, kappa_for, scalar_arith, valuation
from dagwitt.errors import NotAUnit, NotDivisible


def S(r, k, p=3):
    return PAdicScalar(r, p, k)


def test_scalar_arith_examples():
    assert scalar_arith(S(3, 2), S(6, 2), "add") == S(0, 2)
    one = scalar_arith(S(1, 3), S(1, 2), "mul")
    assert one == S(1, 2) and one.precision == 2
    assert scalar_arith(S(5, 3), S(7, 3), "mul") == S(8, 3)


def test_divide_exact_p():
    assert divide_exact_p(S(9, 3), 1) == S(3, 2)
    assert divide_exact_p(S(0, 3), 2) == S(0, 1)
    assert divide_exact_p(S(6, 2), 1) == S(2, 1)
    with pytest.raises(NotDivisible):
        divide_exact_p(S(4, 3), 1)


def test_invert_unit():
    assert invert_unit(S(2, 2)) == S(5, 2)
    assert invert_unit(S(1, 3)) == S(1, 3)
    with pytest.raises(NotAUnit):
        invert_unit(S(3, 2))


def test_valuation_and_kappa():
    assert valuation(18, 3) == 2
    assert valuation(0, 3) == float("inf")
    assert kappa_for(3, 1) == 0
    assert kappa_for(5, 2) == 0
    assert kappa_for(3, 3) == 1


@pytest.mark.parametrize("p,N,D,d", [(4, 2, 2, 1), (3, 0, 2, 1), (3, 2, 2, 4)])
def test_global_params_rejects(p, N, D, d):
    with pytest.raises(ValueError):
        GlobalParams(p, N, D, d)


def test_global_params_reserve():
    g = GlobalParams(3, 3, 6, 1)
    assert g.kappa == 0 and g.reserve == 3
