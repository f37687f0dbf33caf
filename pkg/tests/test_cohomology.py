import pytest

from dagwitt.cohomology import (
    FiniteComplex,
    build_drw_complex,
    build_mw_complex,
    compare_cohomology,
    elementary_divisors,
    fractional_acyclicity,
    preimage_lattice,
    quotient_exponents,
    snf,
    span_lattice,
)
from dagwitt.comparison import WittLift
from dagwitt.dagger import FrobeniusLift, MwConnection
from dagwitt.drw.connection import DrwConnection
from dagwitt.errors import NotIntegrable


def test_snf_valuations():
    res = snf([[0, 1, 0], [0, 0, 2], [0, 0, 0]], 3, 3, 3, 4)
    assert res.vals == [0, 0]
    res = snf([[9, 3], [3, 0]], 2, 2, 3, 4)
    assert sorted(res.vals) == [1, 1]


def test_lattices():
    L = span_lattice([[3, 0], [0, 1]], 2, 3, 4)
    assert quotient_exponents(span_lattice([[1, 0], [0, 1]], 2, 3, 2), [[3, 0], [0, 1]]) == [1]
    # preimage of 3Z + Z under multiplication by 3 on the first coordinate is everything
    P = preimage_lattice([[3, 0], [0, 1]], 2, L)
    assert quotient_exponents(P, [[1, 0], [0, 1]]) == []


def test_mw_complex_examples():
    C = build_mw_complex(MwConnection.trivial(1, 3, 2, 1), 2)
    assert C.dense(0) == [[0, 1, 0], [0, 0, 2], [0, 0, 0]]
    C = build_mw_complex(MwConnection.parse([["dx"]], 3, 2, 1), 1)
    assert C.labels[0] == ["e0:1", "e0:x"]
    assert C.dense(0) == [[1, 1], [0, 1]]
    C = build_mw_complex(MwConnection.parse([["x dx"]], 3, 2, 1), 0)
    assert C.dense(0) == [[0]]
    with pytest.raises(NotIntegrable):
        build_mw_complex(MwConnection.parse([["y dx"]], 3, 2, 2), 2)


def test_drw_complex_examples():
    T = build_drw_complex(DrwConnection.trivial(1, 3, 2, 1), 1)
    assert T.labels[0] == ["e0:1", "e0:V^1[x]", "e0:V^1[x^2]", "e0:[x]"]
    assert T.orders == [[2, 1, 1, 2], [1, 1, 2]]
    assert T.check()
    Fr = build_drw_complex(DrwConnection.trivial(1, 3, 2, 1), 1, "fractional")
    assert Fr.labels == [["e0:V^1[x]", "e0:V^1[x^2]"], ["e0:dV^1[x]", "e0:dV^1[x^2]"]]
    assert Fr.dense(0) == [[1, 0], [0, 1]]
    I = build_drw_complex(DrwConnection.trivial(1, 3, 2, 1), 0, "integral")
    assert I.labels == [["e0:1"], []]


def test_elementary_divisors_examples():
    empty = FiniteComplex(3, 2, [[], []], [[], []], [{}])
    assert all(not es for es in elementary_divisors(empty).divisors.values())
    ident = FiniteComplex(3, 2, [["a"], ["b"]], [[2], [2]], [{(0, 0): 1}])
    assert elementary_divisors(ident).divisors == {0: [], 1: []}
    H = elementary_divisors(build_mw_complex(MwConnection.trivial(1, 3, 2, 1), 3))
    # x^2 dx = d(x^3/3) only up to p: a divisor p^1
    assert 1 in H.divisors[1]
    assert H.free_rank(0) == 1


def test_compare_trivial_line():
    L = WittLift(FrobeniusLift.coordinate(3, 3, 1))
    out = compare_cohomology(MwConnection.trivial(1, 3, 3, 1), L, 6)
    assert out.passed and out.max_exponent == 0


def test_compare_gauge_trivial():
    L = WittLift(FrobeniusLift.coordinate(3, 3, 1))
    out = compare_cohomology(MwConnection.parse([["3*x^2 dx"]], 3, 3, 1), L, 6)
    assert out.passed and out.max_exponent == 0


def test_compare_two_vars_p5():
    L = WittLift(FrobeniusLift.coordinate(5, 2, 2))
    out = compare_cohomology(MwConnection.trivial(1, 5, 2, 2), L, 4)
    assert out.passed and out.max_exponent == 0 and out.bound == 0


def test_fractional_acyclicity_examples():
    assert fractional_acyclicity(3, 2).passed
    assert fractional_acyclicity(0, 2).passed
    rep = fractional_acyclicity(2, 2, d=2)
    assert rep.passed
