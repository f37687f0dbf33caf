"""Rational forms on the perfection lift Z_p[x^(1/p^inf)].

A term ``x^k dlog x_I`` has a weight ``k`` in Z[1/p]^d (non-negative) and a
sorted index tuple ``I`` contained in the support of ``k``. The de Rham-Witt
complex of F_p[x_1..x_d] sits inside the Z_p-forms here as the forms ``w`` with
``w`` and ``dw`` both having p-integral coefficients; ``[x] = x``,
``V = p * (weight / p)``, ``F = (weight * p)``, and ``d`` is the usual
differential ``d(x^k dlog x_I) = sum_j k_j x^k dlog x_j ^ dlog x_I``.
"""
from __future__ import annotations

from fractions import Fraction

from ..base_arith import valuation
from ..mpoly import MPoly

Weight = tuple  # tuple of Fraction


def weight_of(exps, scale: int = 1) -> Weight:
    return tuple(Fraction(e, scale) for e in exps)


def depth(k: Weight, p: int) -> int:
    """Largest power of p appearing in a denominator of k (0 for integral k)."""
    return max((max(0, -valuation(x, p)) for x in k if x), default=0)


def support(k: Weight) -> tuple:
    return tuple(i for i, x in enumerate(k) if x)


def wedge_sign(I: tuple, J: tuple):
    """Sign and merged tuple for dlog_I ^ dlog_J; (0, None) if they overlap."""
    if set(I) & set(J):
        return 0, None
    inversions = sum(1 for a in I for b in J if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


class EForm:
    """Finite sum of ``c * x^k dlog x_I`` with rational coefficients."""

    __slots__ = ("p", "nvars", "terms")

    def __init__(self, terms: dict, p: int, nvars: int):
        self.p = p
        self.nvars = nvars
        self.terms = {key: c for key, c in terms.items() if c}

    @classmethod
    def zero(cls, p, nvars):
        return cls({}, p, nvars)

    @classmethod
    def one(cls, p, nvars):
        return cls({((Fraction(0),) * nvars, ()): 1}, p, nvars)

    @classmethod
    def monomial(cls, k: Weight, I: tuple = (), c=1, p: int = 3):
        return cls({(tuple(Fraction(x) for x in k), tuple(I)): c}, p, len(k))

    @classmethod
    def from_poly(cls, f: MPoly, p: int) -> "EForm":
        """Integer polynomial as a degree-0 form with integral weights."""
        return cls({(weight_of(e), ()): c for e, c in f.terms.items()}, p, f.nvars)

    def _like(self, terms) -> "EForm":
        return EForm(terms, self.p, self.nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(I) for (_, I) in self.terms}

    def weights(self) -> set:
        return {k for (k, _) in self.terms}

    def __add__(self, other: "EForm") -> "EForm":
        t = dict(self.terms)
        for key, c in other.terms.items():
            t[key] = t.get(key, 0) + c
        return self._like(t)

    def __neg__(self):
        return self._like({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "EForm":
        return self._like({key: c * v for key, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, EForm):
            return self.scale(other)
        out: dict = {}
        for (k1, I1), c1 in self.terms.items():
            for (k2, I2), c2 in other.terms.items():
                if I2:
                    sign, I = wedge_sign(I1, I2)
                    if not sign:
                        continue
                else:
                    sign, I = 1, I1
                k = tuple(a + b for a, b in zip(k1, k2))
                key = (k, I)
                out[key] = out.get(key, 0) + sign * c1 * c2
        return self._like(out)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, EForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def d(self) -> "EForm":
        out: dict = {}
        for (k, I), c in self.terms.items():
            for j in support(k):
                if j in I:
                    continue
                sign, J = wedge_sign((j,), I)
                key = (k, J)
                out[key] = out.get(key, 0) + sign * k[j] * c
        return self._like(out)

    def frobenius(self) -> "EForm":
        p = self.p
        return self._like({(tuple(p * x for x in k), I): c for (k, I), c in self.terms.items()})

    def verschiebung(self) -> "EForm":
        p = self.p
        return self._like({(tuple(x / p for x in k), I): p * c for (k, I), c in self.terms.items()})

    def project(self, pred) -> "EForm":
        return self._like({key: c for key, c in self.terms.items() if pred(key)})

    def min_valuation(self):
        return min((valuation(Fraction(c), self.p) for c in self.terms.values()), default=float("inf"))

    def __repr__(self):
        return f"EForm({len(self.terms)} terms)"


def teichmuller_eform(f: MPoly, prec: int) -> EForm:
    """[f] for f over F_p, as an E-form correct modulo p^prec.

    In the perfect ring F_p[x^(1/p^inf)] the Teichmuller lift satisfies
    [f] = (lift of f^(1/p^M))^(p^M) mod p^(M+1); f^(1/p^M) only rescales
    exponents since the coefficients lie in F_p.
    """
    p = f.p
    if prec <= 0 or f.is_zero():
        return EForm.zero(p, f.nvars)
    M = prec - 1
    g = MPoly(f.terms, f.nvars, p, prec)
    h = g ** (p ** M)
    q = p ** M
    return EForm({(weight_of(e, q), ()): c for e, c in h.terms.items()}, p, f.nvars)
