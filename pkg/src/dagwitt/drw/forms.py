"""Elements of the truncated de Rham-Witt complex W_N Omega of F_p[x_1..x_d].

A :class:`DrwForm` is stored in basic-differential coordinates: a map from
``(weight, partition)`` to an integer modulo ``p^(N - u(weight))``. Products,
``d``, ``V`` and ``F`` go through the rational weight model in
:mod:`dagwitt.drw.eforms` and come back by :func:`DrwForm.from_eform`.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from ..errors import NotDivisible, RingMismatch
from ..mpoly import MPoly
from ..witt import WittVector, scalar_multiple, teichmuller
from .basic import render_basic, weight_basis
from .eforms import EForm, Weight, depth, teichmuller_eform


def _reduce(c: Fraction, p: int, m: int) -> int:
    num, den = (c.numerator, c.denominator) if isinstance(c, Fraction) else (c, 1)
    if den % p == 0:
        raise NotDivisible(f"coefficient {c} is not p-integral")
    return num * pow(den, -1, m) % m if den != 1 else num % m


class DrwForm:
    """A (possibly mixed-degree) element of W_N Omega in canonical coordinates."""

    __slots__ = ("p", "N", "nvars", "terms", "_hash")

    def __init__(self, terms: dict, p: int, N: int, nvars: int):
        self.p, self.N, self.nvars = p, N, nvars
        clean = {}
        for (k, P), c in terms.items():
            u = depth(k, p)
            if u >= N:
                continue
            c %= p ** (N - u)
            if c:
                clean[(k, P)] = c
        self.terms = clean
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, p, N, nvars):
        return cls({}, p, N, nvars)

    @classmethod
    def one(cls, p, N, nvars):
        return cls({((Fraction(0),) * nvars, ((),)): 1}, p, N, nvars)

    @classmethod
    def from_eform(cls, e: EForm, N: int) -> "DrwForm":
        """Canonical coordinates of an E-form; raises NotDivisible off the lattice."""
        p = e.p
        groups: dict = defaultdict(dict)
        for (k, I), c in e.terms.items():
            groups[(k, len(I))][I] = c
        out = {}
        for (k, q), vec in groups.items():
            u = depth(k, p)
            if u >= N:
                continue
            wb = weight_basis(p, k, q)
            if any(I not in wb.sets for I in vec):
                raise NotDivisible(f"dlog index outside the support of weight {k}")
            m = p ** (N - u)
            for P, y in zip(wb.parts, wb.to_basic(vec)):
                if y:
                    r = _reduce(y, p, m)
                    if r:
                        out[(k, P)] = r
        return cls(out, p, N, e.nvars)

    def to_eform(self) -> EForm:
        out: dict = {}
        for (k, P), c in self.terms.items():
            wb = weight_basis(self.p, k, len(P) - 1)
            for I, v in wb.from_basic([c if Q == P else 0 for Q in wb.parts]).items():
                key = (k, I)
                out[key] = out.get(key, 0) + v
        return EForm(out, self.p, self.nvars)

    def _like(self, terms, N=None) -> "DrwForm":
        return DrwForm(terms, self.p, self.N if N is None else N, self.nvars)

    def _check(self, other: "DrwForm"):
        if (self.p, self.N, self.nvars) != (other.p, other.N, other.nvars):
            raise RingMismatch(f"W_{self.N} vs W_{other.N} forms")

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(P) - 1 for (_, P) in self.terms}

    def degree_part(self, q: int) -> "DrwForm":
        return self._like({key: c for key, c in self.terms.items() if len(key[1]) - 1 == q})

    def weights(self) -> set:
        return {k for (k, _) in self.terms}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: (len(t[0][1]), t[0][0], t[0][1]))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "DrwForm") -> "DrwForm":
        self._check(other)
        t = dict(self.terms)
        for key, c in other.terms.items():
            t[key] = t.get(key, 0) + c
        return self._like(t)

    def __neg__(self):
        return self._like({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "DrwForm":
        return self._like({key: c * v for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return DrwForm.from_eform(self.to_eform() * other.to_eform(), self.N)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, DrwForm):
            return NotImplemented
        return (self.p, self.N, self.nvars) == (other.p, other.N, other.nvars) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.N, frozenset(self.terms.items())))
        return self._hash

    def d(self) -> "DrwForm":
        return DrwForm.from_eform(self.to_eform().d(), self.N)

    def V(self) -> "DrwForm":
        """Verschiebung, composed with restriction back to length N."""
        return DrwForm.from_eform(self.to_eform().verschiebung(), self.N)

    def F(self) -> "DrwForm":
        """Frobenius W_N Omega -> W_{N-1} Omega."""
        return DrwForm.from_eform(self.to_eform().frobenius(), self.N - 1)

    def restrict(self, M: int) -> "DrwForm":
        """Image under W_N -> W_M for M <= N."""
        return self._like(self.terms, N=M)

    # -- presentation -------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{render_basic(k, P, self.p)}" for (k, P), c in self.sorted_terms())

    __str__ = to_text

    def __repr__(self):
        return f"DrwForm({self.to_text()!r}, N={self.N})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "terms": [
                {
                    "coeff": c,
                    "degree": len(P) - 1,
                    "term": render_basic(k, P, self.p),
                    "weight": [str(x) for x in k],
                    "valid_mod": f"{self.p}^{self.N - depth(k, self.p)}",
                }
                for (k, P), c in self.sorted_terms()
            ],
        }


def is_integral_weight(k: Weight) -> bool:
    return all(x.denominator == 1 for x in k)


def split_integral_fractional(w: DrwForm) -> tuple:
    integral = {key: c for key, c in w.terms.items() if is_integral_weight(key[0])}
    frac = {key: c for key, c in w.terms.items() if not is_integral_weight(key[0])}
    return w._like(integral), w._like(frac)


def drw_d(w: DrwForm) -> DrwForm:
    return w.d()


def drw_V(w: DrwForm) -> DrwForm:
    return w.V()


def drw_F(w: DrwForm) -> DrwForm:
    return w.F()


# -- Witt vectors as degree-0 forms ---------------------------------------------


def witt_to_eform(a: WittVector, prec: int | None = None) -> EForm:
    """sum_n V^n [a_n] in the weight model, correct modulo Fil^prec."""
    prec = a.N if prec is None else prec
    out = EForm.zero(a.p, a.nvars)
    for n, c in enumerate(a.components[:prec]):
        if c.is_zero():
            continue
        e = teichmuller_eform(c, prec - n)
        for _ in range(n):
            e = e.verschiebung()
        out = out + e
    return out


def witt_to_drw(a: WittVector) -> DrwForm:
    return DrwForm.from_eform(witt_to_eform(a), a.N)


def teichmuller_form(f: MPoly, N: int) -> DrwForm:
    return DrwForm.from_eform(teichmuller_eform(f, N), N)


def drw_to_witt(w: DrwForm) -> WittVector:
    """Inverse of :func:`witt_to_drw` on degree-0 forms, via Witt-ring arithmetic."""
    p, N, nv = w.p, w.N, w.nvars
    total = WittVector.zero(p, N, nv)
    for (k, P), c in w.sorted_terms():
        if len(P) != 1:
            raise ValueError("only degree-0 forms correspond to Witt vectors")
        u = depth(k, p)
        alpha = tuple(int(x * p ** u) for x in k)
        t = scalar_multiple(c, teichmuller(MPoly.monomial(alpha, 1, p, 1), N - u))
        zero = MPoly.zero(nv, p, 1)
        total = total + WittVector([zero] * u + list(t.components), p, nv)
    return total
