"""Sparse multivariate polynomials over Z, Z/p^m and F_p.

Terms are stored as ``{exponent tuple: int}`` with coefficients reduced to
``[0, p^m)``. Over Z (``prec=None``) coefficients are exact integers.
"""
from __future__ import annotations

import re
from functools import reduce

from .errors import ParseError, PrecisionExhausted, RingMismatch
from .kernels import mul_terms

VAR_NAMES = ("x", "y", "z")


def grlex_key(e: tuple) -> tuple:
    """Sort key putting terms in descending graded-lex order."""
    return (-sum(e), tuple(-x for x in e))


class MPoly:
    __slots__ = ("nvars", "p", "prec", "terms", "_hash")

    def __init__(self, terms: dict, nvars: int, p: int | None = None, prec: int | None = None):
        self.nvars = nvars
        self.p = p
        self.prec = prec
        m = self.modulus
        if m is None:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            t = {}
            for e, c in terms.items():
                c %= m
                if c:
                    t[e] = c
            self.terms = t
        self._hash = None

    # -- construction -------------------------------------------------
    @property
    def modulus(self) -> int | None:
        if self.prec is None:
            return None
        return self.p ** self.prec

    @classmethod
    def zero(cls, nvars, p=None, prec=None):
        return cls({}, nvars, p, prec)

    @classmethod
    def const(cls, c: int, nvars, p=None, prec=None):
        return cls({(0,) * nvars: c}, nvars, p, prec)

    @classmethod
    def var(cls, i: int, nvars, p=None, prec=None):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, p, prec)

    @classmethod
    def monomial(cls, exps, c=1, p=None, prec=None):
        return cls({tuple(exps): c}, len(exps), p, prec)

    def _like(self, terms: dict) -> "MPoly":
        return MPoly(terms, self.nvars, self.p, self.prec)

    @property
    def ring(self) -> tuple:
        return (self.nvars, self.p, self.prec)

    def with_precision(self, prec: int | None, p: int | None = None) -> "MPoly":
        """Reinterpret coefficients (their current representatives) at ``prec``."""
        return MPoly(self.terms, self.nvars, p if p is not None else self.p, prec)

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def exceeds(self, D: int) -> bool:
        return self.total_degree() > D

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "MPoly"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, int):
            return MPoly.const(other, self.nvars, self.p, self.prec)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return self._like(mul_terms(self.terms, other.terms, self.modulus))

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c: int) -> "MPoly":
        return self._like({e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power")
        if self.prec == 1 and n >= self.p:
            # over F_p the p-th power is the coefficientwise exponent scaling
            q, r = divmod(n, self.p)
            frob = self._like({tuple(self.p * x for x in e): c for e, c in self.terms.items()})
            return (frob ** q) * (self ** r) if r else frob ** q
        result = MPoly.const(1, self.nvars, self.p, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, i: int) -> "MPoly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return self._like(t)

    def truncate_degree(self, D: int) -> "MPoly":
        return self._like({e: c for e, c in self.terms.items() if sum(e) <= D})

    def map_coefficients(self, fn) -> "MPoly":
        return self._like({e: fn(c) for e, c in self.terms.items()})

    def __repr__(self):
        return f"MPoly({self.to_text(with_modulus=True)!r})"

    def to_text(self, with_modulus: bool = False) -> str:
        if not self.terms:
            s = "0"
        else:
            names = VAR_NAMES if self.nvars <= len(VAR_NAMES) else [f"v{i}" for i in range(self.nvars)]
            s = ""
            for e, c in self.sorted_terms():
                mono = "*".join(names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
                a = abs(c)
                body = str(a) if not mono else mono if a == 1 else f"{a}*{mono}"
                if not s:
                    s = body if c > 0 else "-" + body
                else:
                    s += (" + " if c > 0 else " - ") + body
        if with_modulus and self.prec is not None:
            s += f" (mod {self.p}^{self.prec})"
        return s

    __str__ = to_text


def poly_arith(f: MPoly, g, op: str) -> MPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


def substitute(f: MPoly, images: list) -> MPoly:
    """Evaluate ``f`` at ``images`` (one polynomial per variable)."""
    if len(images) != f.nvars:
        raise RingMismatch(f"expected {f.nvars} images, got {len(images)}")
    if not images:
        return f
    target = images[0]
    for g in images:
        if g.ring != target.ring:
            raise RingMismatch("images live in different rings")
    if (target.p, target.prec) != (f.p, f.prec) and f.prec is not None:
        raise RingMismatch("coefficient ring of images differs from f")
    powers: list[dict] = [{} for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = images[i] ** k
        return cache[k]

    out = MPoly.zero(target.nvars, target.p, target.prec)
    for e, c in f.terms.items():
        term = MPoly.const(c, target.nvars, target.p, target.prec)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def reduce_mod_p(f: MPoly) -> MPoly:
    if f.prec is not None and f.prec < 1:
        raise PrecisionExhausted("coefficients carry no information mod p")
    return MPoly(f.terms, f.nvars, f.p, 1)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xyz])|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse polynomial near {text[pos:]!r}")
        num, var, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif var is not None:
            out.append(("var", VAR_NAMES.index(var)))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _PolyParser:
    def __init__(self, tokens, nvars):
        self.toks = tokens
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self) -> MPoly:
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MPoly:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                acc = acc * self.power()
            elif kind in ("num", "var") or (kind, val) == ("op", "("):
                acc = acc * self.power()  # implicit multiplication, e.g. 3x
            else:
                return acc

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if (kind, val) == ("op", "("):
                kind, val = self.take()
                if self.take() != ("op", ")"):
                    raise ParseError("unbalanced exponent parentheses")
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer")
            base = base ** val
        return base

    def atom(self) -> MPoly:
        kind, val = self.take()
        if kind == "num":
            return MPoly.const(val, self.nvars)
        if kind == "var":
            if val >= self.nvars:
                raise ParseError(f"variable {VAR_NAMES[val]} outside {self.nvars} variables")
            return MPoly.var(val, self.nvars)
        if (kind, val) == ("op", "("):
            e = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("unbalanced parentheses")
            return e
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, nvars: int, p: int | None = None, prec: int | None = None) -> MPoly:
    """Parse e.g. ``"x^3 + 3x"`` or ``"2*x^2*y + 1"``."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    parser = _PolyParser(toks, nvars)
    f = parser.expr()
    if parser.i != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return MPoly(f.terms, nvars, p, prec)


def sum_polys(polys, nvars, p=None, prec=None) -> MPoly:
    return reduce(lambda a, b: a + b, polys, MPoly.zero(nvars, p, prec))
