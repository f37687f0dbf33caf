"""Expression trees over de Rham-Witt generators and their normalisation.

Trees are nested tuples:

    ("int", c) | ("teich", alpha) | ("add", a, b) | ("mul", a, b)
    | ("d", a) | ("V", a) | ("F", a)

``V^u[x^alpha]`` is ``V`` applied u times to a Teichmuller leaf and
``dV^u[x^alpha]`` is ``d`` of that. Two strategies reach the canonical form:

* ``"eager"`` evaluates bottom-up, canonicalising every intermediate node;
* ``"rewrite"`` pushes ``d``, ``F`` and ``V`` down to generators with the
  rules below, collects monomials in generators and evaluates once.

Rules used by the rewriting strategy:

    R1  [x^a][x^b] -> [x^(a+b)]
    R2  V^u[x^a] V^v[x^b] -> p^v V^u[x^(a + p^(u-v) b)]     (u >= v)
    R3  F d[x^a] -> [x^((p-1)a)] d[x^a]
    R4  F dV^(u+1)[x^a] -> dV^u[x^a];  F V^(u+1)[x^a] -> p V^u[x^a]
    R5  V(c * g * dV^u1[..] ... ) -> V(g) dV^(u1+1)[..] ...   (projection formula)
    R6  d d -> 0,  d V^u[x^a] -> dV^u[x^a], Leibniz on products
    R7  wedge antisymmetry, applied when monomials are evaluated
"""
from __future__ import annotations

import random
import re
from fractions import Fraction

from ..errors import NonTerminating, ParseError
from ..mpoly import VAR_NAMES, parse_poly
from .eforms import EForm
from .forms import DrwForm

STEP_BUDGET = 200_000


# -- tree helpers -------------------------------------------------------------


def teich(alpha) -> tuple:
    return ("teich", tuple(alpha))


def V_gen(u: int, alpha) -> tuple:
    t = teich(alpha)
    for _ in range(u):
        t = ("V", t)
    return t


def dV_gen(u: int, alpha) -> tuple:
    return ("d", V_gen(u, alpha))


def tree_size(t) -> int:
    if t[0] in ("int", "teich"):
        return 1
    return 1 + sum(tree_size(c) for c in t[1:])


# -- strategy 1: eager evaluation ---------------------------------------------


def _eval_eager(t, p, N, nv) -> DrwForm:
    kind = t[0]
    if kind == "int":
        return DrwForm.one(p, N, nv).scale(t[1])
    if kind == "teich":
        return DrwForm.from_eform(EForm.monomial(t[1], (), 1, p), N)
    if kind == "add":
        return _eval_eager(t[1], p, N, nv) + _eval_eager(t[2], p, N, nv)
    if kind == "mul":
        return _eval_eager(t[1], p, N, nv) * _eval_eager(t[2], p, N, nv)
    if kind == "d":
        return _eval_eager(t[1], p, N, nv).d()
    if kind == "V":
        return _eval_eager(t[1], p, N, nv).V()
    if kind == "F":
        return _eval_eager(t[1], p, N + 1, nv).F()
    raise ParseError(f"unknown node {kind!r}")


# -- strategy 2: rewriting to generator monomials -------------------------------
#
# A monomial is (coeff, plain, diffs): plain is None or (u, alpha) for
# V^u[x^alpha]; diffs is a tuple of (u, alpha) for dV^u[x^alpha].


class _Rewriter:
    def __init__(self, p: int, nv: int, budget: int):
        self.p, self.nv = p, nv
        self.steps = 0
        self.budget = budget

    def tick(self, n: int = 1):
        self.steps += n
        if self.steps > self.budget:
            raise NonTerminating(f"rewriting exceeded {self.budget} steps")

    def plain_mul(self, a, b):
        """R1/R2 on two plain generators; returns (scalar, plain)."""
        if a is None:
            return 1, b
        if b is None:
            return 1, a
        self.tick()
        (u, x), (v, y) = (a, b) if a[0] >= b[0] else (b, a)
        p = self.p
        return p ** v, (u, tuple(i + p ** (u - v) * j for i, j in zip(x, y)))

    def mono_mul(self, m1, m2):
        c1, g1, d1 = m1
        c2, g2, d2 = m2
        s, g = self.plain_mul(g1, g2)
        return (c1 * c2 * s, g, d1 + d2)

    def expand(self, t) -> list:
        self.tick()
        kind = t[0]
        if kind == "int":
            return [(t[1], None, ())] if t[1] else []
        if kind == "teich":
            return [(1, (0, t[1]), ())]
        if kind == "add":
            return self.expand(t[1]) + self.expand(t[2])
        if kind == "mul":
            left, right = self.expand(t[1]), self.expand(t[2])
            self.tick(len(left) * len(right))
            return [self.mono_mul(a, b) for a in left for b in right]
        if kind == "d":
            return [m for mono in self.expand(t[1]) for m in self.d_mono(mono)]
        if kind == "F":
            return [m for mono in self.expand(t[1]) for m in self.F_mono(mono)]
        if kind == "V":
            return [self.V_mono(mono) for mono in self.expand(t[1])]
        raise ParseError(f"unknown node {kind!r}")

    def d_mono(self, mono) -> list:
        # R6: Leibniz, with d of a plain generator a differential generator
        c, g, diffs = mono
        out = []
        if g is not None:
            out.append((c, None, (g,) + diffs))
        # d of each differential factor is zero
        self.tick()
        return out

    def F_mono(self, mono) -> list:
        c, g, diffs = mono
        p = self.p
        if g is None:
            cur = [(c, None, ())]
        elif g[0] == 0:
            cur = [(c, (0, tuple(p * a for a in g[1])), ())]
        else:
            cur = [(c * p, (g[0] - 1, g[1]), ())]
        for u, alpha in diffs:
            self.tick()
            if u == 0:
                # R3
                factor = (1, (0, tuple((p - 1) * a for a in alpha)), ((0, alpha),))
            else:
                # R4
                factor = (1, None, ((u - 1, alpha),))
            cur = [self.mono_mul(m, factor) for m in cur]
        return cur

    def V_mono(self, mono):
        # R5: V(c g F(w)) = c V(g) w with w the dV's shifted one level up
        c, g, diffs = mono
        self.tick()
        shifted = tuple((u + 1, alpha) for u, alpha in diffs)
        if g is None:
            # V(1) = p
            return (c * self.p, None, shifted)
        return (c, (g[0] + 1, g[1]), shifted)

    def evaluate(self, monos, N: int) -> DrwForm:
        p, nv = self.p, self.nv
        total = EForm.zero(p, nv)
        for c, g, diffs in monos:
            if not c:
                continue
            if g is None:
                e = EForm.one(p, nv).scale(c)
            else:
                u, alpha = g
                e = EForm.monomial([a / p ** u for a in _frac(alpha)], (), c * p ** u, p)
            for u, alpha in diffs:
                k = [a / p ** u for a in _frac(alpha)]
                terms = {(tuple(k), (i,)): alpha[i] for i in range(nv) if alpha[i]}
                e = e * EForm(terms, p, nv)  # R7 signs come from the wedge product
                if e.is_zero():
                    break
            total = total + e
        return DrwForm.from_eform(total, N)


def _frac(alpha):
    return [Fraction(a) for a in alpha]


def drw_normalize(tree, p: int, N: int, nvars: int, strategy: str = "eager", budget: int = STEP_BUDGET) -> DrwForm:
    """Canonical form of an expression tree in W_N Omega."""
    if strategy == "eager":
        return _eval_eager(tree, p, N, nvars)
    if strategy == "rewrite":
        rw = _Rewriter(p, nvars, budget)
        return rw.evaluate(rw.expand(tree), N)
    raise ValueError(f"unknown strategy {strategy!r}")


# -- text syntax -----------------------------------------------------------------

_TOK = re.compile(r"\s*(?:(\d+)|(dV|d|V|F)|(\[[^\]]*\])|([-+*·∧^()]))")


def _lex(text: str) -> list:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse near {text[pos:]!r}")
        num, op, br, sym = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif op is not None:
            out.append(("op", op))
        elif br is not None:
            out.append(("br", br[1:-1]))
        else:
            out.append(("sym", "*" if sym in "·∧" else sym))
        pos = m.end()
    return out


class _ExprParser:
    def __init__(self, toks, nvars):
        self.toks, self.i, self.nvars = toks, 0, nvars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, tok):
        if self.take() != tok:
            raise ParseError(f"expected {tok[1]!r}")

    def expr(self):
        neg = False
        if self.peek() == ("sym", "-"):
            self.take()
            neg = True
        acc = self.term()
        if neg:
            acc = ("mul", ("int", -1), acc)
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            acc = ("add", acc, t if op == "+" else ("mul", ("int", -1), t))
        return acc

    def term(self):
        acc = self.factor()
        while True:
            nxt = self.peek()
            if nxt == ("sym", "*"):
                self.take()
                acc = ("mul", acc, self.factor())
            elif nxt[0] in ("num", "op", "br") or nxt == ("sym", "("):
                acc = ("mul", acc, self.factor())
            else:
                return acc

    def depth_suffix(self) -> int:
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("V exponent must be an integer")
            return val
        return 1

    def monomial(self, text):
        f = parse_poly(text, self.nvars)
        if len(f.terms) != 1 or next(iter(f.terms.values())) != 1:
            raise ParseError(f"[{text}] must hold a single monic monomial")
        return next(iter(f.terms))

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            return ("int", val)
        if kind == "br":
            return teich(self.monomial(val))
        if (kind, val) == ("sym", "("):
            e = self.expr()
            self.expect(("sym", ")"))
            return e
        if kind == "op":
            u = self.depth_suffix() if val in ("V", "dV") else 0
            nxt = self.peek()
            if nxt[0] == "br" and val in ("V", "dV", "d"):
                alpha = self.monomial(self.take()[1])
                g = V_gen(u if val != "d" else 0, alpha)
                return ("d", g) if val in ("d", "dV") else g
            self.expect(("sym", "("))
            inner = self.expr()
            self.expect(("sym", ")"))
            if val == "dV":
                for _ in range(u):
                    inner = ("V", inner)
                return ("d", inner)
            if val == "V":
                for _ in range(u):
                    inner = ("V", inner)
                return inner
            return (val, inner)
        raise ParseError(f"unexpected token {val!r}")


def parse_expression(text: str, nvars: int):
    """Parse e.g. ``"V[x]*dV[x]"``, ``"d([x]*[x])"`` or ``"F(dV^2[x*y])"``."""
    toks = _lex(text)
    if not toks:
        raise ParseError("empty expression")
    parser = _ExprParser(toks, nvars)
    t = parser.expr()
    if parser.i != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return t


def tree_to_text(t, nvars: int) -> str:
    names = VAR_NAMES if nvars <= 3 else [f"v{i}" for i in range(nvars)]
    kind = t[0]
    if kind == "int":
        return str(t[1])
    if kind == "teich":
        mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(t[1]) if e)
        return f"[{mono or 1}]"
    if kind == "add":
        return f"({tree_to_text(t[1], nvars)} + {tree_to_text(t[2], nvars)})"
    if kind == "mul":
        return f"{tree_to_text(t[1], nvars)}*{tree_to_text(t[2], nvars)}"
    return f"{kind}({tree_to_text(t[1], nvars)})"


# -- random trees for confluence checks ------------------------------------------------


def random_tree(rng: random.Random, nvars: int, size: int = 12, max_exp: int = 3):
    """A random tree with at most ``size`` nodes."""

    def leaf():
        if rng.random() < 0.2:
            return ("int", rng.randint(1, 5))
        alpha = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        if not any(alpha):
            alpha = (1,) + alpha[1:]
        return teich(alpha)

    def build(budget):
        if budget <= 1:
            return leaf()
        r = rng.random()
        if r < 0.3:
            split = rng.randint(1, budget - 2) if budget > 2 else 1
            return (rng.choice(["add", "mul"]), build(split), build(max(1, budget - 1 - split)))
        if r < 0.55:
            return ("d", build(budget - 1))
        if r < 0.8:
            return ("V", build(budget - 1))
        if r < 0.95:
            return ("F", build(budget - 1))
        return leaf()

    return build(rng.randint(1, size))
