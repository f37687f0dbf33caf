"""Dagger algebras W(k)<x_1..x_d>^dagger at finite precision p^N.

An element is stored as one polynomial over Z/p^N; its layers
``a = sum_k p^k f_k`` come from the base-p digits of the coefficients.
Kahler forms, Frobenius lifts and connections on free modules live here too.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .drw.eforms import wedge_sign
from .errors import InvalidFrobeniusLift, NotIntegrable, ParseError, RankMismatch, RingMismatch
from .mpoly import VAR_NAMES, MPoly, parse_poly, substitute


class DaggerSeries:
    __slots__ = ("poly",)

    def __init__(self, poly: MPoly):
        if poly.prec is None:
            raise RingMismatch("dagger series need a finite precision")
        self.poly = poly

    @classmethod
    def from_layers(cls, layers: dict, p: int, N: int, nvars: int) -> "DaggerSeries":
        acc = MPoly.zero(nvars, p, N)
        for k, f in layers.items():
            if int(k) < N:
                acc = acc + MPoly(f.terms, nvars, p, N).scale(p ** int(k))
        return cls(acc)

    @classmethod
    def parse(cls, text: str, p: int, N: int, nvars: int) -> "DaggerSeries":
        return cls(parse_poly(text, nvars, p, N))

    @classmethod
    def const(cls, c: int, p: int, N: int, nvars: int) -> "DaggerSeries":
        return cls(MPoly.const(c, nvars, p, N))

    @property
    def p(self):
        return self.poly.p

    @property
    def N(self):
        return self.poly.prec

    @property
    def nvars(self):
        return self.poly.nvars

    def layers(self) -> dict:
        """{k: f_k} with f_k over F_p, empty layers omitted."""
        p = self.p
        out: dict = {}
        for e, c in self.poly.terms.items():
            k = 0
            while c:
                c, r = divmod(c, p)
                if r:
                    out.setdefault(k, {})[e] = r
                k += 1
        return {k: MPoly(t, self.nvars, p, 1) for k, t in sorted(out.items())}

    def layer_degrees(self) -> dict:
        return {k: f.total_degree() for k, f in self.layers().items()}

    def certificate(self) -> "GrowthCertificate":
        """Smallest C with n_k <= C(k+1) on the stored layers."""
        degs = self.layer_degrees()
        return GrowthCertificate(max((Fraction(n, k + 1) for k, n in degs.items()), default=Fraction(0)))

    def __add__(self, other):
        return DaggerSeries(self.poly + _coerce(other, self).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return DaggerSeries(self.poly - _coerce(other, self).poly)

    def __neg__(self):
        return DaggerSeries(-self.poly)

    def __mul__(self, other):
        if isinstance(other, int):
            return DaggerSeries(self.poly.scale(other))
        return DaggerSeries(self.poly * other.poly)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DaggerSeries):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self):
        return self.poly.is_zero()

    def derivative(self, i: int) -> "DaggerSeries":
        return DaggerSeries(self.poly.derivative(i))

    def to_text(self) -> str:
        return self.poly.to_text()

    def __repr__(self):
        return f"DaggerSeries({self.poly.to_text(with_modulus=True)!r})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "layers": {str(k): f.to_text() for k, f in self.layers().items()},
        }

    @classmethod
    def from_json(cls, data: dict, nvars: int) -> "DaggerSeries":
        p, N = data["p"], data["N"]
        layers = {int(k): parse_poly(v, nvars, p, 1) for k, v in data["layers"].items()}
        return cls.from_layers(layers, p, N, nvars)


def _coerce(x, like: DaggerSeries) -> DaggerSeries:
    if isinstance(x, int):
        return DaggerSeries.const(x, like.p, like.N, like.nvars)
    return x


def dagger_arith(a: DaggerSeries, b: DaggerSeries, op: str) -> DaggerSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class GrowthCertificate:
    C: Fraction

    def to_json(self):
        return {"C": str(self.C)}


def check_overconvergent(a: DaggerSeries, C) -> bool:
    C = Fraction(C)
    return all(n <= C * (k + 1) for k, n in a.layer_degrees().items())


# -- Frobenius lifts --------------------------------------------------------------


class FrobeniusLift:
    """x_i -> F(x_i) with F(x_i) = x_i^p mod p, checked here."""

    def __init__(self, images):
        images = [im if isinstance(im, DaggerSeries) else DaggerSeries(im) for im in images]
        if not images:
            raise InvalidFrobeniusLift("no images")
        self.images = tuple(images)
        p, nv = images[0].p, images[0].nvars
        if len(images) != nv:
            raise InvalidFrobeniusLift(f"{len(images)} images for {nv} variables")
        for i, im in enumerate(images):
            red = MPoly(im.poly.terms, nv, p, 1)
            if red != MPoly.var(i, nv, p, 1) ** p:
                raise InvalidFrobeniusLift(f"F({VAR_NAMES[i]}) = {im.to_text()} is not {VAR_NAMES[i]}^{p} mod {p}")

    @classmethod
    def parse(cls, texts, p: int, N: int) -> "FrobeniusLift":
        nv = len(texts)
        return cls([DaggerSeries.parse(t, p, N, nv) for t in texts])

    @classmethod
    def coordinate(cls, p: int, N: int, nvars: int) -> "FrobeniusLift":
        return cls([DaggerSeries(MPoly.var(i, nvars, p, N) ** p) for i in range(nvars)])

    @property
    def p(self):
        return self.images[0].p

    @property
    def N(self):
        return self.images[0].N

    @property
    def nvars(self):
        return self.images[0].nvars

    def is_coordinate(self) -> bool:
        return all(im.poly == MPoly.var(i, self.nvars, self.p, self.N) ** self.p for i, im in enumerate(self.images))

    def at_precision(self, prec: int) -> "FrobeniusLift":
        return FrobeniusLift([DaggerSeries(im.poly.with_precision(prec)) for im in self.images])

    def to_json(self):
        return {"images": [im.to_text() for im in self.images]}


def frobenius_apply(F: FrobeniusLift, a: DaggerSeries) -> DaggerSeries:
    imgs = [MPoly(im.poly.terms, a.nvars, a.p, a.N) for im in F.images]
    return DaggerSeries(substitute(a.poly, imgs))


# -- Kahler forms -------------------------------------------------------------------


class MwForm:
    """sum_S f_S dx_S over sorted index tuples S of one fixed length q."""

    __slots__ = ("q", "coeffs", "p", "N", "nvars")

    def __init__(self, q: int, coeffs: dict, p: int, N: int, nvars: int):
        self.q, self.p, self.N, self.nvars = q, p, N, nvars
        clean = {}
        for S, f in coeffs.items():
            f = f.poly if isinstance(f, DaggerSeries) else f
            if len(S) != q:
                raise ValueError(f"index {S} in a {q}-form")
            if not f.is_zero():
                clean[tuple(S)] = MPoly(f.terms, nvars, p, N)
        self.coeffs = clean

    @classmethod
    def zero(cls, q, p, N, nvars):
        return cls(q, {}, p, N, nvars)

    @classmethod
    def function(cls, f) -> "MwForm":
        f = f.poly if isinstance(f, DaggerSeries) else f
        return cls(0, {(): f}, f.p, f.prec, f.nvars)

    @classmethod
    def dx(cls, i: int, p, N, nvars) -> "MwForm":
        return cls(1, {(i,): MPoly.const(1, nvars, p, N)}, p, N, nvars)

    def _like(self, q, coeffs):
        return MwForm(q, coeffs, self.p, self.N, self.nvars)

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, S) -> MPoly:
        return self.coeffs.get(tuple(S), MPoly.zero(self.nvars, self.p, self.N))

    def __add__(self, other: "MwForm") -> "MwForm":
        if other.q != self.q:
            raise ValueError("adding forms of different degree")
        t = dict(self.coeffs)
        for S, f in other.coeffs.items():
            t[S] = t[S] + f if S in t else f
        return self._like(self.q, t)

    def __neg__(self):
        return self._like(self.q, {S: -f for S, f in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, g) -> "MwForm":
        """Multiply by a function (MPoly, DaggerSeries or int)."""
        if isinstance(g, DaggerSeries):
            g = g.poly
        if isinstance(g, int):
            return self._like(self.q, {S: f.scale(g) for S, f in self.coeffs.items()})
        return self._like(self.q, {S: f * g for S, f in self.coeffs.items()})

    def wedge(self, other: "MwForm") -> "MwForm":
        out: dict = {}
        for S, f in self.coeffs.items():
            for T, g in other.coeffs.items():
                sign, U = wedge_sign(S, T)
                if not sign:
                    continue
                term = (f * g).scale(sign)
                out[U] = out[U] + term if U in out else term
        return self._like(self.q + other.q, out)

    def __eq__(self, other):
        if not isinstance(other, MwForm):
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, frozenset(self.coeffs.items())))

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        names = VAR_NAMES if self.nvars <= 3 else [f"v{i}" for i in range(self.nvars)]
        parts = []
        for S in sorted(self.coeffs):
            dx = "^".join(f"d{names[i]}" for i in S)
            f = self.coeffs[S].to_text()
            parts.append(f"({f}) {dx}".strip() if S else f"({f})")
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"MwForm({self.to_text()!r})"

    def to_json(self) -> dict:
        return {"degree": self.q, "coeffs": {",".join(map(str, S)): f.to_text() for S, f in sorted(self.coeffs.items())}}


def mw_d(w: MwForm) -> MwForm:
    out: dict = {}
    for S, f in w.coeffs.items():
        for i in range(w.nvars):
            if i in S:
                continue
            df = f.derivative(i)
            if df.is_zero():
                continue
            sign, U = wedge_sign((i,), S)
            term = df.scale(sign)
            out[U] = out[U] + term if U in out else term
    return w._like(w.q + 1, out)


_DIFF_TAIL = re.compile(r"^(.*?)\s*((?:d[xyz])(?:\s*[\^∧]\s*d[xyz])*)\s*$")


def _split_top(text: str) -> list:
    """Split at top-level + and - signs, keeping the sign with each chunk."""
    chunks, depth, cur = [], 0, ""
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and text[i - 1] not in "^*":
            chunks.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        chunks.append(cur)
    return chunks


def parse_form(text: str, p: int, N: int, nvars: int) -> MwForm:
    """Parse e.g. ``"3*x^2 dx"``, ``"x dy + y dx"`` or ``"(x+1) dx^dy"``."""
    text = text.strip()
    if text == "0":
        return MwForm.zero(1, p, N, nvars)
    pieces = {}
    q = None
    for chunk in _split_top(text):
        chunk = chunk.strip()
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:].strip()
        m = _DIFF_TAIL.match(chunk)
        if m:
            coef, tail = m.group(1).strip().rstrip("*").strip(), m.group(2)
            idx = [VAR_NAMES.index(v) for v in re.findall(r"d([xyz])", tail)]
        else:
            coef, idx = chunk, []
        if any(i >= nvars for i in idx):
            raise ParseError(f"differential outside {nvars} variables in {text!r}")
        if len(set(idx)) != len(idx):
            continue
        f = parse_poly(coef, nvars, p, N) if coef else MPoly.const(1, nvars, p, N)
        s, S = 1, ()
        for i in idx:
            s2, S = wedge_sign(S, (i,))
            s *= s2
        if q is None:
            q = len(S)
        elif q != len(S):
            raise ParseError(f"mixed degrees in {text!r}")
        term = f.scale(sign * s)
        pieces[S] = pieces[S] + term if S in pieces else term
    return MwForm(q or 0, pieces, p, N, nvars)


# -- connections ---------------------------------------------------------------------


class MwConnection:
    """nabla(e_j) = sum_i M[i][j] e_i, i.e. (nabla s)_i = d s_i + sum_j M[i][j] s_j."""

    def __init__(self, matrix):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.rank = len(self.matrix)
        if any(len(row) != self.rank for row in self.matrix):
            raise RankMismatch("connection matrix is not square")
        first = self.matrix[0][0]
        self.p, self.N, self.nvars = first.p, first.N, first.nvars
        for row in self.matrix:
            for w in row:
                if w.q != 1:
                    raise ValueError("connection entries must be 1-forms")

    @classmethod
    def trivial(cls, rank, p, N, nvars):
        return cls([[MwForm.zero(1, p, N, nvars) for _ in range(rank)] for _ in range(rank)])

    @classmethod
    def parse(cls, entries, p: int, N: int, nvars: int) -> "MwConnection":
        """``entries`` is a string (rank 1) or a list of lists of strings."""
        if isinstance(entries, str):
            entries = [[entries]]
        return cls([[parse_form(t, p, N, nvars) for t in row] for row in entries])

    def entry(self, i, j) -> MwForm:
        return self.matrix[i][j]

    def max_entry_degree(self) -> int:
        return max((f.total_degree() + 1 for row in self.matrix for w in row for f in w.coeffs.values()), default=0)

    def to_json(self):
        return {"rank": self.rank, "matrix": [[w.to_text() for w in row] for row in self.matrix]}


def connection_apply(M: MwConnection, s) -> list:
    """nabla applied to a section given by r functions; returns r one-forms."""
    if len(s) != M.rank:
        raise RankMismatch(f"section of length {len(s)} for rank {M.rank}")
    s = [MwForm.function(x) for x in s]
    return [connection_apply_form(M, s)[i] for i in range(M.rank)]


def connection_apply_form(M: MwConnection, s: list) -> list:
    """nabla on a vector of q-forms: (nabla s)_i = d s_i + sum_j M_ij ^ s_j."""
    if len(s) != M.rank:
        raise RankMismatch(f"section of length {len(s)} for rank {M.rank}")
    out = []
    for i in range(M.rank):
        acc = mw_d(s[i])
        for j in range(M.rank):
            acc = acc + M.matrix[i][j].wedge(s[j])
        out.append(acc)
    return out


def curvature(M: MwConnection) -> list:
    """dM + M ^ M entrywise."""
    r = M.rank
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = mw_d(M.matrix[i][j])
            for k in range(r):
                acc = acc + M.matrix[i][k].wedge(M.matrix[k][j])
            row.append(acc)
        out.append(row)
    return out


def is_integrable(M: MwConnection) -> bool:
    return all(w.is_zero() for row in curvature(M) for w in row)


def require_integrable(M: MwConnection):
    if not is_integrable(M):
        raise NotIntegrable("connection has nonzero curvature")


def monomial_forms(p: int, N: int, nvars: int, max_deg: int, q: int) -> list:
    """All x^a dx_S with |a| <= max_deg and |S| = q, in a fixed order."""
    out = []
    for S in combinations(range(nvars), q):
        for a in product(range(max_deg + 1), repeat=nvars):
            if sum(a) <= max_deg:
                out.append(MwForm(q, {S: MPoly.monomial(a, 1, p, N)}, p, N, nvars))
    return out
