"""Basic Witt differentials: canonical coordinates on each weight space.

For a weight k with support ordered by increasing p-adic order of k_i (ties
by variable index), a degree-q basic differential is indexed by a partition
(I_0, I_1, ..., I_q) of the support into consecutive intervals, I_0 possibly
empty and the others not:

    V^{u(I_0)}[x^{p^u k_{I_0}}] * e(I_1) * ... * e(I_q)

where a block I with t = ord_p(k_I) contributes e(I) = dV^{-t}[x^{p^-t k_I}]
when t < 0 and e(I) = F^t d[x^{k_I / p^t}] = [x^{(p^t - 1) k_I / p^t}] d[x^{k_I / p^t}]
when t >= 0. In W_N the weight-k part of degree q is free over
Z/p^(N - u(k)) on these elements, and zero once u(k) >= N.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from ..base_arith import valuation
from ..mpoly import VAR_NAMES
from .eforms import EForm, Weight, depth, support, wedge_sign


def ordered_support(k: Weight, p: int) -> tuple:
    return tuple(sorted(support(k), key=lambda i: (valuation(k[i], p), i)))


def partitions(k: Weight, p: int, q: int) -> list:
    """All (I_0, ..., I_q) for weight k and degree q, in canonical order."""
    order = ordered_support(k, p)
    s = len(order)
    if q == 0:
        return [(tuple(sorted(order)),)]
    if q > s:
        return []
    out = []
    # t = |I_0|, then cut the remaining s - t elements into q nonempty runs
    for t in range(s - q + 1):
        rest = order[t:]
        for cuts in combinations(range(1, len(rest)), q - 1):
            bounds = (0,) + cuts + (len(rest),)
            blocks = [tuple(sorted(rest[a:b])) for a, b in zip(bounds, bounds[1:])]
            out.append((tuple(sorted(order[:t])),) + tuple(blocks))
    return out


def _restrict(k: Weight, block: tuple) -> Weight:
    return tuple(x if i in block else Fraction(0) for i, x in enumerate(k))


def basic_eform(k: Weight, P: tuple, p: int) -> EForm:
    """The basic differential (k, P) as an E-form with integer coefficients."""
    nv = len(k)
    I0, rest = P[0], P[1:]
    if I0:
        k0 = _restrict(k, I0)
        out = EForm({(k0, ()): p ** depth(k0, p)}, p, nv)
    else:
        out = EForm.one(p, nv)
    for block in rest:
        kb = _restrict(k, block)
        scale = Fraction(p) ** -block_order(kb, p)
        dv = EForm({(kb, (i,)): int(scale * kb[i]) for i in block}, p, nv)
        out = out * dv
    return out


def block_order(kb: Weight, p: int) -> int:
    return min(valuation(x, p) for x in kb if x)


def index_sets(k: Weight, q: int) -> list:
    return list(combinations(support(k), q))


def _fraction_inverse(M: list) -> list:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


class WeightBasis:
    """Basis data for one (p, k, q): basic elements and coordinate change."""

    __slots__ = ("p", "k", "q", "u", "parts", "sets", "matrix", "inverse")

    def __init__(self, p: int, k: Weight, q: int):
        self.p, self.k, self.q = p, k, q
        self.u = depth(k, p)
        self.parts = partitions(k, p, q)
        self.sets = index_sets(k, q)
        pos = {I: r for r, I in enumerate(self.sets)}
        n = len(self.sets)
        M = [[0] * n for _ in range(n)]
        for col, P in enumerate(self.parts):
            for (kk, I), c in basic_eform(k, P, p).terms.items():
                M[pos[I]][col] += c
        self.matrix = M
        self.inverse = _fraction_inverse(M) if n else []

    def to_basic(self, vec: dict) -> list:
        """Coordinates (Fractions) of ``{I: coeff}`` in the basic basis."""
        out = []
        for row in self.inverse:
            s = Fraction(0)
            for r, I in enumerate(self.sets):
                c = vec.get(I)
                if c:
                    s += row[r] * c
            out.append(s)
        return out

    def from_basic(self, coords: list) -> dict:
        vec: dict = {}
        for col, c in enumerate(coords):
            if not c:
                continue
            for r, I in enumerate(self.sets):
                m = self.matrix[r][col]
                if m:
                    vec[I] = vec.get(I, 0) + m * c
        return vec


@lru_cache(maxsize=200_000)
def weight_basis(p: int, k: Weight, q: int) -> WeightBasis:
    return WeightBasis(p, k, q)


def _mono_text(k_block, scale, p: int) -> str:
    names = VAR_NAMES if len(k_block) <= 3 else [f"v{i}" for i in range(len(k_block))]
    parts = []
    for i, x in enumerate(k_block):
        e = int(x * scale)
        if e == 1:
            parts.append(names[i])
        elif e:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts) or "1"


def render_basic(k: Weight, P: tuple, p: int) -> str:
    """Text such as ``V^1[x^2]·d[y]``, ``dV^1[x^2]`` or ``[x^2]·d[x]``."""
    I0, rest = P[0], P[1:]
    teich = [Fraction(0)] * len(k)
    diffs = []
    for block in rest:
        kb = _restrict(k, block)
        t = block_order(kb, p)
        if t < 0:
            diffs.append(f"dV^{-t}[{_mono_text(kb, Fraction(p) ** -t, p)}]")
            continue
        base = [x / p ** t for x in kb]
        teich = [a + b * (p ** t - 1) for a, b in zip(teich, base)]
        diffs.append(f"d[{_mono_text(base, 1, p)}]")
    factors = []
    u0 = depth(_restrict(k, I0), p) if I0 else 0
    if u0:
        factors.append(f"V^{u0}[{_mono_text(_restrict(k, I0), p ** u0, p)}]")
    elif I0:
        teich = [a + b for a, b in zip(teich, _restrict(k, I0))]
    if any(teich):
        factors.append(f"[{_mono_text(teich, 1, p)}]")
    return "·".join(factors + diffs) or "1"


def sign_of_merge(I: tuple, J: tuple) -> int:
    return wedge_sign(I, J)[0]
