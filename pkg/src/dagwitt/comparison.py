"""The comparison map t_F from a Frobenius lift, and pushforward of connections.

t_F on functions solves the ghost equations

    sum_{i<=n} p^i a_i^(p^(n-i)) = F^n(b)

over Z/p^(N + reserve). On forms it is the unique dga map with
x_i -> t_F(x_i); we evaluate it through cached powers of t_F(x_i) in the
de Rham-Witt complex, which is both faster and independent of the ghost route.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .dagger import (
    DaggerSeries,
    FrobeniusLift,
    MwConnection,
    MwForm,
    connection_apply,
    frobenius_apply,
    is_integrable,
    mw_d,
)
from .drw.connection import DrwConnection, drw_connection_apply, drw_curvature
from .drw.forms import DrwForm, split_integral_fractional, witt_to_drw
from .errors import NotDivisible, NotIntegrable, PrecisionExhausted, RankMismatch
from .mpoly import MPoly, substitute
from .witt import WittVector, ghost_poly


def _solve_components(targets: list, p: int, R: int) -> list:
    """a_n mod p from ghost targets over Z/p^R; raises NotDivisible off-lattice."""
    nv = targets[0].nvars
    sols = []
    for n, t in enumerate(targets):
        acc = MPoly(t.terms, nv, p, R)
        for i, s in enumerate(sols):
            # p^i s_i^(p^(n-i)) only depends on s_i mod p^(R-i)
            acc = acc - (s.with_precision(R) ** (p ** (n - i))).scale(p ** i)
        q = p ** n
        div = {}
        for e, c in acc.terms.items():
            if c % q:
                raise NotDivisible(f"ghost level {n}: coefficient {c} not divisible by {p}^{n}")
            div[e] = c // q
        # s_n is only meaningful modulo p^(R - n)
        sols.append(MPoly(div, nv, p, R - n))
        if R - n - 1 < 1 and n + 1 < len(targets):
            raise PrecisionExhausted("ran out of reserve digits")
    return sols


class _ImageMap:
    """The dga map out of polynomial forms fixed by Witt vector images of x_1..x_d."""

    def __init__(self, images, p: int, N: int, target_nvars: int):
        self.images = tuple(images)
        self.p, self.N, self.target_nvars = p, N, target_nvars
        self._forms = tuple(witt_to_drw(a) for a in self.images)
        self._dforms = tuple(w.d() for w in self._forms)
        self._powers: dict = {}

    def _power(self, i: int, e: int) -> DrwForm:
        key = (i, e)
        if key not in self._powers:
            if e == 0:
                self._powers[key] = DrwForm.one(self.p, self.N, self.target_nvars)
            else:
                self._powers[key] = self._power(i, e - 1) * self._forms[i]
        return self._powers[key]

    def monomial_form(self, exps) -> DrwForm:
        out = DrwForm.one(self.p, self.N, self.target_nvars)
        for i, e in enumerate(exps):
            if e:
                out = out * self._power(i, e)
        return out

    def function_form(self, f: MPoly) -> DrwForm:
        out = DrwForm.zero(self.p, self.N, self.target_nvars)
        for e, c in f.sorted_terms():
            out = out + self.monomial_form(e).scale(c)
        return out

    def differential(self, i: int) -> DrwForm:
        return self._dforms[i]


class WittLift(_ImageMap):
    """t_F for a Frobenius lift F, with images of the generators cached."""

    def __init__(self, F: FrobeniusLift, N: int | None = None, reserve: int | None = None):
        self.F = F
        self.p = F.p
        self.N = F.N if N is None else N
        self.nvars = F.nvars
        self.reserve = self.N if reserve is None else reserve
        self._Fr = F.at_precision(self.N + self.reserve)
        gens = [DaggerSeries(MPoly.var(i, self.nvars, self.p, self.N)) for i in range(self.nvars)]
        super().__init__([self.apply(g) for g in gens], self.p, self.N, self.nvars)
        self._verify(gens)

    def _verify(self, gens):
        """Ghost identity w_n(t_F(x_i)) = F^n(x_i) mod p^(n+1) on the generators."""
        p, R = self.p, self.N + self.reserve
        for g, a in zip(gens, self.images):
            lifted = [MPoly(c.terms, self.nvars, p, R) for c in a.components]
            for n, target in enumerate(self._frobenius_iterates(g)):
                lhs = ghost_poly(n, p, lifted)
                if MPoly(lhs.terms, self.nvars, p, n + 1) != MPoly(target.terms, self.nvars, p, n + 1):
                    raise NotDivisible(f"ghost identity fails at level {n}")

    def _frobenius_iterates(self, b: DaggerSeries) -> list:
        R = self.N + self.reserve
        cur = DaggerSeries(b.poly.with_precision(R))
        out = []
        for _ in range(self.N):
            out.append(cur.poly)
            cur = frobenius_apply(self._Fr, cur)
        return out

    def apply(self, b: DaggerSeries) -> WittVector:
        if b.N < self.N:
            raise PrecisionExhausted(f"input known mod {self.p}^{b.N}, need {self.N}")
        sols = _solve_components(self._frobenius_iterates(b), self.p, self.N + self.reserve)
        return WittVector([MPoly(s.terms, self.nvars, self.p, 1) for s in sols], self.p, self.nvars)

    def is_coordinate(self) -> bool:
        return self.F.is_coordinate()

    def to_json(self):
        return {
            "F": self.F.to_json()["images"],
            "N": self.N,
            "images": [a.to_json()["components"] for a in self.images],
            "valid_mod": f"{self.p}^{self.N}",
        }


def witt_lift_apply(L: WittLift, b: DaggerSeries) -> WittVector:
    return L.apply(b)


def t_f_on_forms(L: _ImageMap, w: MwForm) -> DrwForm:
    """f dx_S -> t_F(f) d t_F(x_S), normalized."""
    out = DrwForm.zero(L.p, L.N, L.target_nvars)
    for S, f in sorted(w.coeffs.items()):
        term = L.function_form(f)
        for i in S:
            if term.is_zero():
                break
            term = term * L.differential(i)
        out = out + term
    return out


def t_f_lands_integral(L: WittLift, w: MwForm) -> bool:
    return split_integral_fractional(t_f_on_forms(L, w))[1].is_zero()


# -- functoriality along polynomial maps -------------------------------------------


def pullback_function(g: list, f: MPoly) -> MPoly:
    """f(g_1, ..., g_m) for g: x_i -> g_i(y)."""
    return substitute(f.with_precision(g[0].prec), g)


def pullback_form(g: list, w: MwForm) -> MwForm:
    """g^*(f dx_S) = f(g) dg_S."""
    tgt = g[0]
    dg = [mw_d(MwForm.function(gi)) for gi in g]
    out = MwForm.zero(w.q, tgt.p, tgt.prec, tgt.nvars)
    for S, f in sorted(w.coeffs.items()):
        term = MwForm.function(pullback_function(g, f))
        for i in S:
            term = term.wedge(dg[i])
        out = out + term
    return out


def witt_functor(gbar: list, a: WittVector) -> WittVector:
    """W(gbar) for a ring map gbar of F_p-algebras: applied componentwise."""
    return WittVector([substitute(c, gbar) for c in a.components], a.p, gbar[0].nvars)


@dataclass
class FunctorialityReport:
    compatible: bool
    functions_agree: bool
    forms_agree: bool
    agree_mod_V: bool
    first_difference: int | None
    valid_mod: str

    @property
    def passed(self) -> bool:
        # for Frobenius-compatible maps the two composites are equal; otherwise they agree modulo V
        return self.agree_mod_V and (not self.compatible or (self.functions_agree and self.forms_agree))

    def to_json(self):
        return {
            "agree_mod_V": self.agree_mod_V,
            "compatible": self.compatible,
            "first_difference": self.first_difference,
            "forms_agree": self.forms_agree,
            "functions_agree": self.functions_agree,
            "pass": self.passed,
            "valid_mod": self.valid_mod,
        }


def functoriality_check(g: list, L1: WittLift, L2: WittLift, functions: list, forms: list = ()) -> FunctorialityReport:
    """Compare t_F2 o g with W(gbar) o t_F1 for a polynomial map g from the source of L1 to L2.

    g lists the images of the source variables as polynomials over Z/p^N in the
    target variables.
    """
    p, N = L1.p, L1.N
    if len(g) != L1.nvars or any(gi.nvars != L2.nvars for gi in g):
        raise RankMismatch("map does not match the two lifts")
    gbar = [gi.with_precision(1) for gi in g]
    compatible = all(
        frobenius_apply(L2.F, DaggerSeries(gi)) == DaggerSeries(pullback_function(g, fi.poly))
        for gi, fi in zip(g, L1.F.images)
    )
    composite = _ImageMap([witt_functor(gbar, a) for a in L1.images], p, N, L2.nvars)
    funcs_ok, first = True, None
    for f in functions:
        lhs = L2.apply(DaggerSeries(pullback_function(g, f)))
        rhs = witt_functor(gbar, L1.apply(DaggerSeries(f.with_precision(N))))
        for n, (a, b) in enumerate(zip(lhs.components, rhs.components)):
            if a != b:
                funcs_ok = False
                first = n if first is None else min(first, n)
                break
    forms_ok = all(t_f_on_forms(L2, pullback_form(g, w)) == t_f_on_forms(composite, w) for w in forms)
    return FunctorialityReport(compatible, funcs_ok, forms_ok, first != 0, first, f"{p}^{N}")


# -- connections ---------------------------------------------------------------


@dataclass
class PushforwardModule:
    rank: int
    source: MwConnection
    target: DrwConnection
    lift: WittLift = field(repr=False)

    def basis_section(self, j: int) -> list:
        one = DrwForm.one(self.target.p, self.target.N, self.target.nvars)
        zero = DrwForm.zero(self.target.p, self.target.N, self.target.nvars)
        return [one if i == j else zero for i in range(self.rank)]

    def diagram_commutes(self, extra_functions=()) -> bool:
        """nabla(t_F s) = t_F(nabla~ s) on e_j and on f*e_j for each extra f."""
        src, L = self.source, self.lift
        one = MPoly.const(1, src.nvars, src.p, src.N)
        funcs = [one] + [f.poly if isinstance(f, DaggerSeries) else f for f in extra_functions]
        zero = MPoly.zero(src.nvars, src.p, src.N)
        for j in range(self.rank):
            for f in funcs:
                s = [f if i == j else zero for i in range(self.rank)]
                lhs = drw_connection_apply(self.target, [L.function_form(x) for x in s])
                rhs = [t_f_on_forms(L, w) for w in connection_apply(src, s)]
                if lhs != rhs:
                    return False
        return True


def pushforward_connection(Mt: MwConnection, L: WittLift, require_integrable: bool = False) -> PushforwardModule:
    if require_integrable and not is_integrable(Mt):
        raise NotIntegrable("source connection has nonzero curvature")
    if (Mt.p, Mt.nvars) != (L.p, L.nvars):
        raise RankMismatch("connection and lift live over different rings")
    target = DrwConnection([[t_f_on_forms(L, w) for w in row] for row in Mt.matrix])
    return PushforwardModule(Mt.rank, Mt, target, L)


def check_integrability(P: PushforwardModule) -> bool:
    return all(w.is_zero() for row in drw_curvature(P.target) for w in row)


# -- quasi-nilpotence (mod p proxy) -------------------------------------------------


def _mod_p_polyform(w: DrwForm) -> dict:
    """Image of a 1-form in Omega^1 of F_p[x]: {i: coefficient polynomial mod p}."""
    p = w.p
    e = w.restrict(1).to_eform()
    out: dict = {}
    for (k, I), c in e.terms.items():
        if len(I) != 1:
            continue
        i = I[0]
        exps = tuple(int(x) - (j == i) for j, x in enumerate(k))
        term = MPoly.monomial(exps, int(c) % p, p, 1)
        out[i] = out[i] + term if i in out else term
    return out


def _nilpotent_mod_p(A: list, p: int) -> bool:
    """A is nilpotent iff A^(2^k) = 0 once 2^k >= size."""
    P = np.array(A, dtype=np.int64) % p
    k = 1
    while k < len(A) and P.any():
        P = (P @ P) % p
        k *= 2
    return not P.any()


def quasinilpotent_matrices(M: DrwConnection, D: int) -> list:
    """Matrices of nabla_{d/dx_i} mod p on (F_p[x]_{<=D})^r, one per variable."""
    p, nv, r = M.p, M.nvars, M.rank
    monos = [a for a in product(range(D + 1), repeat=nv) if sum(a) <= D]
    pos = {a: n for n, a in enumerate(monos)}
    size = r * len(monos)
    entries = [[_mod_p_polyform(M.matrix[a][b]) for b in range(r)] for a in range(r)]
    mats = []
    for i in range(nv):
        A = [[0] * size for _ in range(size)]
        for b in range(r):
            for m in monos:
                col = b * len(monos) + pos[m]
                if m[i]:
                    dm = tuple(x - (j == i) for j, x in enumerate(m))
                    A[b * len(monos) + pos[dm]][col] += m[i]
                for a in range(r):
                    g = entries[a][b].get(i)
                    if g is None:
                        continue
                    for e, c in g.terms.items():
                        t = tuple(x + y for x, y in zip(e, m))
                        if t in pos:
                            A[a * len(monos) + pos[t]][col] += c
        mats.append([[x % p for x in row] for row in A])
    return mats


def check_quasinilpotent(M: DrwConnection, D: int | None = None) -> bool:
    """PROXY: each nabla_{d/dx_i} mod p is nilpotent on sections of degree <= D."""
    D = 2 * M.p - 1 if D is None else D
    return all(_nilpotent_mod_p(A, M.p) for A in quasinilpotent_matrices(M, D))


def pushforward_report(P: PushforwardModule, extra_functions=()) -> dict:
    Mt = P.source
    return {
        "diagram_commutes": P.diagram_commutes(extra_functions),
        "integrable": check_integrability(P),
        "quasinilpotent_proxy": check_quasinilpotent(P.target),
        "gauge": {
            "rank": P.rank,
            "trivial": all(w.is_zero() for row in Mt.matrix for w in row),
            "max_entry_degree": Mt.max_entry_degree(),
        },
        "target": P.target.to_json(),
        "valid_mod": f"{P.lift.p}^{P.lift.N}",
    }
