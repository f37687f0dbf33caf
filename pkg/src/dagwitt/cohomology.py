"""Cohomology of sliced complexes of finite Z/p^N-modules.

Every term of a complex is a sum of cyclic modules Z/p^e, so it is a quotient
of a free Z_p-module by an explicit relation lattice. Cycles, boundaries and
the maps induced on cohomology are computed as Z_p-lattices, with all linear
algebra done modulo p^M for a working precision M comfortably above N.
Smith normal form pivots on a minimal-valuation entry and breaks ties at the
lexicographically first position.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .base_arith import kappa_for
from .comparison import WittLift, t_f_on_forms
from .dagger import MwConnection, MwForm, connection_apply_form, require_integrable
from .drw.basic import partitions, render_basic
from .drw.connection import DrwConnection, drw_connection_apply_forms, drw_curvature
from .drw.eforms import depth
from .drw.forms import DrwForm
from .errors import NotIntegrable, SliceMismatch
from .mpoly import MPoly

# -- Smith normal form over Z_p, modulo p^M ------------------------------------------


def _val(x: int, p: int, M: int) -> int:
    if x == 0:
        return M
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return min(v, M)


def _identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(A: list, B: list, mod: int) -> list:
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % mod for col in Bt] for row in A]


@dataclass
class SNF:
    """U A V = diag(p^vals) modulo p^M (vals only for the pivots found)."""

    vals: list
    U: list
    Uinv: list
    V: list
    Vinv: list


def snf(A: list, n: int, m: int, p: int, M: int) -> SNF:
    mod = p ** M
    A = [[x % mod for x in row] for row in A]
    U, Uinv, V, Vinv = _identity(n), _identity(n), _identity(m), _identity(m)
    vals = []
    for k in range(min(n, m)):
        best = None
        for i in range(k, n):
            row = A[i]
            for j in range(k, m):
                if row[j]:
                    v = _val(row[j], p, M)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None or best[0] >= M:
            break
        v, i, j = best
        if i != k:
            A[k], A[i] = A[i], A[k]
            U[k], U[i] = U[i], U[k]
            for row in Uinv:
                row[k], row[i] = row[i], row[k]
        if j != k:
            for row in A:
                row[k], row[j] = row[j], row[k]
            for row in V:
                row[k], row[j] = row[j], row[k]
            Vinv[k], Vinv[j] = Vinv[j], Vinv[k]
        pk = p ** v
        unit = A[k][k] // pk
        uinv = pow(unit, -1, mod)
        A[k] = [x * uinv % mod for x in A[k]]
        U[k] = [x * uinv % mod for x in U[k]]
        for row in Uinv:
            row[k] = row[k] * unit % mod
        pivot_row = A[k]
        for i in range(k + 1, n):
            if A[i][k]:
                c = A[i][k] // pk
                A[i] = [(a - c * b) % mod for a, b in zip(A[i], pivot_row)]
                U[i] = [(a - c * b) % mod for a, b in zip(U[i], U[k])]
                for row in Uinv:
                    row[k] = (row[k] + c * row[i]) % mod
        for j in range(k + 1, m):
            if pivot_row[j]:
                c = pivot_row[j] // pk
                for row in A:
                    row[j] = (row[j] - c * row[k]) % mod
                for row in V:
                    row[j] = (row[j] - c * row[k]) % mod
                Vinv[k] = [(a + c * b) % mod for a, b in zip(Vinv[k], Vinv[j])]
        vals.append(v)
    return SNF(vals, U, Uinv, V, Vinv)


class Lattice:
    """A full-rank lattice X Z_p^n, stored with X^-1 = p^-shift * inv."""

    __slots__ = ("basis", "inv", "shift", "n", "p", "M")

    def __init__(self, basis, inv, shift, p, M):
        self.basis, self.inv, self.shift = basis, inv, shift
        self.n, self.p, self.M = len(basis), p, M

    @classmethod
    def from_diagonal_change(cls, T: list, Tinv: list, exps: list, p: int, M: int) -> "Lattice":
        """Lattice T diag(p^exps) given T and its inverse."""
        mod = p ** M
        n = len(exps)
        shift = max(exps, default=0)
        basis = [[T[i][j] * p ** exps[j] % mod for j in range(n)] for i in range(n)]
        inv = [[Tinv[i][j] * p ** (shift - exps[i]) % mod for j in range(n)] for i in range(n)]
        return cls(basis, inv, shift, p, M)

    @classmethod
    def diagonal(cls, exps: list, p: int, M: int) -> "Lattice":
        I = _identity(len(exps))
        return cls.from_diagonal_change(I, I, exps, p, M)

    def coordinates(self, gens: list) -> list:
        """p^shift * X^-1 gens (columns)."""
        return _matmul(self.inv, gens, self.p ** self.M)


def span_lattice(gens: list, n: int, p: int, M: int) -> Lattice:
    """Lattice spanned by the columns of ``gens`` (must have full rank n)."""
    m = len(gens[0]) if gens else 0
    s = snf(gens, n, m, p, M)
    if len(s.vals) < n:
        raise ValueError("generators do not span a full-rank lattice")
    return Lattice.from_diagonal_change(s.Uinv, s.U, s.vals, p, M)


def preimage_lattice(A: list, n: int, target: Lattice) -> Lattice:
    """{x in Z_p^n : A x in target} for A of shape target.n x n."""
    p, M = target.p, target.M
    G = target.coordinates(A) if A else []
    t = target.shift
    s = snf(G, target.n, n, p, M)
    exps = [max(0, t - v) for v in s.vals] + [0] * (n - len(s.vals))
    return Lattice.from_diagonal_change(s.V, s.Vinv, exps, p, M)


def compose(L: Lattice, Y: Lattice) -> Lattice:
    """The lattice L.basis * Y (a sublattice of L)."""
    mod = L.p ** L.M
    return Lattice(
        _matmul(L.basis, Y.basis, mod), _matmul(Y.inv, L.inv, mod), L.shift + Y.shift, L.p, L.M
    )


def quotient_exponents(L: Lattice, gens: list) -> list:
    """Elementary divisor exponents of L / span(gens), zeros dropped, ascending."""
    coords = L.coordinates(gens)
    m = len(gens[0]) if gens else 0
    s = snf(coords, L.n, m, L.p, L.M)
    if len(s.vals) < L.n:
        raise ValueError("quotient is not torsion")
    out = sorted(v - L.shift for v in s.vals if v > L.shift)
    if any(e < 0 for e in out):
        raise ValueError("generators leave the lattice")
    return out


# -- finite complexes ----------------------------------------------------------------


@dataclass
class FiniteComplex:
    """C^0 -> C^1 -> ... with C^q = sum of Z/p^orders[q][i] on ``labels[q]``.

    ``boundary[q]`` maps C^q to C^(q+1) as a dict {(row, col): int}.
    """

    p: int
    N: int
    labels: list
    orders: list
    boundary: list
    meta: dict = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.labels) - 1

    def dense(self, q: int) -> list:
        rows, cols = len(self.labels[q + 1]), len(self.labels[q])
        A = [[0] * cols for _ in range(rows)]
        for (i, j), c in self.boundary[q].items():
            A[i][j] = c
        return A

    def check(self) -> bool:
        """boundary o boundary = 0 exactly in the target modules."""
        for q in range(self.top - 1):
            B1, B2 = self.boundary[q], self.boundary[q + 1]
            by_row: dict = {}
            for (k, j), c in B1.items():
                by_row.setdefault(k, []).append((j, c))
            acc: dict = {}
            for (i, k), c in B2.items():
                for j, c2 in by_row.get(k, ()):
                    acc[(i, j)] = acc.get((i, j), 0) + c * c2
            orders = self.orders[q + 2]
            if any(v % self.p ** orders[i] for (i, j), v in acc.items()):
                return False
        return True

    def subcomplex(self, keep: list) -> "FiniteComplex":
        """Restriction to the index sets ``keep[q]`` (must be a direct summand)."""
        pos = [{old: new for new, old in enumerate(ks)} for ks in keep]
        bd = []
        for q in range(self.top):
            bd.append(
                {(pos[q + 1][i], pos[q][j]): c for (i, j), c in self.boundary[q].items() if j in pos[q] and i in pos[q + 1]}
            )
        return FiniteComplex(
            self.p,
            self.N,
            [[self.labels[q][i] for i in ks] for q, ks in enumerate(keep)],
            [[self.orders[q][i] for i in ks] for q, ks in enumerate(keep)],
            bd,
            dict(self.meta),
        )


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _blocks(complexes: list, maps: list = ()) -> list:
    """Joint block decomposition of complexes linked by chain maps.

    Returns a list of per-block index selections, one ``keep`` list per complex.
    """
    uf = _UnionFind()
    for c, C in enumerate(complexes):
        for q, labels in enumerate(C.labels):
            for i in range(len(labels)):
                uf.find((c, q, i))
        for q, B in enumerate(C.boundary):
            for (i, j) in B:
                uf.union((c, q + 1, i), (c, q, j))
    for (src, dst, per_degree) in maps:
        for q, F in enumerate(per_degree):
            for (i, j) in F:
                uf.union((dst, q, i), (src, q, j))
    groups: dict = {}
    for node in sorted(uf.parent):
        groups.setdefault(uf.find(node), []).append(node)
    out = []
    for root in sorted(groups):
        keep = [[[] for _ in C.labels] for C in complexes]
        for (c, q, i) in groups[root]:
            keep[c][q].append(i)
        out.append(keep)
    return out


def _working_precision(N: int) -> int:
    return 4 * N + 4


def _cycles_and_boundaries(C: FiniteComplex, q: int, M: int):
    p = C.p
    n = len(C.labels[q])
    if q < C.top and C.labels[q + 1]:
        rel_next = Lattice.diagonal(C.orders[q + 1], p, M)
        Z = preimage_lattice(C.dense(q), n, rel_next)
    else:
        Z = Lattice.diagonal([0] * n, p, M)
    gens = [[p ** e if i == j else 0 for j, e in enumerate(C.orders[q])] for i in range(n)]
    if q > 0 and C.labels[q - 1]:
        A = C.dense(q - 1)
        gens = [g + a for g, a in zip(gens, A)]
    return Z, gens


@dataclass
class CohomologyResult:
    """Per degree: ascending exponents e of H^q = sum Z/p^e (e = N means free at precision N)."""

    p: int
    N: int
    divisors: dict

    def free_rank(self, q: int) -> int:
        return sum(1 for e in self.divisors.get(q, []) if e >= self.N)

    def is_zero(self, q: int) -> bool:
        return not self.divisors.get(q)

    def to_json(self):
        return {
            "divisors": {str(q): [f"{self.p}^{e}" for e in es] for q, es in sorted(self.divisors.items())},
            "free_at_precision": {str(q): self.free_rank(q) for q in sorted(self.divisors)},
            "valid_mod": f"{self.p}^{self.N}",
        }


def _cohomology_block(C: FiniteComplex, M: int) -> dict:
    out = {}
    for q in range(C.top + 1):
        if not C.labels[q]:
            out[q] = []
            continue
        Z, gens = _cycles_and_boundaries(C, q, M)
        out[q] = quotient_exponents(Z, gens)
    return out


def elementary_divisors(C: FiniteComplex) -> CohomologyResult:
    M = _working_precision(C.N)
    total = {q: [] for q in range(C.top + 1)}
    for keep in _blocks([C]):
        block = C.subcomplex(keep[0])
        for q, es in _cohomology_block(block, M).items():
            total[q].extend(es)
    return CohomologyResult(C.p, C.N, {q: sorted(es) for q, es in total.items()})


# -- building the complexes -------------------------------------------------------------


def _mw_label(i, alpha, S) -> str:
    names = "xyz"
    mono = "*".join(f"{names[v]}^{e}" if e > 1 else names[v] for v, e in enumerate(alpha) if e) or "1"
    diff = "^".join(f"d{names[s]}" for s in S)
    return f"e{i}:{mono}" + (f" {diff}" if diff else "")


def _mw_grade(alpha, S, slicing: str) -> int:
    return sum(alpha) + (len(S) if slicing == "weight" else 0)


def build_mw_complex(Mt: MwConnection, D: int, slicing: str = "degree") -> FiniteComplex:
    """Z/p^N-span of e_i x^a dx_S with grade <= D; overflow terms are dropped and counted.

    ``slicing="degree"`` caps the polynomial degree |a|; ``"weight"`` caps |a| + |S|,
    which coordinate Frobenius preserves.
    """
    require_integrable(Mt)
    p, N, d, r = Mt.p, Mt.N, Mt.nvars, Mt.rank
    cap = D
    basis = []
    for q in range(d + 1):
        items = []
        for i in range(r):
            for S in combinations(range(d), q):
                for a in product(range(cap + 1), repeat=d):
                    if _mw_grade(a, S, slicing) <= cap:
                        items.append((i, a, S))
        items.sort(key=lambda t: (t[0], t[2], sum(t[1]), t[1]))
        basis.append(items)
    pos = [{b: n for n, b in enumerate(items)} for items in basis]
    boundary, overflow = [], 0
    for q in range(d):
        B = {}
        for col, (i, a, S) in enumerate(basis[q]):
            vec = [MwForm.zero(q, p, N, d) for _ in range(r)]
            vec[i] = MwForm(q, {S: MPoly.monomial(a, 1, p, N)}, p, N, d)
            for tgt, w in enumerate(connection_apply_form(Mt, vec)):
                for T, f in w.coeffs.items():
                    for e, c in f.terms.items():
                        row = pos[q + 1].get((tgt, e, T))
                        if row is None:
                            overflow += 1
                        else:
                            B[(row, col)] = c
        boundary.append(B)
    return FiniteComplex(
        p,
        N,
        [[_mw_label(*b) for b in items] for items in basis],
        [[N] * len(items) for items in basis],
        boundary,
        {"side": "mw", "slicing": slicing, "D": D, "overflow": overflow, "keys": basis},
    )


def drw_weights(p: int, N: int, d: int, D: int, variant: str) -> list:
    """Weights k in p^-(N-1) Z^d_{>=0} with |k| <= D, depth < N, in the chosen variant."""
    if variant == "integral":
        steps, scale = D, 1
    else:
        scale = p ** (N - 1)
        steps = D * scale
    out = []
    for a in product(range(steps + 1), repeat=d):
        if sum(a) > steps:
            continue
        k = tuple(Fraction(x, scale) for x in a)
        integral = all(x.denominator == 1 for x in k)
        if variant == "fractional" and integral:
            continue
        out.append(k)
    out.sort(key=lambda k: (sum(k), k))
    return out


def _drw_label(i, k, P, p) -> str:
    return f"e{i}:{render_basic(k, P, p)}"


def build_drw_complex(M: DrwConnection, D: int, variant: str = "full", weights: list | None = None) -> FiniteComplex:
    """Basic Witt differentials of weight |k| <= D (depth < N) tensor the basis, with nabla."""
    if any(not w.is_zero() for row in drw_curvature(M) for w in row):
        raise NotIntegrable("de Rham-Witt connection has nonzero curvature")
    p, N, d, r = M.p, M.N, M.nvars, M.rank
    ks = drw_weights(p, N, d, D, variant) if weights is None else weights
    basis = []
    for q in range(d + 1):
        items = []
        for i in range(r):
            for k in ks:
                for P in partitions(k, p, q):
                    items.append((i, k, P))
        basis.append(items)
    pos = [{b: n for n, b in enumerate(items)} for items in basis]
    boundary, overflow = [], 0
    zero = [DrwForm.zero(p, N, d) for _ in range(r)]
    for q in range(d):
        B = {}
        for col, (i, k, P) in enumerate(basis[q]):
            vec = list(zero)
            vec[i] = DrwForm({(k, P): 1}, p, N, d)
            for tgt, w in enumerate(drw_connection_apply_forms(M, vec)):
                for (kk, PP), c in w.terms.items():
                    row = pos[q + 1].get((tgt, kk, PP))
                    if row is None:
                        overflow += 1
                    else:
                        B[(row, col)] = c
        boundary.append(B)
    return FiniteComplex(
        p,
        N,
        [[_drw_label(i, k, P, p) for (i, k, P) in items] for items in basis],
        [[N - depth(k, p) for (_, k, _) in items] for items in basis],
        boundary,
        {"side": "drw", "variant": variant, "D": D, "overflow": overflow, "keys": basis},
    )


# -- comparison ------------------------------------------------------------------------------


@dataclass
class ComparisonOutcome:
    p: int
    N: int
    d: int
    kappa: int
    kernel_exponents: dict
    cokernel_exponents: dict
    source: CohomologyResult
    target: CohomologyResult
    slices: list
    overflow: dict

    @property
    def bound(self) -> int:
        return 2 * self.kappa

    @property
    def passed(self) -> bool:
        es = list(self.kernel_exponents.values()) + list(self.cokernel_exponents.values())
        return all(e <= self.bound for e in es)

    @property
    def max_exponent(self) -> int:
        return max(list(self.kernel_exponents.values()) + list(self.cokernel_exponents.values()), default=0)

    @property
    def bound_attained(self) -> bool:
        return self.max_exponent == self.bound

    def to_json(self):
        return {
            "bound": self.bound,
            "bound_attained": self.bound_attained,
            "cokernel_exponents": {str(q): e for q, e in sorted(self.cokernel_exponents.items())},
            "d": self.d,
            "kappa": self.kappa,
            "kernel_exponents": {str(q): e for q, e in sorted(self.kernel_exponents.items())},
            "N": self.N,
            "overflow": self.overflow,
            "p": self.p,
            "pass": self.passed,
            "slices": self.slices,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "valid_mod": f"{self.p}^{self.N}",
        }


def _comparison_map(C: FiniteComplex, T: FiniteComplex, L: WittLift) -> list:
    """Matrices of t_F from the MW slice to the de Rham-Witt slice, per degree."""
    p, N, d = C.p, C.N, L.nvars
    tpos = [{b: n for n, b in enumerate(items)} for items in T.meta["keys"]]
    maps = []
    for q, items in enumerate(C.meta["keys"]):
        F = {}
        for col, (i, a, S) in enumerate(items):
            w = MwForm(q, {S: MPoly.monomial(a, 1, p, N)}, p, N, d)
            src_weight = sum(a) + len(S)
            for (k, P), c in t_f_on_forms(L, w).terms.items():
                if sum(k) != src_weight:
                    raise SliceMismatch(f"t_F moves weight {src_weight} to {sum(k)}")
                row = tpos[q].get((i, k, P))
                if row is None:
                    raise SliceMismatch(f"image term of weight {k} outside the target slice")
                F[(row, col)] = c
        maps.append(F)
    return maps


def _map_exponents(C, T, F, M) -> tuple:
    """Per degree (kernel exponent, cokernel exponent) of H(F): H(C) -> H(T)."""
    p = C.p
    ker, coker = {}, {}
    for q in range(C.top + 1):
        n, n2 = len(C.labels[q]), len(T.labels[q])
        if n == 0 and n2 == 0:
            ker[q], coker[q] = 0, 0
            continue
        Fd = [[0] * n for _ in range(n2)]
        for (i, j), c in F[q].items():
            Fd[i][j] = c
        if n2:
            Z2, gens2 = _cycles_and_boundaries(T, q, M)
        if n:
            Z1, gens1 = _cycles_and_boundaries(C, q, M)
        # cokernel: Z2 / (F Z1 + B2)
        if n2:
            extra = _matmul(Fd, Z1.basis, p ** M) if n else [[] for _ in range(n2)]
            gens = [g + e for g, e in zip(gens2, extra)]
            coker[q] = max(quotient_exponents(Z2, gens), default=0)
        else:
            coker[q] = 0
        # kernel: (F^-1(B2) intersected with Z1) / B1
        if n:
            if n2:
                B2 = span_lattice(gens2, n2, p, M)
                Y = preimage_lattice(_matmul(Fd, Z1.basis, p ** M), n, B2)
                W = compose(Z1, Y)
            else:
                W = Z1
            ker[q] = max(quotient_exponents(W, gens1), default=0)
        else:
            ker[q] = 0
    return ker, coker


def compare_cohomology(
    Mt: MwConnection,
    L: WittLift,
    D: int,
    degrees=None,
    slices=None,
) -> ComparisonOutcome:
    """Kernel/cokernel exponents of t_F on weight slices, MW versus integral de Rham-Witt.

    ``slices`` lists the weight caps examined (default: the stable band
    0..D - max entry degree); exponents are maxima over slices.
    """
    if not L.is_coordinate():
        raise SliceMismatch("weight slices need the coordinate Frobenius lift")
    require_integrable(Mt)
    p, N, d = Mt.p, Mt.N, Mt.nvars
    M = _working_precision(N)
    m = Mt.max_entry_degree()
    if slices is None:
        slices = list(range(0, max(0, D - m) + 1))
    target_conn = DrwConnection([[t_f_on_forms(L, w) for w in row] for row in Mt.matrix])
    degrees = list(range(d + 1)) if degrees is None else list(degrees)
    ker = {q: 0 for q in degrees}
    coker = {q: 0 for q in degrees}
    src_div, tgt_div, overflow = {}, {}, {}
    for Ds in slices:
        C = build_mw_complex(Mt, Ds, slicing="weight")
        T = build_drw_complex(target_conn, Ds, variant="integral")
        F = _comparison_map(C, T, L)
        overflow[str(Ds)] = {"mw": C.meta["overflow"], "drw": T.meta["overflow"]}
        sd = {q: [] for q in range(d + 1)}
        td = {q: [] for q in range(d + 1)}
        for keep in _blocks([C, T], [(0, 1, F)]):
            Cb, Tb = C.subcomplex(keep[0]), T.subcomplex(keep[1])
            pos_c = [{old: new for new, old in enumerate(ks)} for ks in keep[0]]
            pos_t = [{old: new for new, old in enumerate(ks)} for ks in keep[1]]
            Fb = [
                {(pos_t[q][i], pos_c[q][j]): c for (i, j), c in Fq.items() if j in pos_c[q] and i in pos_t[q]}
                for q, Fq in enumerate(F)
            ]
            kb, cb = _map_exponents(Cb, Tb, Fb, M)
            for q in degrees:
                ker[q] = max(ker[q], kb.get(q, 0))
                coker[q] = max(coker[q], cb.get(q, 0))
            if Ds == slices[-1]:
                for q, es in _cohomology_block(Cb, M).items():
                    sd[q].extend(es)
                for q, es in _cohomology_block(Tb, M).items():
                    td[q].extend(es)
        if Ds == slices[-1]:
            src_div, tgt_div = sd, td
    return ComparisonOutcome(
        p,
        N,
        d,
        kappa_for(p, d),
        ker,
        coker,
        CohomologyResult(p, N, {q: sorted(v) for q, v in src_div.items()}),
        CohomologyResult(p, N, {q: sorted(v) for q, v in tgt_div.items()}),
        slices,
        overflow,
    )


@dataclass
class AcyclicityReport:
    p: int
    N: int
    d: int
    D: int
    divisors: CohomologyResult
    q_range: list

    @property
    def passed(self) -> bool:
        return all(self.divisors.is_zero(q) for q in self.q_range if q >= 1)

    def to_json(self):
        return {
            "D": self.D,
            "d": self.d,
            "h0_divisors": [f"{self.p}^{e}" for e in self.divisors.divisors.get(0, [])],
            "N": self.N,
            "p": self.p,
            "pass": self.passed,
            "q_range": self.q_range,
            "result": self.divisors.to_json(),
        }


def fractional_acyclicity(D: int, N: int, q_range=None, p: int = 3, d: int = 1) -> AcyclicityReport:
    M = DrwConnection.trivial(1, p, N, d)
    C = build_drw_complex(M, D, variant="fractional")
    q_range = list(range(1, d + 1)) if q_range is None else list(q_range)
    return AcyclicityReport(p, N, d, D, elementary_divisors(C), q_range)
