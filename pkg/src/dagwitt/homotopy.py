"""Chain homotopy between the comparison maps of two Frobenius lifts.

Elements of D' = WOmega[1/p][T] + WOmega[1/p][T] dT are kept exactly in the
rational weight model. The interpolation

    phi(x_i) = psi_1(x_i) + (T/p) (psi_2(x_i) - psi_1(x_i))

specialises to psi_1 at T = 0 and to psi_2 at T = p, and extends to a dga map
on polynomial forms. With L the integration operator from T = 0 to T = p,
Ld + dL = ev_p - ev_0, so h = p^kappa L phi satisfies
hd + dh = p^kappa (psi_2 - psi_1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .base_arith import valuation
from .comparison import WittLift, t_f_on_forms
from .dagger import FrobeniusLift, MwConnection, MwForm, mw_d, require_integrable
from .drw.eforms import EForm
from .drw.forms import DrwForm, witt_to_eform
from .errors import NotDivisible, PrecisionBudgetExceeded, RingMismatch
from .mpoly import MPoly


def _signed(w: EForm) -> EForm:
    """(-1)^deg applied termwise."""
    return w._like({(k, I): (-c if len(I) % 2 else c) for (k, I), c in w.terms.items()})


class DPrimeElement:
    """sum_j T^j omega_j + sum_j T^j dT ^ eta_j, stored as {(j, has_dT): EForm}."""

    __slots__ = ("parts", "p", "nvars")

    def __init__(self, parts: dict, p: int, nvars: int):
        self.p, self.nvars = p, nvars
        self.parts = {key: w for key, w in parts.items() if not w.is_zero()}

    @classmethod
    def constant(cls, w: EForm) -> "DPrimeElement":
        return cls({(0, False): w}, w.p, w.nvars)

    @classmethod
    def zero(cls, p, nvars):
        return cls({}, p, nvars)

    def _like(self, parts):
        return DPrimeElement(parts, self.p, self.nvars)

    def is_zero(self):
        return not self.parts

    def t_degree(self) -> int:
        return max((j for j, _ in self.parts), default=0)

    def __add__(self, other: "DPrimeElement") -> "DPrimeElement":
        out = dict(self.parts)
        for key, w in other.parts.items():
            out[key] = out[key] + w if key in out else w
        return self._like(out)

    def __neg__(self):
        return self._like({key: -w for key, w in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DPrimeElement":
        return self._like({key: w.scale(c) for key, w in self.parts.items()})

    def __mul__(self, other: "DPrimeElement") -> "DPrimeElement":
        out: dict = {}
        for (a, s), w in self.parts.items():
            for (b, t), v in other.parts.items():
                if s and t:
                    continue
                if t:
                    prod = _signed(w) * v  # w (dT ^ v) = (-1)^|w| dT ^ w v
                else:
                    prod = w * v
                key = (a + b, s or t)
                out[key] = out[key] + prod if key in out else prod
        return self._like(out)

    def d(self) -> "DPrimeElement":
        out: dict = {}

        def put(key, w):
            out[key] = out[key] + w if key in out else w

        for (j, s), w in self.parts.items():
            if s:
                put((j, True), -w.d())
            else:
                put((j, False), w.d())
                if j:
                    put((j - 1, True), w.scale(j))
        return self._like(out)

    def evaluate(self, t) -> EForm:
        out = EForm.zero(self.p, self.nvars)
        for (j, s), w in self.parts.items():
            if not s:
                out = out + w.scale(Fraction(t) ** j)
        return out


def L_factor(j: int, p: int) -> Fraction:
    return Fraction(p ** (j + 1), j + 1)


def L_operator(xi: DPrimeElement) -> tuple:
    """(L xi, precision loss) with L(T^j w) = 0, L(T^j dT ^ w) = p^(j+1)/(j+1) w."""
    out = EForm.zero(xi.p, xi.nvars)
    loss = 0
    for (j, s), w in sorted(xi.parts.items(), key=lambda kv: kv[0]):
        if s:
            out = out + w.scale(L_factor(j, xi.p))
            loss = max(loss, valuation(j + 1, xi.p))
    return out, loss


# -- the interpolating map ---------------------------------------------------------


class PhiMap:
    """phi from the two Witt lifts; caches phi(x_i), d phi(x_i) and powers."""

    def __init__(self, L1: WittLift, L2: WittLift):
        if (L1.p, L1.N, L1.nvars) != (L2.p, L2.N, L2.nvars):
            raise RingMismatch("lifts over different rings")
        self.L1, self.L2 = L1, L2
        self.p, self.N, self.nvars = L1.p, L1.N, L1.nvars
        p = self.p
        self.psi1 = tuple(witt_to_eform(a, self.N) for a in L1.images)
        self.psi2 = tuple(witt_to_eform(a, self.N) for a in L2.images)
        self.images = []
        for a, b in zip(self.psi1, self.psi2):
            slope = (b - a).scale(Fraction(1, p))
            self.images.append(DPrimeElement({(0, False): a, (1, False): slope}, p, self.nvars))
        self.differentials = [x.d() for x in self.images]
        self._powers: dict = {}

    def _power(self, i, e):
        if (i, e) not in self._powers:
            if e == 0:
                self._powers[(i, e)] = DPrimeElement.constant(EForm.one(self.p, self.nvars))
            else:
                self._powers[(i, e)] = self._power(i, e - 1) * self.images[i]
        return self._powers[(i, e)]

    def function(self, f: MPoly) -> DPrimeElement:
        out = DPrimeElement.zero(self.p, self.nvars)
        for exps, c in f.sorted_terms():
            term = DPrimeElement.constant(EForm.one(self.p, self.nvars).scale(c))
            for i, e in enumerate(exps):
                if e:
                    term = term * self._power(i, e)
            out = out + term
        return out

    def form(self, w: MwForm) -> DPrimeElement:
        out = DPrimeElement.zero(self.p, self.nvars)
        for S, f in sorted(w.coeffs.items()):
            term = self.function(f)
            for i in S:
                term = term * self.differentials[i]
            out = out + term
        return out

    def specializations_ok(self) -> bool:
        return all(
            x.evaluate(0) == a and x.evaluate(self.p) == b for x, a, b in zip(self.images, self.psi1, self.psi2)
        )


def build_interpolation(F1: FrobeniusLift, F2: FrobeniusLift, N: int | None = None) -> PhiMap:
    p = F1.p
    for a, b in zip(F1.images, F2.images):
        diff = MPoly((a.poly - MPoly(b.poly.terms, a.nvars, p, a.N)).terms, a.nvars, p, 1)
        if not diff.is_zero():
            raise NotDivisible("F2 - F1 is not divisible by p")
    return PhiMap(WittLift(F1, N), WittLift(F2, N))


# -- homotopy report ------------------------------------------------------------------


@dataclass
class Residual:
    generator: str
    residual: str
    loss: int
    valid_mod: str
    vanishes: bool

    def to_json(self):
        return {
            "generator": self.generator,
            "loss": self.loss,
            "residual": self.residual,
            "valid_mod": self.valid_mod,
            "vanishes": self.vanishes,
        }


@dataclass
class HomotopyReport:
    p: int
    N: int
    kappa: int
    residuals: list = field(default_factory=list)
    coefficient_residuals: list = field(default_factory=list)
    specializations_ok: bool = True

    @property
    def min_precision(self) -> int:
        rs = self.residuals + self.coefficient_residuals
        return min((self.N - r.loss for r in rs), default=self.N)

    @property
    def passed(self) -> bool:
        rs = self.residuals + self.coefficient_residuals
        return self.specializations_ok and all(r.vanishes for r in rs)

    def to_json(self):
        return {
            "coefficient_residuals": [r.to_json() for r in self.coefficient_residuals],
            "kappa": self.kappa,
            "N": self.N,
            "p": self.p,
            "pass": self.passed,
            "residuals": [r.to_json() for r in self.residuals],
            "specializations_ok": self.specializations_ok,
            "valid_mod": f"{self.p}^{self.min_precision}",
        }


def homotopy_apply(phi: PhiMap, g: MwForm, kappa: int) -> tuple:
    """(hd + dh)(g) as an exact E-form, and the precision loss."""
    h_dg, l1 = L_operator(phi.form(mw_d(g)))
    h_g, l2 = L_operator(phi.form(g))
    return (h_dg + h_g.d()).scale(phi.p ** kappa), max(l1, l2)


def _to_level(e: EForm, m: int) -> DrwForm:
    # from_eform drops weights of depth >= m and asserts p-integrality elsewhere
    return DrwForm.from_eform(e, m)


def _residual(phi: PhiMap, lhs: EForm, rhs: DrwForm, loss: int, label: str, budget: int) -> Residual:
    p, N = phi.p, phi.N
    if loss > budget:
        raise PrecisionBudgetExceeded(f"loss {loss} exceeds budget {budget}")
    m = N - loss
    try:
        diff = _to_level(lhs, m) - rhs.restrict(m)
        text, ok = diff.to_text(), diff.is_zero()
    except NotDivisible as exc:
        text, ok = f"non-integral: {exc}", False
    return Residual(label, text, loss, f"{p}^{m}", ok)


def check_homotopy_identity(
    F1: FrobeniusLift,
    F2: FrobeniusLift,
    generators: list,
    kappa: int,
    N: int | None = None,
    budget: int | None = None,
) -> HomotopyReport:
    phi = build_interpolation(F1, F2, N)
    p, N = phi.p, phi.N
    budget = N - 1 if budget is None else budget
    report = HomotopyReport(p, N, kappa, specializations_ok=phi.specializations_ok())
    for g in generators:
        lhs, loss = homotopy_apply(phi, g, kappa)
        rhs = (t_f_on_forms(phi.L2, g) - t_f_on_forms(phi.L1, g)).scale(p ** kappa)
        report.residuals.append(_residual(phi, lhs, rhs, loss, g.to_text(), budget))
    return report


# -- coefficients ---------------------------------------------------------------------


@dataclass
class CoefficientElement:
    """e (x) xi_e + (nabla~ e) (x) xi_s for one basis section e.

    ``xi_e`` and ``xi_s`` are D' elements; the nabla~ e factor stays symbolic,
    which is how the sign rule for L^E is stated.
    """

    index: int
    e_part: DPrimeElement
    symbol_part: DPrimeElement

    def connection(self) -> "CoefficientElement":
        # nabla(e (x) xi) = (nabla~ e) (x) xi + e (x) d xi; nabla~ e (x) . is d-closed formally
        return CoefficientElement(self.index, self.e_part.d(), self.e_part - self.symbol_part.d())


def L_E_operator(x: CoefficientElement) -> tuple:
    """(e (x) L xi_e, -(nabla~ e) (x) L xi_s, loss)."""
    a, la = L_operator(x.e_part)
    b, lb = L_operator(x.symbol_part)
    return a, -b, max(la, lb)


def nabla_two(index: int, e_form: EForm, symbol_form: EForm) -> tuple:
    """nabla on the psi_2 side: e (x) w -> (nabla~ e) (x) w + e (x) dw."""
    return e_form.d(), e_form - symbol_form.d()


def coefficient_homotopy(phi: PhiMap, index: int, g: MwForm, kappa: int) -> tuple:
    """(L^E nabla + nabla L^E)(e (x) phi(g)): returns (e-part, symbol part, loss)."""
    x = CoefficientElement(index, phi.form(g), DPrimeElement.zero(phi.p, phi.nvars))
    a1, b1, l1 = L_E_operator(x.connection())
    a0, b0, l0 = L_E_operator(x)
    a2, b2 = nabla_two(index, a0, b0)
    scale = phi.p ** kappa
    return (a1 + a2).scale(scale), (b1 + b2).scale(scale), max(l0, l1)


def check_coefficient_homotopy(
    F1: FrobeniusLift,
    F2: FrobeniusLift,
    Mt: MwConnection,
    generators: list,
    kappa: int,
    N: int | None = None,
    report: HomotopyReport | None = None,
) -> HomotopyReport:
    """Residuals of L^E nabla + nabla L^E - p^kappa (psi_2 - psi_1) on e_i (x) g."""
    require_integrable(Mt)
    phi = build_interpolation(F1, F2, N)
    p, N = phi.p, phi.N
    if report is None:
        report = HomotopyReport(p, N, kappa, specializations_ok=phi.specializations_ok())
    for i in range(Mt.rank):
        for g in generators:
            e_part, symbol, loss = coefficient_homotopy(phi, i, g, kappa)
            rhs = (t_f_on_forms(phi.L2, g) - t_f_on_forms(phi.L1, g)).scale(p ** kappa)
            r = _residual(phi, e_part, rhs, loss, f"e{i}*({g.to_text()})", N - 1)
            if not symbol.is_zero():
                r.vanishes = False
                r.residual = f"symbol part {symbol!r}"
            report.coefficient_residuals.append(r)
    return report
