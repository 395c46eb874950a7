"""The q-deformed SL(2,R) presentation in Gauss coordinates.

Generators, in canonical order: f- < f+ < r < r^-1 < df- < df+ < dr, with the
f/r letters even and the d-letters odd.  The exchange rules orient every
relation of the calculus so that normal forms carry the group parameters on
the left, sorted, followed by sorted differentials.

The inverse parameter r^-1 is a first-class generator; its exchange rules are
the conjugates of the r rules, and r r^-1 -> 1 in both orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .coeff import ONE, QRat, ZERO, qnum, qp
from .ncalg import Generator, NCExpr, RewriteSystem

FM, FP, R, RI = "f-", "f+", "r", "r^-1"
DFM, DFP, DR = "df-", "df+", "dr"

GROUP_EVEN = (FM, FP, R, RI)
GROUP_ODD = (DFM, DFP, DR)


def w(*names: str) -> NCExpr:
    return NCExpr.word(*names)


def c(coeff: QRat, *names: str) -> NCExpr:
    return NCExpr.word(*names, coeff=coeff)


def _group_rules() -> dict[tuple[str, str], NCExpr]:
    q2m1 = qnum({2: 1, 0: -1})     # q^2 - 1
    q4m1 = qnum({4: 1, 0: -1})     # q^4 - 1
    return {
        # even-even exchanges
        (FP, FM): c(qp(-2), FM, FP),
        (R, FM): c(qp(1), FM, R),
        (R, FP): c(qp(1), FP, R),
        (RI, FM): c(qp(-1), FM, RI),
        (RI, FP): c(qp(-1), FP, RI),
        (R, RI): NCExpr.one(),
        (RI, R): NCExpr.one(),
        # differential past parameter
        (DFM, FM): c(qp(2), FM, DFM),
        (DFM, FP): c(qp(2), FP, DFM),
        (DFM, R): c(qp(-1), R, DFM),
        (DFM, RI): c(qp(1), RI, DFM),
        (DFP, FM): c(qp(-2), FM, DFP),
        (DFP, FP): c(qp(-2), FP, DFP) + c(q4m1, FP, FP, FP, DFM),
        (DFP, R): c(qp(-1), R, DFP) + c(-(qp(1) * q2m1), FP, FP, R, DFM),
        (DFP, RI): c(qp(1), RI, DFP) + c(qp(1) * q2m1, FP, FP, RI, DFM),
        (DR, FM): c(qp(1), FM, DR),
        (DR, FP): c(qp(1), FP, DR) + c(-(qp(2) * q2m1), FP, FP, R, DFM),
        (DR, R): c(qp(-2), R, DR),
        (DR, RI): c(qp(2), RI, DR),
        # differential-differential exchanges
        (DFP, DFM): c(-qp(-2), DFM, DFP),
        (DR, DFM): c(-qp(1), DFM, DR),
        # (df+)^2 is not nilpotent: the square is forced by requiring the
        # exterior differential to be compatible with the df+ f+ exchange.
        (DFP, DFP): c(qnum({6: 1, 0: -1}) * qp(-4), FP, FP, DFM, DFP),
        # The sign of the last term is forced by local confluence of the
        # dr df+ f+ overlap; see the mixed-pair resolution note in the README.
        (DR, DFP): (
            c(-qp(1), DFP, DR)
            + c(-(qp(3) * q2m1), FP, FP, DFM, DR)
            + c(-(q4m1 * qp(-3)), FP, R, DFM, DFP)
        ),
    }


@lru_cache(maxsize=None)
def group_system() -> RewriteSystem:
    """The full group presentation with its exterior differential."""
    gens = [
        Generator(FM, 0, 0, 1),
        Generator(FP, 0, 1, 1),
        Generator(R, 0, 2, 1),
        Generator(RI, 0, 3, 1),
        Generator(DFM, 1, 4, 1),
        Generator(DFP, 1, 5, 4),
        Generator(DR, 1, 6, 4),
    ]
    rs = RewriteSystem(
        gens,
        _group_rules(),
        nilpotent={DFM, DR},
        name="slq2-group",
    )
    dmap = {
        FM: w(DFM),
        FP: w(DFP),
        R: w(DR),
        RI: rs.reduce(c(-ONE, RI, DR, RI)),
        DFM: NCExpr.zero(),
        DFP: NCExpr.zero(),
        DR: NCExpr.zero(),
    }
    rs.dmap = dmap
    return rs


@lru_cache(maxsize=None)
def doubled_system() -> RewriteSystem:
    """The group presentation doubled with a primed commuting copy.

    Primed generators satisfy the same relations among themselves; every
    cross pair of an unprimed and a primed letter commutes, which is the
    stated multiplication rule for two independent group elements.  Primed
    letters carry no differentials (they parametrize a constant element).
    """
    base = group_system()
    prime = {g: g + "'" for g in GROUP_EVEN}
    gens = [
        Generator(FM, 0, 0, 1),
        Generator(FP, 0, 1, 1),
        Generator(R, 0, 2, 1),
        Generator(RI, 0, 3, 1),
        Generator(prime[FM], 0, 4, 1),
        Generator(prime[FP], 0, 5, 1),
        Generator(prime[R], 0, 6, 1),
        Generator(prime[RI], 0, 7, 1),
        Generator(DFM, 1, 8, 1),
        Generator(DFP, 1, 9, 4),
        Generator(DR, 1, 10, 4),
    ]
    rules = dict(_group_rules())
    # primed copy of the even-even rules
    for (a, b), rhs in _group_rules().items():
        if a in prime and b in prime:
            rules[(prime[a], prime[b])] = rhs.map_generators(prime)
    # cross relations: primed letters commute with everything unprimed
    for p in prime.values():
        for u in GROUP_EVEN:
            rules[(p, u)] = w(u, p)
        for d in GROUP_ODD:
            rules[(d, p)] = w(p, d)
    rs = RewriteSystem(gens, rules, nilpotent={DFM, DR}, name="slq2-group-doubled")
    dmap = {
        FM: w(DFM),
        FP: w(DFP),
        R: w(DR),
        RI: rs.reduce(c(-ONE, RI, DR, RI)),
        DFM: NCExpr.zero(),
        DFP: NCExpr.zero(),
        DR: NCExpr.zero(),
    }
    for p in prime.values():
        dmap[p] = NCExpr.zero()
    rs.dmap = dmap
    return rs


# -- 2x2 matrices over the algebra --------------------------------------------


@dataclass(frozen=True)
class FormMatrix:
    """2x2 matrix with expression entries (mixed form degree allowed)."""

    a1: NCExpr  # top-left
    a2: NCExpr  # top-right
    a3: NCExpr  # bottom-left
    a4: NCExpr  # bottom-right

    @staticmethod
    def identity() -> "FormMatrix":
        return FormMatrix(NCExpr.one(), NCExpr.zero(), NCExpr.zero(), NCExpr.one())

    @staticmethod
    def diag(a: NCExpr, d: NCExpr) -> "FormMatrix":
        return FormMatrix(a, NCExpr.zero(), NCExpr.zero(), d)

    def entries(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def map(self, fn) -> "FormMatrix":
        return FormMatrix(fn(self.a1), fn(self.a2), fn(self.a3), fn(self.a4))

    def reduced(self, rs: RewriteSystem) -> "FormMatrix":
        return self.map(rs.reduce)

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        return FormMatrix(
            self.a1 + other.a1, self.a2 + other.a2,
            self.a3 + other.a3, self.a4 + other.a4,
        )

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return self + other.map(lambda e: -e)

    def scaled(self, coeff: QRat) -> "FormMatrix":
        return self.map(lambda e: e.scaled(coeff))

    def mul(self, other: "FormMatrix", rs: RewriteSystem) -> "FormMatrix":
        return FormMatrix(
            rs.reduce(self.a1 * other.a1 + self.a2 * other.a3),
            rs.reduce(self.a1 * other.a2 + self.a2 * other.a4),
            rs.reduce(self.a3 * other.a1 + self.a4 * other.a3),
            rs.reduce(self.a3 * other.a2 + self.a4 * other.a4),
        )

    def left_diag_mul(self, top: QRat, bottom: QRat) -> "FormMatrix":
        """Entrywise left multiplication by diag(top, bottom)."""
        return FormMatrix(
            self.a1.scaled(top), self.a2.scaled(top),
            self.a3.scaled(bottom), self.a4.scaled(bottom),
        )

    def derived(self, rs: RewriteSystem, dmap=None) -> "FormMatrix":
        dm = rs.dmap if dmap is None else dmap
        return self.map(lambda e: rs.derivation(e, dm))

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())


def q_det(m: FormMatrix, rs: RewriteSystem) -> NCExpr:
    """The quantum determinant a1*a4 - q a2*a3."""
    return rs.reduce(m.a1 * m.a4 - (m.a2 * m.a3).scaled(qp(1)))


def q_trace(m: FormMatrix, rs: RewriteSystem) -> NCExpr:
    """The quantum trace q^2 a1 + a4, invariant under group conjugation."""
    return rs.reduce(m.a1.scaled(qp(2)) + m.a4)


# -- the Gauss element, its inverse and the left-invariant forms --------------


def gauss_factors(primed: bool = False):
    s = "'" if primed else ""
    lower = FormMatrix(NCExpr.one(), w(FM + s), NCExpr.zero(), NCExpr.one())
    upper = FormMatrix(NCExpr.one(), NCExpr.zero(), w(FP + s), NCExpr.one())
    diag = FormMatrix.diag(w(R + s), w(RI + s))
    return lower, upper, diag


def gauss_matrix(rs: RewriteSystem | None = None, primed: bool = False) -> FormMatrix:
    rs = rs or group_system()
    lower, upper, diag = gauss_factors(primed)
    return lower.mul(upper, rs).mul(diag, rs)


def gauss_inverse(rs: RewriteSystem | None = None, primed: bool = False) -> FormMatrix:
    """Inverse from the factorization: diag^-1 * upper^-1 * lower^-1.

    The postcondition g^-1 g = g g^-1 = 1 is re-checked on every call; a
    failure would mean the presentation itself is inconsistent.
    """
    rs = rs or group_system()
    s = "'" if primed else ""
    lower_inv = FormMatrix(NCExpr.one(), c(-ONE, FM + s), NCExpr.zero(), NCExpr.one())
    upper_inv = FormMatrix(NCExpr.one(), NCExpr.zero(), c(-ONE, FP + s), NCExpr.one())
    diag_inv = FormMatrix.diag(w(RI + s), w(R + s))
    inv = diag_inv.mul(upper_inv, rs).mul(lower_inv, rs)
    g = gauss_matrix(rs, primed)
    for prod in (inv.mul(g, rs), g.mul(inv, rs)):
        if (prod - FormMatrix.identity()).reduced(rs).is_zero() is False:
            raise AssertionError("Gauss inverse postcondition failed")
    return inv


def cartan_form(rs: RewriteSystem | None = None) -> FormMatrix:
    """The left-invariant form g^-1 dg, entries in normal form."""
    rs = rs or group_system()
    g = gauss_matrix(rs)
    dg = g.derived(rs)
    return gauss_inverse(rs).mul(dg, rs)


def cartan_targets() -> FormMatrix:
    """Closed forms of the four entries of g^-1 dg."""
    q5 = qp(5)
    omega1 = w(RI, DR) + w(FP, DFM)
    omega2 = c(qp(1), RI, RI, DFM)
    omega3 = c(qp(-1), R, R, DFP) + c(-q5, FP, FP, R, R, DFM)
    omega4 = omega1.scaled(-qp(2))
    return FormMatrix(omega1, omega2, omega3, omega4)


def substitute_zero(e: NCExpr, names=(FM, FP)) -> NCExpr:
    """Evaluate at vanishing coset coordinates (word filter, then reduce)."""
    return group_system().reduce(e.without_generators(names))
