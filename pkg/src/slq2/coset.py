"""Coset split k^-1 dk = omega + theta, the three subgroup choices, their
sigma-model Lagrangians and Maurer-Cartan structure equations.

The coset presentation drops r entirely: only f-, f+ and their differentials
remain, with the same exchange coefficients as in the full group.  Each split
is defined by its diagonal subgroup part theta; omega is k^-1 dk - theta,
which keeps the split identity true by construction, and the printed omega
entries are compared against that as a separate (informational) check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .coeff import ONE, QRat, ZERO, q_number, qnum, qp
from .group import DFM, DFP, FM, FP, FormMatrix, c, w
from .ncalg import Generator, NCExpr, RewriteSystem

EX1, EX2, EX3 = 1, 2, 3


@lru_cache(maxsize=None)
def coset_system() -> RewriteSystem:
    q4m1 = qnum({4: 1, 0: -1})
    gens = [
        Generator(FM, 0, 0, 1),
        Generator(FP, 0, 1, 1),
        Generator(DFM, 1, 2, 1),
        Generator(DFP, 1, 3, 4),
    ]
    rules = {
        (FP, FM): c(qp(-2), FM, FP),
        (DFM, FM): c(qp(2), FM, DFM),
        (DFM, FP): c(qp(2), FP, DFM),
        (DFP, FM): c(qp(-2), FM, DFP),
        (DFP, FP): c(qp(-2), FP, DFP) + c(q4m1, FP, FP, FP, DFM),
        (DFP, DFM): c(-qp(-2), DFM, DFP),
        (DFP, DFP): c(qnum({6: 1, 0: -1}) * qp(-4), FP, FP, DFM, DFP),
    }
    rs = RewriteSystem(gens, rules, nilpotent={DFM}, name="slq2-coset")
    rs.dmap = {FM: w(DFM), FP: w(DFP), DFM: NCExpr.zero(), DFP: NCExpr.zero()}
    return rs


def dgen(mu: int, name: str) -> str:
    return f"d{mu}{name}"


@lru_cache(maxsize=None)
def coset_derivative_system() -> RewriteSystem:
    """Worldsheet-derivative extension of the coset presentation.

    As in the full derivative system, only derivative-parameter exchanges are
    imposed; derivative pairs stay in the order a computation produces."""
    base = coset_system()
    gens = [
        Generator(FM, 0, 0, 1),
        Generator(FP, 0, 1, 1),
        Generator(dgen(0, FM), 0, 2, 1),
        Generator(dgen(1, FM), 0, 3, 1),
        Generator(dgen(0, FP), 0, 4, 4),
        Generator(dgen(1, FP), 0, 5, 4),
    ]
    mapping = lambda mu: {DFM: dgen(mu, FM), DFP: dgen(mu, FP)}
    rules: dict[tuple[str, str], NCExpr] = {(FP, FM): c(qp(-2), FM, FP)}
    for (a, b), rhs in base.rules.items():
        if base.parity[a] and not base.parity[b]:
            for mu in (0, 1):
                rules[(mapping(mu)[a], b)] = rhs.map_generators(mapping(mu))
    return RewriteSystem(gens, rules, name="slq2-coset-derivative")


def coset_cartan() -> FormMatrix:
    """k^-1 dk for the unipotent coset element, entries in normal form."""
    rs = coset_system()
    k = FormMatrix(
        NCExpr.one() + w(FM, FP), w(FM),
        w(FP), NCExpr.one(),
    )
    k_inv = FormMatrix(
        NCExpr.one(), c(-ONE, FM),
        c(-ONE, FP), NCExpr.one() + w(FP, FM),
    )
    for prod in (k_inv.mul(k, rs), k.mul(k_inv, rs)):
        if not (prod - FormMatrix.identity()).reduced(rs).is_zero():
            raise AssertionError("coset element inverse postcondition failed")
    dk = k.derived(rs)
    return k_inv.mul(dk, rs)


def coset_cartan_reference() -> FormMatrix:
    return FormMatrix(
        c(qp(2), FP, DFM), w(DFM),
        w(DFP) + c(-qp(2), FP, FP, DFM), c(-ONE, FP, DFM),
    )


@dataclass(frozen=True)
class CosetSplit:
    example: int
    omega: FormMatrix
    theta: FormMatrix
    printed_omega_11: NCExpr  # how the reference prints the (1,1) entry


def _theta(example: int) -> FormMatrix:
    base = w(FP, DFM)
    if example == EX1:
        return FormMatrix.diag(base, base.scaled(-ONE))
    if example == EX2:
        return FormMatrix.diag(base.scaled(qp(2)), base.scaled(-ONE))
    if example == EX3:
        return FormMatrix.diag(base.scaled(qp(-2)), base.scaled(-ONE))
    raise ValueError(f"unknown example {example}")


def make_split(example: int) -> CosetSplit:
    rs = coset_system()
    theta = _theta(example)
    omega = (coset_cartan() - theta).reduced(rs)
    printed_11 = {
        EX1: c(qnum({2: 1, 0: -1}), FP, DFM),
        EX2: NCExpr.zero(),
        EX3: c(qnum({2: 1, 0: -1}) * qp(-2), FP, DFM),
    }[example]
    return CosetSplit(example, omega, theta, printed_11)


# -- Lagrangians ---------------------------------------------------------------


def collapse_phi_pairs(e: NCExpr) -> NCExpr:
    """Sort the trailing derivative pair of each word into canonical order.

    Uses the pure exchange df+ df- -> -q^-2 df- df+ with the sign flipped for
    even derivatives, i.e. dmuf+ dnuf- -> q^-2 dnuf- dmuf+.  This is the
    display convention under which the reference kinetic form is stated; it
    is a basis change on the two-derivative sector, not a ring rule.
    """
    out = NCExpr.zero()
    for word, coeff in e.terms.items():
        dpos = [i for i, g in enumerate(word) if g.startswith("d")]
        assert len(dpos) == 2 and dpos[1] == len(word) - 1, word
        a, b = word[dpos[0]], word[dpos[1]]
        if a[2:] == FP and b[2:] == FM:
            new = word[: dpos[0]] + (b, a)
            out = out + NCExpr.word(*new, coeff=coeff * qp(-2))
        else:
            out = out + NCExpr.word(*word, coeff=coeff)
    return out


@dataclass
class CosetLagrangian:
    example: int
    density: NCExpr              # 1/2 Tr_q(w_mu w^mu), positional normal form
    kinetic_scale: QRat          # engine kinetic / reference kinetic
    c_engine: QRat               # raw coefficient of -f+^2 df- df- in density
    c_normalized: QRat           # c_engine / kinetic_scale
    kinetic_is_reference_ray: bool


def kinetic_reference_coeff() -> QRat:
    """Collapsed coefficient of df- df+ in the reference kinetic form."""
    return (qp(4) + ONE) / (QRat.from_int(2) * qp(4))


def coset_lagrangian(split: CosetSplit) -> CosetLagrangian:
    rs = coset_derivative_system()
    half = ONE / QRat.from_int(2)
    total = NCExpr.zero()
    for mu in (0, 1):
        mapping = {DFM: dgen(mu, FM), DFP: dgen(mu, FP)}
        om = split.omega.map(lambda e: e.map_generators(mapping))
        sq = om.mul(om, rs)
        total = total + rs.reduce(sq.a1.scaled(qp(2)) + sq.a4)
    density = rs.reduce(total.scaled(half))
    collapsed = collapse_phi_pairs(density)

    kin0 = collapsed.coefficient(dgen(0, FM), dgen(0, FP))
    kin1 = collapsed.coefficient(dgen(1, FM), dgen(1, FP))
    assert kin0 == kin1
    c0 = collapsed.coefficient(FP, FP, dgen(0, FM), dgen(0, FM))
    c1 = collapsed.coefficient(FP, FP, dgen(1, FM), dgen(1, FM))
    assert c0 == c1
    leftover = collapsed - NCExpr(
        {
            (dgen(mu, FM), dgen(mu, FP)): kin0
            for mu in (0, 1)
        }
    ) - NCExpr(
        {
            (FP, FP, dgen(mu, FM), dgen(mu, FM)): c0
            for mu in (0, 1)
        }
    )
    scale = kin0 / kinetic_reference_coeff()
    return CosetLagrangian(
        example=split.example,
        density=density,
        kinetic_scale=scale,
        c_engine=-c0,
        c_normalized=(-c0) / scale,
        kinetic_is_reference_ray=leftover.is_zero(),
    )


def c_reference(example: int) -> QRat:
    two = QRat.from_int(2)
    if example == EX1:
        return qnum({4: 2, 2: -1, 0: 1}) / two
    if example == EX2:
        return (qp(6) + ONE) / QRat.from_int(4)
    if example == EX3:
        return qnum({4: 2, 2: -1, 0: 1}) / (two * qp(2))
    raise ValueError(f"unknown example {example}")


# -- Maurer-Cartan structure equations -----------------------------------------


@dataclass
class StructureEquation:
    name: str
    residual: FormMatrix

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()


def _mc_equations(split: CosetSplit, corrected: bool) -> list[StructureEquation]:
    rs = coset_system()
    om, th = split.omega, split.theta
    d_om = om.derived(rs)
    d_th = th.derived(rs)
    omom = om.mul(om, rs)
    omth = om.mul(th, rs)
    thom = th.mul(om, rs)
    n2 = q_number(2)
    zero = QRat.from_int(0)

    if split.example == EX1:
        dth_rhs = omom.left_diag_mul(-qp(-2), -ONE) + omth.scaled(qnum({2: 1, 0: -1}))
        dom_rhs = omom.left_diag_mul(-(qnum({2: 1, 0: -1}) * qp(-2)), zero) + omth.scaled(-(qp(3) * n2))
        exchange = qp(4)
    elif split.example == EX2:
        dth_rhs = omom.scaled(-ONE)
        dom_rhs = omth.scaled(-ONE) + thom.scaled(-ONE)
        exchange = qp(2)
    else:
        dth_rhs = omom.left_diag_mul(-qp(-4), -ONE) + omth.scaled(qnum({4: 1, 0: -1}))
        coeff = qp(5) if corrected else qp(4)
        dom_rhs = omom.left_diag_mul(-(qnum({4: 1, 0: -1}) * qp(-4)), zero) + omth.scaled(-(coeff * n2))
        exchange = qp(6)

    return [
        StructureEquation("dtheta", (d_th - dth_rhs).reduced(rs)),
        StructureEquation("domega", (d_om - dom_rhs).reduced(rs)),
        StructureEquation("exchange", (thom - omth.scaled(exchange)).reduced(rs)),
    ]


def verify_maurer_cartan(split: CosetSplit, corrected: bool = False) -> list[StructureEquation]:
    """Residuals of the printed structure equations (corrected=True swaps in
    the confluence-consistent omega-theta coefficient for the third split)."""
    return _mc_equations(split, corrected)


def verify_coset_form_crs() -> dict[str, NCExpr]:
    """Exchange relations between the component 1-forms of k^-1 dk."""
    rs = coset_system()
    k = coset_cartan()
    o1, o2, o3, o4 = k.entries()
    red = rs.reduce
    return {
        "w1w3+q^4w3w1": red(o1 * o3 + (o3 * o1).scaled(qp(4))),
        "w2w3+q^2w3w2": red(o2 * o3 + (o3 * o2).scaled(qp(2))),
        "w4w3+q^4w3w4": red(o4 * o3 + (o3 * o4).scaled(qp(4))),
    }
