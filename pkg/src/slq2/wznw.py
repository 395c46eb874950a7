"""Spacetime-derivative extension of the calculus and the WZNW data.

The group presentation is extended with even generators d0X, d1X, the two
worldsheet derivatives of each parameter.  Exchange rules between a
derivative and a parameter copy the corresponding differential rules
coefficient for coefficient.  No exchange rules between two derivatives are
imposed: the obvious candidate (the differential coefficients with flipped
sign) is provably not confluent against the parameter rules, see
``flipped_exchange_system``.  Normal forms therefore carry all parameters on
the left and the derivative pair in the order the computation produced,
which is also how the reference tables display their entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .coeff import ONE, QRat, ZERO, q_number, qnum, qp
from .group import (
    DFM, DFP, DR, FM, FP, R, RI,
    FormMatrix, c, cartan_form, group_system, q_trace, w,
)
from .ncalg import Generator, NCExpr, RewriteSystem

MU = (0, 1)
DZ = ("dz0", "dz1")

COORDS = (R, FM, FP)  # background-table index order

_D_OF = {FM: DFM, FP: DFP, R: DR}
_UNDIFF = {DFM: FM, DFP: FP, DR: R}


def dgen(mu: int, name: str) -> str:
    return f"d{mu}{name}"


def _partial_image(expr: NCExpr, mu: int) -> NCExpr:
    """Rename each differential letter dX -> dmuX inside a 1-form word."""
    mapping = {DFM: dgen(mu, FM), DFP: dgen(mu, FP), DR: dgen(mu, R)}
    return expr.map_generators(mapping)


def _derivative_generators(with_dz: bool) -> list[Generator]:
    gens = [
        Generator(FM, 0, 0, 1),
        Generator(FP, 0, 1, 1),
        Generator(R, 0, 2, 1),
        Generator(RI, 0, 3, 1),
        Generator(dgen(0, FM), 0, 4, 1),
        Generator(dgen(1, FM), 0, 5, 1),
        Generator(dgen(0, FP), 0, 6, 4),
        Generator(dgen(1, FP), 0, 7, 4),
        Generator(dgen(0, R), 0, 8, 4),
        Generator(dgen(1, R), 0, 9, 4),
    ]
    if with_dz:
        gens += [Generator(DZ[0], 1, 10, 1), Generator(DZ[1], 1, 11, 1)]
    return gens


def _parameter_rules(with_dz: bool) -> dict[tuple[str, str], NCExpr]:
    group = group_system()
    rules: dict[tuple[str, str], NCExpr] = {}
    for (a, b), rhs in group.rules.items():
        a_odd, b_odd = group.parity[a], group.parity[b]
        if not a_odd and not b_odd:
            rules[(a, b)] = rhs
        elif a_odd and not b_odd:
            for mu in MU:
                rules[(dgen(mu, _UNDIFF[a]), b)] = _partial_image(rhs, mu)
    if with_dz:
        evens = [FM, FP, R, RI] + [dgen(mu, x) for x in (FM, FP, R) for mu in MU]
        for dz in DZ:
            for name in evens:
                rules[(dz, name)] = w(name, dz)
        rules[(DZ[1], DZ[0])] = c(-ONE, DZ[0], DZ[1])
    return rules


@lru_cache(maxsize=None)
def derivative_system(with_dz: bool = False) -> RewriteSystem:
    rs = RewriteSystem(
        _derivative_generators(with_dz),
        _parameter_rules(with_dz),
        nilpotent=set(DZ) if with_dz else set(),
        name="slq2-derivative" + ("-dz" if with_dz else ""),
    )
    return rs


@lru_cache(maxsize=None)
def flipped_exchange_system() -> RewriteSystem:
    """Derivative system extended with sign-flipped derivative exchanges.

    Kept as a demonstration object: the confluence probe exhibits witness
    words on which this system is not locally confluent, which is why the
    production system above imposes no derivative-derivative rules.
    """
    rules = _parameter_rules(False)
    group = group_system()
    gens = _derivative_generators(False)
    index = {g.name: g.index for g in gens}
    for (a, b), rhs in group.rules.items():
        if not (group.parity[a] and group.parity[b]):
            continue
        for mu in MU:
            for nu in MU:
                lhs = (dgen(mu, _UNDIFF[a]), dgen(nu, _UNDIFF[b]))
                if index[lhs[0]] <= index[lhs[1]]:
                    continue
                out = NCExpr.zero()
                for word, coeff in rhs.terms.items():
                    odd = [i for i, g in enumerate(word) if g in _UNDIFF]
                    new = list(word)
                    new[odd[0]] = dgen(nu, _UNDIFF[word[odd[0]]])
                    new[odd[1]] = dgen(mu, _UNDIFF[word[odd[1]]])
                    out = out + NCExpr.word(*new, coeff=-coeff)
                rules[lhs] = out
    for x in (FM, R):
        rules[(dgen(1, x), dgen(0, x))] = w(dgen(0, x), dgen(1, x))
    return RewriteSystem(
        gens, rules, name="slq2-derivative-flipped"
    )


def partial_matrix(m: FormMatrix, mu: int) -> FormMatrix:
    return m.map(lambda e: _partial_image(e, mu))


# -- kinetic term --------------------------------------------------------------


def wznw_kinetic(signature: tuple[int, int] = (1, 1)) -> NCExpr:
    """Sum over mu of Tr_q(w_mu w_mu) in normal form."""
    rs = derivative_system()
    om = cartan_form()
    total = NCExpr.zero()
    for mu, s in zip(MU, signature):
        om_mu = partial_matrix(om, mu)
        sq = om_mu.mul(om_mu, rs)
        total = total + q_trace(sq, rs).scaled(QRat.from_int(s))
    return rs.reduce(total)


def kinetic_reference(signature: tuple[int, int] = (1, 1)) -> NCExpr:
    """The closed four-group form of the kinetic density."""
    rs = derivative_system()
    q5n2 = qp(5) * q_number(2)
    total = NCExpr.zero()
    for mu, s in zip(MU, signature):
        dr_, dfm_, dfp_ = dgen(mu, R), dgen(mu, FM), dgen(mu, FP)
        t = (
            c(q5n2, RI, RI, dr_, dr_)
            + c(q5n2, RI, FP, dfm_, dr_)
            + c(q5n2 * qp(-1), RI, FP, dr_, dfm_)
            + w(dfm_, dfp_)
            + c(qp(2), dfp_, dfm_)
            + c(-(qp(2) * qnum({4: 1, 0: -1})), FP, FP, dfm_, dfm_)
        )
        total = total + t.scaled(QRat.from_int(s))
    return rs.reduce(total)


# -- 3-form sector -------------------------------------------------------------


def wz_three_form() -> tuple[NCExpr, NCExpr]:
    """(Tr_q(w w w), d(r^-1 dr df- f+)), both in normal form."""
    rs = group_system()
    om = cartan_form()
    cube = om.mul(om, rs).mul(om, rs)
    three = q_trace(cube, rs)
    boundary = rs.reduce(w(RI, DR, DFM, FP))
    total_derivative = rs.differential(boundary)
    return three, total_derivative


def solve_scalar_ratio(a: NCExpr, b: NCExpr) -> QRat | None:
    """The scalar s with a == s*b, if it exists (None otherwise)."""
    if b.is_zero():
        return None if a else ZERO
    word, coeff = next(iter(b.terms.items()))
    s = a.terms.get(word, ZERO) / coeff
    probe = a - b.scaled(s)
    return s if probe.is_zero() else None


def wz_reference_scalar() -> QRat:
    return qp(1) * q_number(2) * q_number(3)


# -- background tables ---------------------------------------------------------


@dataclass
class MetricTable:
    """3x3 coefficient tables over the coordinates (r, f-, f+).

    Entries are expressions in the group parameters; the derivative pair of
    entry (A, B) is read in the order A then B.
    """

    g: dict[tuple[str, str], NCExpr] = field(default_factory=dict)
    b: dict[tuple[str, str], NCExpr] = field(default_factory=dict)

    def g_entry(self, a: str, bb: str) -> NCExpr:
        return self.g.get((a, bb), NCExpr.zero())

    def b_entry(self, a: str, bb: str) -> NCExpr:
        return self.b.get((a, bb), NCExpr.zero())

    def to_json_dict(self) -> dict:
        rs = group_system()
        return {
            "coords": list(COORDS),
            "G": {f"{a},{b}": rs.render(self.g_entry(a, b)) for a in COORDS for b in COORDS},
            "B": {f"{a},{b}": rs.render(self.b_entry(a, b)) for a in COORDS for b in COORDS},
        }


def _coord_of(dname: str) -> tuple[str, int]:
    mu = int(dname[1])
    return dname[2:], mu


def extract_backgrounds() -> MetricTable:
    rs = derivative_system()
    om = cartan_form()
    table = MetricTable()

    # G: bucket the kinetic normal form by its trailing derivative pair
    per_mu: dict[tuple[str, str], dict[int, NCExpr]] = {}
    for mu in MU:
        om_mu = partial_matrix(om, mu)
        sq = om_mu.mul(om_mu, rs)
        kin = q_trace(sq, rs)
        for word, coeff in kin.terms.items():
            dpos = [i for i, g in enumerate(word) if g.startswith("d")]
            assert len(dpos) == 2 and dpos[1] == len(word) - 1, word
            a, mu_a = _coord_of(word[dpos[0]])
            b, mu_b = _coord_of(word[dpos[1]])
            assert mu_a == mu_b == mu
            prefix = NCExpr.word(*word[: dpos[0]], coeff=coeff)
            bucket = per_mu.setdefault((a, b), {})
            bucket[mu] = bucket.get(mu, NCExpr.zero()) + prefix
    for pair, by_mu in per_mu.items():
        e0 = by_mu.get(0, NCExpr.zero())
        e1 = by_mu.get(1, NCExpr.zero())
        if e0 - e1:
            raise AssertionError(f"kinetic term not diagonal in mu at {pair}")
        table.g[pair] = e0

    # B: the boundary 2-form scaled by c/6, reduced without reordering the
    # differential pair, then antisymmetrized over the table indices
    three, total_derivative = wz_three_form()
    scalar = solve_scalar_ratio(three, total_derivative)
    if scalar is None:
        raise AssertionError("3-form is not proportional to the total derivative")
    group = group_system()
    positional = group.restricted(
        lambda lhs, rhs: not (group.parity[lhs[0]] and group.parity[lhs[1]])
        or lhs[0] == lhs[1],
        name="slq2-group-positional",
    )
    boundary = positional.reduce(
        w(RI, DR, DFM, FP).scaled(scalar / QRat.from_int(6))
    )
    for word, coeff in boundary.terms.items():
        dpos = [i for i, g in enumerate(word) if g in _UNDIFF]
        assert len(dpos) == 2
        a = _UNDIFF[word[dpos[0]]]
        b = _UNDIFF[word[dpos[1]]]
        prefix = NCExpr.word(*word[: dpos[0]], coeff=coeff)
        table.b[(a, b)] = table.b.get((a, b), NCExpr.zero()) + prefix
        table.b[(b, a)] = table.b.get((b, a), NCExpr.zero()) - prefix
    return table


def g_reference() -> dict[tuple[str, str], NCExpr]:
    """The printed background-metric table, normal-ordered."""
    rs = group_system()
    q4n2 = qp(4) * q_number(2)
    q5n2 = qp(5) * q_number(2)
    return {
        (R, R): rs.reduce(c(q5n2, RI, RI)),
        (R, FM): rs.reduce(c(q4n2, RI, FP)),
        (FM, R): rs.reduce(c(q5n2, RI, FP)),
        (FM, FM): rs.reduce(c(-(qp(2) * qnum({4: 1, 0: -1})), FP, FP)),
        (FM, FP): NCExpr.one(),
        (FP, FM): NCExpr.scalar(qp(2)),
    }


def b_reference() -> dict[tuple[str, str], NCExpr]:
    rs = group_system()
    coeff = qp(3) * q_number(2) * q_number(3) / QRat.from_int(6)
    entry = rs.reduce(c(coeff, FP, RI))
    return {(R, FM): entry, (FM, R): entry.scaled(-ONE)}


def reassemble_kinetic(table: MetricTable) -> NCExpr:
    """Rebuild sum G_AB dmuA dmuB and reduce with the derivative system."""
    rs = derivative_system()
    total = NCExpr.zero()
    for (a, b), coeff in table.g.items():
        for mu in MU:
            total = total + coeff * w(dgen(mu, a), dgen(mu, b))
    return rs.reduce(total)


# -- dz-contraction consistency ------------------------------------------------


def dz_contraction_residuals() -> dict[tuple[str, str], NCExpr]:
    """Contract every derivative-parameter rule against dX = sum dmuX dz^mu.

    Each rule family (d0X Y, d1X Y) must reassemble to the image of the
    corresponding differential rule once both are multiplied into the odd
    central symbols; the residuals below must all vanish.
    """
    group = group_system()
    rsz = derivative_system(with_dz=True)

    def contract(e: NCExpr) -> NCExpr:
        total = NCExpr.zero()
        for word, coeff in e.terms.items():
            prod = NCExpr.scalar(coeff)
            for g in word:
                if g in _UNDIFF:
                    x = _UNDIFF[g]
                    prod = prod * (w(dgen(0, x), DZ[0]) + w(dgen(1, x), DZ[1]))
                else:
                    prod = prod * w(g)
            total = total + prod
        return rsz.reduce(total)

    out = {}
    for (a, b), rhs in group.rules.items():
        if group.parity[a] and not group.parity[b]:
            out[(a, b)] = contract(NCExpr.word(a, b) - rhs)
    return out
