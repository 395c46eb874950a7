"""Graded noncommutative polynomial algebra driven by an oriented rewrite
system.

Expressions are finite Q(q)-linear combinations of words in a fixed generator
alphabet.  A :class:`RewriteSystem` orients the exchange relations of a
presentation as rules ``(a, b) -> polynomial`` on adjacent out-of-order pairs;
exhaustive rewriting produces the normal-ordered form.  Termination is
guaranteed by checking, when the system is built, that every rule either
strictly drops the weighted degree or transposes one adjacent pair toward the
canonical order.
"""

from __future__ import annotations

import hashlib
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coeff import ONE, QRat, ZERO

Word = tuple[str, ...]

DEFAULT_STEP_BUDGET = int(os.environ.get("SLQ2_STEP_BUDGET", "1000000"))


class PresentationError(ValueError):
    """Malformed presentation: unknown generator or mis-oriented rule."""


class NonTerminationError(RuntimeError):
    """Rewrite step budget exhausted (mis-oriented rules, most likely)."""

    def __init__(self, word: Word, budget: int):
        self.word = word
        self.budget = budget
        super().__init__(f"step budget {budget} exhausted while reducing {''.join(word) or '1'}")


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int = 0  # 0 even, 1 odd (odd = 1-form / differential)
    index: int = 0   # position in the canonical total order
    weight: int = 1  # termination weight


class NCExpr:
    """Formal sum coefficient * word.  Zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, QRat] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "NCExpr":
        return NCExpr()

    @staticmethod
    def one() -> "NCExpr":
        return NCExpr({(): ONE})

    @staticmethod
    def scalar(c: QRat) -> "NCExpr":
        return NCExpr({(): c})

    @staticmethod
    def word(*names: str, coeff: QRat = ONE) -> "NCExpr":
        return NCExpr({tuple(names): coeff})

    # -- linear structure --------------------------------------------------

    def __add__(self, other: "NCExpr") -> "NCExpr":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCExpr(out)

    def __sub__(self, other: "NCExpr") -> "NCExpr":
        return self + (-other)

    def __neg__(self) -> "NCExpr":
        return NCExpr({w: -c for w, c in self.terms.items()})

    def scaled(self, c: QRat) -> "NCExpr":
        if not c:
            return NCExpr()
        return NCExpr({w: cc * c for w, cc in self.terms.items()})

    def __mul__(self, other: "NCExpr") -> "NCExpr":
        """Free (concatenation) product; no rewriting is applied."""
        out: dict[Word, QRat] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                s = out.get(w, ZERO) + ca * cb
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NCExpr(out)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, *names: str) -> QRat:
        return self.terms.get(tuple(names), ZERO)

    def filter_words(self, keep) -> "NCExpr":
        return NCExpr({w: c for w, c in self.terms.items() if keep(w)})

    def without_generators(self, names) -> "NCExpr":
        """Set the listed generators to zero (drop words containing them)."""
        names = set(names)
        return self.filter_words(lambda w: not names.intersection(w))

    def map_generators(self, mapping: dict[str, str]) -> "NCExpr":
        """Rename generators word-wise (an algebra map on free words)."""
        return NCExpr(
            {tuple(mapping.get(g, g) for g in w): c for w, c in self.terms.items()}
        )

    def map_coefficients(self, fn) -> "NCExpr":
        return NCExpr({w: fn(c) for w, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            bits.append(f"({self.terms[w]})*{'.'.join(w) or '1'}")
        return " + ".join(bits)


def _inversions(word: Word, index: dict[str, int]) -> int:
    count = 0
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if index[word[i]] > index[word[j]]:
                count += 1
    return count


class RewriteSystem:
    """A generator alphabet plus oriented two-letter rewrite rules.

    ``rules`` maps an adjacent pair ``(a, b)`` to its normal-ordered
    replacement.  ``nilpotent`` lists generators g with the extra rule
    ``g g -> 0``.  ``dmap`` optionally assigns to each generator the image of
    the exterior differential (or any other derivation used by default).
    """

    def __init__(
        self,
        generators: list[Generator],
        rules: dict[tuple[str, str], NCExpr],
        nilpotent: set[str] | frozenset[str] = frozenset(),
        dmap: dict[str, NCExpr] | None = None,
        *,
        name: str = "",
        check_orientation: bool = True,
        step_budget: int | None = None,
    ):
        self.name = name
        self.generators = list(generators)
        self.by_name = {g.name: g for g in generators}
        if len(self.by_name) != len(generators):
            raise PresentationError("duplicate generator names")
        self.index = {g.name: g.index for g in generators}
        if len(set(self.index.values())) != len(generators):
            raise PresentationError("order indices must be unique")
        self.parity = {g.name: g.parity for g in generators}
        self.weight = {g.name: g.weight for g in generators}
        self.rules = dict(rules)
        self.nilpotent = frozenset(nilpotent)
        self.dmap = dmap
        self.step_budget = DEFAULT_STEP_BUDGET if step_budget is None else step_budget
        self._validate(check_orientation)

    # -- construction-time checks -----------------------------------------

    def _validate(self, check_orientation: bool) -> None:
        for g in self.nilpotent:
            if g not in self.by_name:
                raise PresentationError(f"nilpotent generator {g!r} undeclared")
        for (a, b), rhs in self.rules.items():
            for g in (a, b):
                if g not in self.by_name:
                    raise PresentationError(f"rule generator {g!r} undeclared")
            for w in rhs.terms:
                for g in w:
                    if g not in self.by_name:
                        raise PresentationError(f"rule image generator {g!r} undeclared")
            if check_orientation:
                self._check_rule_orientation((a, b), rhs)

    def _check_rule_orientation(self, lhs: tuple[str, str], rhs: NCExpr) -> None:
        a, b = lhs
        lhs_weight = self.weight[a] + self.weight[b]
        lhs_inv = _inversions((a, b), self.index)
        for w in rhs.terms:
            w_weight = sum(self.weight[g] for g in w)
            if w_weight < lhs_weight:
                continue
            same_letters = len(w) == 2 and sorted(w) == sorted(lhs)
            if (
                w_weight == lhs_weight
                and same_letters
                and _inversions(w, self.index) < lhs_inv
            ):
                continue
            raise PresentationError(
                f"rule {a}{b} -> ... not decreasing in the termination order at word {w}"
            )

    # -- normal ordering ---------------------------------------------------

    def _redexes(self, word: Word) -> list[int]:
        out = []
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if (a, b) in self.rules or (a == b and a in self.nilpotent):
                out.append(i)
        return out

    def reduce(
        self,
        expr: NCExpr,
        *,
        budget: int | None = None,
        rng: random.Random | None = None,
        trace: list | None = None,
    ) -> NCExpr:
        """Exhaustive rewriting to the normal form.

        Deterministic (leftmost redex) unless ``rng`` supplies a strategy of
        random redex choices.  ``trace`` collects (word, position, pair)
        triples for every applied step.
        """
        budget = self.step_budget if budget is None else budget
        for w in expr.terms:
            for g in w:
                if g not in self.by_name:
                    raise PresentationError(f"generator {g!r} not in presentation")
        out: dict[Word, QRat] = {}
        stack: list[tuple[Word, QRat]] = list(expr.terms.items())
        steps = 0
        while stack:
            word, coef = stack.pop()
            positions = self._redexes(word)
            if not positions:
                s = out.get(word, ZERO) + coef
                if s:
                    out[word] = s
                else:
                    out.pop(word, None)
                continue
            steps += 1
            if steps > budget:
                raise NonTerminationError(word, budget)
            i = positions[0] if rng is None else rng.choice(positions)
            a, b = word[i], word[i + 1]
            if trace is not None:
                trace.append((word, i, (a, b)))
            if a == b and (a, b) not in self.rules:
                continue  # nilpotent pair: the whole term vanishes
            rhs = self.rules[(a, b)]
            pre, post = word[:i], word[i + 2:]
            for rw, rc in rhs.terms.items():
                stack.append((pre + rw + post, coef * rc))
        return NCExpr(out)

    def multiply(self, a: NCExpr, b: NCExpr, **kw) -> NCExpr:
        return self.reduce(a * b, **kw)

    def is_normal(self, expr: NCExpr) -> bool:
        return all(not self._redexes(w) for w in expr.terms)

    # -- derivations -------------------------------------------------------

    def derivation(self, expr: NCExpr, dmap: dict[str, NCExpr]) -> NCExpr:
        """Graded Leibniz extension of ``dmap`` to the whole algebra.

        The sign of the i-th summand is (-1)^(number of odd letters before
        position i); for purely even dmaps this reduces to the ordinary
        Leibniz rule.  The result is reduced to normal form.
        """
        total = NCExpr.zero()
        for word, coef in expr.terms.items():
            sign = 1
            for i, g in enumerate(word):
                try:
                    image = dmap[g]
                except KeyError:
                    raise PresentationError(f"derivation undefined on generator {g!r}")
                if image:
                    piece = NCExpr.word(*word[:i]) * image * NCExpr.word(*word[i + 1:])
                    piece = piece.scaled(coef if sign > 0 else -coef)
                    total = total + piece
                if self.parity[g]:
                    sign = -sign
        return self.reduce(total)

    def differential(self, expr: NCExpr) -> NCExpr:
        if self.dmap is None:
            raise PresentationError("presentation carries no differential map")
        return self.derivation(expr, self.dmap)

    # -- whole-system transforms -------------------------------------------

    def specialize(self, q0: Fraction | int) -> "RewriteSystem":
        """The same presentation with every rule coefficient evaluated at q0."""
        rules = {
            lhs: rhs.map_coefficients(lambda c: c.specialize(q0))
            for lhs, rhs in self.rules.items()
        }
        dmap = None
        if self.dmap is not None:
            dmap = {
                g: e.map_coefficients(lambda c: c.specialize(q0))
                for g, e in self.dmap.items()
            }
        return RewriteSystem(
            self.generators,
            rules,
            self.nilpotent,
            dmap,
            name=f"{self.name}@q={q0}",
            check_orientation=False,
            step_budget=self.step_budget,
        )

    def restricted(self, keep_rule=None, *, name: str = "") -> "RewriteSystem":
        """A sub-system containing only the rules accepted by ``keep_rule``."""
        rules = {
            lhs: rhs
            for lhs, rhs in self.rules.items()
            if keep_rule is None or keep_rule(lhs, rhs)
        }
        return RewriteSystem(
            self.generators,
            rules,
            self.nilpotent,
            self.dmap,
            name=name or f"{self.name}/restricted",
            check_orientation=False,
            step_budget=self.step_budget,
        )

    # -- rendering and identity ---------------------------------------------

    def sort_key(self, word: Word):
        return (len(word), tuple(self.index[g] for g in word))

    def render_word(self, word: Word) -> str:
        if not word:
            return "1"
        bits = []
        run_name, run_len = None, 0
        for g in word + ("",):
            if g == run_name:
                run_len += 1
                continue
            if run_name is not None:
                bits.append(run_name if run_len == 1 else f"{run_name}^{run_len}")
            run_name, run_len = g, 1
        return " ".join(bits)

    def render(self, expr: NCExpr) -> str:
        if not expr.terms:
            return "0"
        bits = []
        for w in sorted(expr.terms, key=self.sort_key):
            c = expr.terms[w]
            cs = str(c)
            if not w:
                bits.append(cs)
            elif c == ONE:
                bits.append(self.render_word(w))
            elif cs.startswith("-") and cs[1:] == "1":
                bits.append(f"- {self.render_word(w)}")
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]) or "/" in cs:
                    cs = f"({cs})"
                bits.append(f"{cs} {self.render_word(w)}")
        return " + ".join(bits)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for g in sorted(self.generators, key=lambda g: g.index):
            h.update(f"{g.name}|{g.parity}|{g.index};".encode())
        for (a, b) in sorted(self.rules):
            h.update(f"{a},{b}->{self.render(self.rules[(a, b)])};".encode())
        for g in sorted(self.nilpotent):
            h.update(f"nil:{g};".encode())
        return h.hexdigest()[:16]


# -- confluence sampling -----------------------------------------------------


@dataclass
class ConfluenceReport:
    samples: int
    max_len: int
    violations: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return not self.violations and self.error is None


def check_local_confluence(
    rs: RewriteSystem,
    max_len: int = 6,
    samples: int = 500,
    seed: int = 0,
    alphabet: list[str] | None = None,
    min_len: int = 3,
) -> ConfluenceReport:
    """Randomized confluence probe.

    Every sampled word is reduced once deterministically and twice with
    independent randomized redex-choice strategies; any disagreement between
    normal forms is reported with its witness word.  A step-budget blowup is
    surfaced as an error (the two-cycle signature of a mis-oriented system).
    """
    if max_len < min_len:
        raise ValueError("max_len must be at least min_len")
    names = alphabet or [g.name for g in rs.generators]
    rng = random.Random(seed)
    report = ConfluenceReport(samples=samples, max_len=max_len)
    for _ in range(samples):
        n = rng.randint(min_len, max_len)
        word = tuple(rng.choice(names) for _ in range(n))
        expr = NCExpr.word(*word)
        try:
            nf0 = rs.reduce(expr)
            nf1 = rs.reduce(expr, rng=random.Random(rng.getrandbits(32)))
            nf2 = rs.reduce(expr, rng=random.Random(rng.getrandbits(32)))
        except NonTerminationError as exc:
            report.error = str(exc)
            return report
        if nf1 != nf0 or nf2 != nf0:
            report.violations.append((word, rs.render(nf0), rs.render(nf1 if nf1 != nf0 else nf2)))
    return report
