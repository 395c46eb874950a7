"""Exact arithmetic in Q(q), the field of rational functions of the
deformation parameter q.

A value is a ratio of two integer Laurent polynomials in q.  Every value is
kept in a canonical form, so that equality of values is structural equality:

* numerator and denominator share no polynomial factor,
* all q-shifts live in the numerator (the denominator is an ordinary
  polynomial with a non-zero constant term),
* the denominator's lowest-degree coefficient is positive,
* the integer contents of numerator and denominator are coprime,
* zero is always 0/1.

Coefficients are plain Python ints, so growth during rewriting is unbounded
but exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

# A Laurent polynomial: exponent -> non-zero integer coefficient.
Laurent = dict[int, int]


class CoeffError(ArithmeticError):
    """Division by zero or evaluation at a pole."""


# -- raw Laurent-dict helpers ------------------------------------------------


def _trim(p: Laurent) -> Laurent:
    return {e: c for e, c in p.items() if c}


def _ladd(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _lmul(a: Laurent, b: Laurent) -> Laurent:
    out: Laurent = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _content(p: Laurent) -> int:
    g = 0
    for c in p.values():
        g = gcd(g, abs(c))
    return g or 1


def _dense(p: Laurent) -> list[int]:
    """Dense coefficient list of a Laurent dict whose minimum degree is 0."""
    n = max(p) if p else 0
    out = [0] * (n + 1)
    for e, c in p.items():
        out[e] = c
    return out


def _primitive(d: list[int]) -> list[int]:
    g = 0
    for c in d:
        g = gcd(g, abs(c))
    g = g or 1
    lead = next((c for c in reversed(d) if c), 1)
    if lead < 0:
        g = -g
    return [c // g for c in d]


def _poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of two dense integer polynomials (Euclid over Q)."""
    fa = [Fraction(c) for c in _primitive(a)]
    fb = [Fraction(c) for c in _primitive(b)]

    def deg(p):
        return len(p) - 1

    def rem(p, d):
        p = list(p)
        while len(p) >= len(d) and any(p):
            while p and p[-1] == 0:
                p.pop()
            if len(p) < len(d):
                break
            f = p[-1] / d[-1]
            shift = len(p) - len(d)
            for i, c in enumerate(d):
                p[shift + i] -= f * c
            p.pop()
        while p and p[-1] == 0:
            p.pop()
        return p

    while fb:
        fa, fb = fb, rem(fa, fb)
    # rescale to a primitive integer polynomial
    m = 1
    for c in fa:
        m = m * c.denominator // gcd(m, c.denominator)
    ints = [int(c * m) for c in fa]
    return _primitive(ints) if ints else [1]


def _poly_div_exact(a: list[int], d: list[int]) -> list[int]:
    """Exact division of dense integer polynomials (raises if inexact)."""
    fa = [Fraction(c) for c in a]
    out = [Fraction(0)] * (len(a) - len(d) + 1)
    while len(fa) >= len(d) and any(fa):
        while fa and fa[-1] == 0:
            fa.pop()
        if len(fa) < len(d):
            break
        f = fa[-1] / Fraction(d[-1])
        k = len(fa) - len(d)
        out[k] = f
        for i, c in enumerate(d):
            fa[k + i] -= f * c
        fa.pop()
    if any(fa):
        raise ArithmeticError("inexact polynomial division")
    res = []
    for c in out:
        if c.denominator != 1:
            raise ArithmeticError("inexact polynomial division")
        res.append(int(c))
    return res


def _canonical(num: Laurent, den: Laurent) -> tuple[Laurent, Laurent]:
    num = _trim(num)
    den = _trim(den)
    if not den:
        raise CoeffError("division by zero in Q(q)")
    if not num:
        return {}, {0: 1}
    vn = min(num)
    vd = min(den)
    shift = vn - vd
    n = {e - vn: c for e, c in num.items()}
    d = {e - vd: c for e, c in den.items()}
    if d != {0: 1}:
        dn, dd = _dense(n), _dense(d)
        g = _poly_gcd(dn, dd)
        if len(g) > 1:
            dn = _poly_div_exact(dn, g)
            dd = _poly_div_exact(dd, g)
        cg = gcd(_content({i: c for i, c in enumerate(dn) if c}),
                 _content({i: c for i, c in enumerate(dd) if c}))
        lowest = next(c for c in dd if c)
        if lowest < 0:
            cg = -cg
        n = {i: c // cg for i, c in enumerate(dn) if c}
        d = {i: c // cg for i, c in enumerate(dd) if c}
    return {e + shift: c for e, c in n.items()}, d


class QRat:
    """An element of Q(q) in canonical form.  Immutable and hashable."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num: Laurent, den: Laurent | None = None, *, _raw=False):
        if _raw:
            self._num, self._den = num, den
        else:
            self._num, self._den = _canonical(num, {0: 1} if den is None else den)
        self._hash = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "QRat":
        return QRat({0: n} if n else {}, {0: 1}, _raw=True)

    @staticmethod
    def from_fraction(f: Fraction) -> "QRat":
        return QRat({0: f.numerator} if f.numerator else {}, {0: f.denominator})

    @staticmethod
    def q_power(k: int) -> "QRat":
        return QRat({k: 1}, {0: 1}, _raw=True)

    @staticmethod
    def poly(coeffs: dict[int, int]) -> "QRat":
        """Laurent polynomial from an exponent -> coefficient mapping."""
        return QRat(dict(coeffs), {0: 1})

    # -- field operations -------------------------------------------------

    def __add__(self, other: "QRat") -> "QRat":
        if self._den == other._den:
            if self._den == {0: 1}:
                return QRat(_ladd(self._num, other._num), {0: 1}, _raw=True)
            return QRat(_ladd(self._num, other._num), self._den)
        return QRat(
            _ladd(_lmul(self._num, other._den), _lmul(other._num, self._den)),
            _lmul(self._den, other._den),
        )

    def __sub__(self, other: "QRat") -> "QRat":
        return self + (-other)

    def __neg__(self) -> "QRat":
        return QRat({e: -c for e, c in self._num.items()}, self._den, _raw=True)

    def __mul__(self, other: "QRat") -> "QRat":
        if self._den == {0: 1} == other._den:
            return QRat(_lmul(self._num, other._num), {0: 1}, _raw=True)
        return QRat(_lmul(self._num, other._num), _lmul(self._den, other._den))

    def __truediv__(self, other: "QRat") -> "QRat":
        if not other._num:
            raise CoeffError("division by zero in Q(q)")
        return QRat(_lmul(self._num, other._den), _lmul(self._den, other._num))

    def __pow__(self, k: int) -> "QRat":
        if k < 0:
            return ONE / (self ** (-k))
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates and helpers -----------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self) -> bool:
        return bool(self._num)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QRat.from_int(other)
        if not isinstance(other, QRat):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (tuple(sorted(self._num.items())), tuple(sorted(self._den.items())))
            )
        return self._hash

    def eval_at(self, q0: Fraction | int) -> Fraction:
        """Exact specialization q -> q0 (q0 a non-zero rational)."""
        q0 = Fraction(q0)
        if q0 == 0:
            raise CoeffError("cannot evaluate at q=0")
        num = sum((c * q0**e for e, c in self._num.items()), Fraction(0))
        den = sum((c * q0**e for e, c in self._den.items()), Fraction(0))
        if den == 0:
            raise CoeffError(f"pole at q={q0}")
        return num / den

    def specialize(self, q0: Fraction | int) -> "QRat":
        return QRat.from_fraction(self.eval_at(q0))

    # -- rendering --------------------------------------------------------

    @staticmethod
    def _poly_str(p: Laurent) -> str:
        if not p:
            return "0"
        parts = []
        for e in sorted(p, reverse=True):
            c = p[e]
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if e == 0:
                body = str(c)
            else:
                qe = "q" if e == 1 else f"q^{e}"
                body = qe if c == 1 else f"{c}{qe}"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        ns = self._poly_str(self._num)
        if self._den == {0: 1}:
            return ns
        ds = self._poly_str(self._den)
        if len(self._num) > 1:
            ns = f"({ns})"
        if len(self._den) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self) -> str:
        return f"QRat({self})"


ZERO = QRat.from_int(0)
ONE = QRat.from_int(1)
Q = QRat.q_power(1)


def qp(k: int) -> QRat:
    """The monomial q^k."""
    return QRat.q_power(k)


def qnum(coeffs: dict[int, int]) -> QRat:
    """Shorthand for an integer Laurent polynomial in q."""
    return QRat.poly(coeffs)


def q_number(n: int) -> QRat:
    """The balanced q-integer [n] = (q^n - q^-n)/(q - q^-1).

    Returned directly as its Laurent-polynomial expansion
    q^(n-1) + q^(n-3) + ... + q^(1-n).
    """
    if n == 0:
        return ZERO
    if n < 0:
        return -q_number(-n)
    return QRat.poly({n - 1 - 2 * k: 1 for k in range(n)})
