"""Bernoulli measure, Radon-Nikodym cocycle, and exact quadratic values.

The measure on X_{d,k} is uniform on the root letter and Bernoulli(1/d)
on the tail, so a cylinder named by a word with p tail letters has mass
1 / (k * d^p).  A table element g multiplies the measure on the block
mu_i -> nu_i by d^(|mu_i| - |nu_i|); that exponent is the cocycle value
and the integral of its square root lands in Q(sqrt(d)).  Everything
here is exact: rationals via Fraction, quadratic irrationals via
QuadraticValue with sign decided by iterated squaring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cantor import Clopen, Point, Word, check_same_alphabet
from .errors import VdkError
from .tables import TableElement, act_clopen, act_point, compose


def mu(s: Clopen) -> Fraction:
    """Exact Bernoulli mass of a clopen set."""
    a = s.alphabet
    return sum(
        (Fraction(1, a.k * a.d ** len(w.tail)) for w in s.words), Fraction(0)
    )


# ---------------------------------------------------------------------------
# quadratic values a + b*sqrt(m)


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s*s*m with m squarefree; returns (s, m)."""
    if n < 1:
        raise VdkError("radicand must be positive, got %d" % n)
    s, m, p = 1, n, 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        p += 1
    return s, m


@dataclass(frozen=True, slots=True)
class QuadraticValue:
    """Exact value a + b*sqrt(m), m squarefree, b = 0 when m = 1.

    Build through the quadratic() factory (or sqrt_int) so the radicand
    is normalized; comparisons are exact, including across different
    radicands, via sign determination by squaring.
    """

    a: Fraction
    b: Fraction
    m: int

    def __add__(self, other):
        other = _coerce(other)
        if self.b == 0:
            return quadratic(self.a + other.a, other.b, other.m)
        if other.b == 0:
            return quadratic(self.a + other.a, self.b, self.m)
        if self.m != other.m:
            raise VdkError(
                "cannot add sqrt(%d) and sqrt(%d) terms exactly" % (self.m, other.m)
            )
        return quadratic(self.a + other.a, self.b + other.b, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticValue(-self.a, -self.b, self.m)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if self.b != 0 and other.b != 0 and self.m != other.m:
            raise VdkError(
                "cannot multiply sqrt(%d) by sqrt(%d) exactly" % (self.m, other.m)
            )
        m = self.m if self.b != 0 else other.m
        a = self.a * other.a + self.b * other.b * m
        b = self.a * other.b + self.b * other.a
        return quadratic(a, b, m)

    __rmul__ = __mul__

    def sign(self) -> int:
        return _sign1(self.a, self.b, self.m)

    def __float__(self):
        return float(self.a) + float(self.b) * self.m**0.5

    def __lt__(self, other):
        return _sign_diff(self, _coerce(other)) < 0

    def __le__(self, other):
        return _sign_diff(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return _sign_diff(self, _coerce(other)) > 0

    def __ge__(self, other):
        return _sign_diff(self, _coerce(other)) >= 0

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "m": self.m}

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = "sqrt(%d)" % self.m
        bpart = root if self.b == 1 else "%s*%s" % (self.b, root)
        if self.a == 0:
            return bpart
        if self.b < 0:
            neg = -self.b
            bpart = root if neg == 1 else "%s*%s" % (neg, root)
            return "%s - %s" % (self.a, bpart)
        return "%s + %s" % (self.a, bpart)

    def __repr__(self):
        return "QuadraticValue(%s)" % self


def quadratic(a, b=0, m: int = 1) -> QuadraticValue:
    """Normalized QuadraticValue: square part of m folded into b."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return QuadraticValue(a, Fraction(0), 1)
    s, m = _squarefree_split(m)
    b *= s
    if m == 1:
        return QuadraticValue(a + b, Fraction(0), 1)
    return QuadraticValue(a, b, m)


def sqrt_int(n: int) -> QuadraticValue:
    """Exact square root of a positive integer."""
    return quadratic(0, 1, n)


def _coerce(v) -> QuadraticValue:
    if isinstance(v, QuadraticValue):
        return v
    return quadratic(Fraction(v))


def _sign1(a: Fraction, b: Fraction, m: int) -> int:
    """Exact sign of a + b*sqrt(m)."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs = a * a
    rhs = b * b * m
    if a > 0:
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


def _sign_diff(u: QuadraticValue, v: QuadraticValue) -> int:
    """Exact sign of u - v, allowing different radicands."""
    a = u.a - v.a
    terms = []
    if u.b != 0:
        terms.append((u.b, u.m))
    if v.b != 0:
        terms.append((-v.b, v.m))
    if not terms:
        return (a > 0) - (a < 0)
    if len(terms) == 1 or terms[0][1] == terms[1][1]:
        b = sum(t[0] for t in terms)
        return _sign1(a, b, terms[0][1])
    (b, m1), (c, m2) = terms
    s1 = _sign1(a, b, m1)
    sc = 1 if c > 0 else -1
    if s1 == 0:
        return sc
    if s1 == sc:
        return s1
    # opposite signs: compare (a + b*sqrt(m1))^2 against c^2*m2
    t = _sign1(a * a + b * b * m1 - c * c * m2, 2 * a * b, m1)
    return t if s1 > 0 else -t


def quad_compare(u: QuadraticValue, v: QuadraticValue) -> str:
    """Exact comparison; returns 'less', 'equal' or 'greater'."""
    s = _sign_diff(_coerce(u), _coerce(v))
    return ("less", "equal", "greater")[s + 1]


# ---------------------------------------------------------------------------
# the Radon-Nikodym cocycle of a table element


def rn_profile(g: TableElement) -> tuple[tuple[Word, int], ...]:
    """Per-block cocycle exponents [(mu_i, |mu_i| - |nu_i|), ...]."""
    return tuple((mu_w, len(mu_w) - len(nu_w)) for mu_w, nu_w in g.pairs)


def rn_exponent(g: TableElement, x: Point) -> int:
    """Exponent j with dgmu/dmu = d^j on the block of g containing x."""
    check_same_alphabet(g, x)
    for mu_w, nu_w in g.pairs:
        if x.letters(len(mu_w)) == mu_w.letters:
            return len(mu_w) - len(nu_w)
    raise VdkError("no domain block matches point %s" % x)


def cocycle_chain_check(g: TableElement, h: TableElement, x: Point) -> bool:
    """Chain rule at x: exponent of g.h equals exponent of g at h(x) plus h at x."""
    lhs = rn_exponent(compose(g, h), x)
    rhs = rn_exponent(g, act_point(h, x)) + rn_exponent(h, x)
    return lhs == rhs


def cocycle_range(g: TableElement) -> frozenset[int]:
    """The set of exponents attained by the cocycle of g."""
    return frozenset(j for _, j in rn_profile(g))


def integral_sqrt_rn(g: TableElement) -> QuadraticValue:
    """Exact integral of sqrt(d(g mu)/d mu), a value in Q(sqrt(d)).

    Equals sum_i mu(mu_i X) * d^(j_i / 2); at most 1 by Cauchy-Schwarz,
    with equality exactly when every exponent is zero.
    """
    a = g.alphabet
    d = a.d
    s, m = _squarefree_split(d)
    rat = Fraction(0)
    irr = Fraction(0)
    for mu_w, j in rn_profile(g):
        mass = Fraction(1, a.k * d ** len(mu_w.tail))
        if j % 2 == 0:
            rat += mass * Fraction(d) ** (j // 2)
        else:
            irr += mass * Fraction(d) ** ((j - 1) // 2) * s
    return quadratic(rat, irr, m)


def deficit(s: Clopen, elements) -> Fraction:
    """Largest mass moved off s by the listed elements: max mu(s xor g s)."""
    elements = list(elements)
    if not elements:
        raise VdkError("deficit needs at least one element")
    return max(mu(s.symmetric_difference(act_clopen(g, s))) for g in elements)
