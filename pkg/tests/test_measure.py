"""Bernoulli measure, Radon-Nikodym exponents, quadratic values.

Independent oracles:
  * cylinder-ratio oracle for exponents: mu(g C)/mu(C) on deep cylinders
    around a point must equal d^j;
  * 50-digit Decimal evaluation for quadratic comparisons (exact ties
    are constructed, never sampled).
"""

from decimal import Decimal, getcontext
from fractions import Fraction
from random import Random

import pytest

from vdk import (
    Alphabet,
    QuadraticValue,
    act_clopen,
    act_point,
    clopen_normalize,
    cocycle_chain_check,
    cocycle_range,
    compose,
    deficit,
    embed_supported,
    format_word,
    identity,
    integral_sqrt_rn,
    inverse,
    mu,
    parse_clopen,
    parse_point,
    parse_table,
    parse_word,
    point_normalize,
    quad_compare,
    quadratic,
    rn_exponent,
    rn_profile,
    sqrt_int,
    transporter,
    whole_space,
)
from vdk.errors import VdkError
from vdk.sampling import random_clopen, random_point, random_table, random_word

A21 = Alphabet(2, 1)
A22 = Alphabet(2, 2)
A33 = Alphabet(3, 3)
ALPHABETS = [A21, A22, Alphabet(3, 1), Alphabet(3, 2), Alphabet(2, 3)]

getcontext().prec = 50


def approx(q: QuadraticValue) -> Decimal:
    return Decimal(q.a.numerator) / q.a.denominator + (
        Decimal(q.b.numerator) / q.b.denominator
    ) * Decimal(q.m).sqrt()


# ---------------------------------------------------------------------------
# mu


def test_mu_examples():
    assert mu(whole_space(A21)) == 1
    assert mu(whole_space(A33)) == 1
    nu = parse_clopen(A22, "{1:11}")
    assert mu(nu) == Fraction(1, 8)
    assert mu(~nu) == Fraction(7, 8)


def test_mu_additivity():
    rng = Random(301)
    for i in range(500):
        a = ALPHABETS[i % len(ALPHABETS)]
        s = random_clopen(rng, a)
        t = random_clopen(rng, a)
        assert mu(s) + mu(t) == mu(s | t) + mu(s & t)
        assert 0 <= mu(s) <= 1
        assert mu(s) + mu(~s) == 1


def test_mu_refinement_invariance():
    rng = Random(302)
    from vdk.cantor import split

    for i in range(200):
        a = ALPHABETS[i % len(ALPHABETS)]
        w = random_word(rng, a)
        s = clopen_normalize(a, [w])
        assert mu(s) == sum(
            (mu(clopen_normalize(a, [c])) for c in split(w)), Fraction(0)
        )


# ---------------------------------------------------------------------------
# quadratic values


def test_quadratic_normalization():
    q = quadratic(0, 1, 8)
    assert (q.a, q.b, q.m) == (0, 2, 2)
    assert quadratic(Fraction(3, 4)).m == 1
    assert quadratic(1, 0, 7).m == 1
    assert sqrt_int(12) == quadratic(0, 2, 3)
    assert sqrt_int(9) == quadratic(3)
    assert str(quadratic(Fraction(1, 4), Fraction(1, 2), 2)) == "1/4 + 1/2*sqrt(2)"


def test_quadratic_ring_laws():
    rng = Random(303)
    for _ in range(300):
        m = rng.choice([2, 3, 5, 6, 7])
        mk = lambda: quadratic(
            Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)),
            Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)),
            m,
        )
        x, y, z = mk(), mk(), mk()
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        assert x - x == quadratic(0)
        assert x * quadratic(1) == x
        assert -(-x) == x


def test_quad_compare_examples():
    assert quad_compare(quadratic(Fraction(7, 2)), quadratic(0, 2, 3)) == "greater"
    assert quad_compare(quadratic(Fraction(1, 4), Fraction(1, 2), 2), quadratic(1)) == "less"
    u = quadratic(Fraction(-3, 7), Fraction(5, 2), 6)
    assert quad_compare(u, u) == "equal"


def test_quad_compare_decimal_oracle():
    rng = Random(304)
    for _ in range(500):
        m1 = rng.choice([1, 2, 3, 5, 6])
        m2 = rng.choice([1, 2, 3, 5, 6])
        u = quadratic(
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)),
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)),
            m1,
        )
        v = quadratic(
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)),
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)),
            m2,
        )
        du, dv = approx(u), approx(v)
        got = quad_compare(u, v)
        if abs(du - dv) > Decimal("1e-30"):
            assert got == ("less" if du < dv else "greater")
        else:
            assert got == "equal"


def test_quad_compare_engineered_ties():
    # identical values wrapped in different radicand slots
    assert quad_compare(quadratic(5, 0, 7), quadratic(5, 0, 3)) == "equal"
    assert quad_compare(sqrt_int(8), quadratic(0, 2, 2)) == "equal"
    # sqrt(2)+... vs rational differing in the 1e-3 range
    assert quad_compare(quadratic(0, 1, 2), quadratic(Fraction(1414, 1000))) == "greater"
    assert quad_compare(quadratic(0, 1, 2), quadratic(Fraction(1415, 1000))) == "less"
    # cross-radicand close call: 3*sqrt(2) vs 2*sqrt(5) hinges on 18 vs 20
    assert quad_compare(quadratic(0, 3, 2), quadratic(0, 2, 5)) == "less"
    # mixed signs with nearly cancelling parts: 7 - 2*sqrt(3) vs 5*sqrt(2) - 2
    # lhs ~ 3.5359, rhs ~ 5.0711
    assert quad_compare(quadratic(7, -2, 3), quadratic(-2, 5, 2)) == "less"


def test_quadratic_ordering_operators():
    assert quadratic(0, 1, 2) < quadratic(Fraction(3, 2))
    assert quadratic(0, 1, 2) > quadratic(1)
    assert quadratic(2) >= quadratic(0, 1, 2)
    assert not quadratic(1) == quadratic(0, 1, 2)


# ---------------------------------------------------------------------------
# Radon-Nikodym exponents


def exponent_ratio_oracle(g, x, depth=6):
    """mu(g C)/mu(C) for a deep cylinder C around x inside x's block."""
    a = g.alphabet
    c = clopen_normalize(a, [x.prefix(depth)])
    ratio = mu(act_clopen(g, c)) / mu(c)
    num, j = ratio, 0
    while num > 1:
        num /= a.d
        j += 1
    while num < 1:
        num *= a.d
        j -= 1
    assert num == 1
    return j


def test_rn_exponent_examples():
    s = parse_table(A21, "{11->1,12->21,2->22}")
    assert rn_exponent(identity(A21), parse_point(A21, "(12)^inf")) == 0
    assert rn_exponent(s, parse_point(A21, "(1)^inf")) == 1
    assert rn_exponent(s, parse_point(A21, "(2)^inf")) == -1


def test_rn_exponent_ratio_oracle():
    rng = Random(305)
    for i in range(300):
        a = ALPHABETS[i % len(ALPHABETS)]
        g = random_table(rng, a)
        x = random_point(rng, a)
        depth = max(len(w.tail) for p in g.pairs for w in p) + 4
        assert rn_exponent(g, x) == exponent_ratio_oracle(g, x, depth)


def test_rn_exponent_off_support_zero():
    rng = Random(306)
    for i in range(200):
        base = [A22, A33][i % 2]
        target = [A21, Alphabet(3, 2)][i % 2]
        g = random_table(rng, base)
        nu = random_word(rng, target, max_tail=2)
        ghat = embed_supported(g, nu)
        x = random_point(rng, target)
        cyl = parse_clopen(target, "{%s}" % format_word(nu))
        from vdk import member

        if not member(x, cyl):
            assert rn_exponent(ghat, x) == 0


def test_chain_rule():
    s = parse_table(A21, "{11->1,12->21,2->22}")
    x = parse_point(A21, "2(1)^inf")
    assert cocycle_chain_check(s, s, x)
    rng = Random(307)
    for i in range(300):
        a = ALPHABETS[i % len(ALPHABETS)]
        g = random_table(rng, a)
        h = random_table(rng, a)
        x = random_point(rng, a)
        assert cocycle_chain_check(g, h, x)
        assert rn_exponent(compose(g, h), x) == rn_exponent(
            g, act_point(h, x)
        ) + rn_exponent(h, x)


# ---------------------------------------------------------------------------
# profiles, integrals, ranges


def test_rn_profile_example():
    s = parse_table(A21, "{11->1,12->21,2->22}")
    prof = rn_profile(s)
    assert [(format_word(w), j) for w, j in prof] == [("11", 1), ("12", 0), ("2", -1)]


def test_rn_profile_mass_and_inverse_symmetry():
    rng = Random(308)
    for i in range(300):
        a = ALPHABETS[i % len(ALPHABETS)]
        g = random_table(rng, a)
        total = Fraction(0)
        for w, j in rn_profile(g):
            total += mu(clopen_normalize(a, [w])) * Fraction(a.d) ** j
        assert total == 1
        x = random_point(rng, a)
        assert rn_exponent(inverse(g), act_point(g, x)) == -rn_exponent(g, x)


def test_integral_examples():
    assert integral_sqrt_rn(identity(A21)) == quadratic(1)
    s = parse_table(A21, "{11->1,12->21,2->22}")
    assert integral_sqrt_rn(s) == quadratic(Fraction(1, 4), Fraction(1, 2), 2)


def test_integral_embedded_lower_bound():
    s = parse_table(A22, "{1:1->1:,1:2->2:1,2:->2:2}")
    nu = parse_word(A22, "1:11")
    val = integral_sqrt_rn(embed_supported(s, nu))
    assert quad_compare(val, quadratic(Fraction(7, 8))) != "less"


def test_integral_cauchy_schwarz():
    rng = Random(309)
    for i in range(300):
        a = ALPHABETS[i % len(ALPHABETS)]
        g = random_table(rng, a)
        val = integral_sqrt_rn(g)
        cmp_one = quad_compare(val, quadratic(1))
        assert cmp_one != "greater"
        assert (cmp_one == "equal") == (cocycle_range(g) == {0})
        assert integral_sqrt_rn(inverse(g)) == val


def test_cocycle_range_examples():
    assert cocycle_range(identity(A21)) == {0}
    s = parse_table(A21, "{11->1,12->21,2->22}")
    assert cocycle_range(s) == {-1, 0, 1}


def test_measure_preserving_elements():
    # permuting the blocks of a single code keeps every exponent at zero
    rng = Random(310)
    from vdk.sampling import random_code
    from vdk import make_table

    for i in range(100):
        a = ALPHABETS[i % len(ALPHABETS)]
        code = random_code(rng, a)
        dom = sorted(code, key=lambda w: len(w.tail))
        ran = sorted(code, key=lambda w: (len(w.tail), rng.random()))
        g = make_table(list(zip(dom, ran)))
        assert cocycle_range(g) == {0}
        for _ in range(3):
            s = random_clopen(rng, a)
            assert mu(act_clopen(g, s)) == mu(s)


def test_quasi_invariance():
    rng = Random(311)
    for i in range(200):
        a = ALPHABETS[i % len(ALPHABETS)]
        g = random_table(rng, a)
        s = random_clopen(rng, a)
        assert (mu(s) > 0) == (mu(act_clopen(g, s)) > 0)


# ---------------------------------------------------------------------------
# deficit


def test_deficit_identity_zero():
    rng = Random(312)
    for i in range(50):
        a = ALPHABETS[i % len(ALPHABETS)]
        s = random_clopen(rng, a)
        assert deficit(s, [identity(a)]) == 0


def test_deficit_swap_is_one():
    sigma = parse_table(A21, "{1->2,2->1}")
    assert deficit(parse_clopen(A21, "{1}"), [sigma]) == 1


def test_deficit_invariant_set():
    # elements supported inside nu fix {nu} setwise
    rng = Random(313)
    nu = parse_word(A21, "12")
    cyl = parse_clopen(A21, "{12}")
    elems = [
        embed_supported(random_table(rng, A22), nu) for _ in range(10)
    ]
    assert deficit(cyl, elems) == 0
    assert deficit(~cyl, elems) == 0


def test_deficit_complement_symmetry():
    rng = Random(314)
    for i in range(100):
        a = ALPHABETS[i % len(ALPHABETS)]
        s = random_clopen(rng, a)
        f = [random_table(rng, a) for _ in range(3)]
        assert deficit(s, f) == deficit(~s, f)
        assert deficit(s, f) >= 0


def test_deficit_empty_family_rejected():
    with pytest.raises(VdkError):
        deficit(whole_space(A21), [])
