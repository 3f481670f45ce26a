import itertools
import random
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin3.errors import DegenerateInputError
from gaudin3.polyalg import (
    BiPoly,
    UniPoly,
    coprime_certificate,
    eval_bi,
    eval_uni,
    gcd_uni,
    is_coprime,
    is_squarefree,
    rat_from_str,
    rat_to_str,
    resultant_uni,
    resultant_x,
)


# -- independent oracles ----------------------------------------------------


def det_leibniz(rows, zero, one):
    """Determinant by Leibniz expansion; entries in any commutative ring."""
    n = len(rows)
    total = zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = one
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + (term if inv % 2 == 0 else -term)
    return total


def sylvester_rows(pc, qc, m, n, zero):
    """Sylvester matrix rows from descending coefficient lists."""
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (m - 1 - i))
    return rows


def resultant_brute_uni(p: UniPoly, q: UniPoly) -> Fraction:
    m, n = p.degree(), q.degree()
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    rows = sylvester_rows(pc, qc, m, n, Fraction(0))
    return det_leibniz(rows, Fraction(0), Fraction(1))


def resultant_brute_x(p: BiPoly, q: BiPoly) -> UniPoly:
    m, n = p.deg_x(), q.deg_x()
    u = p.vu
    pc = [p.coeff_of_x(j) for j in range(m, -1, -1)]
    qc = [q.coeff_of_x(j) for j in range(n, -1, -1)]
    rows = sylvester_rows(pc, qc, m, n, UniPoly.zero(u))
    return det_leibniz(rows, UniPoly.zero(u), UniPoly.const(u, 1))


def up(*coeffs):
    return UniPoly.make("x", coeffs)


# -- rationals ----------------------------------------------------------------


def test_rational_string_round_trip():
    for q in (Fraction(3, 4), Fraction(-7, 2), Fraction(5), Fraction(0)):
        assert rat_from_str(rat_to_str(q)) == q
    assert rat_to_str(Fraction(6, -4)) == "-3/2"
    assert rat_from_str("7") == Fraction(7)


# -- univariate ---------------------------------------------------------------


def test_unipoly_normalisation_and_degree():
    assert up(1, 2, 0, 0).coeffs == (Fraction(1), Fraction(2))
    assert up().is_zero() and up().degree() == -1
    assert up(0, 0, 5).degree() == 2


def test_unipoly_arithmetic():
    p = up(1, 1)       # 1 + x
    q = up(-1, 1)      # -1 + x
    assert p * q == up(-1, 0, 1)
    assert p + q == up(0, 2)
    assert (p - p).is_zero()
    assert p**3 == up(1, 3, 3, 1)
    assert up(2, 4).monic() == up(Fraction(1, 2), 1)
    assert up(1, 2, 3).derivative() == up(2, 6)
    assert up(1, 2, 3)(Fraction(1, 2)) == Fraction(1) + 1 + Fraction(3, 4)


small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
uni_polys = st.lists(small_fracs, min_size=0, max_size=5).map(lambda cs: up(*cs))


@given(uni_polys, uni_polys, uni_polys)
@settings(max_examples=60, deadline=None)
def test_unipoly_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a


def test_unipoly_json_round_trip():
    p = up(Fraction(1, 3), 0, Fraction(-7, 5), 2)
    assert UniPoly.from_json(p.to_json()) == p


# -- bivariate ----------------------------------------------------------------


def bp(terms):
    return BiPoly.make("x", "u", terms)


def test_bipoly_basics():
    f = bp({(2, 0): 1, (0, 1): -1})        # x^2 - u
    assert f.deg_x() == 2 and f.deg_u() == 1
    assert f.subs_u(4) == up(-4, 0, 1)
    assert f.subs_x(3) == UniPoly.make("u", (9, -1))
    assert f.eval_exact(3, 2) == 7
    assert f.diff_x() == bp({(1, 0): 2})
    assert f.diff_u() == bp({(0, 0): -1})
    assert f.coeff_of_x(0) == UniPoly.make("u", (0, -1))


bi_polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    small_fracs, max_size=5,
).map(bp)


@given(bi_polys, bi_polys, bi_polys)
@settings(max_examples=60, deadline=None)
def test_bipoly_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == BiPoly.zero("x", "u")


@given(bi_polys, bi_polys, small_fracs, small_fracs)
@settings(max_examples=60, deadline=None)
def test_bipoly_eval_is_ring_morphism(a, b, xv, uv):
    assert (a * b).eval_exact(xv, uv) == a.eval_exact(xv, uv) * b.eval_exact(xv, uv)
    assert (a + b).eval_exact(xv, uv) == a.eval_exact(xv, uv) + b.eval_exact(xv, uv)


def test_bipoly_json_round_trip():
    f = bp({(2, 0): 1, (1, 3): Fraction(-2, 7), (0, 0): Fraction(5, 3)})
    assert BiPoly.from_json(f.to_json()) == f


# -- resultants ---------------------------------------------------------------


def test_resultant_linear_pair():
    a, b = Fraction(5, 2), Fraction(-1, 3)
    assert resultant_uni(up(-a, 1), up(-b, 1)) == a - b


def test_resultant_x_square_minus_u_against_x():
    f = bp({(2, 0): 1, (0, 1): -1})
    g = bp({(1, 0): 1})
    assert resultant_x(f, g) == UniPoly.make("u", (0, -1))


def test_resultant_constant_conventions():
    assert resultant_uni(up(3), up(1, 2, 1)) == 9
    assert resultant_uni(up(1, 2, 1), up(3)) == 9
    assert resultant_uni(up(4), up(7)) == 1
    c = bp({(0, 2): 1, (0, 0): 1})          # u^2 + 1, constant in x
    g = bp({(2, 0): 1, (0, 1): 1})
    assert resultant_x(c, g) == UniPoly.make("u", (1, 0, 2, 0, 1))


def test_resultant_zero_input_raises():
    with pytest.raises(DegenerateInputError):
        resultant_uni(up(), up(1, 1))
    with pytest.raises(DegenerateInputError):
        resultant_x(BiPoly.zero("x", "u"), bp({(1, 0): 1}))


def test_resultant_uni_matches_sylvester_determinant():
    rng = random.Random(7)
    for _ in range(120):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        p = up(*[rng.randint(-4, 4) for _ in range(m)] + [rng.randint(1, 4)])
        q = up(*[rng.randint(-4, 4) for _ in range(n)] + [rng.randint(1, 4)])
        assert resultant_uni(p, q) == resultant_brute_uni(p, q)


def rand_bipoly(rng, max_dx, max_du, ensure_lc=True):
    terms = {}
    for dx in range(max_dx + 1):
        for du in range(max_du + 1):
            if rng.random() < 0.5:
                terms[(dx, du)] = rng.randint(-3, 3)
    if ensure_lc:
        terms[(max_dx, rng.randint(0, max_du))] = rng.randint(1, 3)
    return bp(terms)


def test_resultant_x_matches_sylvester_determinant():
    rng = random.Random(11)
    for _ in range(40):
        p = rand_bipoly(rng, rng.randint(1, 3), rng.randint(0, 2))
        q = rand_bipoly(rng, rng.randint(1, 2), rng.randint(0, 2))
        assert resultant_x(p, q) == resultant_brute_x(p, q)


def test_resultant_x_swap_antisymmetry():
    rng = random.Random(13)
    for _ in range(25):
        p = rand_bipoly(rng, rng.randint(1, 3), rng.randint(0, 2))
        q = rand_bipoly(rng, rng.randint(1, 3), rng.randint(0, 2))
        m, n = p.deg_x(), q.deg_x()
        lhs = resultant_x(p, q)
        rhs = resultant_x(q, p)
        assert lhs == (rhs if (m * n) % 2 == 0 else -rhs)


def test_resultant_x_detects_common_factor():
    # (x - u) divides both: resultant must vanish identically
    common = bp({(1, 0): 1, (0, 1): -1})
    p = common * bp({(1, 0): 1, (0, 0): 3})
    q = common * bp({(1, 0): 2, (0, 2): 1, (0, 0): -1})
    assert resultant_x(p, q).is_zero()


def test_resultant_x_double_root_in_x():
    # f = (x - u)^2 (x + 1): disc wrt x vanishes identically
    f = bp({(1, 0): 1, (0, 1): -1}) ** 2 * bp({(1, 0): 1, (0, 0): 1})
    assert resultant_x(f, f.diff_x()).is_zero()


def test_resultant_x_degree_bound_param():
    p = rand_bipoly(random.Random(3), 3, 2)
    q = rand_bipoly(random.Random(4), 2, 2)
    full = resultant_x(p, q)
    assert resultant_x(p, q, deg_bound=full.degree()) == full
    if full.degree() >= 1:
        with pytest.raises(ArithmeticError):
            resultant_x(p, q, deg_bound=full.degree() - 1)


# -- gcd and certificates -----------------------------------------------------


def test_gcd_recovers_planted_factor():
    rng = random.Random(17)
    for _ in range(40):
        g = up(*[rng.randint(-3, 3) for _ in range(rng.randint(1, 3))] + [1])
        p = g * up(rng.randint(1, 3), 1)
        q = g * up(rng.randint(-3, -1), 0, 1)
        got = gcd_uni(p, q)
        assert got.degree() >= g.degree()
        # planted factor divides the gcd of the products
        assert gcd_uni(got, g.monic()) == g.monic()


def test_gcd_of_coprime_is_one():
    assert gcd_uni(up(-1, 1), up(1, 1)) == up(1)
    assert gcd_uni(up(2), up(0, 1)) == up(1)
    assert gcd_uni(up(), up(0, 2)) == up(0, 1)


def test_coprime_certificate_sound():
    p, q = up(-1, 1), up(1, 1)
    assert coprime_certificate(p, q) is True
    shared = up(Fraction(1, 3), 1)
    assert coprime_certificate(shared * p, shared * q) is None
    assert not is_coprime(shared * p, shared * q)
    assert is_coprime(p, q)


def test_squarefree_detection():
    assert is_squarefree(up(-1, 0, 1))
    assert not is_squarefree(up(-1, 1) ** 2)
    assert not is_squarefree(up(-1, 1) ** 2 * up(5, 1))
    assert is_squarefree(up(7))


# -- numeric evaluation --------------------------------------------------------


def test_eval_uni_bound_holds_at_rational_points():
    p = up(Fraction(1, 3), Fraction(-7, 5), 0, 2, Fraction(11, 7))
    for z in (Fraction(1, 2), Fraction(-13, 8), Fraction(10, 3)):
        exact = p(z)
        val, err = eval_uni(p, z, 64)
        assert err >= 0
        with mp.workprec(300):
            ref = mp.mpf(exact.numerator) / exact.denominator
            assert abs(val - ref) <= err


def test_eval_bi_bound_holds_at_rational_points():
    f = bp({(3, 0): Fraction(2, 7), (1, 2): -3, (0, 1): Fraction(1, 9), (0, 0): 5})
    for xv, uv in ((Fraction(1, 2), Fraction(3, 4)), (Fraction(-5, 3), Fraction(2))):
        exact = f.eval_exact(xv, uv)
        val, err = eval_bi(f, xv, uv, 80)
        with mp.workprec(300):
            ref = mp.mpf(exact.numerator) / exact.denominator
            assert abs(val - ref) <= err


def test_eval_requires_53_bits():
    with pytest.raises(ValueError):
        eval_uni(up(1, 1), 0.5, 40)
