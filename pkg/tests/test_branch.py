"""Discriminants, branch points, simplicity, genus, r=1 closed forms."""

from fractions import Fraction
from types import SimpleNamespace

import mpmath as mp
import pytest

from gaudin3.branch import (
    all_roots,
    asymptotic_limit_check,
    branch_points,
    discriminant_u,
    genus,
    limit_roots,
    simplicity_check,
    two_fold_branch_quadratic,
    two_fold_curve,
)
from gaudin3.curve import GaudinCurve, curve_for
from gaudin3.errors import InvalidWeightsError, PreconditionFailedError
from gaudin3.hamiltonian import WeightConfig
from gaudin3.polyalg import BiPoly, UniPoly

F = Fraction

WITNESS = SimpleNamespace(transitive=True)

# frozen reference: monic discriminant of the (3, 4, 4) weight-3 curve
DISC_344 = UniPoly.make("u", [
    1,
    F(-11364, 1225),
    F(56991, 1225),
    F(-36208, 245),
    F(9784071, 30625),
    F(-15151356, 30625),
    F(3489114, 6125),
    F(-15151356, 30625),
    F(9784071, 30625),
    F(-36208, 245),
    F(56991, 1225),
    F(-11364, 1225),
    1,
])


def test_discriminant_344_exact():
    disc = discriminant_u(curve_for(WeightConfig(3, 4, 4, 4)))
    assert disc.monic == DISC_344
    assert disc.raw.degree() == 4 * 3
    assert disc.raw == disc.monic.scale(disc.lead)


def test_discriminant_two_fold_111():
    disc = discriminant_u(curve_for(WeightConfig(1, 1, 1, 1)))
    assert disc.monic == UniPoly.make("u", [1, -1, 1])
    assert disc.lead == -4


def test_discriminant_r0_constant():
    curve = curve_for(WeightConfig(3, 4, 4, 0))
    assert curve.degree == 1
    disc = discriminant_u(curve)
    assert disc.monic.degree() == 0
    bset = branch_points(curve)
    assert bset.branch_count == 0
    assert genus(curve) == 0


def test_discriminant_101010_degree():
    disc = discriminant_u(curve_for(WeightConfig(10, 10, 10, 6)))
    assert disc.raw.degree() == 7 * 6


def test_branch_points_344():
    bset = branch_points(curve_for(WeightConfig(3, 4, 4, 4)), precision=212)
    assert bset.branch_count == 12
    assert bset.squarefree
    assert bset.no_real_roots
    assert bset.conjugate_pairing
    assert all(r < mp.mpf("1e-30") for r in bset.radii)
    # Vieta: sum of roots = -(u^11 coefficient)
    with mp.workprec(230):
        total = sum(bset.roots)
        assert abs(total - mp.mpf(11364) / 1225) < mp.mpf("1e-25")


def test_branch_points_101010():
    bset = branch_points(curve_for(WeightConfig(10, 10, 10, 6)), precision=212)
    assert bset.branch_count == 42
    assert bset.squarefree and bset.no_real_roots and bset.conjugate_pairing


def test_branch_points_memoized():
    curve = curve_for(WeightConfig(3, 4, 4, 4))
    first = branch_points(curve, precision=212)
    assert branch_points(curve, precision=212) is first


def test_all_roots_integer_grid():
    poly = UniPoly.const("u", F(1))
    for k in range(1, 9):
        poly = poly * UniPoly.make("u", [-k, 1])
    roots, radii = all_roots(poly, precision=212)
    assert len(roots) == 8
    for k, z in enumerate(sorted(roots, key=lambda z: mp.re(z)), start=1):
        assert abs(z - k) < mp.mpf("1e-25")
    assert all(r < mp.mpf("1e-25") for r in radii)


def test_all_roots_close_pair():
    eps = F(1, 10**20)
    poly = UniPoly.make("u", [-1, 1]) * UniPoly.make("u", [-1 - eps, 1]) * \
        UniPoly.make("u", [2, 1])
    roots, radii = all_roots(poly, precision=212)
    assert len(roots) == 3
    vals = sorted(roots, key=lambda z: mp.re(z))
    assert abs(vals[0] + 2) < mp.mpf("1e-40")
    assert abs(vals[2] - vals[1] - mp.mpf(10) ** -20) < mp.mpf("1e-35")


def test_simplicity_references():
    assert simplicity_check(curve_for(WeightConfig(3, 4, 4, 4))).simple
    assert simplicity_check(curve_for(WeightConfig(10, 10, 10, 6))).simple


def test_simplicity_planted_repeated_factor():
    # (x - u)^2 (x + u): discriminant vanishes identically
    poly = BiPoly.make("x", "u", {(3, 0): 1, (2, 1): -1, (1, 2): -1, (0, 3): 1})
    curve = GaudinCurve(WeightConfig(1, 1, 1, 1), poly, 3)
    report = simplicity_check(curve)
    assert not report.simple
    assert "identically" in report.detail


def test_simplicity_planted_triple():
    # x^3 = u^2: triple sheet collision at the cusp parameter u = 0
    poly = BiPoly.make("x", "u", {(3, 0): 1, (0, 2): -1})
    curve = GaudinCurve(WeightConfig(1, 1, 1, 1), poly, 3)
    report = simplicity_check(curve)
    assert not report.simple
    assert not report.squarefree


def test_genus_references():
    assert genus(curve_for(WeightConfig(3, 4, 4, 4)), WITNESS) == 3
    assert genus(curve_for(WeightConfig(10, 10, 10, 6)), WITNESS) == 15


def test_genus_requires_witness():
    with pytest.raises(PreconditionFailedError):
        genus(curve_for(WeightConfig(3, 4, 4, 4)))
    with pytest.raises(PreconditionFailedError):
        genus(curve_for(WeightConfig(3, 4, 4, 4)),
              SimpleNamespace(transitive=False))


def test_genus_requires_simplicity():
    poly = BiPoly.make("x", "u", {(3, 0): 1, (0, 2): -1})
    curve = GaudinCurve(WeightConfig(1, 1, 1, 1), poly, 3)
    with pytest.raises(PreconditionFailedError):
        genus(curve, WITNESS)


@pytest.mark.parametrize("m", [(1, 1, 1), (2, 3, 4), (5, 2, 7), (4, 4, 4)])
def test_two_fold_matches_model(m):
    closed = two_fold_curve(*m)
    general = curve_for(WeightConfig(m[0], m[1], m[2], 1))
    assert closed.poly == general.poly
    assert closed.degree == 2


def test_two_fold_111_spectrum_at_zero():
    curve = two_fold_curve(1, 1, 1)
    expected = BiPoly.make("x", "u", {
        (2, 0): 1, (1, 1): -1, (1, 0): -1,
        (0, 2): F(-3, 4), (0, 1): F(3, 2), (0, 0): F(-3, 4),
    })
    assert curve.poly == expected
    # at u = 0 the eigenvalues are {-d_0, -d_1} = {-1/2, 3/2}
    at_zero = [curve.poly.eval_exact(x0, F(0)) for x0 in (F(-1, 2), F(3, 2))]
    assert at_zero == [0, 0]


def test_two_fold_quadratic_values():
    quad = two_fold_branch_quadratic(1, 1, 1)
    assert quad == UniPoly.make("u", [4, -4, 4])
    with mp.workprec(140):
        up, low = limit_roots(1, 1, 1)
        ref = mp.mpc(1, mp.sqrt(3)) / 2
        assert abs(up - ref) < mp.mpf("1e-25")
        assert abs(low - mp.conj(ref)) < mp.mpf("1e-25")


def test_two_fold_branch_match_234():
    bset = branch_points(two_fold_curve(2, 3, 4), precision=160)
    assert bset.branch_count == 2
    quad = two_fold_branch_quadratic(2, 3, 4)
    for z in bset.roots:
        val = sum(mp.mpf(c.numerator) / c.denominator * z**k
                  for k, c in enumerate(quad.coeffs))
        assert abs(val) < mp.mpf("1e-10")


def test_invalid_weights():
    with pytest.raises(InvalidWeightsError):
        two_fold_curve(0, 1, 1)
    with pytest.raises(InvalidWeightsError):
        two_fold_branch_quadratic(1, -2, 1)


def test_asymptotic_exact_family():
    # r = 1: the branch quadratic rescales exactly, distances stay ~0
    report = asymptotic_limit_check((1, 1, 1), 1, [2, 3], precision=106)
    for entry in report.entries:
        assert entry.branch_count == 2
        assert entry.max_dist_upper < mp.mpf("1e-20")
        assert entry.max_dist_lower < mp.mpf("1e-20")


def test_asymptotic_requires_increasing_scales():
    with pytest.raises(ValueError):
        asymptotic_limit_check((1, 1, 1), 1, [3, 2])


def test_asymptotic_decreasing_small():
    report = asymptotic_limit_check((1, 1, 1), 2, [5, 10, 20], precision=106)
    assert report.decreasing
    assert report.entries[0].branch_count == 6
