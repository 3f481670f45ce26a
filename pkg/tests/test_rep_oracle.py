import random
from dataclasses import replace
from fractions import Fraction

import pytest

from gaudin3.errors import EmptyRangeError, MismatchFoundError, WeightMismatchError
from gaudin3.hamiltonian import WeightConfig, build_model
from gaudin3.rep_oracle import (
    TensorVector,
    apply_gen,
    apply_omega,
    falling,
    norm2_closed,
    oracle_tridiagonal,
    shapovalov,
    singular_dimension_bruteforce,
    singular_family,
    total_e,
    verify_closed_forms,
)

F = Fraction


def test_falling_factorial():
    assert falling(5, 0) == 1
    assert falling(5, 3) == 60
    assert falling(3, 4) == 0


def test_single_leg_actions():
    v = TensorVector.make((4, 0, 0), {(2, 0, 0): 1})
    assert apply_gen(v, 1, "e").terms == {(1, 0, 0): F(6)}      # l(m-l+1) = 2*3
    assert apply_gen(v, 1, "f").terms == {(3, 0, 0): F(1)}
    # h eigenvalue m - 2l = 0 here, so the image is empty
    assert apply_gen(v, 1, "h").is_zero()
    lower = TensorVector.make((4, 0, 0), {(1, 0, 0): 1})
    assert apply_gen(lower, 1, "h").terms == {(1, 0, 0): F(2)}
    top = TensorVector.make((4, 0, 0), {(4, 0, 0): 1})
    assert apply_gen(top, 1, "f").is_zero()


def test_shapovalov_single_leg_norms():
    # S(f^l v, f^l v) = l! (m)_l
    m = 5
    for l in range(m + 1):
        v = TensorVector.make((m, 0, 0), {(l, 0, 0): 1})
        import math
        assert shapovalov(v, v) == math.factorial(l) * falling(m, l)
    v1 = TensorVector.make((m, 0, 0), {(1, 0, 0): 1})
    v2 = TensorVector.make((m, 0, 0), {(2, 0, 0): 1})
    assert shapovalov(v1, v2) == 0


def test_shapovalov_weight_mismatch():
    v = TensorVector.make((1, 1, 1), {(0, 0, 0): 1})
    w = TensorVector.make((1, 1, 2), {(0, 0, 0): 1})
    with pytest.raises(WeightMismatchError):
        shapovalov(v, w)


def test_pair_singular_vector_via_trivial_third_leg():
    # <v1,v2>_1 for m1 = m2 = 1 is v (x) fv - fv (x) v
    family = singular_family(WeightConfig(1, 1, 0, 1))
    assert len(family) == 1
    assert family[0].terms == {(0, 1, 0): F(1), (1, 0, 0): F(-1)}
    assert shapovalov(family[0], family[0]) == 2


def test_singular_family_is_singular_and_orthogonal():
    cfg = WeightConfig(3, 4, 4, 4)
    family = singular_family(cfg)
    assert len(family) == 4
    for w in family:
        assert total_e(w).is_zero()
    for s in range(4):
        for t in range(s + 1, 4):
            assert shapovalov(family[s], family[t]) == 0


def test_family_norms_match_closed_form():
    for args in ((1, 1, 1, 1), (3, 4, 4, 4), (2, 5, 3, 4)):
        cfg = WeightConfig(*args)
        family = singular_family(cfg)
        from gaudin3.hamiltonian import admissible_range
        lo, _ = admissible_range(cfg)
        for i, w in enumerate(family):
            assert shapovalov(w, w) == norm2_closed(cfg, lo + i)


def test_norms_1111():
    cfg = WeightConfig(1, 1, 1, 1)
    assert norm2_closed(cfg, 0) == F(3, 2)
    assert norm2_closed(cfg, 1) == F(2)


def test_omega_self_adjoint_for_shapovalov():
    rng = random.Random(5)
    weights = (2, 3, 2)
    keys = [(l1, l2, l3) for l1 in range(3) for l2 in range(4) for l3 in range(3)]
    for _ in range(10):
        v = TensorVector.make(weights, {k: rng.randint(-3, 3) for k in rng.sample(keys, 4)})
        w = TensorVector.make(weights, {k: rng.randint(-3, 3) for k in rng.sample(keys, 4)})
        for pair in ((1, 2), (1, 3), (2, 3)):
            assert shapovalov(apply_omega(v, pair), w) == shapovalov(v, apply_omega(w, pair))


def test_omega_sum_acts_as_scalar_on_singular_space():
    from gaudin3.hamiltonian import omega_sum_scalar
    cfg = WeightConfig(3, 4, 4, 4)
    scalar = omega_sum_scalar(cfg)
    for w in singular_family(cfg):
        total = apply_omega(w, (1, 2)) + apply_omega(w, (1, 3)) + apply_omega(w, (2, 3))
        assert (total - w.scale(scalar)).is_zero()


def test_oracle_tridiagonal_smallest_case():
    cfg = WeightConfig(1, 1, 1, 1)
    om13 = oracle_tridiagonal(cfg, (1, 3))
    assert om13.diag == (F(-1), F(0))
    assert om13.off_products == (F(3, 4),)
    assert om13.off_signs == (-1,)
    om23 = oracle_tridiagonal(cfg, (2, 3))
    assert om23.off_signs == (1,)
    om12 = oracle_tridiagonal(cfg, (1, 2))
    assert om12.diag == (F(1, 2), F(-3, 2))
    assert om12.off_products == (F(0),)


def test_empty_family_raises():
    with pytest.raises(EmptyRangeError):
        singular_family(WeightConfig(1, 1, 1, 3))


def test_bruteforce_dimensions():
    assert singular_dimension_bruteforce(10, 10, 10, 18) == 7
    assert singular_dimension_bruteforce(3, 4, 4, 3) == 4
    assert singular_dimension_bruteforce(1, 1, 1, 5) == 0
    assert singular_dimension_bruteforce(1, 1, 1, 2) == 0   # parity mismatch
    assert singular_dimension_bruteforce(0, 0, 0, 0) == 1
    assert singular_dimension_bruteforce(2, 2, 2, 0) == 1


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def test_hamiltonians_commute_exactly_on_singular_space():
    # assemble H1, H2 on the (unnormalised) singular basis, where all
    # entries are rational, and check [H1, H2] = 0 at rational u values
    for args in ((3, 4, 4, 4), (2, 5, 3, 4), (4, 7, 2, 3)):
        cfg = WeightConfig(*args)
        family = singular_family(cfg)
        m12 = oracle_tridiagonal(cfg, (1, 2), family=family).matrix
        m13 = oracle_tridiagonal(cfg, (1, 3), family=family).matrix
        m23 = oracle_tridiagonal(cfg, (2, 3), family=family).matrix
        n = len(family)
        for u in (F(2), F(1, 3), F(7, 5)):
            w = u / (u - 1)
            h1 = [[-m12[i][j] - u * m13[i][j] for j in range(n)] for i in range(n)]
            h2 = [[m12[i][j] + w * m23[i][j] for j in range(n)] for i in range(n)]
            assert _matmul(h1, h2) == _matmul(h2, h1)


def test_verify_sweep_small_and_corrupt_hook():
    report = verify_closed_forms(2)
    assert report["models"] > 0 and report["checks"] > report["models"]

    def corrupt(model):
        if model.c2:
            return replace(model, c2=tuple(c + 1 for c in model.c2))
        return model

    with pytest.raises(MismatchFoundError):
        verify_closed_forms(2, corrupt=corrupt)
