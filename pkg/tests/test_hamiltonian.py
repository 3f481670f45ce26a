from dataclasses import replace
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from gaudin3.errors import EmptyRangeError, PoleAtOneError
from gaudin3.hamiltonian import (
    WeightConfig,
    a_value,
    admissible_range,
    b_value,
    build_model,
    c2_value,
    d_value,
    hamiltonian_at,
    model_from_json,
    model_to_json,
    omega_sum_scalar,
    singular_dimension,
)

F = Fraction


def test_weight_config_validation():
    with pytest.raises(ValueError):
        WeightConfig(-1, 2, 3, 1)
    with pytest.raises(ValueError):
        WeightConfig(1, 2, 3, -1)
    cfg = WeightConfig(3, 4, 4, 4)
    assert cfg.mu == 3


def test_admissible_ranges_and_dimensions():
    cases = {
        (3, 4, 4, 4): ((0, 3), 4),
        (10, 10, 10, 6): ((0, 6), 7),
        (30, 30, 30, 20): ((0, 20), 21),
        (31, 32, 33, 23): ((0, 23), 24),
        (4, 7, 2, 3): ((1, 3), 3),
        (4, 7, 2, 5): ((3, 4), 2),
        (1, 1, 1, 3): (None, 0),
        (0, 0, 0, 0): ((0, 0), 1),
    }
    for args, (rng, dim) in cases.items():
        cfg = WeightConfig(*args)
        assert admissible_range(cfg) == rng
        assert singular_dimension(cfg) == dim


def test_reference_model_3444():
    model = build_model(WeightConfig(3, 4, 4, 4))
    assert model.d == (F(6), F(-1), F(-6), F(-9))
    assert model.a == (F(-54, 7), F(-143, 35), F(-6, 5), F(3))
    assert model.b == (F(-72, 7), F(-242, 35), F(-24, 5), F(-6))
    assert model.c2 == (F(192, 49), F(294, 25), F(18))
    assert omega_sum_scalar(model.cfg) == F(-12)


def test_smallest_nontrivial_model():
    model = build_model(WeightConfig(1, 1, 1, 1))
    assert model.d == (F(1, 2), F(-3, 2))
    assert model.a == (F(-1), F(0))
    assert model.b == (F(-1), F(0))
    assert model.c2 == (F(3, 4),)


def test_zero_over_zero_edge_resolved():
    # r1 = r = m1 = m2 makes one diagonal term 0/0; the zero numerator wins
    cfg = WeightConfig(3, 3, 3, 3)
    assert admissible_range(cfg) == (0, 3)
    assert a_value(cfg, 3) == 0
    build_model(cfg)


def test_diagonal_sum_identity_samples():
    for args in ((2, 5, 3, 4), (6, 6, 6, 9), (4, 7, 2, 5), (5, 1, 4, 3)):
        cfg = WeightConfig(*args)
        if singular_dimension(cfg) == 0:
            continue
        model = build_model(cfg)
        s = omega_sum_scalar(cfg)
        for i in range(model.size):
            assert model.d[i] + model.a[i] + model.b[i] == s


def test_c2_positive_everywhere():
    for args in ((3, 4, 4, 4), (10, 10, 10, 6), (6, 6, 6, 9), (2, 2, 9, 2)):
        model = build_model(WeightConfig(*args))
        assert all(c > 0 for c in model.c2)


def test_empty_range_raises():
    with pytest.raises(EmptyRangeError):
        build_model(WeightConfig(1, 1, 1, 3))


def test_hamiltonian_matrices_at_rational_point():
    model = build_model(WeightConfig(3, 4, 4, 4))
    u = F(2, 5)
    h1 = hamiltonian_at(model, u, which=1)
    h2 = hamiltonian_at(model, u, which=2)
    h3 = hamiltonian_at(model, u, which=3)
    assert h1.dtype == np.float64
    np.testing.assert_allclose(h1, h1.T)
    np.testing.assert_allclose(h3, -(h1 + h2), atol=1e-12)
    # spot-check entries against the definition
    assert h1[0, 0] == pytest.approx(float(-model.d[0] - u * model.a[0]))
    w = u / (u - 1)
    assert h2[1, 2] == pytest.approx(float(w) * np.sqrt(float(model.c2[1])))
    assert h1[0, 1] == pytest.approx(float(u) * np.sqrt(float(model.c2[0])))


def test_hamiltonian_high_precision_matches_float_path():
    model = build_model(WeightConfig(3, 4, 4, 4))
    u = F(3, 7)
    h_np = hamiltonian_at(model, u, which=1)
    h_mp = hamiltonian_at(model, u, which=1, precision=200)
    for i in range(model.size):
        for j in range(model.size):
            assert abs(float(h_mp[i, j]) - h_np[i, j]) < 1e-13


def test_hamiltonian_complex_parameter():
    model = build_model(WeightConfig(1, 1, 1, 1))
    h = hamiltonian_at(model, 0.3 + 0.4j, which=1)
    assert h.dtype == np.complex128
    assert h[0, 1] == h[1, 0]


def test_pole_at_one():
    model = build_model(WeightConfig(1, 1, 1, 1))
    with pytest.raises(PoleAtOneError):
        hamiltonian_at(model, 1, which=2)
    with pytest.raises(PoleAtOneError):
        hamiltonian_at(model, F(1), which=3)
    hamiltonian_at(model, 1, which=1)  # H1 is polynomial in u


def test_model_json_round_trip():
    model = build_model(WeightConfig(4, 7, 2, 3))
    obj = model_to_json(model)
    assert obj["schema"] == 1
    assert model_from_json(obj) == model


def test_gauge_sign_flip_leaves_spectrum_invariant():
    # flipping the sign of any off-diagonal c is a diagonal conjugation:
    # characteristic polynomials (here: eigenvalues) must coincide
    model = build_model(WeightConfig(3, 4, 4, 4))
    u = 0.37
    h = hamiltonian_at(model, u, which=1)
    flipped = h.copy()
    for k in (0, 2):
        flipped[k, k + 1] = -flipped[k, k + 1]
        flipped[k + 1, k] = -flipped[k + 1, k]
    ev1 = np.sort(np.linalg.eigvalsh(h))
    ev2 = np.sort(np.linalg.eigvalsh(flipped))
    np.testing.assert_allclose(ev1, ev2, rtol=1e-12, atol=1e-12)
