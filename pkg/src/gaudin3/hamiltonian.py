"""Closed-form tridiagonal data for the three-point sl2 Gaudin model.

For highest weights (m1, m2, m3) and total lowering depth r, the singular
vectors of weight m1+m2+m3-2r in V_m1 (x) V_m2 (x) V_m3 carry an orthonormal
basis indexed by the admissible first-pair depth r1. In that basis the pair
operators Omega_ij = e(x)f + f(x)e + h(x)h/2 act as

    Omega_12 = diag(d),  Omega_23 = tridiag(b; +c),  Omega_13 = tridiag(a; -c),

with rational diagonals d, a, b and positive squared off-diagonals c^2 given
by explicit formulas below. The commuting Hamiltonians at the marked points
(0, 1, 1/u, infinity) are

    H1 = -Omega_12 - u*Omega_13,
    H2 =  Omega_12 + u/(u-1)*Omega_23,
    H3 = -H1 - H2.

All model data is exact (Fraction); numeric matrices are produced on demand
at a requested binary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath as mp
import numpy as np

from .errors import EmptyRangeError, PoleAtOneError
from .polyalg import rat_from_str, rat_to_str


@dataclass(frozen=True)
class WeightConfig:
    """Nonnegative integer highest weights and total lowering depth."""

    m1: int
    m2: int
    m3: int
    r: int

    def __post_init__(self):
        for name in ("m1", "m2", "m3", "r"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")

    @property
    def mu(self) -> int:
        """Weight of the singular space: m1 + m2 + m3 - 2r."""
        return self.m1 + self.m2 + self.m3 - 2 * self.r

    def weights(self) -> tuple[int, int, int]:
        return (self.m1, self.m2, self.m3)


def admissible_range(cfg: WeightConfig) -> tuple[int, int] | None:
    """Admissible first-pair depths: max(0, r-m3) <= r1 <= min(r, m1, m2, m1+m2-r).

    Returns (lo, hi) inclusive, or None when the range is empty.
    """
    lo = max(0, cfg.r - cfg.m3)
    hi = min(cfg.r, cfg.m1, cfg.m2, cfg.m1 + cfg.m2 - cfg.r)
    if lo > hi:
        return None
    return (lo, hi)


def singular_dimension(cfg: WeightConfig) -> int:
    rng = admissible_range(cfg)
    if rng is None:
        return 0
    return rng[1] - rng[0] + 1


def omega_sum_scalar(cfg: WeightConfig) -> Fraction:
    """Scalar action of Omega_12 + Omega_13 + Omega_23 on the singular space.

    Equals d_{r1} + a_{r1} + b_{r1} for every admissible r1.
    """
    m1, m2, m3, r = cfg.m1, cfg.m2, cfg.m3, cfg.r
    msum = m1 + m2 + m3
    return (-r * (msum - r + 1)
            + Fraction(msum * (msum + 2) - sum(m * (m + 2) for m in (m1, m2, m3)), 4))


def _ratio(num: int, den: int) -> Fraction:
    """num/den where a zero numerator wins over a zero denominator.

    The four-term diagonal formulas hit 0/0 at the range edge r1 = r = m1 = m2;
    the correct limit is 0 (the vanishing numerator factor is exact, not a
    cancellation artifact). A zero denominator under a nonzero numerator would
    be a genuine formula violation and raises.
    """
    if num == 0:
        return Fraction(0)
    if den == 0:
        raise ArithmeticError("vanishing denominator with nonzero numerator")
    return Fraction(num, den)


def d_value(cfg: WeightConfig, r1: int) -> Fraction:
    m1, m2 = cfg.m1, cfg.m2
    return r1 * (r1 - m1 - m2 - 1) + Fraction(m1 * m2, 2)


def a_value(cfg: WeightConfig, r1: int) -> Fraction:
    m1, m2, m3, r = cfg.m1, cfg.m2, cfg.m3, cfg.r
    return (Fraction(m1 * (m3 - 2 * r), 2)
            + r1 * (m1 - m3 + 2 * r - 2 * r1)
            + _ratio(r1 * (m1 - r1 + 1) * (r - r1 + 1) * (m3 - r + r1),
                     m1 + m2 - 2 * r1 + 2)
            - _ratio((r1 + 1) * (m1 - r1) * (r - r1) * (m3 - r + r1 + 1),
                     m1 + m2 - 2 * r1))


def b_value(cfg: WeightConfig, r1: int) -> Fraction:
    m1, m2, m3, r = cfg.m1, cfg.m2, cfg.m3, cfg.r
    return (Fraction(m2 * (m3 - 2 * r), 2)
            + r1 * (m2 - m3 + 2 * r - 2 * r1)
            + _ratio(r1 * (m2 - r1 + 1) * (r - r1 + 1) * (m3 - r + r1),
                     m1 + m2 - 2 * r1 + 2)
            - _ratio((r1 + 1) * (m2 - r1) * (r - r1) * (m3 - r + r1 + 1),
                     m1 + m2 - 2 * r1))


def c2_value(cfg: WeightConfig, r1: int) -> Fraction:
    """Squared off-diagonal entry joining depths r1 and r1+1."""
    m1, m2, m3, r = cfg.m1, cfg.m2, cfg.m3, cfg.r
    num = ((r1 + 1) * (r - r1) * (m1 - r1) * (m2 - r1)
           * (m1 + m2 - r1 + 1) * (m3 - r + r1 + 1)
           * (m1 + m2 - r - r1) * (m1 + m2 + m3 - r - r1 + 1))
    den = ((m1 + m2 - 2 * r1 - 1) * (m1 + m2 - 2 * r1) ** 2
           * (m1 + m2 - 2 * r1 + 1))
    return _ratio(num, den)


@dataclass(frozen=True)
class TridiagonalModel:
    """Exact tridiagonal data of the pair operators on the singular space.

    Index i = 0..size-1 corresponds to depth r1 = r1_min + i. ``c2[i]`` joins
    indices i and i+1 (length size-1).
    """

    cfg: WeightConfig
    r1_min: int
    r1_max: int
    d: tuple[Fraction, ...]
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    c2: tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return self.r1_max - self.r1_min + 1


def build_model(cfg: WeightConfig) -> TridiagonalModel:
    """Assemble the exact model; raises EmptyRangeError on empty range.

    Construction-time invariants: every c^2 strictly positive, the diagonal
    sum d + a + b constant and equal to the known scalar, and the d values
    pairwise distinct.
    """
    rng = admissible_range(cfg)
    if rng is None:
        raise EmptyRangeError(f"no admissible depths for {cfg}")
    lo, hi = rng
    depths = range(lo, hi + 1)
    d = tuple(d_value(cfg, r1) for r1 in depths)
    a = tuple(a_value(cfg, r1) for r1 in depths)
    b = tuple(b_value(cfg, r1) for r1 in depths)
    c2 = tuple(c2_value(cfg, r1) for r1 in range(lo, hi))
    scalar = omega_sum_scalar(cfg)
    for i, r1 in enumerate(depths):
        if d[i] + a[i] + b[i] != scalar:
            raise ArithmeticError(f"diagonal sum identity fails at r1={r1} for {cfg}")
    for i, c in enumerate(c2):
        if c <= 0:
            raise ArithmeticError(f"nonpositive c^2 at index {i} for {cfg}")
    if len(set(d)) != len(d):
        raise ArithmeticError(f"coinciding diagonal d values for {cfg}")
    return TridiagonalModel(cfg, lo, hi, d, a, b, c2)


def _tridiag_coeffs(model: TridiagonalModel, u, which: int):
    """Exact (diag, offdiag) entry generators for H_which at parameter u.

    u may be any scalar supporting field arithmetic with Fraction (Fraction,
    float, complex, mpf, mpc). The off-diagonal factor multiplies c (the
    positive square root of c2).
    """
    if which not in (1, 2, 3):
        raise ValueError("which must be 1, 2, or 3")
    d, a, b = model.d, model.a, model.b
    if which == 1:
        diag = [-d[i] - u * a[i] for i in range(model.size)]
        off_factor = u          # -u * (-c) = +u c
    elif which == 2:
        if u == 1:
            raise PoleAtOneError("H2 has a pole at u = 1")
        w = u / (u - 1)
        diag = [d[i] + w * b[i] for i in range(model.size)]
        off_factor = w
    else:
        if u == 1:
            raise PoleAtOneError("H3 has a pole at u = 1")
        w = u / (1 - u)
        diag = [u * a[i] + w * b[i] for i in range(model.size)]
        off_factor = w - u      # -u*c + w*c
    return diag, off_factor


def hamiltonian_at(model: TridiagonalModel, u, which: int = 1,
                   precision: int = 53):
    """Numeric symmetric tridiagonal matrix of H_which at parameter u.

    precision <= 53 returns a numpy array (real when the data is real),
    higher precisions return an mpmath matrix. H2 and H3 reject u = 1.
    """
    diag, off_factor = _tridiag_coeffs(model, u, which)
    n = model.size
    if precision <= 53:
        complex_out = any(isinstance(v, (complex, mp.mpc))
                          for v in list(diag) + [off_factor, u])
        dtype = np.complex128 if complex_out else np.float64
        h = np.zeros((n, n), dtype=dtype)
        for i in range(n):
            h[i, i] = complex(diag[i]) if complex_out else float(diag[i])
        for i, c2 in enumerate(model.c2):
            c = np.sqrt(float(c2))
            val = off_factor * c
            h[i, i + 1] = h[i + 1, i] = complex(val) if complex_out else float(val)
        return h
    with mp.workprec(precision):
        h = mp.zeros(n, n)
        for i in range(n):
            v = diag[i]
            h[i, i] = (mp.mpf(v.numerator) / v.denominator
                       if isinstance(v, Fraction) else mp.mpmathify(v))
        for i, c2 in enumerate(model.c2):
            c = mp.sqrt(mp.mpf(c2.numerator) / c2.denominator)
            fac = (mp.mpf(off_factor.numerator) / off_factor.denominator
                   if isinstance(off_factor, Fraction) else mp.mpmathify(off_factor))
            h[i, i + 1] = h[i + 1, i] = fac * c
        return h


def model_to_json(model: TridiagonalModel) -> dict:
    cfg = model.cfg
    return {
        "schema": 1,
        "config": {"m1": cfg.m1, "m2": cfg.m2, "m3": cfg.m3, "r": cfg.r},
        "r1_min": model.r1_min,
        "r1_max": model.r1_max,
        "d": [rat_to_str(v) for v in model.d],
        "a": [rat_to_str(v) for v in model.a],
        "b": [rat_to_str(v) for v in model.b],
        "c2": [rat_to_str(v) for v in model.c2],
    }


def model_from_json(obj: Mapping) -> TridiagonalModel:
    c = obj["config"]
    cfg = WeightConfig(c["m1"], c["m2"], c["m3"], c["r"])
    return TridiagonalModel(
        cfg, int(obj["r1_min"]), int(obj["r1_max"]),
        tuple(rat_from_str(s) for s in obj["d"]),
        tuple(rat_from_str(s) for s in obj["a"]),
        tuple(rat_from_str(s) for s in obj["b"]),
        tuple(rat_from_str(s) for s in obj["c2"]),
    )
