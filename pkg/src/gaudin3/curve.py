"""Spectral curve of the three-point model.

The curve is the characteristic surface

    f(x, u, w) = det( x*Id + u*Omega13 + w*Omega12 )

over the singular space, computed exactly from the tridiagonal model by the
three-term recurrence on leading principal minors

    p_0 = 1,  p_{-1} = 0,
    p_k = (x + u*a_{k-1} + w*d_{k-1}) p_{k-1} - u^2 c2_{k-2} p_{k-2},

so f = p_N. The stored polynomial is the w = 1 slice in (x, u); f is
homogeneous of total degree N, so nothing is lost. Eigenvectors of the pencil
are the last adjugate column, whose closed form in terms of the minors is

    v_i = u^(N-1-i) * (c_i ... c_{N-2}) * p_i        (0-based i),

and the isotropy invariant v.v (plain transpose square, normalised) vanishes
exactly at critical points of the u-covering. Smoothness of the projective
curve is certified by exact resultant/gcd elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import mpmath as mp
import numpy as np

from .errors import InconclusiveElimination, OffCurveError
from .hamiltonian import TridiagonalModel, WeightConfig, build_model
from .polyalg import (
    BiPoly,
    UniPoly,
    gcd_uni,
    is_coprime,
    rat_from_str,
    rat_to_str,
    resultant_x,
)

VX, VU = "x", "u"


@dataclass(eq=False)
class GaudinCurve:
    """Exact curve data: weight configuration, w = 1 polynomial, degree."""

    cfg: WeightConfig
    poly: BiPoly
    degree: int
    _memo: dict = field(default_factory=dict, repr=False)


def char_poly(model: TridiagonalModel) -> GaudinCurve:
    """Exact curve polynomial from the tridiagonal model.

    Asserts the structural invariants used downstream: monic of degree N in
    x, total degree N (homogeneity of the w-restored polynomial), and the
    isobaric bound deg_u(coefficient of x^j) <= N - j.
    """
    n = model.size
    u_sq = BiPoly.make(VX, VU, {(0, 2): 1})
    p_prev = BiPoly.const(VX, VU, 1)
    p_prev2 = BiPoly.zero(VX, VU)
    for k in range(n):
        lin = BiPoly.linear(VX, VU, 1, model.a[k], model.d[k])
        p = lin * p_prev
        if k >= 1:
            p = p - u_sq.scale(model.c2[k - 1]) * p_prev2
        p_prev2, p_prev = p_prev, p
    f = p_prev
    if f.deg_x() != n or f.coeff_of_x(n) != UniPoly.const(VU, 1):
        raise ArithmeticError("curve polynomial is not monic of the covering degree")
    if f.total_degree() > n:
        raise ArithmeticError("curve polynomial exceeds total degree N")
    for (dx, du) in f.terms:
        if du > n - dx:
            raise ArithmeticError("isobaric degree bound violated")
    return GaudinCurve(model.cfg, f, n)


def curve_for(cfg: WeightConfig) -> GaudinCurve:
    return char_poly(build_model(cfg))


def homogeneous_terms(curve: GaudinCurve) -> dict:
    """The full trivariate polynomial as {(deg_x, deg_u, deg_w): coeff}."""
    n = curve.degree
    return {(dx, du, n - dx - du): c for (dx, du), c in curve.poly.terms.items()}


def top_form(curve: GaudinCurve) -> BiPoly:
    """Restriction to the line w = 0: the total-degree-N homogeneous part."""
    n = curve.degree
    return BiPoly.make(VX, VU, {k: c for k, c in curve.poly.terms.items()
                                if k[0] + k[1] == n})


def curve_to_json(curve: GaudinCurve) -> dict:
    cfg = curve.cfg
    return {
        "schema": 1,
        "config": {"m1": cfg.m1, "m2": cfg.m2, "m3": cfg.m3, "r": cfg.r},
        "degree": curve.degree,
        "variables": [VX, VU],
        "monomials": [[dx, du, rat_to_str(c)] for dx, du, c in curve.poly.sorted_terms()],
    }


def curve_from_json(obj: Mapping) -> GaudinCurve:
    c = obj["config"]
    cfg = WeightConfig(c["m1"], c["m2"], c["m3"], c["r"])
    terms: dict = {}
    for dx, du, s in obj["monomials"]:
        terms[(int(dx), int(du))] = rat_from_str(s)
    return GaudinCurve(cfg, BiPoly.make(VX, VU, terms), int(obj["degree"]))


# ---------------------------------------------------------------------------
# numeric evaluation through the recurrence


def _model_reals(model: TridiagonalModel):
    """(a, d, c2, c) converted to mpf at the current working precision."""
    conv = lambda q: mp.mpf(q.numerator) / q.denominator
    a = [conv(v) for v in model.a]
    d = [conv(v) for v in model.d]
    c2 = [conv(v) for v in model.c2]
    c = [mp.sqrt(v) for v in c2]
    return a, d, c2, c


def _minor_track(model, a, d, c2, x, u, w):
    """Leading principal minors p_0..p_N and a magnitude accumulator."""
    n = model.size
    ps = [mp.mpc(1)]
    mags = [mp.mpf(1)]
    p_prev2, p_prev = mp.mpc(0), mp.mpc(1)
    m_prev2, m_prev = mp.mpf(0), mp.mpf(1)
    uu = u * u
    auu = abs(uu)
    for k in range(n):
        lin = x + u * a[k] + w * d[k]
        p = lin * p_prev
        m = abs(lin) * m_prev
        if k >= 1:
            p = p - uu * c2[k - 1] * p_prev2
            m = m + auu * c2[k - 1] * m_prev2
        ps.append(p)
        mags.append(m)
        p_prev2, p_prev = p_prev, p
        m_prev2, m_prev = m_prev, m
    return ps, mags


def curve_value(model: TridiagonalModel, x, u, w=1, precision: int = 53):
    """f(x, u, w) through the recurrence; returns (value, error bound).

    The bound is a conservative running-error estimate from the magnitude
    recurrence (it also absorbs coefficient conversion rounding).
    """
    prec = max(precision, 53) + 16
    with mp.workprec(prec):
        a, d, c2, _ = _model_reals(model)
        xc, uc, wc = mp.mpc(x), mp.mpc(u), mp.mpc(w)
        ps, mags = _minor_track(model, a, d, c2, xc, uc, wc)
        eps = mp.mpf(2) ** (1 - prec)
        err = (6 * model.size + 10) * eps * mags[-1]
    return ps[-1], err


@dataclass
class EigenvectorResult:
    vector: tuple
    degenerate: bool


def eigenvector_at(model: TridiagonalModel, x, u, w=1,
                   precision: int = 53) -> EigenvectorResult:
    """Last adjugate column of x*Id + u*Omega13 + w*Omega12.

    At degenerate on-curve points the adjugate column can vanish identically
    (e.g. u = 0 with x at a non-final diagonal entry); a nullspace solve is
    then used instead and the result is flagged degenerate.
    """
    prec = max(precision, 53) + 16
    n = model.size
    with mp.workprec(prec):
        a, d, c2, c = _model_reals(model)
        xc, uc, wc = mp.mpc(x), mp.mpc(u), mp.mpc(w)
        ps, mags = _minor_track(model, a, d, c2, xc, uc, wc)
        # suffix products of c and powers of u
        suffix = [mp.mpf(1)] * (n + 1)
        for i in range(n - 2, -1, -1):
            suffix[i] = suffix[i + 1] * c[i]
        upow = [mp.mpc(1)]
        for _ in range(n):
            upow.append(upow[-1] * uc)
        vec = [upow[n - 1 - i] * suffix[i] * ps[i] for i in range(n)]
        scale = max((abs(v) for v in vec), default=mp.mpf(0))
        ref = max(mags[-1], mp.mpf(1))
        if scale > ref * mp.mpf(2) ** (-prec // 2):
            return EigenvectorResult(tuple(vec), False)
        # adjugate column vanished: only legitimate on the curve
        fval, ferr = ps[-1], (6 * n + 10) * mp.mpf(2) ** (1 - prec) * mags[-1]
        if abs(fval) > max(16 * ferr, ref * mp.mpf(2) ** (-prec // 2)):
            raise ArithmeticError("zero adjugate column at an off-curve point")
        vec = _nullvector(n, a, d, c, xc, uc, wc)
        return EigenvectorResult(tuple(vec), True)


def _nullvector(n, a, d, c, x, u, w):
    """Approximate nullvector by row reduction with partial pivoting.

    The numerically smallest pivot column is treated as free; with the
    matrix (approximately) rank n - 1 this recovers the kernel direction.
    """
    m = [[mp.mpc(0)] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = x + u * a[i] + w * d[i]
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = -u * c[i]
    pivots: list[tuple[int, int]] = []  # (row, col)
    row = 0
    for col in range(n):
        best, best_val = None, mp.mpf(0)
        for r in range(row, n):
            val = abs(m[r][col])
            if val > best_val:
                best, best_val = r, val
        if best is None or best_val < mp.mpf(2) ** (-mp.mp.prec + 8):
            continue  # (near) zero column below the reduced block: free
        m[row], m[best] = m[best], m[row]
        inv = 1 / m[row][col]
        for j in range(col, n):
            m[row][j] *= inv
        for r in range(n):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                for j in range(col, n):
                    m[r][j] -= factor * m[row][j]
        pivots.append((row, col))
        row += 1
    piv_cols = {cc for _, cc in pivots}
    free = [j for j in range(n) if j not in piv_cols]
    fcol = free[0] if free else n - 1
    vec = [mp.mpc(0)] * n
    vec[fcol] = mp.mpc(1)
    for rr, cc in pivots:
        if cc != fcol:
            vec[cc] = -m[rr][fcol]
    return vec


def isotropy(model: TridiagonalModel, x, u, w=1, precision: int = 53):
    """Plain transpose square v.v of the normalised curve eigenvector.

    Raises OffCurveError when f(x, u, w) is not zero within the tolerance
    (1 + magnitude) * 2^(-precision/2) derived from the evaluation bound.
    """
    prec = max(precision, 53) + 16
    with mp.workprec(prec):
        fval, ferr = curve_value(model, x, u, w, precision)
        a, d, c2, _ = _model_reals(model)
        _, mags = _minor_track(model, a, d, c2, mp.mpc(x), mp.mpc(u), mp.mpc(w))
        tol = (1 + mags[-1]) * mp.mpf(2) ** (-max(precision, 53) // 2)
        if abs(fval) > max(tol, 16 * ferr):
            raise OffCurveError(f"|f| = {mp.nstr(abs(fval), 6)} exceeds tolerance")
        res = eigenvector_at(model, x, u, w, precision)
        norm2 = mp.mpf(0)
        for v in res.vector:
            norm2 += abs(v) ** 2
        if norm2 == 0:
            return mp.mpc(0)
        total = mp.mpc(0)
        for v in res.vector:
            total += v * v
        return total / norm2


# ---------------------------------------------------------------------------
# smoothness certification


@dataclass
class SmoothnessReport:
    smooth: bool
    affine_certificate: str
    infinity_certificate: str
    singular_candidates: list


def _roots_float(p: UniPoly) -> list[complex]:
    cs = [float(c) for c in reversed(p.coeffs)]
    if len(cs) <= 1:
        return []
    return [complex(z) for z in np.roots(cs)]


def smoothness_check(curve: GaudinCurve) -> SmoothnessReport:
    """Exact smoothness certificate for the projective curve.

    Affine chart: gcd(Res_x(f, f_x), Res_x(f, f_u)) = 1 certifies no affine
    singular point (f is monic in x, so elimination loses nothing). The line
    w = 0: the three restricted partials are binary forms; a constant gcd
    certifies smoothness there. Degenerate eliminations raise; failures
    produce approximate candidate points, never a silent pass.
    """
    n = curve.degree
    if n < 1:
        raise InconclusiveElimination("degenerate curve of degree 0")
    if n == 1:
        return SmoothnessReport(True, "linear in x (gradient never vanishes)",
                                "linear form", [])
    f = curve.poly
    fx = f.diff_x()
    fu = f.diff_u()
    if fu.is_zero():
        raise InconclusiveElimination("curve does not depend on u")
    r1 = resultant_x(f, fx, deg_bound=n * (n - 1))
    r2 = resultant_x(f, fu)
    if r1.is_zero() or r2.is_zero():
        raise InconclusiveElimination("resultant elimination degenerated")
    candidates: list[tuple[complex, complex, complex]] = []
    if is_coprime(r1, r2):
        affine_cert = "coprime resultants Res_x(f,f_x), Res_x(f,f_u)"
    else:
        affine_cert = "resultants share a factor"
        shared = gcd_uni(r1, r2)
        for u0 in _roots_float(shared):
            # x-candidates: roots of f(. , u0) where both partials are small
            cs = [sum(complex(cc) * u0**du for du, cc in enumerate(f.coeff_of_x(j).coeffs))
                  for j in range(n + 1)]
            for x0 in np.roots(list(reversed(cs))):
                gx = sum(complex(c) * x0**dx * u0**du
                         for (dx, du), c in fx.terms.items())
                gu = sum(complex(c) * x0**dx * u0**du
                         for (dx, du), c in fu.terms.items())
                if abs(gx) < 1e-6 and abs(gu) < 1e-6:
                    candidates.append((complex(x0), complex(u0), 1.0 + 0j))
    # the line w = 0
    t = top_form(curve)
    b1 = t.diff_x()          # F_x restricted to w = 0
    b2 = t.diff_u()          # F_u restricted to w = 0
    b3 = BiPoly.make(VX, VU, {k: c for k, c in f.terms.items()
                              if k[0] + k[1] == n - 1})  # F_w restricted to w = 0
    forms = [g for g in (b1, b2, b3) if not g.is_zero()]
    if not forms:
        raise InconclusiveElimination("all restricted partials vanish on w = 0")
    gcd_inf = None
    for g in forms:
        gu1 = UniPoly.make(VX, [g.coeff_of_x(j)(Fraction(1)) for j in range(g.deg_x() + 1)])
        gcd_inf = gu1 if gcd_inf is None else gcd_uni(gcd_inf, gu1)
        if gcd_inf.degree() == 0:
            break
    # the point (1:0:0): for a monic degree-N curve F_x = N there, but a
    # hand-built polynomial can be singular at it, so check it exactly
    def _at_pure_x(g: BiPoly) -> Fraction:
        return sum((c for (dx, du), c in g.terms.items() if du == 0),
                   Fraction(0))
    on_100 = _at_pure_x(t) == 0
    sing_100 = on_100 and all(_at_pure_x(g) == 0 for g in (b1, b2, b3))
    if gcd_inf is not None and gcd_inf.degree() == 0 and not sing_100:
        inf_cert = "restricted partials coprime on w = 0"
    else:
        inf_cert = "restricted partials share roots on w = 0"
        if sing_100:
            candidates.append((1.0 + 0j, 0j, 0j))
        t1 = UniPoly.make(VX, [t.coeff_of_x(j)(Fraction(1)) for j in range(t.deg_x() + 1)]) \
            if t.deg_x() >= 0 else UniPoly.zero(VX)
        scale = 1.0 + max((abs(float(cc)) for cc in t1.coeffs), default=0.0)
        for x0 in _roots_float(gcd_inf):
            val = sum(float(cc) * x0**j for j, cc in enumerate(t1.coeffs))
            if abs(val) < 1e-6 * scale:
                candidates.append((complex(x0), 1.0 + 0j, 0j))
    smooth = not candidates and affine_cert.startswith("coprime") and \
        inf_cert.startswith("restricted partials coprime")
    return SmoothnessReport(smooth, affine_cert, inf_cert, candidates)
