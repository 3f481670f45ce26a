"""Brute-force representation-theoretic oracle.

Works directly with weight vectors in V_m1 (x) V_m2 (x) V_m3, where V_m has
basis f^l v_m (l = 0..m, undivided powers) and

    e f^l v = l(m - l + 1) f^{l-1} v,   h f^l v = (m - 2l) f^l v.

The contravariant (Shapovalov) form is S(f^l v, f^p v) = delta_{lp} l! (m)_l
with (m)_l the falling factorial, extended multiplicatively to tensors. The
singular basis w_{r1} is built from the explicit pair singular vectors and
expanded coefficient by coefficient; the pair operators Omega_ij are applied
literally. Everything here is exact and structurally independent of the
closed-form module, which it exists to cross-validate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import EmptyRangeError, MismatchFoundError, WeightMismatchError
from .hamiltonian import (
    TridiagonalModel,
    WeightConfig,
    admissible_range,
    build_model,
    singular_dimension,
)

Key = tuple[int, int, int]


def falling(m: int, k: int) -> int:
    """Falling factorial m(m-1)...(m-k+1); 1 for k = 0."""
    out = 1
    for i in range(k):
        out *= m - i
    return out


@dataclass(frozen=True)
class TensorVector:
    """Exact vector in a triple tensor product of irreducibles.

    ``terms`` maps (l1, l2, l3) -> coefficient of f^l1 v (x) f^l2 v (x) f^l3 v.
    """

    weights: tuple[int, int, int]
    terms: dict

    @staticmethod
    def make(weights, terms: Mapping) -> "TensorVector":
        m1, m2, m3 = weights
        out = {}
        for (l1, l2, l3), c in terms.items():
            if not (0 <= l1 <= m1 and 0 <= l2 <= m2 and 0 <= l3 <= m3):
                raise ValueError(f"index {(l1, l2, l3)} outside the representation")
            c = Fraction(c)
            if c != 0:
                out[(l1, l2, l3)] = c
        return TensorVector(tuple(weights), out)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TensorVector") -> "TensorVector":
        if self.weights != other.weights:
            raise WeightMismatchError(f"{self.weights} vs {other.weights}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return TensorVector(self.weights, out)

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorVector":
        c = Fraction(c)
        if c == 0:
            return TensorVector(self.weights, {})
        return TensorVector(self.weights, {k: a * c for k, a in self.terms.items()})


def apply_gen(v: TensorVector, leg: int, gen: str) -> TensorVector:
    """Apply e, f, or h on one leg (1-based)."""
    if leg not in (1, 2, 3):
        raise ValueError("leg must be 1, 2, or 3")
    if gen not in ("e", "f", "h"):
        raise ValueError("gen must be 'e', 'f', or 'h'")
    i = leg - 1
    m = v.weights[i]
    out: dict = {}

    def put(key: Key, c: Fraction) -> None:
        s = out.get(key, Fraction(0)) + c
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s

    for key, c in v.terms.items():
        l = key[i]
        if gen == "e":
            if l > 0:
                nk = list(key)
                nk[i] = l - 1
                put(tuple(nk), c * (l * (m - l + 1)))
        elif gen == "f":
            if l < m:
                nk = list(key)
                nk[i] = l + 1
                put(tuple(nk), c)
        else:
            if m != 2 * l:
                put(key, c * (m - 2 * l))
    return TensorVector(v.weights, out)


def apply_omega(v: TensorVector, pair: tuple[int, int]) -> TensorVector:
    """Omega_ij = e_i f_j + f_i e_j + h_i h_j / 2 on the given legs."""
    i, j = pair
    if i == j or not {i, j} <= {1, 2, 3}:
        raise ValueError("pair must name two distinct legs")
    t1 = apply_gen(apply_gen(v, j, "f"), i, "e")
    t2 = apply_gen(apply_gen(v, j, "e"), i, "f")
    t3 = apply_gen(apply_gen(v, j, "h"), i, "h").scale(Fraction(1, 2))
    return t1 + t2 + t3


def total_e(v: TensorVector) -> TensorVector:
    return apply_gen(v, 1, "e") + apply_gen(v, 2, "e") + apply_gen(v, 3, "e")


def shapovalov(v: TensorVector, w: TensorVector) -> Fraction:
    """Contravariant pairing; diagonal in the f-power basis."""
    if v.weights != w.weights:
        raise WeightMismatchError(f"{v.weights} vs {w.weights}")
    tables = [
        [Fraction(math.factorial(l) * falling(m, l)) for l in range(m + 1)]
        for m in v.weights
    ]
    small, big = (v.terms, w.terms) if len(v.terms) <= len(w.terms) else (w.terms, v.terms)
    total = Fraction(0)
    for key, c in small.items():
        other = big.get(key)
        if other is not None:
            l1, l2, l3 = key
            total += c * other * tables[0][l1] * tables[1][l2] * tables[2][l3]
    return total


# -- singular basis ---------------------------------------------------------


def _pair_singular(m1: int, m2: int, l: int) -> dict:
    """Two-leg singular vector <v1,v2>_l as {(p,q): coeff}, p+q = l."""
    out = {}
    for p in range(l + 1):
        q = l - p
        if p > m1 or q > m2:
            continue
        denom = (math.factorial(p) * math.factorial(q)
                 * falling(m1, p) * falling(m2, q))
        out[(p, q)] = Fraction((-1) ** p, denom)
    return out


def _apply_f_two_leg(vec: dict, m1: int, m2: int) -> dict:
    out: dict = {}
    for (p, q), c in vec.items():
        if p < m1:
            key = (p + 1, q)
            out[key] = out.get(key, Fraction(0)) + c
        if q < m2:
            key = (p, q + 1)
            out[key] = out.get(key, Fraction(0)) + c
    return out


def singular_family(cfg: WeightConfig) -> list[TensorVector]:
    """Singular basis w_{r1}, r1 over the admissible range, exact coefficients.

    w_{r1} couples the first-pair singular vector of depth r1 (an sl2 highest
    weight vector of weight m1+m2-2r1) with the third leg at total depth r.
    Each result is checked to be annihilated by the total raising operator.
    """
    rng = admissible_range(cfg)
    if rng is None:
        raise EmptyRangeError(f"no admissible depths for {cfg}")
    m1, m2, m3, r = cfg.m1, cfg.m2, cfg.m3, cfg.r
    family = []
    for r1 in range(rng[0], rng[1] + 1):
        m12 = m1 + m2 - 2 * r1
        cur = _pair_singular(m1, m2, r1)
        terms: dict = {}
        for j in range(r - r1 + 1):
            if j > 0:
                cur = _apply_f_two_leg(cur, m1, m2)
            q3 = r - r1 - j
            if q3 > m3:
                continue
            coef = Fraction((-1) ** j,
                            math.factorial(j) * math.factorial(q3)
                            * falling(m12, j) * falling(m3, q3))
            for (p, q), c in cur.items():
                key = (p, q, q3)
                s = terms.get(key, Fraction(0)) + coef * c
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        w = TensorVector.make((m1, m2, m3), terms)
        if w.is_zero() or not total_e(w).is_zero():
            raise ArithmeticError(f"singular vector construction failed at r1={r1}")
        family.append(w)
    return family


def norm2_closed(cfg: WeightConfig, r1: int) -> Fraction:
    """Closed form for S(w_{r1}, w_{r1}) (product of two pair norms)."""
    m1, m2, m3, r = cfg.m1, cfg.m2, cfg.m3, cfg.r
    first = Fraction(math.comb(m1 + m2 - r1 + 1, r1),
                     falling(m1, r1) * falling(m2, r1))
    second = Fraction(math.comb(m1 + m2 + m3 - r - r1 + 1, r - r1),
                      falling(m1 + m2 - 2 * r1, r - r1) * falling(m3, r - r1))
    return first * second


# -- tridiagonal matrices from the oracle ------------------------------------


@dataclass(frozen=True)
class OracleMatrix:
    """Matrix of a pair operator on the singular basis (unnormalised).

    ``matrix[s][t]`` is the coefficient of w_s in Omega w_t. ``off_products``
    and ``off_signs`` describe the symmetrised off-diagonal: in the
    orthonormal basis the (t, t+1) entry is sign * sqrt(off_products[t]).
    """

    pair: tuple[int, int]
    matrix: tuple
    norms2: tuple
    diag: tuple
    off_products: tuple
    off_signs: tuple


def oracle_tridiagonal(cfg: WeightConfig, pair: tuple[int, int],
                       family: list[TensorVector] | None = None) -> OracleMatrix:
    """Exact matrix of Omega_pair on the singular basis, with consistency checks.

    Checks: the basis is S-orthogonal with positive norms, Omega w_t expands
    exactly in the basis (residual zero), and the matrix is tridiagonal.
    """
    if family is None:
        family = singular_family(cfg)
    n = len(family)
    norms2 = [shapovalov(w, w) for w in family]
    for t, nt in enumerate(norms2):
        if nt <= 0:
            raise ArithmeticError(f"nonpositive norm at index {t}")
    for s in range(n):
        for t in range(s + 1, n):
            if shapovalov(family[s], family[t]) != 0:
                raise ArithmeticError(f"basis not orthogonal at ({s}, {t})")
    images = [apply_omega(w, pair) for w in family]
    matrix = [[shapovalov(family[s], images[t]) / norms2[s] for t in range(n)]
              for s in range(n)]
    for t in range(n):
        recon = TensorVector(family[0].weights, {})
        for s in range(n):
            if matrix[s][t] != 0:
                recon = recon + family[s].scale(matrix[s][t])
        if not (images[t] - recon).is_zero():
            raise ArithmeticError(f"Omega{pair} image leaves the singular span at t={t}")
    for s in range(n):
        for t in range(n):
            if abs(s - t) > 1 and matrix[s][t] != 0:
                raise ArithmeticError(f"Omega{pair} not tridiagonal at ({s}, {t})")
    diag = tuple(matrix[t][t] for t in range(n))
    off_products = tuple(matrix[t][t + 1] * matrix[t + 1][t] for t in range(n - 1))
    off_signs = []
    for t in range(n - 1):
        up, down = matrix[t][t + 1], matrix[t + 1][t]
        if (up > 0) != (down > 0) and not (up == 0 and down == 0):
            raise ArithmeticError(f"inconsistent off-diagonal signs at {t}")
        off_signs.append(0 if up == 0 else (1 if up > 0 else -1))
    return OracleMatrix(tuple(pair), tuple(tuple(row) for row in matrix),
                        tuple(norms2), diag, off_products, tuple(off_signs))


# -- brute-force singular dimension ------------------------------------------


def _rank_fraction(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for i in range(row, len(rows)):
            if rows[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        pv = rows[row][col]
        for i in range(row + 1, len(rows)):
            if rows[i][col] != 0:
                factor = rows[i][col] / pv
                ri, rp = rows[i], rows[row]
                for j in range(col, ncols):
                    ri[j] -= factor * rp[j]
        rank += 1
        row += 1
        if row == len(rows):
            break
    return rank


def singular_dimension_bruteforce(m1: int, m2: int, m3: int, mu: int) -> int:
    """dim ker(e_total) on the weight-mu subspace, by exact elimination."""
    depth2 = m1 + m2 + m3 - mu
    if depth2 < 0 or depth2 % 2:
        return 0
    depth = depth2 // 2
    basis = [(l1, l2, l3)
             for l1 in range(min(m1, depth) + 1)
             for l2 in range(min(m2, depth - l1) + 1)
             if 0 <= (l3 := depth - l1 - l2) <= m3]
    if not basis:
        return 0
    target_index = {}
    rows = []
    weights = (m1, m2, m3)
    for key in basis:
        v = TensorVector.make(weights, {key: 1})
        image = total_e(v)
        row_entries = []
        for tkey, c in image.terms.items():
            idx = target_index.setdefault(tkey, len(target_index))
            row_entries.append((idx, c))
        rows.append(row_entries)
    ncols = max(len(target_index), 1)
    dense = []
    for row_entries in rows:
        row = [Fraction(0)] * ncols
        for idx, c in row_entries:
            row[idx] = c
        dense.append(row)
    return len(basis) - _rank_fraction(dense)


# -- closed-form cross-validation sweep ---------------------------------------


_PAIRS = ((1, 2), (1, 3), (2, 3))


def _compare_model(cfg: WeightConfig, model: TridiagonalModel) -> int:
    """Compare one model against the oracle; returns number of checks."""
    family = singular_family(cfg)
    checks = 0
    expected_diag = {(1, 2): model.d, (1, 3): model.a, (2, 3): model.b}
    expected_sign = {(1, 2): 0, (1, 3): -1, (2, 3): 1}
    oracle_norms = None
    for pair in _PAIRS:
        om = oracle_tridiagonal(cfg, pair, family=family)
        if om.diag != tuple(expected_diag[pair]):
            raise MismatchFoundError(
                f"diagonal of Omega{pair} disagrees for {cfg}: "
                f"oracle {om.diag} vs closed form {expected_diag[pair]}")
        checks += len(om.diag)
        if pair == (1, 2):
            if any(p != 0 for p in om.off_products):
                raise MismatchFoundError(f"Omega12 not diagonal for {cfg}")
        else:
            if om.off_products != tuple(model.c2):
                raise MismatchFoundError(
                    f"off-diagonal products of Omega{pair} disagree for {cfg}: "
                    f"oracle {om.off_products} vs closed form {tuple(model.c2)}")
            if any(s != expected_sign[pair] for s in om.off_signs):
                raise MismatchFoundError(
                    f"off-diagonal signs of Omega{pair} disagree for {cfg}")
        checks += len(om.off_products)
        oracle_norms = om.norms2
    for i, r1 in enumerate(range(model.r1_min, model.r1_max + 1)):
        if oracle_norms[i] != norm2_closed(cfg, r1):
            raise MismatchFoundError(f"norm closed form disagrees for {cfg} at r1={r1}")
        checks += 1
    return checks


def verify_closed_forms(max_weight: int,
                        corrupt: Callable[[TridiagonalModel], TridiagonalModel] | None = None,
                        ) -> dict:
    """Sweep all weights <= max_weight and every total depth r.

    Cross-checks the closed-form model (diagonals, squared off-diagonals,
    signs, norms) against the oracle matrices, and the dimension formula
    against brute-force kernel dimensions, including empty ranges. Raises
    MismatchFoundError on the first disagreement. ``corrupt`` is a test hook
    applied to each built model before comparison.
    """
    configs = models = checks = 0
    rng = range(max_weight + 1)
    for m1 in rng:
        for m2 in rng:
            for m3 in rng:
                for r in range((m1 + m2 + m3) // 2 + 2):
                    cfg = WeightConfig(m1, m2, m3, r)
                    configs += 1
                    dim = singular_dimension(cfg)
                    brute = singular_dimension_bruteforce(m1, m2, m3, cfg.mu)
                    if dim != brute:
                        raise MismatchFoundError(
                            f"dimension formula {dim} != kernel dimension {brute} for {cfg}")
                    checks += 1
                    if dim == 0:
                        continue
                    model = build_model(cfg)
                    if corrupt is not None:
                        model = corrupt(model)
                    models += 1
                    checks += _compare_model(cfg, model)
    return {"configs": configs, "models": models, "checks": checks}
