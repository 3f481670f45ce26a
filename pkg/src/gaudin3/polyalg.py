"""Exact polynomial arithmetic over the rationals, in one and two variables.

Coefficients are `fractions.Fraction` throughout, so every ring operation,
resultant, and gcd here is exact. The bivariate resultant is computed by
specialising the second variable at integer points, running a fraction-free
(subresultant) remainder sequence over the integers at each point, and
interpolating; the caller may pass a sharper degree bound when one is known,
and a few extra sample points are always checked against the interpolant so
a wrong bound raises instead of corrupting the result.

Numeric evaluation returns a value together with a forward error bound
derived from coefficient magnitudes and the Horner scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import mpmath as mp

from .errors import DegenerateInputError

Rational = Fraction


def rat_to_str(q: Fraction) -> str:
    """Serialize a rational as "num/den" (always with the slash)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


def _to_mpf(q: Fraction) -> mp.mpf:
    # one rounding each for num, den, and the division; covered by eval bounds
    return mp.mpf(q.numerator) / mp.mpf(q.denominator)


def _to_mpc(z) -> mp.mpc:
    if isinstance(z, Fraction):
        return mp.mpc(_to_mpf(z))
    return mp.mpc(z)


# ---------------------------------------------------------------------------
# univariate polynomials


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial; ``coeffs`` ascending, no trailing zeros."""

    var: str
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(var: str, coeffs: Iterable) -> "UniPoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return UniPoly(var, tuple(cs))

    @staticmethod
    def zero(var: str) -> "UniPoly":
        return UniPoly(var, ())

    @staticmethod
    def const(var: str, c) -> "UniPoly":
        return UniPoly.make(var, (c,))

    @staticmethod
    def variable(var: str) -> "UniPoly":
        return UniPoly.make(var, (0, 1))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def _check(self, other: "UniPoly") -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly.make(self.var, (self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly.make(self.var, (self.coeff(i) - other.coeff(i) for i in range(n)))

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.var, tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly.make(self.var, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly.const(self.var, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "UniPoly":
        c = Fraction(c)
        if c == 0:
            return UniPoly.zero(self.var)
        return UniPoly(self.var, tuple(a * c for a in self.coeffs))

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc())

    def derivative(self) -> "UniPoly":
        return UniPoly.make(self.var, (i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, value):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = Fraction(0) if isinstance(value, (int, Fraction)) else 0 * value
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def to_json(self) -> dict:
        return {
            "variable": self.var,
            "coefficients": [[k, rat_to_str(c)]
                             for k in range(len(self.coeffs) - 1, -1, -1)
                             if (c := self.coeffs[k]) != 0],
        }

    @staticmethod
    def from_json(obj: Mapping) -> "UniPoly":
        var = obj["variable"]
        pairs = [(int(k), rat_from_str(s)) for k, s in obj["coefficients"]]
        n = max((k for k, _ in pairs), default=-1) + 1
        cs = [Fraction(0)] * n
        for k, c in pairs:
            cs[k] += c
        return UniPoly.make(var, cs)


# ---------------------------------------------------------------------------
# bivariate polynomials (sparse)


@dataclass(frozen=True, eq=False)
class BiPoly:
    """Sparse polynomial in two variables.

    ``terms`` maps (deg_x, deg_u) -> coefficient. Treated as immutable after
    construction; all operations return fresh instances.
    """

    vx: str
    vu: str
    terms: dict

    @staticmethod
    def make(vx: str, vu: str, terms: Mapping) -> "BiPoly":
        out = {}
        for (dx, du), c in terms.items():
            c = Fraction(c)
            if c != 0:
                out[(int(dx), int(du))] = c
        return BiPoly(vx, vu, out)

    @staticmethod
    def zero(vx: str, vu: str) -> "BiPoly":
        return BiPoly(vx, vu, {})

    @staticmethod
    def const(vx: str, vu: str, c) -> "BiPoly":
        return BiPoly.make(vx, vu, {(0, 0): c})

    @staticmethod
    def linear(vx: str, vu: str, cx, cu, c0) -> "BiPoly":
        """cx*x + cu*u + c0."""
        return BiPoly.make(vx, vu, {(1, 0): cx, (0, 1): cu, (0, 0): c0})

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return (self.vx, self.vu) == (other.vx, other.vu) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def deg_x(self) -> int:
        return max((dx for dx, _ in self.terms), default=-1)

    def deg_u(self) -> int:
        return max((du for _, du in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((dx + du for dx, du in self.terms), default=-1)

    def _check(self, other: "BiPoly") -> None:
        if (self.vx, self.vu) != (other.vx, other.vu):
            raise ValueError("variable mismatch")

    def __add__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Fraction(0)) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return BiPoly(self.vx, self.vu, out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __neg__(self) -> "BiPoly":
        return BiPoly(self.vx, self.vu, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for (ax, au), a in self.terms.items():
            for (bx, bu), b in other.terms.items():
                key = (ax + bx, au + bu)
                s = out.get(key, Fraction(0)) + a * b
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return BiPoly(self.vx, self.vu, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = BiPoly.const(self.vx, self.vu, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "BiPoly":
        c = Fraction(c)
        if c == 0:
            return BiPoly.zero(self.vx, self.vu)
        return BiPoly(self.vx, self.vu, {k: a * c for k, a in self.terms.items()})

    def diff_x(self) -> "BiPoly":
        return BiPoly(self.vx, self.vu,
                      {(dx - 1, du): c * dx for (dx, du), c in self.terms.items() if dx})

    def diff_u(self) -> "BiPoly":
        return BiPoly(self.vx, self.vu,
                      {(dx, du - 1): c * du for (dx, du), c in self.terms.items() if du})

    def coeff_of_x(self, j: int) -> UniPoly:
        """Coefficient of x^j, as a polynomial in the second variable."""
        n = max((du for (dx, du) in self.terms if dx == j), default=-1) + 1
        cs = [Fraction(0)] * n
        for (dx, du), c in self.terms.items():
            if dx == j:
                cs[du] = c
        return UniPoly.make(self.vu, cs)

    def as_x_coeffs(self) -> list[UniPoly]:
        """All x-coefficients, index j -> coefficient of x^j."""
        return [self.coeff_of_x(j) for j in range(self.deg_x() + 1)]

    def subs_u(self, value) -> UniPoly:
        """Exact specialisation of the second variable."""
        value = Fraction(value)
        du_max = self.deg_u()
        pows = [Fraction(1)]
        for _ in range(du_max):
            pows.append(pows[-1] * value)
        cs = [Fraction(0)] * (self.deg_x() + 1)
        for (dx, du), c in self.terms.items():
            cs[dx] += c * pows[du]
        return UniPoly.make(self.vx, cs)

    def subs_x(self, value) -> UniPoly:
        value = Fraction(value)
        dx_max = self.deg_x()
        pows = [Fraction(1)]
        for _ in range(dx_max):
            pows.append(pows[-1] * value)
        cs = [Fraction(0)] * (self.deg_u() + 1)
        for (dx, du), c in self.terms.items():
            cs[du] += c * pows[dx]
        return UniPoly.make(self.vu, cs)

    def eval_exact(self, xv, uv) -> Fraction:
        xv, uv = Fraction(xv), Fraction(uv)
        total = Fraction(0)
        for (dx, du), c in self.terms.items():
            total += c * xv**dx * uv**du
        return total

    def sorted_terms(self) -> list[tuple[int, int, Fraction]]:
        """Monomials sorted by descending (deg_x, deg_u); deterministic."""
        return [(dx, du, self.terms[(dx, du)])
                for dx, du in sorted(self.terms, reverse=True)]

    def to_json(self) -> dict:
        return {
            "variables": [self.vx, self.vu],
            "monomials": [[dx, du, rat_to_str(c)] for dx, du, c in self.sorted_terms()],
        }

    @staticmethod
    def from_json(obj: Mapping) -> "BiPoly":
        vx, vu = obj["variables"]
        terms: dict = {}
        for dx, du, s in obj["monomials"]:
            key = (int(dx), int(du))
            terms[key] = terms.get(key, Fraction(0)) + rat_from_str(s)
        return BiPoly.make(vx, vu, terms)


# ---------------------------------------------------------------------------
# fraction-free resultants and gcd


def _deg(a: list) -> int:
    return len(a) - 1


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("inexact division in subresultant sequence")
    return q


def _prem(A: list, B: list) -> list:
    """Pseudo-remainder: lc(B)^(deg A - deg B + 1) * A mod B, over Z."""
    dB = _deg(B)
    lb = B[-1]
    R = list(A)
    e = _deg(A) - dB + 1
    while R and _deg(R) >= dB:
        lr = R[-1]
        shift = _deg(R) - dB
        R = [lb * c for c in R]
        for i, bc in enumerate(B):
            R[i + shift] -= lr * bc
        _trim(R)
        e -= 1
    if e > 0:
        f = lb**e
        R = [c * f for c in R]
    return R


def _resultant_int(A: list, B: list) -> int:
    """Resultant of nonzero integer polynomials, Sylvester sign convention.

    Subresultant pseudo-remainder sequence; all divisions are exact.
    """
    dA, dB = _deg(A), _deg(B)
    s = 1
    if dA < dB:
        if (dA & 1) and (dB & 1):
            s = -s
        A, B, dA, dB = B, A, dB, dA
    if dB == 0:
        return s * B[0] ** dA
    g = h = 1
    while True:
        delta = dA - dB
        if (dA & 1) and (dB & 1):
            s = -s
        R = _prem(A, B)
        A, dA = B, dB
        if not R:
            return 0
        denom = g * h**delta
        B = [_exact_div(c, denom) for c in R]
        dB = _deg(B)
        g = A[-1]
        if delta > 0:
            h = _exact_div(g**delta, h ** (delta - 1))
        if dB == 0:
            return s * _exact_div(B[0] ** dA, h ** (dA - 1))


def _int_clear(p: UniPoly) -> tuple[list, int]:
    """(integer coefficient list, d) with d*p integral; content kept."""
    den = math.lcm(*(c.denominator for c in p.coeffs))
    return [int(c * den) for c in p.coeffs], den


def resultant_uni(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant of univariate rational polynomials.

    Constants are legal: Res(c, q) = c^deg(q) and symmetrically. Zero input
    raises DegenerateInputError.
    """
    if p.is_zero() or q.is_zero():
        raise DegenerateInputError("resultant of the zero polynomial")
    m, n = p.degree(), q.degree()
    if m == 0:
        return p.coeffs[0] ** n
    if n == 0:
        return q.coeffs[0] ** m
    A, da = _int_clear(p)
    B, db = _int_clear(q)
    r = _resultant_int(A, B)
    return Fraction(r, da**n * db**m)


def _sample_points(skip) -> Iterator[int]:
    """0, 1, -1, 2, -2, ... skipping points where ``skip`` says so."""
    k = 0
    while True:
        if not skip(k):
            yield k
        k = -k if k > 0 else -k + 1


def _res_at(p: BiPoly, q: BiPoly, k: int, n: int) -> Fraction:
    """Sylvester resultant of the x-polynomials p(x,k), q(x,k).

    Degree drop on the q side is corrected by lc(p_k)^(n - deg q_k); the
    sample point is chosen so the p side never drops.
    """
    pk = p.subs_u(k)
    qk = q.subs_u(k)
    if qk.is_zero():
        return Fraction(0)
    base = resultant_uni(pk, qk)
    drop = n - qk.degree()
    if drop:
        base *= pk.lc() ** drop
    return base


def _newton_interp(var: str, nodes: list, values: list) -> UniPoly:
    n = len(nodes)
    dd = [Fraction(v) for v in values]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level])
    # expand the Newton form from the innermost coefficient outwards
    poly = [dd[n - 1]]
    for j in range(n - 2, -1, -1):
        xj = nodes[j]
        new = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] += c
            new[i] -= c * xj
        new[0] += dd[j]
        poly = new
    return UniPoly.make(var, poly)


_N_VERIFY = 3

# -- modular images: the large-degree path runs the whole interpolation
#    over word-size prime fields and reassembles the integer result by CRT


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime64(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_stream() -> Iterator[int]:
    n = (1 << 61) - 1
    while n > 1 << 60:
        if _is_prime64(n):
            yield n
        n -= 2


def _int_clear_bi(p: BiPoly) -> tuple[dict, int]:
    """({(dx, du): int}, d) with d*p integral."""
    den = math.lcm(*(c.denominator for c in p.terms.values()))
    return {k: int(c * den) for k, c in p.terms.items()}, den


def _res_coeff_bits(p_int: dict, q_int: dict, m: int, n: int) -> float:
    """Rigorous log2 bound on the resultant's integer coefficients.

    Hadamard on the (m+n)-square Sylvester matrix bounds |Res(u)| on the
    unit circle (each entry bounded by its coefficient 1-norm there), and
    Cauchy's integral bounds every coefficient by that maximum.
    """
    ps = [0] * (m + 1)
    for (dx, _), c in p_int.items():
        ps[dx] += abs(c)
    qs = [0] * (n + 1)
    for (dx, _), c in q_int.items():
        qs[dx] += abs(c)
    pn2 = sum(v * v for v in ps)
    qn2 = sum(v * v for v in qs)
    return 0.5 * (n * math.log2(max(pn2, 1)) + m * math.log2(max(qn2, 1))) + 2.0


def _resultant_eucl_mod(a: list, b: list, pr: int) -> int:
    """Sylvester-convention resultant of nonzero coefficient lists mod pr."""
    da, db = _deg(a), _deg(b)
    res = 1
    sign = 1
    while db > 0:
        r = list(a)
        inv = pow(b[-1], -1, pr)
        while r and _deg(r) >= db:
            coef = r[-1] * inv % pr
            shift = _deg(r) - db
            for i, bc in enumerate(b):
                r[i + shift] = (r[i + shift] - coef * bc) % pr
            _trim(r)
        dr = _deg(r)
        if dr < 0:
            return 0
        if (da & 1) and (db & 1):
            sign = -sign
        res = res * pow(b[-1], da - dr, pr) % pr
        a, b, da, db = b, r, db, dr
    res = res * pow(b[0], da, pr) % pr
    return res * sign % pr


def _inv_range(k: int, pr: int) -> list:
    inv = [0] * (k + 1)
    if k >= 1:
        inv[1] = 1
    for i in range(2, k + 1):
        inv[i] = (pr - pr // i) * inv[pr % i] % pr
    return inv


def _newton_interp_mod(nodes: list, values: list, pr: int,
                       inv_table: list) -> list:
    n = len(nodes)
    dd = list(values)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * inv_table[nodes[i] - nodes[i - level]] % pr
    poly = [dd[n - 1]]
    for j in range(n - 2, -1, -1):
        xj = nodes[j]
        new = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = (new[i + 1] + c) % pr
            new[i] = (new[i] - c * xj) % pr
        new[0] = (new[0] + dd[j]) % pr
        poly = new
    return poly


def _horner_mod(cs: list, k: int, pr: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = (acc * k + c) % pr
    return acc


def _res_x_one_prime(p_cols: list, q_cols: list, m: int, n: int,
                     bound: int, pr: int):
    """One modular image of the Sylvester resultant, or None (bad prime)."""
    pm = [[c % pr for c in col] for col in p_cols]
    qm = [[c % pr for c in col] for col in q_cols]
    lcp = list(pm[m])
    _trim(lcp)
    if not lcp:
        return None
    want = bound + 1 + _N_VERIFY
    nodes: list[int] = []
    values: list[int] = []
    k = 0
    while len(nodes) < want:
        if _horner_mod(pm[m], k, pr) != 0:
            pk = _trim([_horner_mod(col, k, pr) for col in pm])
            qk = _trim([_horner_mod(col, k, pr) for col in qm])
            if not qk:
                val = 0
            else:
                val = _resultant_eucl_mod(pk, qk, pr)
                drop = n - _deg(qk)
                if drop:
                    val = val * pow(pk[-1], drop, pr) % pr
            nodes.append(k)
            values.append(val)
        k += 1
    inv_table = _inv_range(nodes[-1], pr)
    coeffs = _newton_interp_mod(nodes[:bound + 1], values[:bound + 1], pr,
                                inv_table)
    for node, val in zip(nodes[bound + 1:], values[bound + 1:]):
        if _horner_mod(coeffs, node, pr) != val:
            raise ArithmeticError(
                "resultant interpolation failed verification (degree bound too small?)")
    return coeffs


def _resultant_x_modular(p: BiPoly, q: BiPoly, m: int, n: int,
                         bound: int) -> UniPoly:
    p_int, dp = _int_clear_bi(p)
    q_int, dq = _int_clear_bi(q)
    bits = _res_coeff_bits(p_int, q_int, m, n)
    nprimes = int(bits / 60.0) + 2
    if nprimes > 4000:
        raise ArithmeticError("resultant coefficient bound out of reach")

    def cols(terms, deg):
        out = [[0] * (max((du for (dx, du) in terms if dx == j), default=-1) + 1)
               for j in range(deg + 1)]
        for (dx, du), c in terms.items():
            out[dx][du] = c
        return out

    p_cols = cols(p_int, m)
    q_cols = cols(q_int, n)
    big = [0] * (bound + 1)
    modulus = 1
    used = 0
    stream = _prime_stream()
    while used < nprimes:
        pr = next(stream)
        img = _res_x_one_prime(p_cols, q_cols, m, n, bound, pr)
        if img is None:
            continue
        img += [0] * (bound + 1 - len(img))
        inv = pow(modulus % pr, -1, pr)
        for i in range(bound + 1):
            t = (img[i] - big[i]) % pr * inv % pr
            big[i] += modulus * t
        modulus *= pr
        used += 1
    half = modulus // 2
    den = Fraction(dp) ** n * Fraction(dq) ** m
    return UniPoly.make(p.vu,
                        [Fraction(x - modulus if x > half else x) / den
                         for x in big])


_MODULAR_CUTOFF = 48


def resultant_x(p: BiPoly, q: BiPoly, deg_bound: int | None = None,
                method: str = "auto") -> UniPoly:
    """Resultant with respect to x, as a polynomial in the second variable.

    Computed by specialisation plus interpolation. Small problems specialise
    at integer points and run a fraction-free subresultant sequence over Z;
    large ones run the whole pipeline modulo word-size primes (enough of
    them to cover a rigorous Hadamard coefficient bound) and lift by CRT.
    Both paths are exact. ``deg_bound`` may give a sharper bound on the
    result degree than the generic deg_x(p)*deg_u(q) + deg_x(q)*deg_u(p);
    extra sample points are always checked against the interpolant, so an
    invalid bound raises. ``method`` is "auto", "exact", or "modular".
    """
    if p.is_zero() or q.is_zero():
        raise DegenerateInputError("resultant of the zero polynomial")
    p._check(q)
    if method not in ("auto", "exact", "modular"):
        raise ValueError("unknown resultant method")
    m, n = p.deg_x(), q.deg_x()
    if m == 0:
        return p.coeff_of_x(0) ** n
    if n == 0:
        return q.coeff_of_x(0) ** m
    generic = m * q.deg_u() + n * p.deg_u()
    bound = generic if deg_bound is None else min(deg_bound, generic)
    if method == "modular" or (method == "auto" and bound >= _MODULAR_CUTOFF):
        return _resultant_x_modular(p, q, m, n, bound)
    lcp = p.coeff_of_x(m)
    points: list[int] = []
    values: list[Fraction] = []
    for k in _sample_points(lambda k: lcp(k) == 0):
        points.append(k)
        values.append(_res_at(p, q, k, n))
        if len(points) == bound + 1 + _N_VERIFY:
            break
    npts = bound + 1
    result = _newton_interp(p.vu, points[:npts], values[:npts])
    for k, v in zip(points[npts:], values[npts:]):
        if result(k) != v:
            raise ArithmeticError(
                "resultant interpolation failed verification (degree bound too small?)")
    return result


def _prim(a: list) -> list:
    """Primitive part (content removed, sign normalised to positive lc)."""
    if not a:
        return a
    g = 0
    for c in a:
        g = math.gcd(g, abs(c))
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def gcd_uni(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over Q (primitive pseudo-remainder sequence over Z)."""
    if p.var != q.var:
        raise ValueError("variable mismatch")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    A, _ = _int_clear(p)
    B, _ = _int_clear(q)
    A, B = _prim(A), _prim(B)
    if _deg(A) < _deg(B):
        A, B = B, A
    while B:
        A, B = B, _prim(_prem(A, B))
    return UniPoly.make(p.var, A).monic()


def divmod_uni(p: UniPoly, q: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Exact polynomial division over Q: p = quo*q + rem, deg rem < deg q."""
    if p.var != q.var:
        raise ValueError("variable mismatch")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(p.coeffs)
    dq = q.degree()
    lead = q.coeffs[-1]
    quo = [Fraction(0)] * max(len(rem) - dq, 0)
    for k in range(len(rem) - dq - 1, -1, -1):
        factor = rem[k + dq] / lead
        if factor:
            quo[k] = factor
            for i, c in enumerate(q.coeffs):
                rem[k + i] -= factor * c
    return UniPoly.make(p.var, quo), UniPoly.make(p.var, rem[:dq])


def squarefree_part(p: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of p."""
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    if p.degree() == 0:
        return UniPoly.const(p.var, 1)
    g = gcd_uni(p, p.derivative())
    if g.degree() == 0:
        return p.monic()
    quo, rem = divmod_uni(p, g)
    if not rem.is_zero():
        raise ArithmeticError("gcd does not divide its polynomial")
    return quo.monic()


_CERT_PRIMES = (2**61 - 1, 10**9 + 7, 10**9 + 9)


def _gcd_mod(A: list, B: list, pr: int) -> list:
    a = [c % pr for c in A]
    b = [c % pr for c in B]
    _trim(a), _trim(b)
    while b:
        inv = pow(b[-1], -1, pr)
        b = [c * inv % pr for c in b]
        while a and _deg(a) >= _deg(b):
            lr, shift = a[-1], _deg(a) - _deg(b)
            for i, bc in enumerate(b):
                a[i + shift] = (a[i + shift] - lr * bc) % pr
            _trim(a)
        a, b = b, a
    return a


def coprime_certificate(p: UniPoly, q: UniPoly) -> bool | None:
    """True if a single-prime modular gcd certifies gcd(p, q) = 1.

    For a prime dividing neither leading coefficient, the modular gcd degree
    bounds the rational gcd degree from above, so a constant modular gcd is
    a sound coprimality certificate. Returns None when inconclusive (the
    caller should fall back to the exact gcd).
    """
    if p.is_zero() or q.is_zero():
        return None
    A, _ = _int_clear(p)
    B, _ = _int_clear(q)
    for pr in _CERT_PRIMES:
        if A[-1] % pr == 0 or B[-1] % pr == 0:
            continue
        g = _gcd_mod(A, B, pr)
        if _deg(g) == 0:
            return True
    return None


def is_coprime(p: UniPoly, q: UniPoly) -> bool:
    cert = coprime_certificate(p, q)
    if cert is not None:
        return cert
    return gcd_uni(p, q).degree() == 0


def is_squarefree(p: UniPoly) -> bool:
    """Exact squarefreeness over Q. Constants count as squarefree."""
    if p.is_zero():
        return False
    if p.degree() == 0:
        return True
    return is_coprime(p, p.derivative())


# ---------------------------------------------------------------------------
# numeric evaluation with error bounds


def eval_uni(p: UniPoly, z, precision: int) -> tuple[mp.mpc, mp.mpf]:
    """Evaluate at a complex point; returns (value, forward error bound).

    Horner at `precision` bits plus guard digits; the bound is the standard
    running-error estimate c*eps*sum(|a_k| |z|^k) with a conservative
    constant, plus coefficient conversion rounding.
    """
    if precision < 53:
        raise ValueError("precision below 53 bits")
    work = precision + 16
    with mp.workprec(work):
        zc = _to_mpc(z)
        az = abs(zc)
        acc = mp.mpc(0)
        mag = mp.mpf(0)
        for c in reversed(p.coeffs):
            cf = _to_mpf(c)
            acc = acc * zc + cf
            mag = mag * az + abs(cf)
        n = max(len(p.coeffs), 1)
        eps = mp.mpf(2) ** (1 - work)
        err = (2 * n + 2) * eps * mag
    return acc, err


def eval_bi(p: BiPoly, x, u, precision: int) -> tuple[mp.mpc, mp.mpf]:
    """Evaluate a bivariate polynomial; returns (value, error bound).

    Nested Horner: inner in the second variable, outer in x.
    """
    if precision < 53:
        raise ValueError("precision below 53 bits")
    work = precision + 16
    with mp.workprec(work):
        xc, uc = _to_mpc(x), _to_mpc(u)
        ax, au = abs(xc), abs(uc)
        nx = p.deg_x()
        acc = mp.mpc(0)
        mag = mp.mpf(0)
        ops = 0
        coeffs = p.as_x_coeffs()
        for j in range(nx, -1, -1):
            cj = coeffs[j]
            inner = mp.mpc(0)
            inner_mag = mp.mpf(0)
            for c in reversed(cj.coeffs):
                cf = _to_mpf(c)
                inner = inner * uc + cf
                inner_mag = inner_mag * au + abs(cf)
            ops += 2 * max(len(cj.coeffs), 1)
            acc = acc * xc + inner
            mag = mag * ax + inner_mag
        ops += 2 * (nx + 1) + 2
        eps = mp.mpf(2) ** (1 - work)
        err = ops * eps * mag
    return acc, err
