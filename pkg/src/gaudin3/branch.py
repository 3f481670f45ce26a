"""Branch points of the spectral covering.

The branch locus in u is the zero set of disc(u) = Res_x(f, f_x), computed
exactly. Roots are extracted by a simultaneous Aberth-style iteration over
adaptive precision with certified per-root error radii, then checked for
separation, realness margin, and closure under conjugation. Simplicity of
the branching (no multiple discriminant roots, no triple collisions of
sheets) is certified in exact arithmetic. The genus comes from the
Riemann-Hurwitz count g = B/2 - N + 1, valid for a connected simply-branched
degree-N cover of the sphere, so it demands a transitivity witness. The r=1
family has closed forms for both the curve and its branch quadratic, and the
large-weight limit of branch ornaments is checked against that quadratic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp
import numpy as np

from .curve import VU, GaudinCurve
from .errors import (
    ConvergenceFailure,
    DegenerateInputError,
    InvalidWeightsError,
    PreconditionFailedError,
    SeparationFailure,
)
from .hamiltonian import WeightConfig, build_model
from .polyalg import (
    BiPoly,
    UniPoly,
    eval_uni,
    gcd_uni,
    is_coprime,
    is_squarefree,
    resultant_x,
    squarefree_part,
)
from . import curve as curve_mod

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Discriminant:
    raw: UniPoly
    monic: UniPoly
    lead: Fraction


def discriminant_u(curve: GaudinCurve) -> Discriminant:
    """Exact Res_x(f, f_x), raw and monic-normalized. Memoized on the curve."""
    memo = curve._memo
    if "disc" in memo:
        return memo["disc"]
    n = curve.degree
    f = curve.poly
    raw = resultant_x(f, f.diff_x(), deg_bound=max(n * (n - 1), 0))
    if raw.is_zero():
        disc = Discriminant(raw, UniPoly.zero(VU), Fraction(0))
    else:
        lead = raw.coeffs[-1]
        disc = Discriminant(raw, raw.monic(), lead)
    memo["disc"] = disc
    return disc


# ---------------------------------------------------------------------------
# all-roots solver


def _fujiwara_bound(coeffs) -> mp.mpf:
    """Upper bound on root magnitudes of a monic polynomial."""
    n = len(coeffs) - 1
    best = mp.mpf(0)
    for k in range(1, n + 1):
        c = abs(coeffs[n - k])
        if c:
            cand = c ** (mp.mpf(1) / k)
            if cand > best:
                best = cand
    return 2 * best + mp.mpf("0.5")


def _horner_pair(coeffs, z):
    """(p(z), p'(z)) by a joint Horner pass over high-to-low coefficients."""
    b = coeffs[-1]
    d = mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        d = d * z + b
        b = b * z + c
    return b, d


def _aberth_pass(coeffs, zs, tol, max_iter):
    # roots are frozen once their correction drops below tol; repulsion
    # still sees them, so stragglers cannot drift onto settled positions
    n = len(zs)
    active = list(range(n))
    for _ in range(max_iter):
        if not active:
            return True
        pend = {}
        for j in active:
            pv, dv = _horner_pair(coeffs, zs[j])
            if dv == 0:
                pend[j] = mp.mpc(tol)  # nudge out of the exact critical point
                continue
            newton = pv / dv
            s = mp.mpc(0)
            for k in range(n):
                if k != j:
                    dz = zs[j] - zs[k]
                    if dz == 0:
                        dz = mp.mpc(tol)
                    s += 1 / dz
            denom = 1 - newton * s
            if denom == 0:
                denom = mp.mpc(tol)
            pend[j] = newton / denom
        still = []
        for j in active:
            zs[j] = zs[j] - pend[j]
            if abs(pend[j]) / (1 + abs(zs[j])) >= tol:
                still.append(j)
        active = still
    return not active


def _np_roots_seed(monic: UniPoly, deg: int):
    """Hardware-precision companion-matrix seed for the mp polish.

    Balanced QR tolerates the coefficient ranges these discriminants
    produce: the double-rounded coefficients land every root within about
    1e-3, which the quadratically convergent mp sweeps then sharpen.
    Returns None when the coefficients do not fit in doubles.
    """
    try:
        cs = np.array([float(c) for c in monic.coeffs])
    except OverflowError:
        return None
    if not np.isfinite(cs).all():
        return None
    zs = np.roots(cs[::-1].copy())
    if len(zs) != deg or not np.isfinite(zs).all():
        return None
    return [complex(z) for z in zs]


def _horner_err(coeffs, z, eps):
    """(value, forward error bound) for precomputed mp coefficients."""
    az = abs(z)
    acc = mp.mpc(0)
    mag = mp.mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + c
        mag = mag * az + abs(c)
    return acc, (2 * len(coeffs) + 6) * eps * mag


def _certify_roots(monic: UniPoly, zs, prec: int):
    """Certified per-root disks |z - root| <= n|p/p'| from exact coefficients.

    Returns (roots, radii) sorted by (Re, Im), or None when some derivative
    magnitude cannot be separated from its own evaluation error or when two
    disks come closer than 10x their summed radii.
    """
    deg = monic.degree()
    # evaluation near a root cancels down from the largest coefficient
    # scale, so the working precision must budget for that magnitude
    gbits = max((c.numerator.bit_length() - c.denominator.bit_length()
                 for c in monic.coeffs if c != 0), default=0)
    work = prec + 16 + max(gbits, 0)
    with mp.workprec(work):
        eps = mp.mpf(2) ** (1 - work)
        mc = [mp.mpf(c.numerator) / c.denominator for c in monic.coeffs]
        dc = [mp.mpf(c.numerator) / c.denominator
              for c in monic.derivative().coeffs]
        roots, radii = [], []
        for z in zs:
            zc = mp.mpc(z)
            pv, pe = _horner_err(mc, zc, eps)
            dv, de = _horner_err(dc, zc, eps)
            if abs(dv) <= 2 * de:
                return None
            roots.append(zc)
            radii.append(deg * (abs(pv) + pe) / (abs(dv) - de))
        for i in range(deg):
            for j in range(i + 1, deg):
                if abs(roots[i] - roots[j]) < 10 * (radii[i] + radii[j]):
                    return None
        order = sorted(range(deg),
                       key=lambda i: (mp.re(roots[i]), mp.im(roots[i])))
        return [roots[i] for i in order], [radii[i] for i in order]


def all_roots(poly: UniPoly, precision: int = 212):
    """All complex roots of a squarefree rational polynomial.

    Returns (roots, radii): certified error radii come from the exact-
    coefficient evaluation bound via |z - root| <= n |p/p'| plus evaluation
    error. Pairwise separation must exceed 10x the summed radii, else the
    working precision is doubled; persistent failure raises.
    """
    deg = poly.degree()
    if deg < 0:
        raise DegenerateInputError("zero polynomial")
    if deg == 0:
        return [], []
    monic = poly.monic()
    prec = max(precision, 64)
    guard = 24 + 2 * deg.bit_length()
    zs = None
    if deg >= 40:
        zs = _np_roots_seed(monic, deg)
    if deg >= 40 and zs is None and prec > 96:
        # no hardware seed; cheap low-precision sweeps instead
        seed = 64
        while True:
            with mp.workprec(seed + guard):
                coeffs = [mp.mpf(c.numerator) / c.denominator
                          for c in monic.coeffs]
                if zs is None:
                    radius = _fujiwara_bound(coeffs)
                    zs = [radius * mp.mpf("0.65") *
                          mp.exp(mp.mpc(0, 2) * mp.pi * j / deg + mp.mpc(0, "0.7"))
                          for j in range(deg)]
                else:
                    zs = [mp.mpc(z) for z in zs]
                _aberth_pass(coeffs, zs, mp.mpf(2) ** (-seed + 12),
                             max_iter=300)
            if seed * 2 >= prec:
                break
            seed *= 2
    for attempt in range(4):
        with mp.workprec(prec + guard):
            coeffs = [mp.mpf(c.numerator) / c.denominator for c in monic.coeffs]
            if zs is None:
                radius = _fujiwara_bound(coeffs)
                zs = [radius * mp.mpf("0.65") *
                      mp.exp(mp.mpc(0, 2) * mp.pi * j / deg + mp.mpc(0, "0.7"))
                      for j in range(deg)]
            else:
                zs = [mp.mpc(z) for z in zs]
            tol = mp.mpf(2) ** (-prec)
            ok = _aberth_pass(coeffs, zs, tol, max_iter=60 * (attempt + 1) + 200)
            if not ok:
                prec *= 2
                if attempt == 3:
                    raise ConvergenceFailure(
                        f"simultaneous iteration stalled at {prec // 2} bits")
                continue
        out = _certify_roots(monic, zs, prec)
        if out is not None:
            return out
        prec *= 2
    raise SeparationFailure(
        f"roots unresolved at {prec} bits (radii overlap persists)")


# ---------------------------------------------------------------------------
# eigenvalue-collision root finding for large discriminants
#
# At degrees in the hundreds the discriminant coefficients span hundreds of
# bits and its roots crowd along arcs, so double-precision companion seeds
# land in evaluation noise and blind simultaneous iteration relaxes far too
# slowly. The roots are exactly the parameters where two eigenvalues of the
# size-N tridiagonal pencil collide, and the pencil itself is perfectly
# conditioned in hardware floats. A grid scan of the smallest eigenvalue gap
# plus a pair-locked secant sharpens each collision to ~1e-12, a handful of
# exact-coefficient Newton steps certify it, and verified substitution
# symmetries of the discriminant multiply everything found. Local subgrids
# around known roots recover arc neighbors the coarse grid merged. The count
# of certified pairwise-separated roots reaching the exact degree is the
# completeness proof.


def _eig_stack(dv, av, cv, us):
    """Eigenvalues of the pencil diag(-d - u a) + offdiag(u c), batched."""
    n = len(dv)
    B = len(us)
    T = np.zeros((B, n, n), dtype=np.complex128)
    idx = np.arange(n)
    T[:, idx, idx] = -dv[None, :] - us[:, None] * av[None, :]
    if n > 1:
        j = np.arange(n - 1)
        T[:, j, j + 1] = us[:, None] * cv[None, :]
        T[:, j + 1, j] = us[:, None] * cv[None, :]
    return np.linalg.eigvals(T)


def _min_gaps(w):
    n = w.shape[1]
    D = np.abs(w[:, :, None] - w[:, None, :])
    D += np.eye(n)[None, :, :] * 1e30
    return D.min(axis=(1, 2))


def _eig_many(dv, av, cv, us, chunk=20000):
    out = np.empty((len(us), len(dv)), dtype=np.complex128)
    for s in range(0, len(us), chunk):
        out[s:s + chunk] = _eig_stack(dv, av, cv, us[s:s + chunk])
    return out


def _grid_minima(xs, ys, gaps):
    """Strict-or-tied local minima of the gap field, ascending by value."""
    ny, nx = len(ys), len(xs)
    g = gaps.reshape(ny, nx)
    P = np.full((ny + 2, nx + 2), np.inf)
    P[1:-1, 1:-1] = g
    mask = np.ones((ny, nx), dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                mask &= g <= P[1 + dy:ny + 1 + dy, 1 + dx:nx + 1 + dx]
    iy, ix = np.nonzero(mask)
    order = np.argsort(g[iy, ix])
    return [complex(xs[ix[k]], ys[iy[k]]) for k in order]


def _locked_secant(dv, av, cv, u0, bail_radius):
    """Secant iteration on the squared gap of one colliding pair.

    The pair is re-identified at every evaluation by proximity to its
    previous values, never by the global argmin, so an avoided crossing of
    some other pair cannot hijack the iteration. Near a simple branch point
    the squared gap is holomorphic with a simple zero. Returns the collision
    parameter, or None on stall or runaway.
    """
    def eig1(u):
        return _eig_stack(dv, av, cv, np.array([u]))[0]

    w = eig1(u0)
    D = np.abs(w[:, None] - w[None, :]) + np.eye(len(w)) * 1e30
    i, j = np.unravel_index(np.argmin(D), D.shape)
    pi, pj = w[i], w[j]

    def fval(u, pi, pj):
        w = eig1(u)
        i = int(np.argmin(np.abs(w - pi)))
        d = np.abs(w - pj)
        d[i] = np.inf
        j = int(np.argmin(d))
        return (w[i] - w[j]) ** 2, w[i], w[j]

    u1 = u0 + (1e-7 + 1e-7j) * (1 + abs(u0))  # leave the real axis
    f0, _, _ = fval(u0, pi, pj)
    f1, pi, pj = fval(u1, pi, pj)
    gap = abs(pi - pj)
    for _ in range(48):
        if f1 == f0:
            break
        step = f1 * (u1 - u0) / (f1 - f0)
        cap = 0.15 * (1.0 + abs(u1))
        if abs(step) > cap:
            step *= cap / abs(step)
        u0, f0 = u1, f1
        u1 = u1 - step
        if abs(u1) > bail_radius:
            return None
        f1, pi, pj = fval(u1, pi, pj)
        gap = abs(pi - pj)
        if abs(step) < 1e-13 * (1 + abs(u1)):
            break
    scale = 1.0 + float(np.abs(eig1(u1)).max())
    return u1 if gap <= 1e-6 * scale else None


def _poly_substitutions(monic: UniPoly):
    """Verified Mobius substitutions u -> (a u + b)/(c u + d) fixing the roots.

    Candidate generators u -> 1 - u and u -> 1/u are checked by exact
    coefficient identities (composition, palindrome); the group they
    generate acts on any root list for free. Returns non-identity maps.
    """
    cs = list(monic.coeffs)
    n = len(cs) - 1
    gens = []
    rev = cs[::-1]
    if rev == cs or rev == [-c for c in cs]:
        gens.append((0, 1, 1, 0))  # u -> 1/u
    out = [Fraction(0)] * (n + 1)
    for c in reversed(cs):
        new = [Fraction(0)] * (n + 1)
        for k in range(n):
            if out[k]:
                new[k] += out[k]
                new[k + 1] -= out[k]
        if out[n]:
            new[n] += out[n]
        new[0] += c
        out = new
    if out == cs or out == [-c for c in cs]:
        gens.append((-1, 1, 0, 1))  # u -> 1 - u
    group = {(1, 0, 0, 1)}
    frontier = list(group)
    while frontier:
        nxt = []
        for (a, b, c, d) in frontier:
            for (e, f, g, h) in gens:
                m = (e * a + f * c, e * b + f * d,
                     g * a + h * c, g * b + h * d)
                q = math.gcd(math.gcd(abs(m[0]), abs(m[1])),
                             math.gcd(abs(m[2]), abs(m[3])))
                if q:
                    m = tuple(v // q for v in m)
                if m[0] < 0 or (m[0] == 0 and m[1] < 0):
                    m = tuple(-v for v in m)
                if m not in group and len(group) < 24:
                    group.add(m)
                    nxt.append(m)
        frontier = nxt
    return [m for m in group if m != (1, 0, 0, 1)]


def _collision_roots(curve, target: UniPoly, precision: int):
    """All roots of the discriminant located through eigenvalue collisions.

    Every candidate is polished and certified against the exact target
    coefficients, so the eigenvalue pencil only ever supplies starting
    points; acceptance never rests on it. Returns None when repeated local
    refinement still leaves the certified count short of the degree.
    """
    deg = target.degree()
    model = build_model(curve.cfg)
    dv = np.array([float(x) for x in model.d])
    av = np.array([float(x) for x in model.a])
    cv = np.sqrt(np.array([float(x) for x in model.c2]))
    prec = max(precision, 64)
    guard = 24 + 2 * deg.bit_length()
    gbits = max((c.numerator.bit_length() - c.denominator.bit_length()
                 for c in target.coeffs if c != 0), default=0)
    wp_hi = prec + 96 + max(gbits, 0) + 2 * deg.bit_length()
    wp_top = wp_hi + 512

    with mp.workprec(prec + guard):
        with mp.workprec(wp_top + 32):
            coeffs = [mp.mpf(c.numerator) / c.denominator
                      for c in target.coeffs]
        accept_bits = (prec // 2) + 16

        def polish(z0):
            # Newton against the exact coefficients. Evaluation near a root
            # cancels down from the largest coefficient scale and the depth
            # varies root by root, so a stalled correction escalates the
            # working precision once instead of giving up.
            z = mp.mpc(z0)
            for wp in (wp_hi, wp_top):
                with mp.workprec(wp):
                    accept = mp.mpf(2) ** (-accept_bits) * (1 + abs(z))
                    prev = None
                    for it in range(16):
                        pv, dvv = _horner_pair(coeffs, z)
                        if dvv == 0:
                            return None
                        corr = pv / dvv
                        z = z - corr
                        r = abs(corr)
                        if r < accept:
                            return z
                        if it >= 3 and prev is not None and r > prev / 2:
                            break
                        prev = r
            return None

        found = []
        buckets = {}
        h = 1e-4

        def near_known(zf):
            bx, by = int(math.floor(zf.real / h)), int(math.floor(zf.imag / h))
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for w in buckets.get((bx + dx, by + dy), ()):
                        if abs(zf - w) < 1e-8 * (1.0 + abs(zf)):
                            return True
            return False

        def add(z):
            zf = complex(z)
            if near_known(zf):
                return False
            found.append(z)
            key = (int(math.floor(zf.real / h)), int(math.floor(zf.imag / h)))
            buckets.setdefault(key, []).append(zf)
            return True

        def take(candidate):
            # float-level dedupe before any exact-coefficient work
            if candidate is None:
                return "fail"
            if near_known(complex(candidate)):
                return "dup"
            z = polish(candidate)
            if z is None:
                return "fail"
            return "new" if add(z) else "dup"

        def complete(maps):
            grew = True
            while grew and len(found) < deg:
                grew = False
                for z in list(found):
                    cands = [mp.conj(z)]
                    for (a, b, c, d) in maps:
                        den = c * z + d
                        if abs(den) > mp.mpf("1e-12"):
                            cands.append((a * z + b) / den)
                    for w in cands:
                        if take(w) == "new":
                            grew = True

        maps = _poly_substitutions(target)

        # probe octave rings for the outermost collisions; any root a ring
        # secant lands on widens the window, the count check below catches
        # a window that is still short
        rads = [2.0 ** k for k in range(-1, 10)]
        thetas = np.linspace(0.0, np.pi, 181)
        ring = np.array([r * np.exp(1j * t) for r in rads for t in thetas])
        rgaps = _min_gaps(_eig_many(dv, av, cv, ring)).reshape(len(rads), -1)
        reach = 1.0
        for i in range(len(rads)):
            j = int(np.argmin(rgaps[i]))
            s = _locked_secant(dv, av, cv, complex(ring[i * 181 + j]), 2048.0)
            if take(s) == "new":
                reach = max(reach, abs(complex(found[-1])))
        complete(maps)
        reach = max([reach] + [abs(complex(z)) for z in found])
        R = min(max(1.6 * reach, 2.0), 400.0)
        log.debug("probe: %d roots, window radius %.2f", len(found), R)

        def maehly(z0):
            # Newton on the exact polynomial with the pull of every known
            # root subtracted, so stragglers attract even when the plain
            # iteration would be captured by their found neighbours
            z = mp.mpc(z0)
            with mp.workprec(wp_hi):
                accept = mp.mpf(2) ** (-accept_bits) * (1 + abs(z))
                for _ in range(48):
                    pv, dvv = _horner_pair(coeffs, z)
                    s = mp.mpc(0)
                    for w in found:
                        d = z - w
                        if d == 0:
                            return None
                        s += 1 / d
                    den = dvv - pv * s
                    if den == 0:
                        return None
                    corr = pv / den
                    z = z - corr
                    if abs(corr) < accept:
                        return z
            return None

        spent = []
        for _ in range(3):
            bail = 4.0 * R
            cell = 2.2 * R / 480
            xs = np.linspace(-1.1 * R, 1.1 * R, 481)
            ys = np.linspace(0.0, 1.1 * R, 241)
            grid = np.array([complex(x, y) for y in ys for x in xs])
            gaps = _min_gaps(_eig_many(dv, av, cv, grid))
            stalls = []
            for c0 in _grid_minima(xs, ys, gaps)[:8 * deg]:
                if near_known(c0):
                    continue
                s = _locked_secant(dv, av, cv, c0, bail)
                if take(s) == "fail":
                    stalls.append(c0)
            complete(maps)
            log.debug("global scan: %d/%d roots, %d stalls",
                      len(found), deg, len(stalls))

            # crawl along the root arcs: box every newly found root at a
            # width set by its nearest neighbour, so sparse stretches get
            # wide boxes while clusters are dug out at matching scale
            boxed = 0
            tries = {}
            stale = 0
            for _ in range(40):
                if len(found) >= deg or stale >= 2:
                    break
                flat = [complex(z) for z in found]
                frontier = [z for z in flat[boxed:] if z.imag >= -1e-12]
                boxed = len(found)
                for c0 in stalls[:deg]:
                    key = (round(c0.real / cell), round(c0.imag / cell))
                    tries[key] = tries.get(key, 0) + 1
                    if tries[key] <= 2:
                        frontier.append(c0)
                    else:
                        spent.append(c0)
                stalls = []
                before = len(found)
                arr = np.array(flat) if flat else np.zeros(0, complex)
                for ctr in frontier:
                    if len(found) >= deg:
                        break
                    dist = np.abs(arr - ctr)
                    dist = dist[dist > 1e-9]
                    nn = float(dist.min()) if dist.size else cell
                    half = min(max(3.0 * nn, 0.002), 3.3 * cell)
                    gx = np.linspace(ctr.real - half, ctr.real + half, 21)
                    gy = np.linspace(max(ctr.imag - half, 0.0),
                                     ctr.imag + half, 21)
                    sub = np.array([complex(x, y) for y in gy for x in gx])
                    gaps = _min_gaps(_eig_many(dv, av, cv, sub))
                    for c0 in _grid_minima(gx, gy, gaps)[:9]:
                        if near_known(c0):
                            continue
                        s = _locked_secant(dv, av, cv, c0, bail)
                        if take(s) == "fail":
                            stalls.append(c0)
                complete(maps)
                log.debug("crawl: %d/%d roots, %d centers, %d stalls",
                          len(found), deg, len(frontier), len(stalls))
                stale = stale + 1 if len(found) == before else 0

            spent.extend(stalls)
            if len(found) < deg and spent:
                runs = 0
                cap = max(200, 6 * (deg - len(found)))
                for c0 in spent:
                    if len(found) >= deg or runs >= cap:
                        break
                    if near_known(c0):
                        continue
                    runs += 1
                    if take(maehly(c0)) == "new":
                        complete(maps)
                log.debug("deflated closer: %d runs, %d/%d roots",
                          runs, len(found), deg)

            if len(found) >= deg:
                break
            edge = max((abs(complex(z)) for z in found), default=0.0)
            if edge < 0.7 * R:
                # everything found sits well inside; a wider window will
                # not surface the remainder
                break
            R *= 2.5
            log.debug("roots touch the window edge, widening to %.2f", R)

        if len(found) != deg:
            log.debug("collision search closed at %d/%d", len(found), deg)
            return None
    return _certify_roots(target, found, prec)


@dataclass
class BranchSet:
    curve: GaudinCurve
    disc: Discriminant
    roots: tuple
    radii: tuple
    squarefree: bool
    no_real_roots: bool
    conjugate_pairs: tuple
    precision: int

    @property
    def branch_count(self) -> int:
        return len(self.roots)

    @property
    def conjugate_pairing(self) -> bool:
        return all(k >= 0 for k in self.conjugate_pairs)


def branch_points(curve: GaudinCurve, precision: int = 212) -> BranchSet:
    """Certified branch points: the distinct roots of the discriminant.

    A constant discriminant yields an empty branch set; an identically zero
    one is degenerate input. Results are memoized on the curve per precision.
    """
    key = ("branch", precision)
    if key in curve._memo:
        return curve._memo[key]
    disc = discriminant_u(curve)
    if disc.raw.is_zero():
        raise DegenerateInputError("identically vanishing discriminant")
    squarefree = is_squarefree(disc.monic)
    target = disc.monic if squarefree else squarefree_part(disc.monic)
    out = None
    if target.degree() >= 60:
        out = _collision_roots(curve, target, precision)
    if out is None:
        out = all_roots(target, precision)
    roots, radii = out
    no_real = all(abs(mp.im(z)) > mp.mpf("1e-8") for z in roots)
    pairs = []
    for j, z in enumerate(roots):
        match = -1
        zc = mp.conj(z)
        for k, w in enumerate(roots):
            if abs(w - zc) <= mp.mpf("1e-10") * (1 + abs(z)):
                match = k
                break
        pairs.append(match)
    out = BranchSet(curve, disc, tuple(roots), tuple(radii), squarefree,
                    no_real, tuple(pairs), precision)
    curve._memo[key] = out
    return out


# ---------------------------------------------------------------------------
# simplicity and genus


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    squarefree: bool
    triple_free: bool
    certified: bool
    detail: str


def simplicity_check(curve: GaudinCurve) -> SimplicityReport:
    """Certify that every branch point is simple.

    Squarefreeness of the discriminant rules out coinciding branch points;
    coprimality of Res_x(f, f_x) and Res_x(f, f_xx) rules out any solution
    of f = f_x = f_xx = 0 (a triple sheet collision). When the resultants
    share a factor the certificate fails and candidate parameters are probed
    numerically, reported as uncertified.
    """
    n = curve.degree
    if n <= 1:
        return SimplicityReport(True, True, True, True, "no branching")
    disc = discriminant_u(curve)
    if disc.raw.is_zero():
        return SimplicityReport(False, False, False, True,
                                "discriminant vanishes identically")
    squarefree = is_squarefree(disc.monic)
    if n == 2:
        # f_xx is a nonzero constant: the triple system is vacuously empty
        return SimplicityReport(squarefree, squarefree, True, True,
                                "degree 2: no triple collisions possible")
    fxx = curve.poly.diff_x().diff_x()
    # isobaric x-coefficients keep the elimination degree at n*(n-2)
    res2 = resultant_x(curve.poly, fxx, deg_bound=n * (n - 2))
    if res2.is_zero():
        return SimplicityReport(False, squarefree, False, False,
                                "f and f_xx share a factor")
    if is_coprime(disc.raw, res2):
        triple_free, certified, detail = True, True, "resultant certificates"
    else:
        triple_free, certified = _probe_triples(curve)
        detail = "shared resultant factor; numeric probe " + \
            ("found no triple point" if triple_free else "found a triple point")
    return SimplicityReport(squarefree and triple_free, squarefree,
                            triple_free, certified, detail)


def _probe_triples(curve: GaudinCurve):
    """Numeric search for common zeros of f, f_x, f_xx near shared u-roots."""
    f = curve.poly
    fx, fxx = f.diff_x(), f.diff_x().diff_x()
    disc = discriminant_u(curve)
    shared = gcd_uni(disc.raw, resultant_x(f, fxx))
    cs = [float(c) for c in reversed(shared.coeffs)]
    found = False
    for u0 in (np.roots(cs) if len(cs) > 1 else []):
        n = curve.degree
        fc = [sum(complex(c) * u0**du for du, c in enumerate(f.coeff_of_x(j).coeffs))
              for j in range(n + 1)]
        for x0 in np.roots(list(reversed(fc))):
            vals = []
            for g in (fx, fxx):
                vals.append(abs(sum(complex(c) * x0**dx * u0**du
                                    for (dx, du), c in g.terms.items())))
            if max(vals) < 1e-6:
                found = True
    return (not found), False


def genus(curve: GaudinCurve, monodromy_report=None) -> int:
    """Riemann-Hurwitz genus g = B/2 - N + 1 for the simple-branched cover.

    Requires certified simplicity and, for N > 1, a transitivity witness
    (irreducibility), else the formula does not apply.
    """
    n = curve.degree
    simp = simplicity_check(curve)
    if not simp.simple:
        raise PreconditionFailedError("branching not certified simple: " +
                                      simp.detail)
    if n == 1:
        return 0
    if monodromy_report is None or not getattr(monodromy_report, "transitive",
                                               False):
        raise PreconditionFailedError(
            "no transitivity witness: cover may be disconnected")
    disc = discriminant_u(curve)
    b = disc.monic.degree()
    if b % 2:
        raise ArithmeticError("odd branch count cannot close a real cover")
    g = b // 2 - n + 1
    if g < 0:
        raise ArithmeticError("negative genus from the branch count")
    return g


# ---------------------------------------------------------------------------
# the r = 1 family and the large-weight limit


def two_fold_curve(m1: int, m2: int, m3: int) -> GaudinCurve:
    """Closed-form quadratic curve of the r = 1 covering.

    Independent of the general model construction; must agree with it
    exactly. Weights must be positive for the r = 1 space to be 2-dim.
    """
    for m in (m1, m2, m3):
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise InvalidWeightsError("all three weights must be >= 1")
    h = Fraction(1, 2)
    q = Fraction(1, 4)
    terms = {
        (2, 0): Fraction(1),
        (1, 1): Fraction((m1 - 1) * m3 - m1),
        (1, 0): Fraction((m1 - 1) * m2 - m1),
        (0, 2): (q * m1 * m1 - h * m1) * m3 * m3 - h * m1 * m1 * m3,
        (0, 1): ((h * m1 * m1 - m1) * m2 - h * m1 * m1 + m1) * m3
                + (-h * m1 * m1 + m1) * m2 + m1 * m1,
        (0, 0): (q * m1 * m1 - h * m1) * m2 * m2 - h * m1 * m1 * m2,
    }
    poly = BiPoly.make(curve_mod.VX, VU, terms)
    return GaudinCurve(WeightConfig(m1, m2, m3, 1), poly, 2)


def two_fold_branch_quadratic(M1, M2, M3) -> UniPoly:
    """Branch-point quadratic of the r = 1 cover, for positive weights."""
    ms = [Fraction(M) for M in (M1, M2, M3)]
    if any(m <= 0 for m in ms):
        raise InvalidWeightsError("weights must be positive")
    a, b, c = ms
    p2 = (a + c) ** 2
    p1 = -((a + c) ** 2 - (b + c) ** 2 + (a + b) ** 2)
    p0 = (a + b) ** 2
    return UniPoly.make(VU, [p0, p1, p2])


def limit_roots(M1, M2, M3, precision: int = 106):
    """Roots of the branch quadratic, (upper half-plane, lower half-plane).

    For positive weights the discriminant is -16 M1 M2 M3 (M1+M2+M3) < 0,
    so the roots are always a proper conjugate pair.
    """
    quad = two_fold_branch_quadratic(M1, M2, M3)
    c0, c1, c2 = quad.coeffs
    with mp.workprec(max(precision, 64) + 16):
        disc = c1 * c1 - 4 * c0 * c2
        conv = lambda q: mp.mpf(q.numerator) / q.denominator
        root_im = mp.sqrt(conv(-disc)) / (2 * conv(c2))
        root_re = conv(-c1) / (2 * conv(c2))
        return mp.mpc(root_re, root_im), mp.mpc(root_re, -root_im)


@dataclass(frozen=True)
class AsymptoticEntry:
    scale: Fraction
    weights: tuple
    branch_count: int
    max_dist_upper: object
    max_dist_lower: object


@dataclass(frozen=True)
class AsymptoticReport:
    ratio: tuple
    r: int
    limit_upper: object
    limit_lower: object
    entries: tuple
    decreasing_upper: bool
    decreasing_lower: bool

    @property
    def decreasing(self) -> bool:
        return self.decreasing_upper and self.decreasing_lower


def asymptotic_limit_check(ratio, r: int, scales: Sequence,
                           precision: int = 160) -> AsymptoticReport:
    """Convergence of branch ornaments to the limit quadratic's roots.

    For each scale s the weights are m_i = round(s*M_i); all branch points
    are computed and the maximum distance to the limit root of the matching
    half-plane recorded. The report states whether those maxima strictly
    decrease along the (strictly increasing) scale list.
    """
    ms = [Fraction(M) for M in ratio]
    if any(m <= 0 for m in ms):
        raise InvalidWeightsError("ratio weights must be positive")
    scales = [Fraction(s) for s in scales]
    if any(s2 <= s1 for s1, s2 in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly increasing")
    up, low = limit_roots(*ms, precision=precision)
    entries = []
    for s in scales:
        # round half-up to the nearest integer weight
        weights = tuple(int(s * m + Fraction(1, 2)) for m in ms)
        cfg = WeightConfig(weights[0], weights[1], weights[2], r)
        bset = branch_points(curve_mod.curve_for(cfg), precision)
        dist_up = dist_low = mp.mpf(0)
        for z in bset.roots:
            if mp.im(z) >= 0:
                dist_up = max(dist_up, abs(z - up))
            else:
                dist_low = max(dist_low, abs(z - low))
        entries.append(AsymptoticEntry(s, weights, bset.branch_count,
                                       dist_up, dist_low))
    dec_up = all(e2.max_dist_upper < e1.max_dist_upper
                 for e1, e2 in zip(entries, entries[1:]))
    dec_low = all(e2.max_dist_lower < e1.max_dist_lower
                  for e1, e2 in zip(entries, entries[1:]))
    return AsymptoticReport(tuple(ms), r, up, low, tuple(entries),
                            dec_up, dec_low)
