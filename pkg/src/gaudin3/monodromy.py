"""Monodromy of the covering by numerical analytic continuation.

The N sheets over a real base point u0 (where the spectrum is real and
simple) are labeled by ascending eigenvalue order. One petal loop per branch
point b: a straight segment from u0 to a standoff point, a counterclockwise
circle around b, and the segment back. Sheets are continued along each loop
by a predictor-corrector scheme (previous values predict, a simultaneous
Newton iteration on f(., u) corrects) with adaptive step halving whenever
the nearest-neighbor matching ratio drops below 3. Petal radii are shrunk so
no segment of any other petal enters a foreign standoff circle; since every
segment leaves the common base point straight, the petals then form a
geometric flower, and composing the permutations in counterclockwise angular
order must give the identity (no branching at infinity).

Precision ladder: the first rung tracks in hardware doubles (53-bit), each
failure doubles the working precision in mpmath up to a ceiling; failure at
the ceiling raises, never guesses. For real curves the root set is closed
under conjugation and the loop around conj(b) yields the inverse permutation
of the loop around b, so only upper-half-plane petals need tracking; the
shortcut is disabled when the branch set fails its conjugation flags.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp
import numpy as np

from .branch import BranchSet, branch_points, simplicity_check
from .curve import GaudinCurve
from .errors import (
    MatchAmbiguity,
    PreconditionFailedError,
    StepCollapse,
)
from .hamiltonian import build_model, hamiltonian_at

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# permutations and group identification


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError("not a bijection on 0..n-1")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """(self o other)(i) = self(other(i)): other acts first."""
        return Permutation(tuple(self.images[j] for j in other.images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def is_transposition(self) -> bool:
        moved = [i for i, j in enumerate(self.images) if i != j]
        return len(moved) == 2 and self.images[moved[0]] == moved[1]

    def cycles(self) -> tuple:
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return tuple(out)


def _orbit(point: int, gens: Sequence[Permutation]) -> set:
    seen = {point}
    queue = [point]
    while queue:
        p = queue.pop()
        for g in gens:
            q = g(p)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def _orbit_transversal(point: int, gens, n: int) -> dict:
    """{reached point: coset representative mapping `point` there}."""
    trans = {point: Permutation.identity(n)}
    queue = [point]
    while queue:
        p = queue.pop(0)
        for g in gens:
            q = g(p)
            if q not in trans:
                trans[q] = g * trans[p]
                queue.append(q)
    return trans


def _schreier_sims_order(gens: Sequence[Permutation], n: int) -> int:
    """Exact group order via a deterministic stabilizer chain."""
    gens = [g for g in gens if not g.is_identity()]
    if not gens:
        return 1
    base: list[int] = []
    level_gens: list[list[Permutation]] = []
    transversals: list[dict] = []

    def extend_base(g: Permutation):
        for i in range(n):
            if g(i) != i:
                base.append(i)
                level_gens.append([])
                transversals.append({i: Permutation.identity(n)})
                return
        raise AssertionError("identity passed to extend_base")

    def sift(g: Permutation):
        for lev in range(len(base)):
            im = g(base[lev])
            if im not in transversals[lev]:
                return g, lev
            g = transversals[lev][im].inverse() * g
        return g, len(base)

    def add_generator(g: Permutation, lev: int):
        # g stabilizes base[0..lev-1]
        if lev == len(base):
            extend_base(g)
        level_gens[lev].append(g)
        for l2 in range(lev, -1, -1):
            stab = [h for ls in level_gens[l2:] for h in ls]
            transversals[l2] = _orbit_transversal(base[l2], stab, n)

    for g in gens:
        residue, lev = sift(g)
        if not residue.is_identity():
            add_generator(residue, lev)

    # close under Schreier generators until stable
    changed = True
    while changed:
        changed = False
        for lev in range(len(base)):
            stab = [h for ls in level_gens[lev:] for h in ls]
            trans = transversals[lev]
            for pt, rep in list(trans.items()):
                for g in stab:
                    schreier = transversals[lev][g(pt)].inverse() * g * rep
                    residue, rlev = sift(schreier)
                    if not residue.is_identity():
                        add_generator(residue, max(rlev, lev + 1)
                                      if rlev <= lev else rlev)
                        changed = True
        if changed:
            continue
    order = 1
    for t in transversals:
        order *= len(t)
    return order


@dataclass(frozen=True)
class GroupReport:
    order: int
    transitive: bool
    is_full_symmetric: bool


def identify_group(generators: Sequence[Permutation], n: int) -> GroupReport:
    """Exact order (stabilizer chain), transitivity, and the S_n test."""
    for g in generators:
        if g.degree != n:
            raise ValueError("generator degree mismatch")
    unique = list({g.images: g for g in generators}.values())
    transitive = len(_orbit(0, unique)) == n if n > 0 else True
    order = _schreier_sims_order(unique, n)
    return GroupReport(order, transitive, order == math.factorial(n))


# ---------------------------------------------------------------------------
# path geometry


@dataclass(frozen=True)
class Segment:
    kind: str          # "line" or "arc"
    za: complex = 0j   # line endpoints
    zb: complex = 0j
    center: complex = 0j
    radius: float = 0.0
    phi0: float = 0.0
    dphi: float = 0.0

    def at(self, t: float) -> complex:
        if self.kind == "line":
            return self.za + t * (self.zb - self.za)
        return self.center + self.radius * complex(
            math.cos(self.phi0 + t * self.dphi),
            math.sin(self.phi0 + t * self.dphi))


def petal_path(u0: complex, center: complex, radius: float) -> tuple:
    """Segment out, counterclockwise circle, segment back."""
    direction = (u0 - center) / abs(u0 - center)
    standoff = center + radius * direction
    phi0 = math.atan2(direction.imag, direction.real)
    return (Segment("line", za=u0, zb=standoff),
            Segment("arc", center=center, radius=radius,
                    phi0=phi0, dphi=2 * math.pi),
            Segment("line", za=standoff, zb=u0))


def _seg_point_dist(za: complex, zb: complex, p: complex) -> float:
    d = zb - za
    L2 = (d * d.conjugate()).real
    if L2 == 0:
        return abs(p - za)
    t = ((p - za) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(za + t * d - p)


@dataclass(frozen=True)
class Loop:
    index: int          # branch point index in the BranchSet
    center: complex
    radius: float
    angle: float        # angle of (center - u0), orders the flower
    mirror_of: int      # index of the tracked conjugate partner, or -1


@dataclass(frozen=True)
class Flower:
    base_point: Fraction
    loops: tuple        # all loops in counterclockwise angular order


_BASE_CANDIDATES = (Fraction(1, 2), Fraction(2, 5), Fraction(3, 5),
                    Fraction(9, 20), Fraction(11, 20), Fraction(17, 40),
                    Fraction(23, 40), Fraction(1, 3), Fraction(2, 3),
                    Fraction(7, 20), Fraction(13, 20))


def build_flower(bset: BranchSet, candidates=_BASE_CANDIDATES,
                 use_conjugate_symmetry: bool = True) -> Flower:
    """Choose a real base point and petal radii forming a geometric flower.

    Radii start at min(nn/3, |b - u0|/2) and shrink until no petal segment
    (conservatively, the full ray [u0, b_k]) enters another petal's circle.
    A candidate base point is rejected when some radius collapses.
    """
    pts = [complex(z) for z in bset.roots]
    m = len(pts)
    if m == 0:
        raise PreconditionFailedError("empty branch set has no flower")
    scale = max(1.0, max(abs(p) for p in pts))
    nn = []
    for k, p in enumerate(pts):
        nn.append(min(abs(p - q) for j, q in enumerate(pts) if j != k)
                  if m > 1 else 2.0 * scale)
    mirror = list(bset.conjugate_pairs) if use_conjugate_symmetry and \
        bset.no_real_roots and bset.conjugate_pairing else [-1] * m
    for u0 in candidates:
        u0c = complex(float(u0))
        if min(abs(p - u0c) for p in pts) < 1e-6 * scale:
            continue
        rho = [min(nn[k] / 3.0, abs(pts[k] - u0c) / 2.0) for k in range(m)]
        for k in range(m):
            for j in range(m):
                if j == k:
                    continue
                d = _seg_point_dist(u0c, pts[k], pts[j])
                if rho[j] > 0.8 * d:
                    rho[j] = 0.8 * d
        # conjugate petals must mirror exactly
        for k in range(m):
            if mirror[k] >= 0:
                rho[k] = rho[mirror[k]] = min(rho[k], rho[mirror[k]])
        floor = max(1e-9 * scale, 100.0 * float(max(bset.radii))) \
            if bset.radii else 1e-9 * scale
        if min(rho) <= floor:
            continue
        loops = []
        for k in range(m):
            ang = math.atan2((pts[k] - u0c).imag, (pts[k] - u0c).real)
            src = -1
            if mirror[k] >= 0 and pts[k].imag < 0:
                src = mirror[k]
            loops.append(Loop(k, pts[k], rho[k], ang, src))
        loops.sort(key=lambda lp: (lp.angle, abs(lp.center - complex(float(u0)))))
        return Flower(u0, tuple(loops))
    raise PreconditionFailedError("no admissible base point among candidates")


# ---------------------------------------------------------------------------
# tracking backends


class _NumpyBackend:
    """Hardware-precision rung: vectorized simultaneous Newton corrector."""

    precision = 53

    def __init__(self, model):
        self.n = model.size
        self.a = np.array([float(v) for v in model.a])
        self.d = np.array([float(v) for v in model.d])
        self.c2 = np.array([float(v) for v in model.c2])
        self.tol = 5e-14
        # a pass at transverse distance d from a foreign branch point needs
        # steps of order d; hardware noise only drowns the matching near
        # 1e-13, so the floor sits well below the escalation-worthy range
        self.min_step = 2.0 ** -34

    def f_df(self, xs, u):
        uu = u * u
        p_pp = np.zeros(self.n, dtype=complex)
        p_p = np.ones(self.n, dtype=complex)
        d_pp = np.zeros(self.n, dtype=complex)
        d_p = np.zeros(self.n, dtype=complex)
        for k in range(self.n):
            lin = xs + u * self.a[k] + self.d[k]
            if k >= 1:
                p = lin * p_p - uu * self.c2[k - 1] * p_pp
                dd = p_p + lin * d_p - uu * self.c2[k - 1] * d_pp
            else:
                p = lin * p_p
                dd = p_p + lin * d_p
            p_pp, p_p, d_pp, d_p = p_p, p, d_p, dd
        return p_p, d_p

    def refine(self, xs, u, max_iter=24):
        # convergence is judged against the nearest-neighbour gap as well as
        # the ideal relative tolerance: the evaluation noise floor scales
        # with the whole eigenvalue spread, so small eigenvalues of a wide
        # spectrum can never meet a purely relative test, while the matcher
        # only ever needs positions accurate to a small fraction of the gap
        zs = np.array(xs, dtype=complex)
        n = self.n
        prev = None
        for _ in range(max_iter):
            pv, dv = self.f_df(zs, u)
            bad = dv == 0
            if bad.any():
                dv = np.where(bad, 1e-300, dv)
            newton = pv / dv
            if n > 1:
                diff = zs[:, None] - zs[None, :]
                np.fill_diagonal(diff, np.inf)
                s = (1.0 / diff).sum(axis=1)
            else:
                s = np.zeros(1, dtype=complex)
            denom = 1.0 - newton * s
            denom = np.where(denom == 0, 1e-300, denom)
            w = newton / denom
            zs = zs - w
            aw = np.abs(w)
            if n > 1:
                diff = np.abs(zs[:, None] - zs[None, :])
                np.fill_diagonal(diff, np.inf)
                gap = diff.min(axis=1)
            else:
                gap = np.full(1, np.inf)
            if ((aw <= self.tol * (1.0 + np.abs(zs))) |
                    (aw <= 1e-3 * gap)).all():
                return zs.tolist(), True
            m = float(aw.max())
            if prev is not None and m >= 0.5 * prev and \
                    (aw <= 2e-3 * gap).all():
                # stagnating at the noise floor but gap-safe
                return zs.tolist(), True
            prev = m
        return zs.tolist(), False

    def shift(self, xs, deltas):
        return [z + d for z, d in zip(xs, deltas)]

    def as_complex(self, xs):
        return [complex(z) for z in xs]


class _MpBackend:
    """Arbitrary-precision rung."""

    def __init__(self, model, precision):
        self.precision = precision
        self.n = model.size
        with mp.workprec(precision + 16):
            conv = lambda q: mp.mpf(q.numerator) / q.denominator
            self.a = [conv(v) for v in model.a]
            self.d = [conv(v) for v in model.d]
            self.c2 = [conv(v) for v in model.c2]
        self.tol = None  # set inside workprec
        # must undercut the hardware rung's floor or escalating is pointless
        self.min_step = 2.0 ** -48

    def f_df(self, xs, u):
        uu = u * u
        n = self.n
        ps, ds = [], []
        for x in xs:
            p_pp, p_p = mp.mpc(0), mp.mpc(1)
            d_pp, d_p = mp.mpc(0), mp.mpc(0)
            for k in range(n):
                lin = x + u * self.a[k] + self.d[k]
                if k >= 1:
                    p = lin * p_p - uu * self.c2[k - 1] * p_pp
                    dd = p_p + lin * d_p - uu * self.c2[k - 1] * d_pp
                else:
                    p = lin * p_p
                    dd = p_p + lin * d_p
                p_pp, p_p, d_pp, d_p = p_p, p, d_p, dd
            ps.append(p_p)
            ds.append(d_p)
        return ps, ds

    def refine(self, xs, u, max_iter=40):
        # same gap-aware acceptance as the hardware rung (see there)
        with mp.workprec(self.precision + 16):
            tol = mp.mpf(2) ** (-self.precision + 6)
            zs = [mp.mpc(z) for z in xs]
            uc = mp.mpc(u)
            n = self.n
            prev = None
            for _ in range(max_iter):
                pv, dv = self.f_df(zs, uc)
                ws = []
                for j in range(n):
                    if dv[j] == 0:
                        dv[j] = mp.mpc(tol)
                    newton = pv[j] / dv[j]
                    s = mp.mpc(0)
                    for k in range(n):
                        if k != j:
                            dz = zs[j] - zs[k]
                            s += 1 / dz if dz != 0 else 0
                    denom = 1 - newton * s
                    if denom == 0:
                        denom = mp.mpc(tol)
                    w = newton / denom
                    zs[j] = zs[j] - w
                    ws.append(abs(w))
                gaps = []
                for j in range(n):
                    g = min((abs(zs[j] - zs[k])
                             for k in range(n) if k != j), default=mp.inf)
                    gaps.append(g)
                if all(ws[j] <= tol * (1 + abs(zs[j])) or
                       ws[j] <= gaps[j] * mp.mpf("1e-3") for j in range(n)):
                    return zs, True
                m = max(ws)
                if prev is not None and m >= prev / 2 and \
                        all(ws[j] <= gaps[j] * mp.mpf("2e-3")
                            for j in range(n)):
                    return zs, True
                prev = m
            return zs, False

    def shift(self, xs, deltas):
        # the base values keep their working precision; only the float
        # extrapolation increment is added
        with mp.workprec(self.precision + 16):
            return [x + mp.mpc(d) for x, d in zip(xs, deltas)]

    def as_complex(self, xs):
        return [complex(z) for z in xs]


def _make_backend(model, precision):
    if precision <= 53:
        return _NumpyBackend(model)
    return _MpBackend(model, precision)


# ---------------------------------------------------------------------------
# eigenvalue tracking


def _match(cands: list, refs: list, ratio: float = 3.0):
    """Nearest-reference assignment; None when ambiguous or not bijective.

    cands[j] is matched to its nearest refs[i]; the second-nearest reference
    must be `ratio` times farther, and the assignment must be a bijection.
    """
    n = len(cands)
    if n == 1:
        return [0]
    dist = np.abs(np.asarray(cands, dtype=complex)[:, None] -
                  np.asarray(refs, dtype=complex)[None, :])
    best = dist.argmin(axis=1)
    d1 = dist[np.arange(n), best]
    dist[np.arange(n), best] = np.inf
    d2 = dist.min(axis=1)
    if ((d1 > 0) & (d2 < ratio * d1)).any():
        return None
    if len(set(best.tolist())) != n:
        return None
    return best.tolist()


def _track_segment(backend, seg: Segment, xs, h0: float):
    """Continue the sheet values along one segment; xs keeps its labeling.

    Predictor-corrector with a proportional step controller: the previous
    accepted step extrapolates the next start values, and the accepted
    movement is aimed at a sixth of the current eigenvalue gap, so steps
    stay large on quiet stretches and shrink before the matcher degrades.
    """
    t = 0.0
    h = h0
    h_max = 2.0 * h0
    xs = list(xs)
    floats = np.array(backend.as_complex(xs))
    prev_floats = None
    prev_h = 0.0
    while t < 1.0:
        h_eff = min(h, 1.0 - t)
        u_next = seg.at(t + h_eff)
        if prev_h > 0.0:
            deltas = (floats - prev_floats) * (h_eff / prev_h)
            guess = backend.shift(xs, deltas.tolist())
        else:
            guess = xs
        cand, ok = backend.refine(guess, u_next)
        if ok:
            cf = np.array(backend.as_complex(cand))
            assign = _match(cf.tolist(), floats.tolist())
            identity_ok = assign is not None and \
                all(assign[j] == j for j in range(len(assign)))
            if len(cf) > 1:
                diff = np.abs(cf[:, None] - cf[None, :])
                np.fill_diagonal(diff, np.inf)
                gap = float(diff.min())
            else:
                gap = math.inf
            if identity_ok and gap > 0.0:
                move = float(np.abs(cf - floats).max())
                prev_floats, prev_h = floats, h_eff
                xs = list(cand)
                floats = cf
                t += h_eff
                factor = 2.0 if move == 0.0 else \
                    min(2.0, max(0.5, gap / (6.0 * move)))
                h = min(h_max, h_eff * factor)
                continue
        h *= 0.5
        if h < backend.min_step:
            raise StepCollapse(
                f"step fell below {backend.min_step} on a {seg.kind} segment")
    return xs


def _track_path(curve: GaudinCurve, path: Sequence[Segment], precision: int,
                start_values, ceiling: int) -> tuple:
    """Track a closed path; returns (permutation, highest rung used).

    A segment whose stepping collapses is retried alone at doubled
    precision, so quiet segments stay on the cheap rung; the collapse is
    re-raised once the ceiling is exhausted.
    """
    model = build_model(curve.cfg)
    backends = {precision: _make_backend(model, precision)}
    top = max(ceiling, precision)
    xs = list(start_values)
    starts = backends[precision].as_complex(xs)
    max_used = precision
    for seg in path:
        h0 = 1.0 / 24.0 if seg.kind == "arc" else 1.0 / 8.0
        prec = precision
        while True:
            try:
                xs = _track_segment(backends[prec], seg, xs, h0)
                break
            except StepCollapse:
                prec *= 2
                if prec > top:
                    raise
                if prec not in backends:
                    backends[prec] = _make_backend(model, prec)
                xs, ok = backends[prec].refine(
                    [complex(z) for z in xs], seg.at(0.0))
                if not ok:
                    raise
        if prec != precision:
            max_used = max(max_used, prec)
            # hand the next segment clean base-rung values
            xs, ok = backends[precision].refine(
                backends[prec].as_complex(xs), seg.at(1.0))
            if not ok:
                raise MatchAmbiguity(
                    "segment end values did not settle on the base rung")
    ends = backends[precision].as_complex(xs)
    assign = _match(ends, starts)
    if assign is None:
        raise MatchAmbiguity("end values do not match start sheets cleanly")
    return Permutation(tuple(assign)), max_used


def track_eigenvalues(curve: GaudinCurve, path: Sequence[Segment],
                      precision: int = 53, start_values=None,
                      ceiling: int | None = None) -> Permutation:
    """Continue all sheets along a closed path; return the end-to-start map.

    The permutation sends starting label j to the label whose sheet value
    the j-th sheet occupies after continuation. The path must avoid branch
    points (the flower construction guarantees the stated safety margin).
    """
    if start_values is None:
        z0 = path[0].at(0.0)
        if abs(z0.imag) > 1e-12 * (1.0 + abs(z0)):
            raise PreconditionFailedError(
                "default start values require a real start point")
        backend = _make_backend(build_model(curve.cfg), precision)
        start_values = base_eigenvalues(curve, z0.real, backend)
    perm, _ = _track_path(curve, path, precision, start_values,
                          precision if ceiling is None else ceiling)
    return perm


def base_eigenvalues(curve: GaudinCurve, u0: float, backend):
    """Sheet values at the real base point, ascending, backend-refined."""
    model = build_model(curve.cfg)
    ham = hamiltonian_at(model, u0, which=1)
    eigs = sorted(float(v) for v in np.linalg.eigvalsh(ham))
    n = len(eigs)
    if n > 1:
        scale = max(abs(eigs[0]), abs(eigs[-1]), 1.0)
        gap = min(b - a for a, b in zip(eigs, eigs[1:]))
        if gap <= 1e-9 * scale:
            raise PreconditionFailedError(
                f"base eigenvalues nearly collide (gap {gap:.3e})")
    xs, ok = backend.refine(eigs, u0 + 0j)
    if not ok:
        raise MatchAmbiguity("base eigenvalue refinement did not converge")
    return xs


# ---------------------------------------------------------------------------
# full monodromy and the transitivity witness


@dataclass(frozen=True)
class LoopRecord:
    center: complex
    radius: float
    angle: float
    tracked: bool
    permutation: Permutation


@dataclass(frozen=True)
class MonodromyReport:
    base_point: Fraction
    base_eigenvalues: tuple
    loops: tuple
    transitive: bool
    order: int
    is_full_symmetric: bool
    product_in_order: Permutation
    precision: int

    @property
    def generators(self) -> tuple:
        return tuple(lp.permutation for lp in self.loops)


class _Tracker:
    """Per-rung backend and base-fiber cache plus the per-petal ladder."""

    def __init__(self, curve, base_point: Fraction, precision: int,
                 ceiling: int, expect_transposition: bool):
        self.curve = curve
        self.model = build_model(curve.cfg)
        self.u0 = float(base_point)
        self.precision = precision
        self.ceiling = max(ceiling, precision)
        self.expect_transposition = expect_transposition
        self._rungs: dict[int, tuple] = {}
        self.max_used = precision

    def _rung(self, prec: int):
        if prec not in self._rungs:
            backend = _make_backend(self.model, prec)
            start = base_eigenvalues(self.curve, self.u0, backend)
            self._rungs[prec] = (backend, start)
        return self._rungs[prec]

    def base_values(self):
        backend, start = self._rung(self.precision)
        return tuple(backend.as_complex(start))

    def petal(self, loop: Loop) -> Permutation:
        """Track one petal, doubling precision on any numeric failure.

        Collapsing segments escalate individually inside the path tracker;
        the whole-petal retry below only fires when the end matching or the
        transposition shape is wrong at the current base rung.
        """
        path = petal_path(complex(self.u0), loop.center, loop.radius)
        prec = self.precision
        last_err: Exception | None = None
        while prec <= self.ceiling:
            try:
                _, start = self._rung(prec)
                perm, used = _track_path(self.curve, path, prec, start,
                                         self.ceiling)
                if self.expect_transposition and not perm.is_transposition():
                    raise MatchAmbiguity(
                        "petal generator is not a transposition")
                self.max_used = max(self.max_used, used)
                return perm
            except (StepCollapse, MatchAmbiguity) as exc:
                last_err = exc
                prec *= 2
        raise last_err if last_err is not None else \
            StepCollapse("precision ladder exhausted")


def monodromy_group(curve: GaudinCurve, branch_set: BranchSet | None = None,
                    precision: int = 53, ceiling: int = 512,
                    use_conjugate_symmetry: bool = True) -> MonodromyReport:
    """Monodromy generators, their group, and the flower product.

    Tracks one petal per branch point, doubling that petal's working
    precision on any numeric failure. Under certified simplicity every
    generator must come out a transposition; a violation is treated as a
    tracking failure (retried on the ladder, never reported as math). A
    non-identity angular product means an undetected tracking error and
    raises rather than guessing.
    """
    n = curve.degree
    simp = simplicity_check(curve)
    if not simp.simple:
        raise PreconditionFailedError("simplicity not certified: " +
                                      simp.detail)
    if n == 1:
        return MonodromyReport(Fraction(1, 2), (), (), True, 1, True,
                               Permutation.identity(1), precision)
    if branch_set is None:
        branch_set = branch_points(curve)
    flower = build_flower(branch_set,
                          use_conjugate_symmetry=use_conjugate_symmetry)
    tracker = _Tracker(curve, flower.base_point, precision, ceiling,
                       expect_transposition=True)
    perms: dict[int, Permutation] = {}
    done = 0
    for loop in flower.loops:
        if loop.mirror_of < 0:
            t0 = time.perf_counter()
            perms[loop.index] = tracker.petal(loop)
            done += 1
            if log.isEnabledFor(logging.DEBUG):
                log.debug("petal %d (#%d, rho=%.2e): %.2fs, max rung %d",
                          done, loop.index, loop.radius,
                          time.perf_counter() - t0, tracker.max_used)
    records = []
    for loop in flower.loops:
        if loop.mirror_of >= 0:
            perm = perms[loop.mirror_of].inverse()
            records.append(LoopRecord(loop.center, loop.radius, loop.angle,
                                      False, perm))
        else:
            records.append(LoopRecord(loop.center, loop.radius, loop.angle,
                                      True, perms[loop.index]))
    product = Permutation.identity(n)
    for rec in records:
        product = rec.permutation * product
    if not product.is_identity():
        raise MatchAmbiguity("flower product is not the identity")
    group = identify_group([rec.permutation for rec in records], n)
    return MonodromyReport(flower.base_point, tracker.base_values(),
                           tuple(records), group.transitive, group.order,
                           group.is_full_symmetric, product,
                           tracker.max_used)


@dataclass(frozen=True)
class TransitivityWitness:
    transitive: bool
    loops_used: int
    branch_count: int
    generators: tuple
    complete: bool = False  # never a full monodromy run


def transitivity_witness(curve: GaudinCurve,
                         branch_set: BranchSet | None = None,
                         precision: int = 53,
                         ceiling: int = 512) -> TransitivityWitness:
    """Cheapest irreducibility proof: track petals until the orbit closes.

    Only upper-half-plane petals are needed (a generator and its inverse
    have the same orbits). Petals are taken nearest-first; the witness stops
    as soon as the orbit of sheet 0 is everything.
    """
    n = curve.degree
    if n == 1:
        return TransitivityWitness(True, 0, 0, ())
    if branch_set is None:
        branch_set = branch_points(curve)
    flower = build_flower(branch_set)
    tracker = _Tracker(curve, flower.base_point, precision, ceiling,
                       expect_transposition=False)
    todo = [lp for lp in flower.loops if lp.mirror_of < 0]
    todo.sort(key=lambda lp: abs(lp.center - complex(tracker.u0)))
    gens: list[Permutation] = []
    orbit = {0}
    used = 0
    for loop in todo:
        if len(orbit) == n:
            break
        gens.append(tracker.petal(loop))
        used += 1
        orbit = _orbit(0, gens)
    return TransitivityWitness(len(orbit) == n, used,
                               branch_set.branch_count, tuple(gens))


def monodromy_report_json(report: MonodromyReport) -> dict:
    return {
        "schema": 1,
        "base_point": str(report.base_point),
        "base_eigenvalues": [[float(z.real), float(z.imag)]
                             for z in report.base_eigenvalues],
        "loops": [{
            "center": [float(rec.center.real), float(rec.center.imag)],
            "radius": float(rec.radius),
            "angle": float(rec.angle),
            "tracked": rec.tracked,
            "permutation": list(rec.permutation.images),
        } for rec in report.loops],
        "transitive": report.transitive,
        "order": str(report.order),
        "is_full_symmetric": report.is_full_symmetric,
        "product_in_order": list(report.product_in_order.images),
        "precision": report.precision,
    }
