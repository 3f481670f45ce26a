"""Command-line surface: compute, verify, and export.

Single binary with subcommands. Every command is deterministic given its
request and precision. Results go to stdout or --out; formats are versioned
JSON ("schema": 1), CSV, or SVG. Errors map to the exit-code contract:
0 success, 2 mathematical precondition failure, 3 numeric failure, with a
machine-readable JSON body on stderr. Anything else is a bug and tracebacks.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from fractions import Fraction

import mpmath as mp

from .branch import (
    asymptotic_limit_check,
    branch_points,
    discriminant_u,
    genus,
    simplicity_check,
)
from .curve import curve_for, curve_to_json
from .errors import MathematicalError, MismatchFoundError, NumericError
from .hamiltonian import (
    WeightConfig,
    admissible_range,
    build_model,
    model_to_json,
    singular_dimension,
)
from .monodromy import monodromy_group, monodromy_report_json, transitivity_witness
from .polyalg import rat_to_str
from .rep_oracle import verify_closed_forms

EXIT_MATH = 2
EXIT_NUMERIC = 3

_PALETTE = ("#c0392b", "#2c5aa0", "#1e8449", "#7d3c98", "#b7950b", "#117a65")


def _precision_default() -> int:
    env = os.environ.get("GAUDIN3_PRECISION", "")
    try:
        return max(int(env), 64)
    except ValueError:
        return 212


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=False), out)


def _cfg_from(args) -> WeightConfig:
    try:
        return WeightConfig(args.m1, args.m2, args.m3, args.r)
    except ValueError as exc:
        raise MathematicalError(str(exc)) from exc


def _require_model(cfg: WeightConfig):
    """Build the model, diagnosing an empty admissible range."""
    rng = admissible_range(cfg)
    if rng is None:
        lo = max(0, cfg.r - cfg.m3)
        hi = min(cfg.r, cfg.m1, cfg.m2, cfg.m1 + cfg.m2 - cfg.r)
        raise MathematicalError(
            f"empty admissible range for {cfg}: need "
            f"max(0, r-m3)={lo} <= min(r, m1, m2, m1+m2-r)={hi}")
    return build_model(cfg)


def _poly_pretty(curve) -> str:
    """Descending-x rendering with parenthesized u-coefficients."""
    by_x: dict[int, dict[int, Fraction]] = {}
    for (dx, du), c in curve.poly.terms.items():
        by_x.setdefault(dx, {})[du] = c

    def mono_u(du: int, c: Fraction, lead: bool) -> str:
        mag = abs(c)
        body = "u" if du == 1 else (f"u^{du}" if du > 1 else "")
        if mag == 1 and du > 0:
            coef = ""
        else:
            coef = str(mag) + ("*" if du > 0 else "")
        sign = "-" if c < 0 else ("" if lead else "+")
        sep = "" if lead else " "
        return f"{sep}{sign} {coef}{body}".strip() if not lead else \
            f"{sign}{coef}{body}"

    def upoly(coeffs: dict[int, Fraction]) -> str:
        parts = []
        for du in sorted(coeffs, reverse=True):
            parts.append(mono_u(du, coeffs[du], lead=not parts))
        return " ".join(parts)

    chunks = []
    for dx in sorted(by_x, reverse=True):
        inner = upoly(by_x[dx])
        xs = "x" if dx == 1 else (f"x^{dx}" if dx > 1 else "")
        if dx == 0:
            term = inner
        elif len(by_x[dx]) == 1 and not inner.startswith("-"):
            term = (inner + "*" + xs) if inner != "1" else xs
        elif len(by_x[dx]) == 1 and inner == "-1":
            term = "-" + xs
        elif len(by_x[dx]) == 1:
            term = inner + "*" + xs
        else:
            term = f"({inner})*{xs}"
        chunks.append(term)
    text = chunks[0]
    for t in chunks[1:]:
        text += (" - " + t[1:]) if t.startswith("-") else (" + " + t)
    return text


def cmd_dim(args) -> int:
    cfg = _cfg_from(args)
    print(singular_dimension(cfg))
    return 0


def cmd_model(args) -> int:
    cfg = _cfg_from(args)
    model = _require_model(cfg)
    obj = model_to_json(model)
    obj["schema"] = 1
    if args.u is not None:
        u = Fraction(args.u)
        from .hamiltonian import hamiltonian_at
        ham = hamiltonian_at(model, u, which=1, precision=args.precision)
        obj["hamiltonian_at"] = {
            "u": rat_to_str(u),
            "matrix": [[float(x) for x in row] for row in ham.tolist()],
        }
    _emit_json(obj, args.out)
    return 0


def cmd_curve(args) -> int:
    cfg = _cfg_from(args)
    _require_model(cfg)
    curve = curve_for(cfg)
    obj = curve_to_json(curve)
    obj["pretty"] = _poly_pretty(curve)
    if args.u is not None:
        u = Fraction(args.u)
        spec = {}
        for (dx, du), c in curve.poly.terms.items():
            spec[dx] = spec.get(dx, Fraction(0)) + c * u ** du
        obj["at_u"] = {"u": rat_to_str(u),
                       "coefficients": [[k, rat_to_str(v)]
                                        for k, v in sorted(spec.items(),
                                                           reverse=True)
                                        if v != 0]}
    _emit_json(obj, args.out)
    return 0


def cmd_disc(args) -> int:
    cfg = _cfg_from(args)
    _require_model(cfg)
    disc = discriminant_u(curve_for(cfg))
    obj = {
        "schema": 1,
        "config": {"m1": cfg.m1, "m2": cfg.m2, "m3": cfg.m3, "r": cfg.r},
        "degree": disc.monic.degree(),
        "leading_coefficient": rat_to_str(disc.lead),
        "monic": disc.monic.to_json(),
    }
    _emit_json(obj, args.out)
    return 0


def _branch_rows(bset):
    rows = []
    for z, rad in zip(bset.roots, bset.radii):
        rows.append((float(mp.re(z)), float(mp.im(z)), float(rad)))
    return rows


def cmd_branch(args) -> int:
    cfg = _cfg_from(args)
    _require_model(cfg)
    bset = branch_points(curve_for(cfg), precision=args.precision)
    if args.format == "csv":
        lines = ["re,im,error_radius"]
        for re_, im_, rad in _branch_rows(bset):
            lines.append(f"{re_!r},{im_!r},{rad:.6e}")
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    obj = {
        "schema": 1,
        "config": {"m1": cfg.m1, "m2": cfg.m2, "m3": cfg.m3, "r": cfg.r},
        "count": bset.branch_count,
        "squarefree": bset.squarefree,
        "no_real_roots": bset.no_real_roots,
        "precision": bset.precision,
        "points": [{"re": re_, "im": im_, "error_radius": rad}
                   for re_, im_, rad in _branch_rows(bset)],
    }
    _emit_json(obj, args.out)
    return 0


def cmd_genus(args) -> int:
    cfg = _cfg_from(args)
    _require_model(cfg)
    curve = curve_for(cfg)
    bset = branch_points(curve, precision=args.precision)
    witness = transitivity_witness(curve, bset)
    g = genus(curve, witness)
    simp = simplicity_check(curve)
    obj = {
        "schema": 1,
        "config": {"m1": cfg.m1, "m2": cfg.m2, "m3": cfg.m3, "r": cfg.r},
        "degree": curve.degree,
        "branch_count": bset.branch_count,
        "transitive": witness.transitive,
        "loops_used": witness.loops_used,
        "simple": simp.simple,
        "genus": g,
    }
    _emit_json(obj, args.out)
    return 0


def cmd_monodromy(args) -> int:
    cfg = _cfg_from(args)
    _require_model(cfg)
    curve = curve_for(cfg)
    bset = branch_points(curve, precision=args.precision)
    report = monodromy_group(curve, bset)
    obj = monodromy_report_json(report)
    obj["config"] = {"m1": cfg.m1, "m2": cfg.m2, "m3": cfg.m3, "r": cfg.r}
    _emit_json(obj, args.out)
    return 0


# ---------------------------------------------------------------------------
# plots


def _svg_scatter(groups, marks=(0.0, 1.0), crosses=()) -> str:
    """Deterministic scatter SVG: one <circle> per point, colored by group.

    groups: [(label, color, [(re, im), ...]), ...]. The viewBox is the
    unit square scaled to 1000; the point cloud (plus real-axis marks and
    any crosses) is fitted with a 5% margin, preserving aspect.
    """
    pts = [p for _, _, ps in groups for p in ps]
    pts += [(x, 0.0) for x in marks]
    pts += list(crosses)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    w = max(x1 - x0, 1e-9)
    h = max(y1 - y0, 1e-9)
    side = max(w, h)
    pad = 0.05 * side
    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    half = side / 2.0 + pad
    scale = 1000.0 / (2.0 * half)

    def sx(x: float) -> float:
        return (x - (cx - half)) * scale

    def sy(y: float) -> float:
        return 1000.0 - (y - (cy - half)) * scale

    rpt = max(2.5, min(6.0, 120.0 / max(1, len(pts))))
    out = ['<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" '
           'data-schema="1">',
           '<rect width="1000" height="1000" fill="white"/>',
           f'<line x1="0" y1="{sy(0.0):.2f}" x2="1000" y2="{sy(0.0):.2f}" '
           'stroke="#999" stroke-width="1"/>']
    for x in marks:
        out.append(f'<line x1="{sx(x):.2f}" y1="{sy(0.0) - 12:.2f}" '
                   f'x2="{sx(x):.2f}" y2="{sy(0.0) + 12:.2f}" '
                   'stroke="#333" stroke-width="2"/>')
        out.append(f'<text x="{sx(x):.2f}" y="{sy(0.0) + 30:.2f}" '
                   'font-size="22" text-anchor="middle" fill="#333">'
                   f'{x:g}</text>')
    for label, color, ps in groups:
        out.append(f'<g fill="{color}" data-label="{label}">')
        for re_, im_ in ps:
            out.append(f'<circle cx="{sx(re_):.3f}" cy="{sy(im_):.3f}" '
                       f'r="{rpt:.2f}"/>')
        out.append("</g>")
    for re_, im_ in crosses:
        a, b = sx(re_), sy(im_)
        out.append(f'<path d="M {a - 9:.2f} {b - 9:.2f} L {a + 9:.2f} '
                   f'{b + 9:.2f} M {a - 9:.2f} {b + 9:.2f} L {a + 9:.2f} '
                   f'{b - 9:.2f}" stroke="black" stroke-width="3" fill="none"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _parse_overlay(text: str) -> WeightConfig:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 4:
        raise MathematicalError(
            f"overlay must be m1,m2,m3,r; got {text!r}")
    try:
        vals = [int(p) for p in parts]
    except ValueError as exc:
        raise MathematicalError(f"overlay must be integers: {text!r}") from exc
    try:
        return WeightConfig(*vals)
    except ValueError as exc:
        raise MathematicalError(str(exc)) from exc


def cmd_ornament(args) -> int:
    cfg = _cfg_from(args)
    configs = [cfg]
    if args.overlay:
        configs.append(_parse_overlay(args.overlay))
    groups = []
    csv_lines = ["label,re,im,error_radius"]
    for k, c in enumerate(configs):
        label = f"{c.m1},{c.m2},{c.m3},r={c.r}"
        if singular_dimension(c) <= 1:
            rows = []
        else:
            bset = branch_points(curve_for(c), precision=args.precision)
            rows = _branch_rows(bset)
        groups.append((label, _PALETTE[k % len(_PALETTE)],
                       [(re_, im_) for re_, im_, _ in rows]))
        for re_, im_, rad in rows:
            csv_lines.append(f'"{label}",{re_!r},{im_!r},{rad:.6e}')
    svg = _svg_scatter(groups)
    _emit(svg, args.out)
    if args.out:
        side = os.path.splitext(args.out)[0] + ".csv"
        with open(side, "w", encoding="utf-8") as fh:
            fh.write("\n".join(csv_lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    if args.cap > 12:
        raise MathematicalError("weight cap must be at most 12")
    corrupt = None
    if args.inject_fault:
        def corrupt(model):
            c2 = list(model.c2)
            if c2:
                c2[0] = c2[0] + 1
                return dataclasses.replace(model, c2=tuple(c2))
            return dataclasses.replace(
                model, d=tuple(v + 1 for v in model.d))
    try:
        report = verify_closed_forms(args.cap, corrupt=corrupt)
    except MismatchFoundError as exc:
        sys.stderr.write(f"mismatch: {exc}\n")
        raise
    obj = {"schema": 1, "cap": args.cap, "all_match": True}
    obj.update(report)
    _emit_json(obj, args.out)
    return 0


def cmd_asymptote(args) -> int:
    ratio = (args.m1, args.m2, args.m3)
    scales = [Fraction(s) for s in args.scales.split(",") if s]
    report = asymptotic_limit_check(ratio, args.r, scales,
                                    precision=args.precision)
    obj = {
        "schema": 1,
        "ratio": [rat_to_str(Fraction(m)) for m in report.ratio],
        "r": report.r,
        "limit_roots": [[float(mp.re(report.limit_upper)),
                         float(mp.im(report.limit_upper))],
                        [float(mp.re(report.limit_lower)),
                         float(mp.im(report.limit_lower))]],
        "entries": [{
            "scale": rat_to_str(e.scale),
            "weights": list(e.weights),
            "branch_count": e.branch_count,
            "max_dist_upper": float(e.max_dist_upper),
            "max_dist_lower": float(e.max_dist_lower),
        } for e in report.entries],
        "decreasing_upper": report.decreasing_upper,
        "decreasing_lower": report.decreasing_lower,
        "decreasing": report.decreasing,
    }
    if args.format == "svg":
        groups = []
        for k, e in enumerate(report.entries):
            c = WeightConfig(*e.weights, args.r)
            bset = branch_points(curve_for(c), precision=args.precision)
            label = f"scale={rat_to_str(e.scale)}"
            groups.append((label, _PALETTE[k % len(_PALETTE)],
                           [(float(mp.re(z)), float(mp.im(z)))
                            for z in bset.roots]))
        crosses = [(float(mp.re(report.limit_upper)),
                    float(mp.im(report.limit_upper))),
                   (float(mp.re(report.limit_lower)),
                    float(mp.im(report.limit_lower)))]
        _emit(_svg_scatter(groups, crosses=crosses), args.out)
        return 0
    _emit_json(obj, args.out)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _add_weights(p: argparse.ArgumentParser, with_r: bool = True) -> None:
    p.add_argument("m1", type=int)
    p.add_argument("m2", type=int)
    p.add_argument("m3", type=int)
    if with_r:
        p.add_argument("--r", type=int, required=True,
                       help="total lowering depth")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--precision", type=int, default=_precision_default(),
                   help="working precision in bits "
                        "(default from GAUDIN3_PRECISION or 212)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv", "svg"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gaudin3",
        description="Spectral curves, branch points, and monodromy of the "
                    "three-point quadratic pencil")
    sub = ap.add_subparsers(dest="command", required=True)

    specs = (
        ("dim", cmd_dim, "dimension of the singular weight space"),
        ("model", cmd_model, "exact tridiagonal model data"),
        ("curve", cmd_curve, "characteristic curve polynomial"),
        ("disc", cmd_disc, "monic discriminant of the covering"),
        ("branch", cmd_branch, "certified branch points"),
        ("genus", cmd_genus, "genus via branch count and transitivity"),
        ("monodromy", cmd_monodromy, "monodromy generators and group"),
        ("ornament", cmd_ornament, "branch-point scatter SVG + CSV"),
    )
    for name, fn, blurb in specs:
        p = sub.add_parser(name, help=blurb)
        _add_weights(p)
        _add_common(p)
        p.set_defaults(fn=fn)
        if name in ("model", "curve"):
            p.add_argument("--u", default=None,
                           help="also evaluate at this rational u")
        if name == "ornament":
            p.add_argument("--overlay", default=None,
                           help="second configuration m1,m2,m3,r")

    p = sub.add_parser("verify", help="closed forms vs. tensor oracle sweep")
    p.add_argument("cap", type=int, help="max weight (<= 12)")
    p.add_argument("--inject-fault", action="store_true",
                   help=argparse.SUPPRESS)
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("asymptote",
                       help="branch ornament convergence to the limit "
                            "quadratic")
    _add_weights(p)
    p.add_argument("--scales", required=True,
                   help="comma-separated increasing scale factors")
    _add_common(p)
    p.set_defaults(fn=cmd_asymptote)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except MathematicalError as exc:
        body = {"schema": 1, "error": type(exc).__name__,
                "message": str(exc), "exit_code": EXIT_MATH}
        sys.stderr.write(json.dumps(body) + "\n")
        return EXIT_MATH
    except NumericError as exc:
        body = {"schema": 1, "error": type(exc).__name__,
                "message": str(exc), "exit_code": EXIT_NUMERIC}
        sys.stderr.write(json.dumps(body) + "\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
