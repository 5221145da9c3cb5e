"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import os
import sys
import time

import numpy as np
import pytest

from heisgeo import checks
from heisgeo.cli import main as cli_main
from heisgeo.curves import Curve, contact_normality, frenet_residual, gauss_degree, p_curvature
from heisgeo.dsl import BinOp, Call, Name, Neg, Num, eval_jet, load_scene, parse_expr, parse_scene, to_source
from heisgeo.errors import DslError, HeisgeoError, HypothesisViolated
from heisgeo.numerics import cos, integrate_1d, integrate_2d, sin
from heisgeo.surfaces import (
    ParametricSurface,
    ProfileTriple,
    ab_coefficients,
    ab_via_cross,
    cylinder_p_area,
    density,
    make_tube,
    p_area,
    revolution_surface,
    torus,
    tube_density_closed_form,
)
from heisgeo.volumes import (
    enclosed_volume,
    isoperimetric_check,
    pappus_area_case1,
    pappus_area_case2,
    pappus_volume_check,
    tube_volume_exact,
    tube_volume_formula,
)

TWO_PI = 2 * math.pi
FOUR_PI2 = 4 * math.pi ** 2
SCENES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src", "heisgeo", "scenes")

RESULTS = {}


def record(n, passed, detail):
    line = f"CRITERION {n:>2} {'PASS' if passed else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert passed, line


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# -- fixtures shared by several criteria ------------------------------------


def helix(R):
    return Curve(lambda s: (R * sin(s / R), -R * cos(s / R), (1 - R) * s), (0, TWO_PI),
                 closed=(R == 1), name=f"gamma_{R}")


def line_ab(a, b, length):
    c = math.sqrt(1 - a * a)
    return Curve(lambda s: (c * s, a * s + b, (1 + b * c) * s + 0 * s), (0, length), name=f"line_{a}_{b}")


def ellipse_profile(a=2.3, b=0.8):
    return ProfileTriple(lambda t: a * sin(t), lambda t: b * cos(t), lambda t: 0 * t, TWO_PI, closed=True)


def random_closed_tube(rng):
    """Closed tube around a circle of random radius with a random periodic z,
    so kappa = 1/R != 0 and tau varies; the profile is a random trigonometric
    polynomial of degree 2."""
    R = rng.uniform(0.6, 2.0)
    cx, cy, z0 = rng.uniform(-1, 1, 3)
    A, B = rng.uniform(-0.5, 0.5, 2)
    curve = Curve(lambda s: (cx + R * sin(s / R), cy - R * cos(s / R),
                             z0 + A * sin(s / R) + B * cos(2 * s / R)),
                  (0, TWO_PI * R), closed=True, name="random_curve")
    c = rng.uniform(-0.25, 0.25, (3, 5))

    def trig(k):
        return lambda t: c[k, 0] + c[k, 1] * sin(t) + c[k, 2] * cos(t) + c[k, 3] * sin(2 * t) + c[k, 4] * cos(2 * t)

    prof = ProfileTriple(trig(0), trig(1), trig(2), TWO_PI, closed=True, name="random_profile")
    return curve, prof


# -- criteria -----------------------------------------------------------------


def test_criterion_01_torus_volume():
    parts, ok = [], True
    for r, R, expect in ((1.0, 2.0, 39.4784176), (0.5, 1.5, 7.4022033)):
        t0 = time.perf_counter()
        V = enclosed_volume(torus(r, R)).volume
        dt = time.perf_counter() - t0
        exact = 2 * math.pi ** 2 * r * r * R
        good = rel(V, exact) <= 1e-6 and abs(V - expect) < 1e-7 and dt < 5
        ok &= good
        parts.append(f"(r,R)=({r},{R}) V={V:.10f} rel={rel(V, exact):.1e} t={dt:.3f}s")
    record(1, ok, "; ".join(parts))


def _closed_form_area(curve, prof):
    S = make_tube(curve, prof)

    def dens(s, t):
        q = S.quantities(s, t)
        return tube_density_closed_form(*(q[k] for k in ("kappa", "tau", "f", "g", "df", "dg", "dh")))

    return integrate_2d(dens, S.s_range, S.t_range).value


def test_criterion_02_helical_tube_area():
    parts, ok = [], True
    for R in (1.0, 2.0):
        curve, prof = helix(R), ellipse_profile()
        generic = p_area(make_tube(curve, prof)).value
        closed = _closed_form_area(curve, prof)
        s0, t0 = curve.length_parameter, prof.t0
        int_g = integrate_1d(lambda t: prof.derivatives(t)[1, 0], 0, t0).value
        reduced = s0 * t0 - s0 * int_g
        vals = (generic, closed, reduced)
        good = all(rel(v, FOUR_PI2) <= 1e-6 for v in vals) and max(
            rel(a, b) for a in vals for b in vals) <= 1e-6
        ok &= good
        try:
            pappus_area_case1(curve, prof)
            gate = "case-1 hypotheses hold"
        except HypothesisViolated as exc:
            gate = f"case-1 hypothesis '{exc.which}' fails by {exc.residual:.3g}"
        parts.append(f"R={R:g}: generic={generic:.10f} closed_form={closed:.10f} "
                     f"s0t0-s0*int(g)={reduced:.10f} target={FOUR_PI2:.10f} ({gate})")
    record(2, ok, "; ".join(parts))


def test_criterion_03_cylinder_area():
    closed = cylinder_p_area(cos, sin, 3.0)
    S = ParametricSurface.from_map(lambda s, t: (cos(s), sin(s), t), (0, TWO_PI), (0, 3), closed_s=True)
    generic = p_area(S, tol=1e-10).value
    target = 6 * math.pi
    ok = rel(closed, target) <= 1e-8 and rel(generic, target) <= 1e-8
    record(3, ok, f"closed_form={closed:.12f} generic={generic:.12f} 6pi={target:.12f}")


def test_criterion_04_pappus_volume():
    disk = ProfileTriple(lambda t: 0 * t, cos, sin, TWO_PI, closed=True)
    c1 = pappus_volume_check(line_ab(0, 0, 2.0), disk)
    scene = load_scene(os.path.join(SCENES, "pappus_volume.scn"))
    sq = scene.surfaces["tube_square"].surface
    c2 = pappus_volume_check(sq.curve, sq.profile)
    ok = (c1.rel_diff <= 1e-5 and rel(c1.rhs, math.pi) <= 1e-12 and rel(c1.lhs, math.pi) <= 1e-5
          and c2.rel_diff <= 1e-5 and rel(c2.rhs, 1.5) <= 1e-12)
    record(4, ok, f"disk s0=2: lhs={c1.lhs:.10f} rhs={c1.rhs:.10f} rel={c1.rel_diff:.1e}; "
                  f"square s0=3: lhs={c2.lhs:.10f} rhs={c2.rhs:.10f} rel={c2.rel_diff:.1e}")


def test_criterion_05_tube_formula_vs_divergence():
    rng = np.random.default_rng(20240605)
    worst, worst_exact, rows = 0.0, 0.0, []
    for _ in range(6):
        curve, prof = random_closed_tube(rng)
        formula = tube_volume_formula(curve, prof).volume
        oracle = enclosed_volume(make_tube(curve, prof)).volume
        exact = tube_volume_exact(curve, prof).volume
        worst = max(worst, rel(formula, oracle))
        worst_exact = max(worst_exact, rel(exact, oracle))
        rows.append(f"{formula:.5f}/{oracle:.5f}")
    record(5, worst <= 1e-4,
           f"6 random closed tubes, formula/divergence: {' '.join(rows)}; max rel={worst:.2e} "
           f"(frame-coefficient volume max rel={worst_exact:.1e})")


def test_criterion_06_ab_lemma():
    rng = np.random.default_rng(6)
    surfaces = [
        torus(1, 2),
        ParametricSurface.from_map(lambda s, t: (s, 0.6 * s + 2, t), (0, 1), (0, 1), name="plane"),
        revolution_surface(lambda t: 1 + 0.3 * sin(t), lambda t: t, 5.0),
        make_tube(helix(1), ellipse_profile()),
        make_tube(*random_closed_tube(rng)),
        ParametricSurface.from_map(lambda s, t: (s * cos(t) + t, s * s - sin(s * t), s * t + cos(s)),
                                   (-1, 1), (-2, 2), name="raw"),
    ]
    worst = 0.0
    for S in surfaces:
        s = rng.uniform(*S.s_range, 1000)
        t = rng.uniform(*S.t_range, 1000)
        a, b = ab_coefficients(S, s, t), ab_via_cross(S, s, t)
        scale = max(1.0, np.max(np.abs(a.A)), np.max(np.abs(a.B)))
        diff = max(np.max(np.abs(a.A - b.A)), np.max(np.abs(a.B - b.B))) / scale
        worst = max(worst, diff)
    record(6, worst <= 1e-12, f"{len(surfaces)} surfaces x 1000 points, max |diff|/scale={worst:.1e}")


def test_criterion_07_tube_density_closed_form():
    rng = np.random.default_rng(7)
    worst, rows = 0.0, []
    for _ in range(5):
        S = make_tube(*random_closed_tube(rng))
        s = rng.uniform(*S.s_range, 1000)
        t = rng.uniform(*S.t_range, 1000)
        generic = density(S, s, t)
        q = S.quantities(s, t)
        closed = tube_density_closed_form(*(q[k] for k in ("kappa", "tau", "f", "g", "df", "dg", "dh")))
        d = np.max(np.abs(generic - closed)) / max(1.0, np.max(generic))
        worst = max(worst, d)
        rows.append(f"{d:.2e}")
    record(7, worst <= 1e-9, f"5 random tubes x 1000 points, max |diff|/scale per tube: {' '.join(rows)}")


def test_criterion_08_curve_invariants():
    s = np.linspace(0, TWO_PI, 257)
    worst_k = worst_t = worst_f = 0.0
    for R in (0.5, 1.0, 2.0):
        c = helix(R)
        worst_k = max(worst_k, np.max(np.abs(p_curvature(c, s) - 1 / R)))
        worst_t = max(worst_t, np.max(np.abs(contact_normality(c, s) - 1)))
        worst_f = max(worst_f, frenet_residual(c, s))
    deg = gauss_degree(helix(1.0)).value
    ok = worst_k <= 1e-9 and worst_t <= 1e-9 and worst_f <= 1e-8 and abs(deg - 1) <= 1e-6
    record(8, ok, f"R in {{0.5,1,2}}: max|kappa-1/R|={worst_k:.1e} max|tau-1|={worst_t:.1e} "
                  f"frenet residual={worst_f:.1e} deg(R=1)={deg:.12f}")


def test_criterion_09_pappus_area_case2():
    scene = load_scene(os.path.join(SCENES, "line_tube_plane.scn"))
    S = scene.surfaces["plane"].surface
    chk = pappus_area_case2(S.curve, S.profile)
    target = S.curve.length_parameter * TWO_PI
    ok = chk.passed(1e-6) and rel(chk.lhs, target) <= 1e-6 and rel(chk.rhs, target) <= 1e-6
    record(9, ok, f"lhs={chk.lhs:.10f} mid={chk.mid:.10f} rhs={chk.rhs:.10f} s0*2pi={target:.10f}")


def _example_surfaces():
    for name in sorted(os.listdir(SCENES)):
        if name.endswith(".scn"):
            for sname, sd in load_scene(os.path.join(SCENES, name)).surfaces.items():
                yield f"{name[:-4]}/{sname}", sd.surface


def test_criterion_10_isoperimetric():
    checked, bad, margins = [], [], []
    for label, S in _example_surfaces():
        if not S.closed_t:
            continue
        rep = isoperimetric_check(S, allow_open_s=not S.closed_s)
        checked.append(label)
        margins.append(rep.V / (0.5 * rep.sup_radius * rep.A))
        if not rep.bound_ok:
            bad.append(label)
    ok = bool(checked) and not bad
    record(10, ok, f"{len(checked)} surfaces ({', '.join(checked)}); max V/(sup r * A / 2)="
                   f"{max(margins):.3f}; violations: {bad or 'none'}")


def test_criterion_11_invariance():
    rng = np.random.default_rng(11)
    curves = [helix(2.0), random_closed_tube(rng)[0],
              Curve(lambda u: (2 * cos(u) + 0.3 * cos(3 * u), sin(u), 0.5 * sin(2 * u)), (0, TWO_PI))]
    u = np.linspace(0, 1, 101)
    worst_kt = 0.0
    moves = [(rng.uniform(-3, 3, 3), rng.uniform(-math.pi, math.pi)) for _ in range(4)]
    for c in curves:
        uu = c.domain[0] + u * (c.domain[1] - c.domain[0])
        k0, t0 = p_curvature(c, uu), contact_normality(c, uu)
        for p, th in moves:
            d = c.transformed(p, th)
            worst_kt = max(worst_kt, np.max(np.abs(p_curvature(d, uu) - k0)),
                           np.max(np.abs(contact_normality(d, uu) - t0)))
    worst_a = worst_v = 0.0
    curve, prof = random_closed_tube(rng)
    surfaces = [torus(1, 2), make_tube(helix(1), ellipse_profile()), make_tube(curve, prof)]
    for S in surfaces:
        A0, V0 = p_area(S).value, enclosed_volume(S).volume
        for p, th in moves:
            M = S.translated(p).rotated(th)
            worst_a = max(worst_a, rel(p_area(M).value, A0))
            worst_v = max(worst_v, rel(enclosed_volume(M).volume, V0))
    # a tube built on a moved curve is the moved tube
    A0 = p_area(make_tube(curve, prof)).value
    for p, th in moves:
        worst_a = max(worst_a, rel(p_area(make_tube(curve.transformed(p, th), prof)).value, A0))
    ok = worst_kt <= 1e-9 and worst_a <= 1e-6 and worst_v <= 1e-6
    record(11, ok, f"{len(moves)} moves: max|d kappa|,|d tau|={worst_kt:.1e} "
                   f"area rel={worst_a:.1e} |volume| rel={worst_v:.1e}")


# -- criterion 12: scene language ----------------------------------------------------


def _random_tree(rng, depth, smooth):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Name("t")
        return Num(float(np.round(rng.uniform(0, 3), 3)) if smooth else float(rng.choice([0.5, 2.0, 1e-3, 7e5])))
    a = _random_tree(rng, depth - 1, smooth)
    b = _random_tree(rng, depth - 1, smooth)
    k = rng.integers(0, 7)
    if k == 0:
        return Neg(a)
    if k == 1:
        return BinOp(str(rng.choice(["+", "-", "*"])), a, b)
    if k == 2:
        return BinOp("/", a, BinOp("+", Num(2.0), BinOp("*", b, b)))
    if k == 3:
        return BinOp("^", a, Num(float(rng.integers(0, 4))))
    if k == 4:
        return Call(str(rng.choice(["sin", "cos"])), a)
    if k == 5:
        return Call("exp", Call("sin", a))
    return Call("log", BinOp("+", Num(2.0), Call("cos", a)))


def _fuzz_text(rng, n):
    alphabet = list("0123456789.eE+-*/^(),;:=[] \n#@stuxyzfgh") + [
        "param ", "curve ", "profile ", "surface ", "task ", "tube", "raw", "domain", "closed", "sin", "pi"]
    return "".join(rng.choice(alphabet, n))


def test_criterion_12_dsl():
    rng = np.random.default_rng(12)
    notes, ok = [], True

    trips = 0
    for _ in range(500):
        node = _random_tree(rng, 6, smooth=False)
        ok &= parse_expr(to_source(node)) == node
        trips += 1
    notes.append(f"round-trip {trips}")

    worst = 0.0
    for _ in range(300):
        node = _random_tree(rng, 5, smooth=True)
        x, h = rng.uniform(-1.5, 1.5), 1e-3
        j = eval_jet(node, x, var="t")
        f = [eval_jet(node, x + k * h, var="t").v0 for k in (-2, -1, 1, 2)]
        fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
        worst = max(worst, abs(j.v1 - fd) / max(1.0, abs(j.v1), abs(j.v0)))
    ok &= worst <= 1e-5
    notes.append(f"jet vs finite differences 300, max rel={worst:.1e}")

    panics = 0
    for n in [64 * 1024] * 3 + list(rng.integers(1, 400, 300)):
        text = _fuzz_text(rng, int(n))
        for fn in (parse_expr, parse_scene):
            try:
                fn(text)
            except HeisgeoError:
                pass
            except Exception:  # noqa: BLE001 - anything else is a panic
                panics += 1
    ok &= panics == 0
    notes.append(f"fuzz 303 inputs (3 of 64 KiB), panics={panics}")

    t0 = time.perf_counter()
    codes = {}
    for name in sorted(os.listdir(SCENES)):
        if name.endswith(".scn"):
            codes[name] = cli_main(["run", os.path.join(SCENES, name)])
    dt = time.perf_counter() - t0
    ok &= all(c == 0 for c in codes.values()) and dt < 60
    failed = [k for k, c in codes.items() if c != 0]
    notes.append(f"{len(codes)} bundled scenes run, failures={failed or 'none'}, {dt:.2f}s")
    record(12, ok, "; ".join(notes))


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
