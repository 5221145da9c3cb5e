"""
Volumes and Pappus-type identities
==================================

The volume enclosed by a closed surface is half the flux of ``(x, y, 0)``,
written with the same ``A, B`` as the area. Along a straight horizontal
line (``kappa = 0``) a cross-section in the ``(g, h)`` plane sweeps half
its area times the length.
"""

import math

from heisgeo import Curve, ProfileTriple, make_tube, torus
from heisgeo.errors import HypothesisViolated
from heisgeo.numerics import cos, sin
from heisgeo.volumes import (
    enclosed_volume,
    isoperimetric_check,
    pappus_area_case2,
    pappus_volume_check,
    tube_volume_exact,
    tube_volume_formula,
)

TWO_PI = 2 * math.pi

# %% Tori: the volume is 2 pi^2 r^2 R, as for Euclidean tori.
for r, R in ((1.0, 2.0), (0.5, 1.5)):
    rep = enclosed_volume(torus(r, R))
    print(f"torus r={r} R={R}: {rep.volume:.12f}  (2 pi^2 r^2 R = {2 * math.pi ** 2 * r * r * R:.12f})")

iso = isoperimetric_check(torus(1, 2))
print(f"isoperimetric: V={iso.V:.4f} <= sup|z-axis distance| * A / 2 = {0.5 * iso.sup_radius * iso.A:.4f}")

# %% A unit disk swept along the line (s, 0, s) for s in [0, 2].
line = Curve(lambda s: (s, 0 * s, s), (0, 2), name="line")
disk = ProfileTriple(lambda t: 0 * t, cos, sin, TWO_PI, closed=True, name="disk")
chk = pappus_volume_check(line, disk)
print(f"swept disk: boundary integral {chk.lhs:.12f}, half area times length {chk.rhs:.12f}")

# The hypotheses are checked numerically and reported by name.
try:
    pappus_volume_check(Curve(lambda s: (sin(s), -cos(s), 0 * s), (0, TWO_PI), closed=True), disk)
except HypothesisViolated as exc:
    print("on a circle:", exc)

# %% Area along the line family: the p-area is s0 times the integral of |f'|.
a, b = -0.9, 0.5
c = math.sqrt(1 - a * a)
gline = Curve(lambda s: (c * s, a * s + b, (1 + b * c) * s + 0 * s), (0, TWO_PI), name="line_ab")
wave = ProfileTriple(lambda t: t, lambda t: 0 * t, sin, TWO_PI, name="wave")
chk = pappus_area_case2(gline, wave)
print(f"wave over the line: p-area {chk.lhs:.10f}, s0 * int|f'| = {chk.rhs:.10f}")

# %% Tube volumes on a curved tube. The closed form in kappa and tau
# matches the boundary integral only when kappa = 0 and f = 0; the volume
# built from the frame coefficients of X_s x X_t matches it always.
circle = Curve(lambda s: (sin(s), -cos(s), 0 * s), (0, TWO_PI), closed=True, name="circle")
blob = ProfileTriple(lambda t: 0.3 * sin(t) + 0.1, lambda t: 0.2 * cos(t), lambda t: 0.25 * sin(t),
                     TWO_PI, closed=True, name="blob")
print("boundary integral:   ", enclosed_volume(make_tube(circle, blob)).volume)
print("frame coefficients:  ", tube_volume_exact(circle, blob).volume)
print("closed form in kappa:", tube_volume_formula(circle, blob).volume)
