"""
Surfaces and p-area
===================

For a surface ``X(s, t)`` the coefficients ``A`` and ``B`` are the contact
components of ``X_s x X_t`` (up to a rotation), and the p-area is the
integral of ``sqrt(A^2 + B^2)``. Points where both vanish are singular:
there the tangent plane is the contact plane.
"""

import math

import numpy as np

from heisgeo import Curve, ParametricSurface, ProfileTriple, make_tube, p_area
from heisgeo.numerics import cos, sin
from heisgeo.surfaces import (
    ab_coefficients,
    ab_via_cross,
    cylinder_p_area,
    density,
    graph_p_area,
    revolution_p_area,
    singular_scan,
    tube_density_closed_form,
    tube_density_exact,
)

TWO_PI = 2 * math.pi

# %% A vertical plane has constant A = -1, B = -a, so no singular points.
a = 0.6
plane = ParametricSurface.from_map(lambda s, t: (s, a * s + 2, t), (0, 1), (0, 1), name="plane")
ab = ab_coefficients(plane, 0.3, 0.4)
print("plane: A =", ab.A, " B =", ab.B, " singular points:", singular_scan(plane, eps=0.5).points)

# The flat graph z = const is tangent to the contact plane at the origin only.
flat = ParametricSurface.from_map(lambda s, t: (s, t, 0 * s), (-1, 1), (-1, 1), name="flat")
print("flat graph singular points:", singular_scan(flat, grid=(41, 41)).points)

# The two ways to compute (A, B) agree to rounding.
s, t = np.random.default_rng(0).uniform(-1, 1, (2, 1000))
ab1, ab2 = ab_coefficients(flat, s, t), ab_via_cross(flat, s, t)
print("max |A - A'| on the graph:", np.max(np.abs(ab1.A - ab2.A)))

# %% Closed forms against generic quadrature.
cyl = ParametricSurface.from_map(lambda s, t: (cos(s), sin(s), t), (0, TWO_PI), (0, 3), closed_s=True)
print(f"cylinder R=1, height 3: generic {p_area(cyl).value:.12f}  directrix formula "
      f"{cylinder_p_area(cos, sin, 3.0):.12f}  (6 pi = {6 * math.pi:.12f})")
print(f"disk z=0 as a surface of revolution: {revolution_p_area(lambda t: t, lambda t: 0 * t, 1.0).value:.12f}"
      f"  (2 pi / 3 = {TWO_PI / 3:.12f})")
print(f"graph z = xy over the unit square: {graph_p_area(lambda x, y: x * y, ((0, 1), (0, 1))).value:.12f}")

# %% Tubes. The helix of radius 1 carries an elliptic cross-section.
helix = Curve(lambda u: (sin(u), -cos(u), 0 * u), (0, TWO_PI), closed=True, name="circle")
ellipse = ProfileTriple(lambda t: 2.3 * sin(t), lambda t: 0.8 * cos(t), lambda t: 0 * t, TWO_PI, closed=True)
tube = make_tube(helix, ellipse)
print(f"elliptic tube p-area: {p_area(tube).value:.10f}")

# The usual closed-form tube density agrees with the generic density only
# where g = 0 and kappa f = 0. The frame-coefficient density holds everywhere.
s, t = tube.grid(33, 33)
q = tube.quantities(s, t)
args = [q[k] for k in ("kappa", "tau", "f", "g", "df", "dg", "dh")]
generic = density(tube, s, t)
print("max |closed form - generic|:", np.max(np.abs(tube_density_closed_form(*args) - generic)))
print("max |frame form  - generic|:", np.max(np.abs(tube_density_exact(*args) - generic)))
