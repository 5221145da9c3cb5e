"""
Curves in the Heisenberg group
==============================

The group law twists the z-coordinate, so the frame ``e1, e2, T`` moves
with the point. A curve is horizontally regular when its velocity keeps a
nonzero component in the contact plane; for such curves we get an
arc-length, a p-curvature ``kappa``, a contact normality ``tau`` and a
horizontal Frenet frame.
"""

import math

import numpy as np

from heisgeo import Curve, Point, frame_at, group_inv, group_mul
from heisgeo.curves import (
    contact_normality,
    frenet,
    frenet_residual,
    gauss_degree,
    horizontal_length,
    p_curvature,
    reparam_horizontal_arclength,
    unit_speed_defect,
)
from heisgeo.numerics import cos, sin

# %% The group law is not commutative; the commutator is vertical.
p, q = Point(1, 0, 0), Point(0, 1, 0)
print("p.q =", group_mul(p, q), "  q.p =", group_mul(q, p))
print("p.q.p^-1.q^-1 =", group_mul(group_mul(p, q), group_mul(group_inv(p), group_inv(q))))

# The left-invariant frame at (1, 2, 7), in Euclidean components.
for name, v in zip(("e1", "e2", "T"), frame_at(Point(1, 2, 7))):
    print(f"{name}(1,2,7) = {v}")

# %% A family of helices, already parametrized by horizontal arc-length.
# kappa = 1/R and tau = 1 for every R.
s = np.linspace(0, 2 * math.pi, 9)
for R in (0.5, 1.0, 2.0):
    helix = Curve(lambda u, R=R: (R * sin(u / R), -R * cos(u / R), (1 - R) * u), (0, 2 * math.pi),
                  closed=(R == 1.0), name=f"helix R={R}")
    print(f"R={R}: kappa in [{p_curvature(helix, s).min():.12f}, {p_curvature(helix, s).max():.12f}]"
          f", tau mean {contact_normality(helix, s).mean():.12f}, Frenet residual {frenet_residual(helix, s):.1e}")

fr = frenet(helix, 0.0)
print("at s=0 on R=2: U =", tuple(map(float, fr.U)), " V =", tuple(map(float, fr.V)))

# %% A curve that is not unit speed: an ellipse lifted with a wobble in z.
ellipse = Curve(lambda u: (2 * cos(u) + 0.3 * cos(3 * u), sin(u), 0.5 * sin(2 * u)),
                (0, 2 * math.pi), closed=True, name="ellipse")
print("horizontal length:", horizontal_length(ellipse))
unit = reparam_horizontal_arclength(ellipse)
print("after reparametrization: domain", unit.domain, "speed defect", unit_speed_defect(unit))
print("Frenet residual on the unit-speed curve:", frenet_residual(unit, np.linspace(*unit.domain, 201)))
print("degree of the Gauss map:", gauss_degree(unit).value)

# kappa and tau do not depend on the parametrization.
sa = np.array([0.3, 4.1, 9.5])
print("kappa on the unit-speed curve:", p_curvature(unit, sa))
print("kappa on the original curve:  ", p_curvature(ellipse, unit.parameter_of(sa)))
