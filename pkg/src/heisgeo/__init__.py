"""Computational geometry in the Heisenberg group H1.

Curves get horizontal arc-length, p-curvature, contact normality and a
horizontal Frenet frame; surfaces get the ``(A, B)`` coefficients, p-area
and enclosed volume; tubes around curves get closed-form density and
volume formulas with Pappus-type checks. A small scene language and the
``heisgeo`` command drive all of it from text files.
"""

from .core import (
    ORIGIN,
    FrameVector,
    Point,
    contact_form,
    e1,
    e2,
    frame_at,
    group_inv,
    group_mul,
    h_cross,
    j_apply,
    left_translate,
    left_translate_vector,
    levi_inner,
    reeb,
    rotate_xy,
    to_frame,
)
from .curves import (
    Curve,
    ReparametrizedCurve,
    contact_normality,
    frenet,
    frenet_residual,
    gauss_degree,
    horizontal_length,
    is_horizontally_regular,
    p_curvature,
    reparam_horizontal_arclength,
)
from .errors import HeisgeoError, HypothesisViolated
from .surfaces import (
    ParametricSurface,
    ProfileTriple,
    TubeSurface,
    ab_coefficients,
    ab_via_cross,
    density,
    export_mesh,
    make_tube,
    make_tube_group,
    p_area,
    torus,
    tube_density_closed_form,
    tube_density_exact,
)
from .volumes import (
    enclosed_volume,
    isoperimetric_check,
    pappus_area_case1,
    pappus_area_case2,
    pappus_volume_check,
    tube_volume_exact,
    tube_volume_formula,
)

__version__ = "0.1.0"
