import math

import numpy as np
import pytest

from heisgeo.curves import (
    Curve,
    contact_normality,
    frenet,
    frenet_residual,
    gauss_degree,
    horizontal_decompose,
    horizontal_length,
    is_horizontally_regular,
    p_curvature,
    reparam_horizontal_arclength,
    unit_speed_defect,
)
from heisgeo.core import levi_inner
from heisgeo.errors import NotClosed, NotHorizontallyRegular, NotUnitHorizontalSpeed
from heisgeo.numerics import cos, sin

TWO_PI = 2 * math.pi


def helix(R):
    return Curve(lambda s: (R * sin(s / R), -R * cos(s / R), (1 - R) * s),
                 (0, TWO_PI), closed=(R == 1), name=f"helix{R}")


def line_ab(a, b, length=TWO_PI):
    c = math.sqrt(1 - a * a)
    return Curve(lambda s: (c * s, a * s + b, (1 + b * c) * s + 0 * s), (0, length), name="line")


def test_decompose_examples():
    hline = Curve(lambda u: (u, 0 * u, 0 * u), (0, 1))
    xi, tp = horizontal_decompose(hline, 0.5)
    assert tuple(xi) == (1, 0, 0) and tuple(tp) == (0, 0, 0)
    vline = Curve(lambda u: (0 * u, 0 * u, u), (0, 1))
    xi, tp = horizontal_decompose(vline, 0.5)
    assert tuple(xi) == (0, 0, 0) and tuple(tp) == (0, 0, 1)
    circ = Curve(lambda s: (sin(s), -cos(s), 0 * s), (0, TWO_PI))
    assert horizontal_decompose(circ, 0.0)[1].c == pytest.approx(1.0)


def test_regularity():
    assert is_horizontally_regular(Curve(lambda u: (u, 0 * u, 0 * u), (0, 1))).ok
    rep = is_horizontally_regular(Curve(lambda u: (0 * u, 0 * u, u), (0, 1)))
    assert not rep.ok and rep.min_speed == 0
    rep = is_horizontally_regular(Curve(lambda u: (cos(u), sin(u), u), (0, 5)))
    assert rep.ok and rep.min_speed == pytest.approx(1.0)


def test_lengths():
    assert horizontal_length(Curve(lambda u: (u, 0 * u, 0 * u), (0, 3))) == pytest.approx(3)
    assert horizontal_length(helix(1)) == pytest.approx(TWO_PI, rel=1e-12)
    circ2 = Curve(lambda u: (2 * cos(u), 2 * sin(u), 0 * u), (0, TWO_PI), closed=True)
    assert horizontal_length(circ2) == pytest.approx(4 * math.pi, rel=1e-12)


def test_ellipse_length_against_scipy():
    from scipy.integrate import quad
    from scipy.special import ellipe

    ell = Curve(lambda u: (2 * cos(u), sin(u), u * 0.1), (0, TWO_PI))
    ref = 4 * 2 * ellipe(1 - 0.25)
    assert horizontal_length(ell) == pytest.approx(ref, rel=1e-11)
    ref2, _ = quad(lambda u: math.hypot(2 * math.sin(u), math.cos(u)), 0, 1, epsabs=1e-14)
    assert horizontal_length(ell, (0, 1)) == pytest.approx(ref2, rel=1e-11)


def test_reparam_examples():
    c = reparam_horizontal_arclength(Curve(lambda u: (2 * u, 0 * u, 0 * u), (0, 1)))
    assert c.domain == pytest.approx((0, 2))
    assert unit_speed_defect(c) < 1e-12
    h = helix(2)
    r = reparam_horizontal_arclength(h)
    s = np.linspace(0, TWO_PI, 33)
    assert np.allclose(r.derivatives(s)[:, :2], h.derivatives(s)[:, :2], atol=1e-10)
    dbl = reparam_horizontal_arclength(Curve(lambda u: (cos(2 * u), sin(2 * u), 0 * u), (0, math.pi)))
    assert dbl.domain[1] == pytest.approx(TWO_PI, rel=1e-12)
    assert np.allclose(p_curvature(dbl, np.linspace(0, TWO_PI, 17)), 1.0, atol=1e-9)


def test_reparam_general_curve():
    base = Curve(lambda u: (2 * cos(u) + 0.3 * cos(3 * u), sin(u), 0.5 * sin(2 * u)), (0, TWO_PI), closed=True)
    r = reparam_horizontal_arclength(base)
    s = np.linspace(*r.domain, 101)
    assert unit_speed_defect(r) < 1e-10
    assert frenet_residual(r, s) < 1e-8
    # p-curvature and contact normality are parametrization invariant
    u = r.parameter_of(s)
    assert np.allclose(p_curvature(r, s), p_curvature(base, u), atol=1e-8)
    assert np.allclose(contact_normality(r, s), contact_normality(base, u), atol=1e-8)


def test_reparam_rejects_singular():
    with pytest.raises(NotHorizontallyRegular):
        reparam_horizontal_arclength(Curve(lambda u: (u ** 3, 0 * u, 0 * u), (-1, 1)))


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_helix_invariants(R):
    c = helix(R)
    s = np.linspace(0, TWO_PI, 65)
    assert np.allclose(p_curvature(c, s), 1 / R, atol=1e-9)
    assert np.allclose(contact_normality(c, s), 1, atol=1e-9)
    assert frenet_residual(c, s) <= 1e-8


def test_line_family():
    c = line_ab(-0.9, 0.5)
    s = np.linspace(0, TWO_PI, 17)
    assert np.allclose(p_curvature(c, s), 0, atol=1e-12)
    assert np.allclose(contact_normality(c, s), 1, atol=1e-12)
    assert frenet_residual(c, s) <= 1e-8


def test_legendrian_lift():
    # z' = x'y - xy' = -1 for the unit circle, so z = -u
    c = Curve(lambda u: (cos(u), sin(u), -u), (0, TWO_PI))
    assert np.allclose(contact_normality(c, np.linspace(0, TWO_PI, 9)), 0, atol=1e-14)
    assert np.allclose(p_curvature(Curve(lambda u: (cos(u), sin(u), 5 + 0 * u), (0, 1)), 0.3), 1)


def test_frenet_examples():
    c = Curve(lambda s: (s, 0 * s, s), (0, 2))
    fr = frenet(c, 0.7)
    assert tuple(fr.U) == (1, 0, 0) and tuple(fr.V) == (0, 1, 0)
    assert fr.kappa == 0 and fr.tau == 1
    fr = frenet(helix(1), 0.0)
    assert tuple(fr.U) == pytest.approx((1, 0, 0)) and tuple(fr.V) == pytest.approx((0, 1, 0))
    s = np.linspace(0, TWO_PI, 9)
    fr = frenet(helix(2), s)
    assert np.allclose(levi_inner(fr.U, fr.V), 0) and np.allclose(fr.U.norm(), 1)
    assert np.allclose(fr.V.norm(), 1)
    assert frenet_residual(Curve(lambda s: (s, 0 * s, 0 * s), (0, 1)), s / 7) == 0


def test_frenet_needs_unit_speed():
    with pytest.raises(NotUnitHorizontalSpeed):
        frenet(Curve(lambda u: (2 * u, 0 * u, 0 * u), (0, 1)), 0.5)


def test_gauss_degree():
    deg = gauss_degree(helix(1))
    assert deg.value == pytest.approx(1, abs=1e-6) and deg.nearest == 1
    dbl = Curve(lambda u: (cos(2 * u), sin(2 * u), 0 * u), (0, TWO_PI), closed=True)
    assert gauss_degree(dbl).nearest == 2
    fig8 = Curve(lambda u: (sin(u), sin(u) * cos(u), 0 * u), (0, TWO_PI), closed=True)
    assert gauss_degree(fig8).value == pytest.approx(0, abs=1e-9)
    with pytest.raises(NotClosed):
        gauss_degree(line_ab(0.0, 0.0))


def test_closed_flag_verified():
    with pytest.raises(NotClosed):
        Curve(lambda s: (s, 0 * s, 0 * s), (0, 1), closed=True)


def test_transformed_invariants():
    c = Curve(lambda u: (2 * cos(u) + 0.3 * cos(3 * u), sin(u), 0.5 * sin(2 * u)), (0, TWO_PI))
    d = c.transformed((1.5, -0.7, 2.0), 0.9)
    u = np.linspace(0, TWO_PI, 41)
    assert np.allclose(p_curvature(c, u), p_curvature(d, u), atol=1e-12)
    assert np.allclose(contact_normality(c, u), contact_normality(d, u), atol=1e-12)
    assert horizontal_length(d) == pytest.approx(horizontal_length(c), rel=1e-12)
