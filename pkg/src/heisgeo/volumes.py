"""Enclosed volume, the closed-form tube volume, Pappus-type identities, isoperimetric bound.

The volume enclosed by a closed surface is the boundary integral
``V = 1/2 * integral of (-X B + Y A) ds dt``. Up to orientation this is the flux
of ``(x, y, 0)`` (divergence 2) through the surface, so it is exact for
any closed piecewise smooth surface. On a tube that is open in ``s`` the
same integral covers only the lateral surface; :func:`enclosed_volume`
accepts that case when ``allow_open_s`` is set.

Pappus-type checks compare absolute values, since the sign only reflects
the orientation of the parametrization.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import contact_normality, horizontal_length, p_curvature
from .errors import HypothesisViolated, NotClosed, NotClosedProfile
from .numerics import DEFAULT_TOL, integrate_1d, integrate_2d
from .surfaces import _curve_data, ab_from_partials, make_tube, p_area, tube_volume_density

HYPOTHESIS_TOL = 1e-8


@dataclass(frozen=True)
class VolumeReport:
    volume_signed: float
    volume: float
    method: str
    err_estimate: float


@dataclass(frozen=True)
class PappusCheck:
    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float
    mid: float = None
    hypothesis_report: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, lhs, rhs, mid=None, report=None):
        lhs, rhs = abs(lhs), abs(rhs)
        d = abs(lhs - rhs)
        return cls(lhs, rhs, d, d / max(lhs, rhs, 1e-300), mid, dict(report or {}))

    def passed(self, tol):
        ok = self.rel_diff <= tol
        if self.mid is not None:
            ok = ok and abs(abs(self.mid) - self.lhs) <= tol * max(abs(self.mid), self.lhs, 1e-300)
        return ok


@dataclass(frozen=True)
class IsoperimetricReport:
    V: float
    A: float
    sup_radius: float
    bound_ok: bool


def _volume_integrand(S):
    def fn(s, t):
        pos, ds, dt = S.evaluate(s, t)
        ab = ab_from_partials(pos, ds, dt)
        return -pos[0] * ab.B + pos[1] * ab.A
    return fn


def enclosed_volume(S, tol=DEFAULT_TOL, allow_open_s=False):
    """Volume enclosed by ``S`` from ``1/2 * integral of (-X B + Y A)``.

    ``S`` must be closed in ``t`` and in ``s``; with ``allow_open_s`` an
    open ``s`` direction is accepted and the lateral integral returned.
    That lateral value omits the flux through the end caps, so it is not
    the Lebesgue volume of the solid tube segment.
    """
    if not S.closed_t or not (S.closed_s or allow_open_s):
        raise NotClosed(f"surface {S.name!r} is not closed (closed_s={S.closed_s}, closed_t={S.closed_t})")
    q = integrate_2d(_volume_integrand(S), S.s_range, S.t_range, tol=tol)
    v = 0.5 * q.value
    return VolumeReport(v, abs(v), "boundary_integral", 0.5 * q.err_estimate)


def tube_volume_formula(curve, profile, tol=DEFAULT_TOL):
    """Closed-form tube volume in terms of ``kappa, tau`` and the profile.

    Evaluates::

        S = II kappa (x x' + y y') h' f + II (y x' - y' x) kappa h' g + II kappa h' f^2
            - II tau g' f + II kappa g^2 h' + II (2 tau - z') f' g
            + s0 * I (g g' f - h' g - f' g^2) dt

    and returns ``S / 2``. The profile must be closed. The formula agrees
    with :func:`enclosed_volume` when ``kappa = 0`` and ``f = 0``; in
    general use :func:`tube_volume_exact`.
    """
    if not profile.closed:
        raise NotClosedProfile(f"profile {profile.name!r} must be closed")
    s0 = curve.length_parameter

    def area_terms(s, t):
        x, y, _, x1, y1, z1, k, tau = _curve_data(curve, s)
        d = profile.derivatives(t)
        f, g = d[0, 0], d[1, 0]
        df, dg, dh = d[0, 1], d[1, 1], d[2, 1]
        return (k * (x * x1 + y * y1) * dh * f + (y * x1 - y1 * x) * k * dh * g
                + k * dh * f * f - tau * dg * f + k * g * g * dh + (2.0 * tau - z1) * df * g)

    def line_term(t):
        d = profile.derivatives(t)
        f, g = d[0, 0], d[1, 0]
        df, dg, dh = d[0, 1], d[1, 1], d[2, 1]
        return g * dg * f - dh * g - df * g * g

    q2 = integrate_2d(area_terms, curve.domain, (0.0, profile.t0), tol=tol)
    q1 = integrate_1d(line_term, 0.0, profile.t0, tol=tol)
    v = 0.5 * (q2.value + s0 * q1.value)
    return VolumeReport(v, abs(v), "tube_formula", 0.5 * (q2.err_estimate + s0 * q1.err_estimate))


def tube_volume_exact(curve, profile, tol=DEFAULT_TOL):
    """Tube volume from the frame coefficients of ``X_s, X_t`` at the surface point.

    ``2V = II beta (x x' + y y' + f) + alpha (y x' - x y' + g)`` where
    ``(beta, alpha)`` are the ``U, V`` coefficients of ``X_s x X_t``.
    """
    if not profile.closed:
        raise NotClosedProfile(f"profile {profile.name!r} must be closed")
    tube = make_tube(curve, profile)
    q = integrate_2d(lambda s, t: tube_volume_density(tube, s, t), curve.domain, (0.0, profile.t0), tol=tol)
    v = 0.5 * q.value
    return VolumeReport(v, abs(v), "tube_frame", 0.5 * q.err_estimate)


def _grid(lo, hi, n=257):
    return np.linspace(lo, hi, n)


def _max_abs(values):
    return float(np.max(np.abs(values)))


def _require(report, which, residual, limit):
    report[which] = residual = float(residual)
    if residual > limit:
        raise HypothesisViolated(f"{which} fails: residual {residual:.3g} > {limit:g}", which, residual)


def shoelace_area(g, h, t0, tol=DEFAULT_TOL):
    """Signed area enclosed by ``t -> (g(t), h(t))``: ``1/2 * integral of (g h' - h g')``."""
    from .numerics import Jet

    def fn(t):
        tj = Jet.variable(np.asarray(t, float))
        gj, hj = g(tj), h(tj)
        gv, dg = (gj.v0, gj.v1) if isinstance(gj, Jet) else (gj + 0 * t, 0 * t)
        hv, dh = (hj.v0, hj.v1) if isinstance(hj, Jet) else (hj + 0 * t, 0 * t)
        return gv * dh - hv * dg

    return 0.5 * integrate_1d(fn, 0.0, t0, tol=tol).value


def pappus_volume_check(curve, profile, tol=DEFAULT_TOL):
    """Tube volume against ``1/2 * s0 * area(region bounded by (g, h))`` for ``kappa = 0, f = 0``."""
    report = {}
    if not profile.closed:
        raise HypothesisViolated(f"profile {profile.name!r} must be closed", "profile closed", None)
    _require(report, "kappa = 0", _max_abs(p_curvature(curve, _grid(*curve.domain))), HYPOTHESIS_TOL)
    d = profile.derivatives(_grid(0.0, profile.t0))
    _require(report, "f = 0", _max_abs(d[0, 0]), HYPOTHESIS_TOL)
    tube = make_tube(curve, profile)
    lhs = enclosed_volume(tube, tol=tol, allow_open_s=not curve.closed).volume_signed
    g, h = profile.funcs[1], profile.funcs[2]
    s0 = horizontal_length(curve, tol=tol)
    rhs = 0.5 * s0 * shoelace_area(g, h, profile.t0, tol=tol)
    return PappusCheck.compare(lhs, rhs, report=report)


def pappus_area_case1(curve, profile, tol=DEFAULT_TOL):
    """p-area of a tube with planar unit-speed cross-sections.

    ``lhs`` is the generic p-area, ``mid`` the integral of ``|tau - g|``
    and ``rhs = s0 t0 -/+ s0 * integral of g`` when ``tau = +-1`` stays on
    one side of ``g``; otherwise ``rhs`` repeats ``mid``.
    """
    report = {}
    d = profile.derivatives(_grid(0.0, profile.t0))
    _require(report, "h constant", _max_abs(d[2, 1]), 1e-10)
    _require(report, "f'^2 + g'^2 = 1", _max_abs(d[0, 1] ** 2 + d[1, 1] ** 2 - 1.0), 1e-6)
    s_range, t_range = curve.domain, (0.0, profile.t0)
    tube = make_tube(curve, profile)
    lhs = p_area(tube, tol=tol).value

    def gap(s, t):
        return np.abs(contact_normality(curve, s) - profile.derivatives(t)[1, 0])

    mid = integrate_2d(gap, s_range, t_range, tol=tol).value
    s0, t0 = curve.length_parameter, profile.t0
    taus = contact_normality(curve, _grid(*s_range))
    rhs = mid
    for sign in (1.0, -1.0):
        if _max_abs(taus - sign) <= HYPOTHESIS_TOL and np.all(sign * (sign - d[1, 0]) > 0):
            int_g = integrate_1d(lambda t: profile.derivatives(t)[1, 0], 0.0, t0, tol=tol).value
            rhs = s0 * t0 - sign * s0 * int_g
            report["closed form"] = f"tau = {sign:+g}"
    report.setdefault("closed form", "skipped: tau not constant +-1 on one side of g")
    return PappusCheck.compare(lhs, rhs, mid=mid, report=report)


def pappus_area_case2(curve, profile, tol=DEFAULT_TOL):
    """p-area of a tube around a line with ``tau = 1`` and ``g = 0``: ``s0 * integral of |f'|``."""
    report = {}
    sg = _grid(*curve.domain)
    _require(report, "kappa = 0", _max_abs(p_curvature(curve, sg)), HYPOTHESIS_TOL)
    _require(report, "tau = 1", _max_abs(contact_normality(curve, sg) - 1.0), HYPOTHESIS_TOL)
    d = profile.derivatives(_grid(0.0, profile.t0))
    _require(report, "g = 0", _max_abs(d[1, 0]), HYPOTHESIS_TOL)
    h0, h1 = profile.derivatives(0.0)[2, 0], profile.derivatives(profile.t0)[2, 0]
    _require(report, "h(0) = h(t0)", abs(h1 - h0), 1e-9)
    s0, t0 = curve.length_parameter, profile.t0
    lhs = p_area(make_tube(curve, profile), tol=tol).value

    def reduced(t):
        q = profile.derivatives(t)
        return np.abs(q[2, 1] - q[0, 1])

    mid = s0 * integrate_1d(reduced, 0.0, t0, tol=tol).value
    rhs = s0 * integrate_1d(lambda t: np.abs(profile.derivatives(t)[0, 1]), 0.0, t0, tol=tol).value
    return PappusCheck.compare(lhs, rhs, mid=mid, report=report)


def isoperimetric_check(S, tol=DEFAULT_TOL, grid=(257, 257), allow_open_s=False):
    """``V <= 1/2 * sup sqrt(x^2 + y^2) * A``, with ``(1 + 10 tol)`` slack."""
    V = enclosed_volume(S, tol=tol, allow_open_s=allow_open_s).volume
    A = p_area(S, tol=tol).value
    s, t = S.grid(*grid)
    pos = S.evaluate(s, t)[0]
    sup_r = float(np.max(np.hypot(pos[0], pos[1])))
    return IsoperimetricReport(V, A, sup_r, bool(V <= 0.5 * sup_r * A * (1.0 + 10.0 * tol)))

