"""Parametric surfaces in H1, p-area, and tubes around horizontally regular curves.

For ``X(s, t) = (X, Y, Z)`` the p-area density is ``sqrt(A^2 + B^2)`` with::

    A = Z_s X_t - X_s Z_t + X (X_t Y_s - X_s Y_t)
    B = Z_s Y_t - Y_s Z_t + Y (X_t Y_s - X_s Y_t)

Equivalently ``A = <X_s x X_t, e2>`` and ``B = -<X_s x X_t, e1>`` where ``x`` is
the frame cross product and both partials are written in frame
coefficients at ``X(s, t)``. The density vanishes exactly at singular
points, where the tangent plane is the contact plane.

A tube is ``X(s, t) = gamma(s) + f(t) U(s) + g(t) V(s) + h(t) T`` built from
the horizontal Frenet frame of a unit-speed curve.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import FrameVector, Point, _mul, h_cross, left_translate_vector, levi_inner, to_frame
from .curves import CLOSED_TOL, p_curvature, contact_normality, require_unit_speed
from .errors import (
    HypothesisViolated,
    InternalError,
    NotClosedProfile,
    NotUnitSpeedProfile,
)
from .numerics import DEFAULT_BUDGET, DEFAULT_TOL, Jet, QuadratureResult, integrate_1d, integrate_2d

UNIT_SPEED_TOL = 1e-6


def _jet(v, like):
    if isinstance(v, Jet):
        return v
    return Jet.constant(v + 0.0 * like.v0)


class ParametricSurface:
    """Surface ``(s, t) -> H1`` on ``s_range x t_range``.

    ``evaluate(s, t)`` takes equally shaped arrays and returns three arrays
    of shape ``(3,) + s.shape``: the position and the two first partials
    in Euclidean components. :meth:`from_map` builds ``evaluate`` from a
    map written with :class:`~heisgeo.numerics.Jet` arithmetic.
    """

    def __init__(self, evaluate, s_range, t_range, closed_s=False, closed_t=False, name=""):
        self._evaluate = evaluate
        self.s_range = tuple(map(float, s_range))
        self.t_range = tuple(map(float, t_range))
        if not (self.s_range[0] < self.s_range[1] and self.t_range[0] < self.t_range[1]):
            raise ValueError(f"degenerate parameter rectangle {self.s_range} x {self.t_range}")
        self.closed_s = bool(closed_s)
        self.closed_t = bool(closed_t)
        self.name = name

    def __repr__(self):
        return (f"{type(self).__name__}({self.name!r}, s={self.s_range}, t={self.t_range}, "
                f"closed=({self.closed_s}, {self.closed_t}))")

    @classmethod
    def from_map(cls, fn, s_range, t_range, closed_s=False, closed_t=False, name=""):
        """Surface from ``fn(s_jet, t_jet) -> (x, y, z)`` (jets or numbers)."""

        def evaluate(s, t):
            s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
            sv, tv = Jet.variable(s), Jet.variable(t)
            a = [_jet(c, sv) for c in fn(sv, Jet.constant(t))]
            b = [_jet(c, tv) for c in fn(Jet.constant(s), tv)]
            pos = np.array([c.v0 for c in a])
            return pos, np.array([c.v1 for c in a]), np.array([c.v1 for c in b])

        return cls(evaluate, s_range, t_range, closed_s, closed_t, name)

    def evaluate(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        pos, ds, dt = self._evaluate(s, t)
        shape = (3,) + s.shape
        return (np.broadcast_to(pos, shape), np.broadcast_to(ds, shape), np.broadcast_to(dt, shape))

    def point(self, s, t):
        return Point(*self.evaluate(s, t)[0])

    def _derived(self, evaluate, name):
        return ParametricSurface(evaluate, self.s_range, self.t_range,
                                 self.closed_s, self.closed_t, name)

    def translated(self, p):
        """``L_p`` applied to every point."""
        p = Point(*p)

        def evaluate(s, t):
            pos, ds, dt = self.evaluate(s, t)
            q = np.array(_mul(p.x, p.y, p.z, *pos))
            return q, np.array(left_translate_vector(p, ds)), np.array(left_translate_vector(p, dt))

        return self._derived(evaluate, f"L{tuple(p)}({self.name})")

    def rotated(self, theta):
        """Rotation by ``theta`` about the z-axis (a group automorphism)."""
        c, s_ = math.cos(theta), math.sin(theta)
        rot = np.array([[c, -s_, 0.0], [s_, c, 0.0], [0.0, 0.0, 1.0]])

        def evaluate(s, t):
            return tuple(np.tensordot(rot, v, axes=1) for v in self.evaluate(s, t))

        return self._derived(evaluate, f"R{theta:g}({self.name})")

    def swapped(self):
        """Same surface with the roles of ``s`` and ``t`` exchanged (orientation flips)."""

        def evaluate(s, t):
            pos, ds, dt = self.evaluate(t, s)
            return pos, dt, ds

        return ParametricSurface(evaluate, self.t_range, self.s_range,
                                 self.closed_t, self.closed_s, f"swap({self.name})")

    def seam_gap(self, samples=65):
        """Largest position mismatch across the ``s`` and ``t`` seams."""
        s = np.linspace(*self.s_range, samples)
        t = np.linspace(*self.t_range, samples)
        gs = np.max(np.abs(self.evaluate(self.s_range[0], t)[0] - self.evaluate(self.s_range[1], t)[0]))
        gt = np.max(np.abs(self.evaluate(s, self.t_range[0])[0] - self.evaluate(s, self.t_range[1])[0]))
        return float(gs), float(gt)

    def grid(self, n, m):
        s = np.linspace(*self.s_range, n)
        t = np.linspace(*self.t_range, m)
        return np.meshgrid(s, t, indexing="ij")


# -- A, B and p-area -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ABPair:
    A: float
    B: float

    @property
    def density(self):
        return np.hypot(self.A, self.B)

    def unit_e1_e2(self):
        """Horizontal unit vectors ``(A, B)/|.|`` and ``(-B, A)/|.|``; NaN at singular points."""
        d = self.density
        with np.errstate(invalid="ignore", divide="ignore"):
            return (self.A / d, self.B / d), (-self.B / d, self.A / d)


def ab_from_partials(pos, ds, dt):
    X, Y, _ = pos
    Xs, Ys, Zs = ds
    Xt, Yt, Zt = dt
    w = Xt * Ys - Xs * Yt
    return ABPair(Zs * Xt - Xs * Zt + X * w, Zs * Yt - Ys * Zt + Y * w)


def ab_coefficients(S, s, t):
    return ab_from_partials(*S.evaluate(s, t))


def ab_via_cross(S, s, t):
    """A and B as frame inner products of ``X_s x X_t`` with ``e2`` and ``-e1``."""
    pos, ds, dt = S.evaluate(s, t)
    p = Point(*pos)
    cross = h_cross(to_frame(p, ds), to_frame(p, dt))
    zero = 0.0 * pos[0]
    e1 = FrameVector(zero + 1.0, zero, zero, p)
    e2 = FrameVector(zero, zero + 1.0, zero, p)
    return ABPair(levi_inner(cross, e2), -levi_inner(cross, e1))


def density(S, s, t):
    return ab_coefficients(S, s, t).density


def p_area(S, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET):
    return integrate_2d(lambda s, t: density(S, s, t), S.s_range, S.t_range, tol=tol, budget=budget)


@dataclass(frozen=True)
class SingularScan:
    points: list
    fraction: float
    min_density: float


def singular_scan(S, grid=(64, 64), eps=1e-6):
    n, m = grid
    if n < 2 or m < 2:
        raise ValueError("singular scan needs at least a 2x2 grid")
    s, t = S.grid(n, m)
    d = density(S, s, t)
    hits = np.argwhere(d < eps)
    points = [(float(s[i, j]), float(t[i, j])) for i, j in hits]
    return SingularScan(points, len(points) / d.size, float(d.min()))


# -- tubes -----------------------------------------------------------------


class ProfileTriple:
    """Cross-section profile ``(f, g, h)`` on ``[0, t0]``.

    Each of ``f, g, h`` maps a Jet in ``t`` to a Jet (or a number for a
    constant). A closed profile must match values and first derivatives
    at ``0`` and ``t0`` within ``closed_tol``.
    """

    def __init__(self, f, g, h, t0, closed=False, name="", closed_tol=CLOSED_TOL):
        self.funcs = (f, g, h)
        self.t0 = float(t0)
        if not self.t0 > 0:
            raise ValueError(f"profile length t0 must be positive, got {t0}")
        self.closed = bool(closed)
        self.name = name
        if self.closed:
            gap = self.closure_gap()
            if gap > closed_tol:
                raise NotClosedProfile(f"profile {name!r} declared closed but ends differ by {gap:.3g}")

    def __repr__(self):
        return f"ProfileTriple({self.name!r}, t0={self.t0}, closed={self.closed})"

    def jets(self, t):
        tj = t if isinstance(t, Jet) else Jet.variable(np.asarray(t, dtype=float))
        return tuple(_jet(fn(tj), tj) for fn in self.funcs)

    def derivatives(self, t):
        """Array ``[[f, f', f'', f'''], [g, ...], [h, ...]]``."""
        return np.array([j.derivs for j in self.jets(t)], dtype=float)

    def closure_gap(self):
        d0, d1 = self.derivatives(0.0), self.derivatives(self.t0)
        return float(np.max(np.abs(d0[:, :2] - d1[:, :2])))

    def length(self, tol=DEFAULT_TOL):
        """Euclidean length of ``t -> (f, g)``, the horizontal length of every cross-section."""
        def speed(t):
            d = self.derivatives(t)
            return np.hypot(d[0, 1], d[1, 1])
        return integrate_1d(speed, 0.0, self.t0, tol=tol).value


def _curve_data(curve, s):
    d = curve.derivatives(s)
    x, x1, x2 = d[0, :3]
    y, y1, y2 = d[1, :3]
    z, z1 = d[2, :2]
    kappa = x1 * y2 - x2 * y1
    tau = x * y1 - x1 * y + z1
    return x, y, z, x1, y1, z1, kappa, tau


class TubeSurface(ParametricSurface):
    """Tube around ``curve`` with cross-section ``profile``."""

    def __init__(self, evaluate, curve, profile, name=""):
        super().__init__(evaluate, curve.domain, (0.0, profile.t0),
                         curve.closed, profile.closed, name)
        self.curve = curve
        self.profile = profile

    def quantities(self, s, t):
        """Frenet data and profile derivatives at ``(s, t)``: a dict of arrays."""
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        *_, kappa, tau = _curve_data(self.curve, s)
        pd = self.profile.derivatives(t)
        return dict(kappa=kappa, tau=tau, f=pd[0, 0], g=pd[1, 0], h=pd[2, 0],
                    df=pd[0, 1], dg=pd[1, 1], dh=pd[2, 1])


def make_tube(curve, profile, name=None):
    """``gamma + f U + g V + h T`` with partials assembled from the Frenet relations.

    With ``U, V`` taken as Euclidean vectors along the curve,
    ``X_s = (1 - kappa g) U + kappa f V + (tau - g) T`` and
    ``X_t = f' U + g' V + h' T``.
    """
    require_unit_speed(curve)

    def evaluate(s, t):
        x, y, z, x1, y1, _, kappa, tau = _curve_data(curve, s)
        pd = profile.derivatives(t)
        f, g, h = pd[:, 0]
        df, dg, dh = pd[:, 1]
        U = np.array([x1, y1, x1 * y - x * y1])
        V = np.array([-y1, x1, -(x * x1 + y * y1)])
        T = np.array([0.0 * x, 0.0 * x, 1.0 + 0.0 * x])
        pos = np.array([x, y, z]) + f * U + g * V + h * T
        ds = (1.0 - kappa * g) * U + kappa * f * V + (tau - g) * T
        dt = df * U + dg * V + dh * T
        return pos, ds, dt

    label = name if name is not None else f"tube({curve.name}, {profile.name})"
    return TubeSurface(evaluate, curve, profile, label)


def make_tube_group(curve, profile, name=None):
    """Tube as ``gamma(s) . (f U0 + g V0 + h T)``.

    ``U0, V0`` are ``U(s), V(s)`` pulled back to the origin, i.e. the
    frame coefficients ``(x', y', 0)`` and ``(-y', x', 0)`` read as a
    point. Partials come from jets pushed through the group law.
    """
    require_unit_speed(curve)

    def fiber(x1, y1, f, g, h):
        return f * x1 - g * y1, f * y1 + g * x1, h

    def evaluate(s, t):
        sv, tv = Jet.variable(s), Jet.variable(t)
        # s-direction: the curve is active, the profile frozen
        x, y, z = curve.jets(sv)
        f, g, h = (Jet.constant(j.v0) for j in profile.jets(t))
        a = _mul(x, y, z, *fiber(x.shift(), y.shift(), f, g, h))
        # t-direction: the profile is active, the curve frozen
        cx, cy, cz = (Jet.constant(j.v0) for j in (x, y, z))
        cx1, cy1 = Jet.constant(x.v1), Jet.constant(y.v1)
        b = _mul(cx, cy, cz, *fiber(cx1, cy1, *profile.jets(tv)))
        return (np.array([c.v0 for c in a]), np.array([c.v1 for c in a]),
                np.array([c.v1 for c in b]))

    label = name if name is not None else f"tube_group({curve.name}, {profile.name})"
    return TubeSurface(evaluate, curve, profile, label)


def tube_density_closed_form(kappa, tau, f, g, df, dg, dh):
    """Closed-form tube density as customarily stated.

    ``[h'^2((kf)^2 + (1-kg)^2) - 2h'(tau-g)(k(fg'-f'g) + f') + (tau-g)^2 (f'^2+g'^2)]^(1/2)``.
    This agrees with the generic density only where ``g = 0`` and
    ``kappa f = 0``; :func:`tube_density_exact` holds everywhere.
    """
    e = tau - g
    rad = (dh * dh * ((kappa * f) ** 2 + (1.0 - kappa * g) ** 2)
           - 2.0 * dh * e * (kappa * (f * dg - df * g) + df)
           + e * e * (df * df + dg * dg))
    if np.any(rad < -1e-12):
        raise InternalError(f"negative radicand {np.min(rad):.3g} in tube density")
    return np.sqrt(np.maximum(rad, 0.0))


def _tube_cross(kappa, tau, f, g, df, dg, dh):
    # Frame coefficients over (U, V, T) at the surface point. U and V gain
    # T-components -g and f there, which shifts both T-coefficients.
    p1, q1 = 1.0 - kappa * g, kappa * f
    c1 = tau - 2.0 * g + kappa * (f * f + g * g)
    p2, q2 = df, dg
    c2 = f * dg - g * df + dh
    return q1 * c2 - q2 * c1, p2 * c1 - p1 * c2


def tube_density_exact(kappa, tau, f, g, df, dg, dh):
    """Tube density from the frame coefficients of ``X_s`` and ``X_t`` at ``X``."""
    beta, alpha = _tube_cross(kappa, tau, f, g, df, dg, dh)
    return np.hypot(beta, alpha)


def tube_volume_density(tube, s, t):
    """``-X B + Y A`` for a tube, from curve and profile data only."""
    s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
    x, y, _, x1, y1, _, kappa, tau = _curve_data(tube.curve, s)
    pd = tube.profile.derivatives(t)
    f, g = pd[0, 0], pd[1, 0]
    beta, alpha = _tube_cross(kappa, tau, f, g, pd[0, 1], pd[1, 1], pd[2, 1])
    return beta * (x * x1 + y * y1 + f) + alpha * (y * x1 - x * y1 + g)


# -- special families ------------------------------------------------------


def _derivs1(fn, t):
    tj = Jet.variable(np.asarray(t, dtype=float))
    j = _jet(fn(tj), tj)
    return j.v0, j.v1


def revolution_surface(R, h, t0, name="revolution"):
    """``(R(t) cos s, R(t) sin s, h(t))`` for ``s`` in ``[0, 2 pi]``."""
    from .numerics import cos, sin

    return ParametricSurface.from_map(
        lambda s, t: (R(t) * cos(s), R(t) * sin(s), h(t)),
        (0.0, 2.0 * math.pi), (0.0, t0), closed_s=True, name=name,
    )


def torus(r, R, name="torus"):
    """Torus chart ``((R + r cos s) cos t, (R + r cos s) sin t, -r sin s)``."""
    from .numerics import cos, sin

    two_pi = 2.0 * math.pi
    return ParametricSurface.from_map(
        lambda s, t: ((R + r * cos(s)) * cos(t), (R + r * cos(s)) * sin(t), -r * sin(s)),
        (0.0, two_pi), (0.0, two_pi), closed_s=True, closed_t=True, name=name,
    )


def revolution_p_area(R, h, t0, tol=DEFAULT_TOL):
    """p-area of a surface of revolution: ``2 pi * integral of |R| sqrt(h'^2 + (R R')^2)``."""
    def dens(t):
        r, dr = _derivs1(R, t)
        _, dh = _derivs1(h, t)
        return np.abs(r) * np.sqrt(dh * dh + (r * dr) ** 2)

    q = integrate_1d(dens, 0.0, t0, tol=tol)
    return QuadratureResult(2.0 * math.pi * q.value, 2.0 * math.pi * q.err_estimate, q.evaluations)


def cylinder_p_area(f, g, t0, tol=DEFAULT_TOL):
    """p-area of the vertical cylinder over the closed directrix ``(f, g)`` on ``[0, 2 pi]``."""
    def speed(u):
        _, df = _derivs1(f, u)
        _, dg = _derivs1(g, u)
        return np.hypot(df, dg)

    return integrate_1d(speed, 0.0, 2.0 * math.pi, tol=tol).value * t0


def graph_density(F, x, y):
    """``sqrt((F_x - y)^2 + (F_y + x)^2)`` for the graph ``z = F(x, y)``."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    fx = _jet(F(Jet.variable(x), Jet.constant(y)), Jet.constant(x)).v1
    fy = _jet(F(Jet.constant(x), Jet.variable(y)), Jet.constant(y)).v1
    return np.hypot(fx - y, fy + x)


def graph_p_area(F, D, tol=DEFAULT_TOL):
    (x0, x1), (y0, y1) = D
    return integrate_2d(lambda x, y: graph_density(F, x, y), (x0, x1), (y0, y1), tol=tol)


def p_mean_curvature_tube(profile, t):
    """``-f'' g' + g'' f'`` for a planar (``h`` constant) unit-speed profile."""
    d = profile.derivatives(t)
    df, ddf = d[0, 1], d[0, 2]
    dg, ddg = d[1, 1], d[1, 2]
    defect = np.max(np.abs(df * df + dg * dg - 1.0))
    if defect > UNIT_SPEED_TOL:
        raise NotUnitSpeedProfile(f"profile {profile.name!r} has f'^2+g'^2 off 1 by {defect:.3g}")
    if np.max(np.abs(d[2, 1])) > 1e-10:
        raise HypothesisViolated("p-mean curvature formula needs h constant", "h constant",
                                 float(np.max(np.abs(d[2, 1]))))
    return -ddf * dg + ddg * df


# -- diagnostics and export -------------------------------------------------


def self_intersection_warning(S, grid=(48, 48), ratio=0.2):
    """Warn if grid points far apart in (s, t) come close in space.

    A heuristic only: returns the number of suspicious pairs found.
    """
    from scipy.spatial import cKDTree

    n, m = grid
    s, t = S.grid(n, m)
    pos = S.evaluate(s, t)[0].reshape(3, -1).T
    steps = np.concatenate([
        np.linalg.norm(np.diff(pos.reshape(n, m, 3), axis=0), axis=-1).ravel(),
        np.linalg.norm(np.diff(pos.reshape(n, m, 3), axis=1), axis=-1).ravel(),
    ])
    scale = np.median(steps[steps > 0]) if np.any(steps > 0) else 0.0
    if scale == 0.0:
        return 0
    pairs = cKDTree(pos).query_pairs(ratio * scale, output_type="ndarray")
    i1, j1 = np.divmod(pairs[:, 0], m)
    i2, j2 = np.divmod(pairs[:, 1], m)
    di, dj = np.abs(i1 - i2), np.abs(j1 - j2)
    if S.closed_s:
        di = np.minimum(di, n - 1 - di)
    if S.closed_t:
        dj = np.minimum(dj, m - 1 - dj)
    bad = int(np.count_nonzero((di > 2) | (dj > 2)))
    if bad:
        warnings.warn(f"surface {S.name!r} may intersect itself ({bad} close pairs)")
    return bad


def export_mesh(S, path, grid=(64, 64), fmt="csv"):
    """Write an ``n x m`` sample of ``S`` as CSV or OBJ; rows are s-major."""
    n, m = grid
    if n < 2 or m < 2:
        raise ValueError("mesh export needs at least a 2x2 grid")
    s, t = S.grid(n, m)
    pos, ds, dt = S.evaluate(s, t)
    ab = ab_from_partials(pos, ds, dt)
    lines = []
    if fmt == "csv":
        lines.append("s,t,x,y,z,A,B,density")
        cols = [s, t, pos[0], pos[1], pos[2], ab.A, ab.B, ab.density]
        flat = [np.asarray(c).ravel() for c in cols]
        for row in zip(*flat):
            lines.append(",".join("%.17g" % v for v in row))
    elif fmt == "obj":
        lines.append(f"# {S.name} {n}x{m}")
        for x, y, z in pos.reshape(3, -1).T:
            lines.append("v %.17g %.17g %.17g" % (x, y, z))
        for i in range(n - 1):
            for j in range(m - 1):
                a = i * m + j + 1
                b, c, d = a + m, a + m + 1, a + 1
                lines.append(f"f {a} {b} {c}")
                lines.append(f"f {a} {c} {d}")
    else:
        raise ValueError(f"unknown mesh format {fmt!r} (expected csv or obj)")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
