"""Horizontally regular curves: arc-length, p-curvature, contact normality, Frenet frame.

A :class:`Curve` wraps a map ``u -> (x(u), y(u), z(u))`` written in terms
of :class:`~heisgeo.numerics.Jet` arithmetic, so every query gets exact
derivatives up to third order. For a unit-speed curve (``x'^2 + y'^2 = 1``)
the horizontal Frenet frame is::

    U = x' e1 + y' e2,    V = J U = -y' e1 + x' e2,

and, with derivatives taken of the Euclidean components along the curve::

    dgamma/ds = U + tau T,   dU/ds = kappa V,   dV/ds = -kappa U - T.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import FrameVector, Point, to_frame
from .errors import NotClosed, NotHorizontallyRegular, NotUnitHorizontalSpeed
from .numerics import DEFAULT_TOL, Jet, chain, integrate_1d, inverse

CLOSED_TOL = 1e-9
UNIT_SPEED_TOL = 1e-6
REGULARITY_FLOOR = 1e-10

_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _as_jet(v, like):
    if isinstance(v, Jet):
        return v
    return Jet.constant(v + 0.0 * like.v0)


class Curve:
    """Parametrized curve in H1 on ``domain = (u_a, u_b)``.

    ``xyz`` takes a :class:`Jet` in the curve parameter and returns three
    jets; use the functions in :mod:`heisgeo.numerics` (``sin``, ``cos``,
    ...) so that derivatives propagate. A curve declared ``closed`` must
    match its derivatives of order 0..3 at the two ends within
    ``closed_tol``, otherwise :class:`NotClosed` is raised.
    """

    def __init__(self, xyz, domain, closed=False, name="", closed_tol=CLOSED_TOL):
        a, b = map(float, domain)
        if not a < b:
            raise ValueError(f"empty curve domain [{a}, {b}]")
        self._xyz = xyz
        self.domain = (a, b)
        self.closed = bool(closed)
        self.name = name
        if self.closed:
            gap = self.closure_gap()
            if gap > closed_tol:
                raise NotClosed(f"curve {name!r} declared closed but endpoint jets differ by {gap:.3g}")

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, domain={self.domain}, closed={self.closed})"

    def jets(self, u):
        """Jets of ``x, y, z``; ``u`` is a float/array (seeded as the variable) or a Jet."""
        uj = u if isinstance(u, Jet) else Jet.variable(np.asarray(u, dtype=float))
        return tuple(_as_jet(c, uj) for c in self._xyz(uj))

    def point(self, u):
        x, y, z = self.jets(u)
        return Point(x.v0, y.v0, z.v0)

    def derivatives(self, u):
        """Arrays ``[[x, x', x'', x'''], [y, ...], [z, ...]]`` at ``u``."""
        return np.array([j.derivs for j in self.jets(u)], dtype=float)

    def closure_gap(self):
        a, b = self.domain
        return float(np.max(np.abs(self.derivatives(a) - self.derivatives(b))))

    def speed(self, u):
        """Horizontal speed ``sqrt(x'^2 + y'^2)``."""
        d = self.derivatives(u)
        return np.hypot(d[0, 1], d[1, 1])

    @property
    def length_parameter(self):
        """Domain length; equals the horizontal length for unit-speed curves."""
        return self.domain[1] - self.domain[0]

    def transformed(self, p=None, theta=0.0):
        """The curve ``L_p(R_theta(gamma(u)))`` (rotation about z, then left translation)."""
        c, s = math.cos(theta), math.sin(theta)
        px, py, pz = (0.0, 0.0, 0.0) if p is None else tuple(p)

        def xyz(u):
            x, y, z = self.jets(u)
            xr, yr = c * x - s * y, s * x + c * y
            return xr + px, yr + py, z + pz + py * xr - px * yr

        return Curve(xyz, self.domain, False, f"{self.name}'")


class ReparametrizedCurve(Curve):
    """``base`` reparametrized by horizontal arc-length, on ``[0, L]``.

    The arc-length map ``u -> s(u)`` is tabulated at construction on
    ``knots`` subintervals (20-point Gauss-Legendre per subinterval) and
    inverted per query by safeguarded Newton iteration on the interval
    found in the table. The object is immutable once built.
    """

    def __init__(self, base, knots=256, name=None):
        self.base = base
        a, b = base.domain
        dense = np.linspace(a, b, 16 * knots + 1)
        if np.min(base.speed(dense)) < REGULARITY_FLOOR:
            raise NotHorizontallyRegular(f"curve {base.name!r} has vanishing horizontal speed")
        self._u = np.linspace(a, b, knots + 1)
        pieces = self._segment_length(self._u[:-1], self._u[1:])
        self._s = np.concatenate([[0.0], np.cumsum(pieces)])
        total = self._s[-1]
        check = integrate_1d(base.speed, a, b, tol=1e-12).value
        if abs(check - total) > 1e-9 * max(1.0, total):
            # rough speed profile: rebuild on a finer table
            if knots < 8192:
                self.__init__(base, knots * 4, name)
                return
        self._xyz = self._reparam_xyz
        self.domain = (0.0, float(total))
        self.closed = base.closed
        self.name = name if name is not None else base.name

    def _segment_length(self, lo, hi):
        lo, hi = np.asarray(lo, float), np.asarray(hi, float)
        half = 0.5 * (hi - lo)
        nodes = (0.5 * (lo + hi))[..., None] + half[..., None] * _GL_X
        return (self.base.speed(nodes) @ _GL_W) * half

    def parameter_of(self, s):
        """Base parameter ``u`` with horizontal length ``s`` from the start."""
        s = np.asarray(s, dtype=float)
        k = np.clip(np.searchsorted(self._s, s, side="right") - 1, 0, self._u.size - 2)
        u0, slo = self._u[k], self._s[k]
        lo, hi = u0, self._u[k + 1]
        span = self._s[k + 1] - slo
        u = lo + (hi - lo) * (s - slo) / np.where(span > 0, span, 1.0)
        for _ in range(60):
            f = slo + self._segment_length(u0, u) - s
            lo = np.where(f < 0, u, lo)
            hi = np.where(f > 0, u, hi)
            un = u - f / self.base.speed(u)
            # fall back to bisection when Newton leaves the bracket
            un = np.where((un < lo) | (un > hi), 0.5 * (lo + hi), un)
            done = np.abs(un - u) <= 4e-16 * (1.0 + np.abs(u))
            u = un
            if np.all(done):
                break
        return u

    def _reparam_xyz(self, sj):
        u0 = self.parameter_of(sj.v0)
        d = self.base.derivatives(u0)
        x1, x2, x3 = d[0, 1:]
        y1, y2, y3 = d[1, 1:]
        sig = np.hypot(x1, y1)
        dsig = (x1 * x2 + y1 * y2) / sig
        ddsig = (x2 * x2 + x1 * x3 + y2 * y2 + y1 * y3 - dsig * dsig) / sig
        arc = Jet(sj.v0, sig, dsig, ddsig)
        uj = chain(inverse(arc, u0), sj)
        return self.base.jets(uj)


# -- horizontal geometry -------------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    ok: bool
    worst_u: float
    min_speed: float

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class FrenetData:
    U: FrameVector
    V: FrameVector
    kappa: float
    tau: float
    s: float


@dataclass(frozen=True)
class GaussDegree:
    value: float
    nearest: int
    distance: float


def _speed_checked(c, u):
    d = c.derivatives(u)
    sig = np.hypot(d[0, 1], d[1, 1])
    if np.any(sig < REGULARITY_FLOOR):
        raise NotHorizontallyRegular(f"horizontal speed vanishes on {c.name!r}")
    return d, sig


def horizontal_decompose(c, u):
    """Split ``gamma'(u)`` into contact and ``T`` parts, both at ``gamma(u)``."""
    d = c.derivatives(u)
    p = Point(d[0, 0], d[1, 0], d[2, 0])
    v = to_frame(p, (d[0, 1], d[1, 1], d[2, 1]))
    zero = 0.0 * v.a
    return FrameVector(v.a, v.b, zero, p), FrameVector(zero, zero, v.c, p)


def is_horizontally_regular(c, samples=1001, tol=REGULARITY_FLOOR):
    if samples < 2:
        raise ValueError("need at least two samples")
    u = np.linspace(*c.domain, samples)
    sig = c.speed(u)
    i = int(np.argmin(sig))
    return RegularityReport(bool(sig[i] > tol), float(u[i]), float(sig[i]))


def horizontal_length(c, interval=None, tol=DEFAULT_TOL):
    """Integral of ``sqrt(x'^2 + y'^2)`` over ``interval`` (default: the domain)."""
    a, b = c.domain if interval is None else interval
    return integrate_1d(c.speed, a, b, tol=tol).value


def reparam_horizontal_arclength(c, knots=256):
    return ReparametrizedCurve(c, knots=knots)


def unit_speed_defect(c, samples=257):
    """Largest ``|sqrt(x'^2 + y'^2) - 1|`` over a uniform sample."""
    return float(np.max(np.abs(c.speed(np.linspace(*c.domain, samples)) - 1.0)))


def require_unit_speed(c, tol=UNIT_SPEED_TOL):
    defect = unit_speed_defect(c)
    if defect > tol:
        raise NotUnitHorizontalSpeed(
            f"curve {c.name!r} is not parametrized by horizontal arc-length (defect {defect:.3g})"
        )


def p_curvature(c, u):
    """``(x'y'' - x''y') / (x'^2 + y'^2)^(3/2)``: curvature of the xy-projection."""
    d, sig = _speed_checked(c, u)
    return (d[0, 1] * d[1, 2] - d[0, 2] * d[1, 1]) / sig ** 3


def contact_normality(c, u):
    """``(x y' - x' y + z') / (x'^2 + y'^2)^(1/2)``; zero exactly on Legendrian curves."""
    d, sig = _speed_checked(c, u)
    return (d[0, 0] * d[1, 1] - d[0, 1] * d[1, 0] + d[2, 1]) / sig


def frenet(c, s):
    d, sig = _speed_checked(c, s)
    if np.any(np.abs(sig - 1.0) > UNIT_SPEED_TOL):
        raise NotUnitHorizontalSpeed(f"curve {c.name!r} does not have unit horizontal speed")
    p = Point(d[0, 0], d[1, 0], d[2, 0])
    x1, y1 = d[0, 1], d[1, 1]
    zero = 0.0 * x1
    return FrenetData(
        FrameVector(x1, y1, zero, p),
        FrameVector(-y1, x1, zero, p),
        p_curvature(c, s),
        contact_normality(c, s),
        s,
    )


def frenet_residual(c, s):
    """Largest Levi norm of ``U' - kappa V`` and ``V' + kappa U + T``."""
    require_unit_speed(c)
    d = c.derivatives(s)
    x, x1, x2 = d[0, :3]
    y, y1, y2 = d[1, :3]
    p = Point(x, y, d[2, 0])
    kappa = p_curvature(c, s)
    U = np.array([x1, y1, x1 * y - x * y1])
    V = np.array([-y1, x1, -(x * x1 + y * y1)])
    dU = np.array([x2, y2, x2 * y - x * y2])
    dV = np.array([-y2, x2, -(x1 * x1 + y1 * y1 + x * x2 + y * y2)])
    T = np.array([0.0 * x, 0.0 * x, 1.0 + 0.0 * x])
    r1 = to_frame(p, dU - kappa * V).norm()
    r2 = to_frame(p, dV + kappa * U + T).norm()
    return float(np.max(np.maximum(r1, r2)))


def gauss_degree(c, tol=1e-10):
    """``(1/2pi) * integral of kappa`` over horizontal arc-length, for closed curves."""
    if not c.closed:
        raise NotClosed(f"degree of the Gauss map needs a closed curve, {c.name!r} is open")

    def kds(u):
        d = c.derivatives(u)
        return (d[0, 1] * d[1, 2] - d[0, 2] * d[1, 1]) / (d[0, 1] ** 2 + d[1, 1] ** 2)

    value = integrate_1d(kds, *c.domain, tol=tol).value / (2.0 * math.pi)
    nearest = int(round(value))
    dist = abs(value - nearest)
    if dist > 1e-3:
        warnings.warn(f"Gauss degree {value:.6f} of {c.name!r} is not close to an integer")
    return GaussDegree(value, nearest, dist)
