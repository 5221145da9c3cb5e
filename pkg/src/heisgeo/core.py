"""Group law, left-invariant frame, contact form and CR structure of H1.

Points are ``(x, y, z)`` in global coordinates with the product

    (x, y, z) . (x', y', z') = (x + x', y + y', z + z' + y x' - x y').

Tangent vectors appear in two forms: Euclidean components ``(vx, vy, vz)``
and coefficients ``(a, b, c)`` over the left-invariant frame

    e1 = d/dx + y d/dz,   e2 = d/dy - x d/dz,   T = d/dz,

which is orthonormal for the Levi metric. :func:`to_frame` and
:meth:`FrameVector.euclidean` convert between the two. All fields may be
floats or numpy arrays of a common shape, so every operation here also
works pointwise on sample grids.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BasePointMismatch, DomainError


@dataclass(frozen=True, eq=False)
class Point:
    """A point of H1."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(np.all(np.isfinite(c)) for c in (self.x, self.y, self.z)):
            raise DomainError("point coordinates must be finite", (self.x, self.y, self.z))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self, other))

    def __mul__(self, other):
        return group_mul(self, other)

    def as_array(self):
        return np.array([self.x, self.y, self.z], dtype=float)

    def __repr__(self):
        return f"Point({self.x!r}, {self.y!r}, {self.z!r})"


ORIGIN = Point(0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class FrameVector:
    """Tangent vector ``a*e1 + b*e2 + c*T`` anchored at ``base``."""

    a: float
    b: float
    c: float
    base: Point = ORIGIN

    def __post_init__(self):
        if not all(np.all(np.isfinite(v)) for v in (self.a, self.b, self.c)):
            raise DomainError("frame coefficients must be finite", (self.a, self.b, self.c))

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __eq__(self, other):
        if not isinstance(other, FrameVector):
            return NotImplemented
        return self.base == other.base and all(
            np.array_equal(p, q) for p, q in zip(self, other)
        )

    def __add__(self, other):
        _check_base(self, other)
        return FrameVector(self.a + other.a, self.b + other.b, self.c + other.c, self.base)

    def __sub__(self, other):
        _check_base(self, other)
        return FrameVector(self.a - other.a, self.b - other.b, self.c - other.c, self.base)

    def __neg__(self):
        return FrameVector(-self.a, -self.b, -self.c, self.base)

    def __mul__(self, k):
        return FrameVector(k * self.a, k * self.b, k * self.c, self.base)

    __rmul__ = __mul__

    @property
    def horizontal(self):
        """Projection onto the contact plane (drop the T component)."""
        return FrameVector(self.a, self.b, 0.0 * self.c, self.base)

    def norm(self):
        """Levi norm."""
        return np.sqrt(levi_inner(self, self))

    def euclidean(self):
        """Euclidean components ``(vx, vy, vz)`` of this vector."""
        p = self.base
        return (self.a, self.b, self.c + p.y * self.a - p.x * self.b)

    def __repr__(self):
        return f"FrameVector({self.a!r}, {self.b!r}, {self.c!r}, base={self.base!r})"


def _check_base(u, v):
    if u.base is v.base:
        return
    if u.base != v.base:
        raise BasePointMismatch(f"vectors anchored at {u.base} and {v.base}")


def _mul(x1, y1, z1, x2, y2, z2):
    # raw group law; works for floats, arrays and Jets alike
    return x1 + x2, y1 + y2, z1 + z2 + y1 * x2 - x1 * y2


def group_mul(p, q):
    """Heisenberg product ``p . q``."""
    return Point(*_mul(p.x, p.y, p.z, q.x, q.y, q.z))


def group_inv(p):
    """Inverse element; ``p . p^-1`` is the origin."""
    return Point(-p.x, -p.y, -p.z)


def left_translate(p, q):
    """``L_p(q) = p . q``."""
    return group_mul(p, q)


def left_translate_vector(p, v):
    """Push a Euclidean tangent vector forward by the differential of ``L_p``.

    ``L_p`` is affine in ``q``, so its differential maps ``(vx, vy, vz)`` to
    ``(vx, vy, vz + p.y*vx - p.x*vy)`` independent of the base point.
    """
    vx, vy, vz = v
    return (vx, vy, vz + p.y * vx - p.x * vy)


def frame_at(p):
    """Euclidean components of ``(e1, e2, T)`` at ``p``."""
    zero = 0.0 * p.x
    one = zero + 1.0
    e1 = (one, zero, p.y + zero)
    e2 = (zero, one, -p.x + zero)
    t = (zero, zero, one)
    return e1, e2, t


def e1(p):
    return FrameVector(1.0, 0.0, 0.0, p)


def e2(p):
    return FrameVector(0.0, 1.0, 0.0, p)


def reeb(p):
    """The vertical field ``T`` at ``p``."""
    return FrameVector(0.0, 0.0, 1.0, p)


def to_frame(p, v):
    """Frame coefficients of the Euclidean vector ``v`` at ``p``."""
    vx, vy, vz = v
    return FrameVector(vx, vy, vz - p.y * vx + p.x * vy, p)


def levi_inner(u, v):
    """Levi inner product; the frame ``e1, e2, T`` is orthonormal."""
    _check_base(u, v)
    return u.a * v.a + u.b * v.b + u.c * v.c


def j_apply(v):
    """CR structure: ``J e1 = e2``, ``J e2 = -e1``, ``J T = 0``."""
    return FrameVector(-v.b, v.a, 0.0 * v.c, v.base)


def h_cross(u, v):
    """Cross product in frame coefficients (``e1 x e2 = T`` and cyclic)."""
    _check_base(u, v)
    return FrameVector(
        u.b * v.c - v.b * u.c,
        v.a * u.c - u.a * v.c,
        u.a * v.b - v.a * u.b,
        u.base,
    )


def contact_form(p, v):
    """``Theta(v) = dz + x dy - y dx`` evaluated on the Euclidean vector ``v``."""
    vx, vy, vz = v
    return vz + p.x * vy - p.y * vx


def rotate_xy(p, theta):
    """Rotation about the z-axis; together with left translations this
    generates the pseudo-hermitian transformations of H1."""
    c, s = np.cos(theta), np.sin(theta)
    return Point(c * p.x - s * p.y, s * p.x + c * p.y, p.z)
