"""Truncated Taylor arithmetic to third order.

A :class:`Jet` holds a value and its first three derivatives with respect
to one active parameter. Components may be floats or equally shaped numpy
arrays, which is how the rest of the package evaluates curves and surfaces
on whole sample grids at once.

Elementary functions are applied through :func:`chain`, i.e. Faa di Bruno's
formula truncated at order three::

    (F o u)'   = F' u1
    (F o u)''  = F'' u1^2 + F' u2
    (F o u)''' = F''' u1^3 + 3 F'' u1 u2 + F' u3
"""

import numbers

import numpy as np

from ..errors import DomainError


def _first_bad(mask, values):
    if np.ndim(mask) == 0:
        return values if mask else None
    idx = np.argwhere(mask)
    if idx.size == 0:
        return None
    return np.asarray(values)[tuple(idx[0])]


def _check(mask, message, values):
    bad = np.any(mask)
    if bad:
        raise DomainError(f"{message} at {_first_bad(mask, values)!r}", _first_bad(mask, values))


class Jet:
    """Value and derivatives ``(v0, v1, v2, v3)`` of a scalar function."""

    __slots__ = ("v0", "v1", "v2", "v3")
    __array_priority__ = 1000  # make ndarray <op> Jet defer to Jet

    def __init__(self, v0, v1=0.0, v2=0.0, v3=0.0):
        self.v0 = v0
        self.v1 = v1
        self.v2 = v2
        self.v3 = v3

    @classmethod
    def variable(cls, value):
        """The active parameter itself, seeded with unit derivative."""
        zero = 0.0 * np.asarray(value, dtype=float)
        return cls(value + zero, zero + 1.0, zero, zero)

    @classmethod
    def constant(cls, value):
        zero = 0.0 * np.asarray(value, dtype=float)
        return cls(value + zero, zero, zero, zero)

    @property
    def derivs(self):
        return (self.v0, self.v1, self.v2, self.v3)

    def shift(self):
        """Jet of the first derivative. The top order is unknown and set to NaN."""
        return Jet(self.v1, self.v2, self.v3, np.nan * np.ones_like(np.asarray(self.v3, dtype=float)))

    def __repr__(self):
        return f"Jet({self.v0!r}, {self.v1!r}, {self.v2!r}, {self.v3!r})"

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v0 + other.v0, self.v1 + other.v1, self.v2 + other.v2, self.v3 + other.v3)
        return Jet(self.v0 + other, self.v1, self.v2, self.v3)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v0, -self.v1, -self.v2, -self.v3)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a0, a1, a2, a3 = self.derivs
            b0, b1, b2, b3 = other.derivs
            return Jet(
                a0 * b0,
                a1 * b0 + a0 * b1,
                a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
                a3 * b0 + 3.0 * (a2 * b1 + a1 * b2) + a0 * b3,
            )
        return Jet(self.v0 * other, self.v1 * other, self.v2 * other, self.v3 * other)

    __rmul__ = __mul__

    def reciprocal(self):
        x = self.v0
        _check(x == 0, "division by zero", x)
        r = 1.0 / x
        return chain((r, -r * r, 2.0 * r ** 3, -6.0 * r ** 4), self)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        _check(np.asarray(other) == 0, "division by zero", other)
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, other):
        if isinstance(other, Jet):
            if np.all(other.v1 == 0) and np.all(other.v2 == 0) and np.all(other.v3 == 0):
                if np.ndim(other.v0) == 0:
                    return self.__pow__(float(other.v0))
            return (other * self.log()).exp()
        n = other
        if isinstance(n, numbers.Integral) or float(n).is_integer():
            n = int(n)
            if n == 0:
                return Jet.constant(0.0 * self.v0 + 1.0)
            if n < 0:
                return (self ** (-n)).reciprocal()
            x = self.v0
            # polynomial: valid for every base
            d = (x ** n, n * x ** (n - 1),
                 n * (n - 1) * x ** (n - 2) if n >= 2 else 0.0 * x,
                 n * (n - 1) * (n - 2) * x ** (n - 3) if n >= 3 else 0.0 * x)
            return chain(d, self)
        x = self.v0
        _check(x <= 0, f"non-positive base for exponent {n}", x)
        n = float(n)
        return chain((x ** n, n * x ** (n - 1), n * (n - 1) * x ** (n - 2),
                      n * (n - 1) * (n - 2) * x ** (n - 3)), self)

    def __rpow__(self, other):
        base = Jet.constant(other + 0.0 * self.v0)
        return base ** self

    # -- elementary functions ------------------------------------------

    def sin(self):
        s, c = np.sin(self.v0), np.cos(self.v0)
        return chain((s, c, -s, -c), self)

    def cos(self):
        s, c = np.sin(self.v0), np.cos(self.v0)
        return chain((c, -s, -c, s), self)

    def tan(self):
        c = np.cos(self.v0)
        _check(np.abs(c) < 1e-300, "tan pole", self.v0)
        t = np.tan(self.v0)
        sec2 = 1.0 + t * t
        return chain((t, sec2, 2.0 * t * sec2, sec2 * (2.0 * sec2 + 4.0 * t * t)), self)

    def exp(self):
        e = np.exp(self.v0)
        return chain((e, e, e, e), self)

    def log(self):
        x = self.v0
        _check(x <= 0, "log of non-positive value", x)
        r = 1.0 / x
        return chain((np.log(x), r, -r * r, 2.0 * r ** 3), self)

    def sqrt(self):
        x = self.v0
        _check(x <= 0, "sqrt needs a positive argument", x)
        r = np.sqrt(x)
        return chain((r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)), self)

    def __abs__(self):
        x = self.v0
        _check(x == 0, "abs is not differentiable", x)
        sign = np.sign(x)
        return Jet(np.abs(x), sign * self.v1, sign * self.v2, sign * self.v3)

    def abs(self):
        return self.__abs__()


def chain(outer, inner):
    """Compose: ``outer`` holds ``F, F', F'', F'''`` evaluated at ``inner.v0``."""
    f0, f1, f2, f3 = outer
    _, u1, u2, u3 = inner.derivs
    return Jet(
        f0,
        f1 * u1,
        f2 * u1 * u1 + f1 * u2,
        f3 * u1 * u1 * u1 + 3.0 * f2 * u1 * u2 + f1 * u3,
    )


def inverse(jet, x):
    """Outer-derivative tuple of ``F^{-1}`` at ``y = F(x)``.

    ``jet`` holds ``(F, F', F'', F''')`` at ``x``; pair the result with
    :func:`chain`.
    """
    _, d1, d2, d3 = jet.derivs
    _check(d1 == 0, "inverse of a map with zero derivative", x)
    r = 1.0 / d1
    return (x, r, -d2 * r ** 3, (3.0 * d2 * d2 - d1 * d3) * r ** 5)


def _lift(name):
    npf = {"abs": np.abs}.get(name, getattr(np, name, None))

    def f(x):
        if isinstance(x, Jet):
            return getattr(x, name)()
        if name in ("log", "sqrt"):
            _check(np.asarray(x) <= 0 if name == "log" else np.asarray(x) < 0,
                   f"{name} domain", x)
        return npf(x)

    f.__name__ = name
    f.__doc__ = f"``{name}`` for floats, arrays and :class:`Jet` values."
    return f


sin = _lift("sin")
cos = _lift("cos")
tan = _lift("tan")
exp = _lift("exp")
log = _lift("log")
sqrt = _lift("sqrt")
jabs = _lift("abs")
