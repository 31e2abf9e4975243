"""Smooth functions with exact derivative jets.

A :class:`SmoothFunction` wraps a plain function of ``x`` written with the
elementary functions from this module (``exp``, ``sin``, ...). Evaluating it on
a :class:`Jet` propagates truncated Taylor series, which yields derivatives to
any order without finite differences.

    >>> u0 = SmoothFunction(lambda x: exp(sin(x)))
    >>> u0.jet(0.0, 2)          # u0, u0', u0'' at 0
    array([1., 1., 1.])
"""
from __future__ import annotations

from math import factorial
from typing import Callable

import numpy as np


class Jet:
    """Truncated Taylor series; ``c[n]`` is the n-th derivative divided by n!.

    The leading axis indexes the order, any trailing axes are evaluation points.
    """

    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, x, order: int) -> "Jet":
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    def derivatives(self) -> np.ndarray:
        fact = np.array([factorial(n) for n in range(self.order + 1)], dtype=float)
        return self.c * fact.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jets of different order cannot be combined")
            return other.c
        out = np.zeros(np.broadcast_shapes(self.c.shape, (1,) + np.shape(other)))
        out[0] = other
        return out

    def __add__(self, other):
        return Jet(self.c + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.c - self._coerce(other))

    def __rsub__(self, other):
        return Jet(self._coerce(other) - self.c)

    def __neg__(self):
        return Jet(-self.c)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * np.asarray(other, dtype=float))
        a, b = np.broadcast_arrays(self.c, other.c)
        out = np.zeros_like(a)
        for n in range(self.order + 1):
            out[n] = np.sum(a[: n + 1] * b[n::-1], axis=0)
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / np.asarray(other, dtype=float))
        a, b = np.broadcast_arrays(self.c, other.c)
        q = np.zeros_like(a)
        for n in range(self.order + 1):
            q[n] = (a[n] - np.sum(b[1 : n + 1] * q[n - 1 :: -1][:n], axis=0)) / b[0]
        return Jet(q)

    def __rtruediv__(self, other):
        return Jet(self._coerce(other)) / self

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)):
            if p < 0:
                return 1.0 / self ** (-p)
            result = Jet(self._coerce(1.0))
            base = self
            while p:
                if p & 1:
                    result = result * base
                base = base * base
                p >>= 1
            return result
        p = float(p)
        x = self.c
        y = np.zeros_like(x)
        y[0] = x[0] ** p
        for n in range(1, self.order + 1):
            k = np.arange(1, n + 1).reshape((-1,) + (1,) * (x.ndim - 1))
            y[n] = np.sum((p * k - (n - k)) * x[1 : n + 1] * y[n - 1 :: -1][:n], axis=0) / (n * x[0])
        return Jet(y)

    def exp(self) -> "Jet":
        a = self.c
        e = np.zeros_like(a)
        e[0] = np.exp(a[0])
        for n in range(1, self.order + 1):
            k = np.arange(1, n + 1).reshape((-1,) + (1,) * (a.ndim - 1))
            e[n] = np.sum(k * a[1 : n + 1] * e[n - 1 :: -1][:n], axis=0) / n
        return Jet(e)

    def log(self) -> "Jet":
        a = self.c
        y = np.zeros_like(a)
        y[0] = np.log(a[0])
        for n in range(1, self.order + 1):
            k = np.arange(1, n).reshape((-1,) + (1,) * (a.ndim - 1))
            acc = np.sum(k * y[1:n] * a[n - 1 : 0 : -1], axis=0) if n > 1 else 0.0
            y[n] = (a[n] - acc / n) / a[0]
        return Jet(y)

    def sincos(self) -> tuple["Jet", "Jet"]:
        a = self.c
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0], c[0] = np.sin(a[0]), np.cos(a[0])
        for n in range(1, self.order + 1):
            k = np.arange(1, n + 1).reshape((-1,) + (1,) * (a.ndim - 1))
            ka = k * a[1 : n + 1]
            s[n] = np.sum(ka * c[n - 1 :: -1][:n], axis=0) / n
            c[n] = -np.sum(ka * s[n - 1 :: -1][:n], axis=0) / n
        return Jet(s), Jet(c)


def exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def log(x):
    return x.log() if isinstance(x, Jet) else np.log(x)


def sin(x):
    return x.sincos()[0] if isinstance(x, Jet) else np.sin(x)


def cos(x):
    return x.sincos()[1] if isinstance(x, Jet) else np.cos(x)


def sqrt(x):
    return x**0.5 if isinstance(x, Jet) else np.sqrt(x)


class SmoothFunction:
    """A function of one variable that can report its derivatives exactly.

    Build one from a plain function written with the helpers in this module,
    or from a ``jet_fn(x, order)`` returning derivatives of shape
    ``(order+1,) + x.shape``. ``max_order`` caps the derivative order the
    function will hand out (``None`` means unlimited).
    """

    def __init__(self, func: Callable | None = None, *, jet_fn: Callable | None = None,
                 max_order: int | None = None, name: str = ""):
        if (func is None) == (jet_fn is None):
            raise ValueError("give exactly one of func or jet_fn")
        self._func = func
        self._jet_fn = jet_fn
        self.max_order = max_order
        self.name = name

    def __repr__(self):
        return f"SmoothFunction({self.name or '<anonymous>'})"

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        if self._func is not None:
            val = np.broadcast_to(np.asarray(self._func(x), dtype=float), x.shape)
        else:
            val = self._jet_fn(x, 0)[0]
        return val.copy() if val.ndim else float(val)

    def jet(self, x, order: int) -> np.ndarray:
        """Derivatives u, u', ..., u^(order) at ``x``; shape ``(order+1,) + x.shape``."""
        if order < 0:
            raise ValueError("order must be non-negative")
        if self.max_order is not None and order > self.max_order:
            raise ValueError(
                f"{self!r} supplies derivatives up to order {self.max_order}, asked for {order}")
        x = np.asarray(x, dtype=float)
        if self._jet_fn is not None:
            return np.asarray(self._jet_fn(x, order), dtype=float)
        res = self._func(Jet.variable(x, order))
        if isinstance(res, Jet):
            return np.broadcast_to(res.derivatives(), (order + 1,) + x.shape).copy()
        # constant function
        out = np.zeros((order + 1,) + x.shape)
        out[0] = res
        return out

    def derivative(self, n: int = 1) -> "SmoothFunction":
        cap = None if self.max_order is None else self.max_order - n
        if cap is not None and cap < 0:
            raise ValueError(f"{self!r} has no derivative of order {n}")
        return SmoothFunction(jet_fn=lambda x, r: self.jet(x, r + n)[n:], max_order=cap,
                              name=f"d^{n}({self.name})")

    def shifted(self, dx: float) -> "SmoothFunction":
        """x -> u(x - dx)."""
        return SmoothFunction(jet_fn=lambda x, r: self.jet(x - dx, r), max_order=self.max_order,
                              name=f"{self.name}(x-{dx:g})")

    def __mul__(self, alpha: float) -> "SmoothFunction":
        alpha = float(alpha)
        return SmoothFunction(jet_fn=lambda x, r: alpha * self.jet(x, r), max_order=self.max_order,
                              name=f"{alpha:g}*{self.name}")

    __rmul__ = __mul__

    def __neg__(self) -> "SmoothFunction":
        return self * -1.0


def polynomial(coeffs, name: str = "") -> SmoothFunction:
    """Monomial-coefficient polynomial c0 + c1 x + ... as a SmoothFunction."""
    cs = [float(c) for c in coeffs]

    def f(x):
        acc = 0.0 * x + cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * x + c
        return acc

    return SmoothFunction(f, name=name or f"poly{tuple(cs)}")
