"""Legendre polynomials, Gauss-Legendre quadrature and Radau points on [-1, 1].

Everything here lives on the reference interval. Node sets are computed by
Newton iteration and cached, so repeated calls are cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DEGREE = 8

_NEWTON_TOL = 1e-14
_NEWTON_MAXITER = 100


def legendre_eval(m: int, s):
    """Evaluate L_m(s) with the three-term recurrence.

    ``s`` may be a scalar or an array. L_m(1) = 1 and L_m(-1) = (-1)^m hold
    exactly in floating point since every intermediate is an integer there.
    """
    if m < 0:
        raise ValueError(f"degree must be non-negative, got {m}")
    s = np.asarray(s, dtype=float)
    prev, cur = np.zeros_like(s), np.ones_like(s)
    for n in range(m):
        prev, cur = cur, ((2 * n + 1) * s * cur - n * prev) / (n + 1)
    return cur if cur.ndim else float(cur)


def legendre_deriv(m: int, s):
    """Evaluate L_m'(s) using L'_{n+1} = L'_{n-1} + (2n+1) L_n."""
    if m < 0:
        raise ValueError(f"degree must be non-negative, got {m}")
    s = np.asarray(s, dtype=float)
    vals = legendre_table(m, s)
    dprev, dcur = np.zeros_like(s), np.zeros_like(s)
    for n in range(m):
        # dcur holds L'_n, dprev holds L'_{n-1}
        dprev, dcur = dcur, dprev + (2 * n + 1) * vals[..., n]
    return dcur if dcur.ndim else float(dcur)


def legendre_table(k: int, s) -> np.ndarray:
    """Values L_0..L_k at every point of ``s``; shape ``s.shape + (k+1,)``."""
    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape + (k + 1,))
    out[..., 0] = 1.0
    if k >= 1:
        out[..., 1] = s
    for n in range(1, k):
        out[..., n + 1] = ((2 * n + 1) * s * out[..., n] - n * out[..., n - 1]) / (n + 1)
    return out


def legendre_deriv_table(k: int, s) -> np.ndarray:
    """Derivatives L_0'..L_k' at every point of ``s``; shape ``s.shape + (k+1,)``."""
    s = np.asarray(s, dtype=float)
    vals = legendre_table(k, s)
    out = np.zeros(s.shape + (k + 1,))
    if k >= 1:
        out[..., 1] = 1.0
        for n in range(2, k + 1):
            out[..., n] = out[..., n - 2] + (2 * n - 1) * vals[..., n - 1]
    return out


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return len(self.nodes)


def _newton(f, x0: float, what: str) -> float:
    """Scalar Newton on ``f`` returning (value, derivative).

    Converged once the step falls to a few ulps; the residual itself cannot
    reach a fixed absolute tolerance for high-degree polynomials near +-1.
    """
    x = x0
    for _ in range(_NEWTON_MAXITER):
        val, der = f(x)
        dx = val / der
        x -= dx
        if abs(dx) <= _NEWTON_TOL * max(1.0, abs(x)):
            return x
    raise RuntimeError(f"Newton iteration for {what} did not converge (x={x!r})")


@lru_cache(maxsize=None)
def gauss_rule(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule, exact through degree 2n-1."""
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")

    def f(x):
        return legendre_eval(n, x), legendre_deriv(n, x)

    nodes = np.empty(n)
    for i in range(n):
        seed = -np.cos(np.pi * (i + 0.75) / (n + 0.5))
        nodes[i] = _newton(f, seed, f"Gauss node {i} of {n}")
    nodes.sort()
    weights = 2.0 / ((1.0 - nodes**2) * legendre_deriv(n, nodes) ** 2)
    return QuadratureRule(nodes, weights, 2 * n - 1)


@dataclass(frozen=True)
class RadauPointSet:
    """Left and right Radau points for degree ``k``.

    ``left_all`` are the k+1 zeros of L_{k+1} + L_k (contains -1),
    ``right_all`` the zeros of L_{k+1} - L_k (contains +1).
    """

    k: int
    left_all: np.ndarray
    right_all: np.ndarray

    @property
    def left_interior(self) -> np.ndarray:
        return self.left_all[1:]

    @property
    def right_interior(self) -> np.ndarray:
        return self.right_all[:-1]


@lru_cache(maxsize=None)
def radau_points(k: int) -> RadauPointSet:
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError(f"degree must lie in [1, {MAX_DEGREE}], got {k}")

    def f(x):
        return (legendre_eval(k + 1, x) + legendre_eval(k, x),
                legendre_deriv(k + 1, x) + legendre_deriv(k, x))

    left = np.empty(k + 1)
    left[0] = -1.0
    # Chebyshev-Gauss-Radau seeds sit inside the basin of each root
    for i in range(1, k + 1):
        left[i] = _newton(f, -np.cos(2 * np.pi * i / (2 * k + 1)), f"left Radau point {i}")
    left.sort()
    if np.any(np.diff(left) < 1e-8):
        raise RuntimeError(f"Radau refinement collapsed onto a repeated root for k={k}")
    # L_{k+1}(-s) - L_k(-s) = (-1)^{k+1} (L_{k+1} + L_k)(s)
    right = np.sort(-left)
    right[-1] = 1.0
    for pts, sign in ((left, 1.0), (right, -1.0)):
        resid = legendre_eval(k + 1, pts) + sign * legendre_eval(k, pts)
        if np.max(np.abs(resid)) > 1e-12:
            raise RuntimeError(f"Radau residual too large for k={k}: {resid}")
    left.setflags(write=False)
    right.setflags(write=False)
    return RadauPointSet(k, left, right)
