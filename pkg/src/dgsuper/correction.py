"""Correction functions for the Gauss-Radau projection and initial data for the solver.

The interpolant u_I^l = P_h^- u - w^l with w^l = sum_i hbar_j^i G_i F_i is
superclose to the DG solution. Here F_i is a fixed polynomial on the
reference cell (tabulated once per (k, l)), and G_i(0) is the i-th time
derivative of the (k+1)-th Radau coefficient of u, computed from u0 alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .basis import QuadratureRule, legendre_table
from .field import ModalField, default_rule, gauss_radau_project, l2_project
from .mesh import Mesh1D
from .operator import BCKind
from .smooth import SmoothFunction


def ds_inverse(coeffs) -> np.ndarray:
    """Primitive int_{-1}^s p(s') ds' of a Legendre series, one degree higher.

    Uses int L_m = (L_{m+1} - L_{m-1}) / (2m+1) for m >= 1 and int L_0 = L_1 + L_0.
    Works on floats or Fractions.
    """
    p = list(coeffs)
    zero = p[0] * 0 if p else 0
    out = [zero] * (len(p) + 1)
    for m, c in enumerate(p):
        if m == 0:
            out[0] += c
            out[1] += c
        else:
            out[m + 1] += c / (2 * m + 1)
            out[m - 1] -= c / (2 * m + 1)
    return np.array(out, dtype=object if isinstance(zero, Fraction) else float)


@dataclass(frozen=True)
class CorrectionTable:
    """b[i, m] for i = 1..l and m = k-i+1..k, so F_i = sum_m b[i, m] (L_m - L_{m-1}).

    ``exact`` keeps the rational values; ``b`` holds their float conversions.
    """

    k: int
    l: int
    exact: dict = field(repr=False)
    b: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "b", {key: float(val) for key, val in self.exact.items()})

    def legendre_coeffs(self, i: int) -> np.ndarray:
        """F_i as a Legendre series of length k+1."""
        if not 1 <= i <= self.l:
            raise ValueError(f"F_{i} not in table (l={self.l})")
        out = np.zeros(self.k + 1)
        for m in range(self.k - i + 1, self.k + 1):
            out[m] += self.b[i, m]
            out[m - 1] -= self.b[i, m]
        return out

    def exact_legendre_coeffs(self, i: int) -> list[Fraction]:
        if not 1 <= i <= self.l:
            raise ValueError(f"F_{i} not in table (l={self.l})")
        out = [Fraction(0)] * (self.k + 1)
        for m in range(self.k - i + 1, self.k + 1):
            out[m] += self.exact[i, m]
            out[m - 1] -= self.exact[i, m]
        return out

    def matrix(self) -> np.ndarray:
        """Rows are the Legendre coefficients of F_1..F_l; shape (l, k+1)."""
        return np.array([self.legendre_coeffs(i) for i in range(1, self.l + 1)])


def build_correction_table(k: int, l: int) -> CorrectionTable:
    """Run the coefficient recursion for F_{i+1} = -P_h^- D_s^{-1} F_i in exact arithmetic.

    Starting from b[1, k] = 1/(2k+1):

        b[i+1, m] = (b[i, m+1] - b[i, m]) / (2m+1) + (b[i, m] - b[i, m-1]) / (2m-1)

    for m = k-i..k, where entries of row i outside m = k-i+1..k are zero. The
    bottom (m = k-i) and top (m = k) cases reduce to the single-term forms.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 1 <= l <= k:
        raise ValueError(f"correction depth must satisfy 1 <= l <= k={k}, got {l}")
    b = {(1, k): Fraction(1, 2 * k + 1)}
    for i in range(1, l):
        def row(m, i=i):
            return b.get((i, m), Fraction(0))
        for m in range(k - i, k + 1):
            if m == k - i:
                val = row(m + 1) / (2 * m + 1)
            else:
                val = (row(m + 1) - row(m)) / (2 * m + 1) + (row(m) - row(m - 1)) / (2 * m - 1)
            b[i + 1, m] = val
    return CorrectionTable(k, l, b)


def g_coefficients(u0: SmoothFunction, mesh: Mesh1D, k: int, l: int,
                   rule: QuadratureRule | None = None) -> np.ndarray:
    """G_i(0) = d^i/dt^i of the (k+1)-th Radau coefficient at t = 0, i = 1..l.

    Uses d^i u/dt^i (x, 0) = (-1)^i u0^(i)(x). Returns shape (N, l); column
    i-1 holds G_i.
    """
    rule = rule or default_rule(k)
    jets_q = u0.jet(mesh.physical_points(rule.nodes), l)  # (l+1, N, q)
    jets_r = u0.jet(mesh.breakpoints[1:], l)  # (l+1, N)
    weight = legendre_table(k, rule.nodes) @ (2 * np.arange(k + 1) + 1.0)  # (q,)
    mean_part = 0.5 * np.einsum("inq,q->in", jets_q, rule.weights * weight)
    signs = (-1.0) ** np.arange(l + 1)
    g = signs[:, None] * (jets_r - mean_part)
    return g[1:].T.copy()


def correction_field(u0: SmoothFunction, mesh: Mesh1D, k: int, l: int,
                     rule: QuadratureRule | None = None) -> ModalField:
    """w^l at t = 0."""
    table = build_correction_table(k, l)
    g = g_coefficients(u0, mesh, k, l, rule)
    powers = mesh.half_sizes[:, None] ** np.arange(1, l + 1)[None, :]
    return ModalField(mesh, (powers * g) @ table.matrix())


def build_interpolant(u0: SmoothFunction, mesh: Mesh1D, k: int, l: int,
                      rule: QuadratureRule | None = None) -> ModalField:
    """u_I^l(., 0) = P_h^- u0 - w^l(., 0)."""
    return gauss_radau_project(u0, mesh, k, rule) - correction_field(u0, mesh, k, l, rule)


def _match_time_derivative(problem, mesh: Mesh1D, k: int,
                           rule: QuadratureRule | None) -> ModalField:
    """Initial data whose scheme-induced u_ht matches P_h^- u_t against L_1..L_k.

    Downwind traces are pinned to u0, so every inflow trace is known up front
    and each cell solves a triangular system on its own.
    """
    u0 = problem.u0
    down = u0.eval(mesh.breakpoints[1:])
    if problem.bc.kind is BCKind.PERIODIC:
        inflow0 = down[-1]
    else:
        inflow0 = float(problem.bc.g(0.0))
    up = np.concatenate([[inflow0], down[:-1]])
    pu_t = gauss_radau_project(-u0.derivative(1), mesh, k, rule).coeffs
    m = np.arange(k + 1)
    # right-hand side of 2 * sum_{n<m, m-n odd} c_n = ... for m = 1..k
    rhs = pu_t * (mesh.cell_sizes[:, None] / (2 * m + 1)) + down[:, None] - up[:, None] * (-1.0) ** m
    c = np.zeros((mesh.n_cells, k + 1))
    for mm in range(1, k + 1):
        known = sum(c[:, n] for n in range(mm - 3, -1, -2))
        c[:, mm - 1] = rhs[:, mm] / 2 - known
    c[:, k] = down - c[:, :k].sum(axis=1)
    return ModalField(mesh, c)


METHODS = {
    1: "L2 projection",
    2: "Gauss-Radau projection",
    3: "Gauss-Radau projection of u_t",
    4: "corrected interpolant u_I^k",
}


def initialize(method: int, problem, mesh: Mesh1D, k: int,
               rule: QuadratureRule | None = None) -> ModalField:
    """Initial DG state for one of the four discretizations in :data:`METHODS`.

    ``problem`` needs ``u0`` (a SmoothFunction) and ``bc``.
    """
    if method == 1:
        return l2_project(problem.u0, mesh, k, rule)
    if method == 2:
        return gauss_radau_project(problem.u0, mesh, k, rule)
    if method == 3:
        return _match_time_derivative(problem, mesh, k, rule)
    if method == 4:
        return build_interpolant(problem.u0, mesh, k, k, rule)
    raise ValueError(f"unknown initialization method {method!r}; expected one of {sorted(METHODS)}")
