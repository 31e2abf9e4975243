"""Piecewise polynomials in a per-cell Legendre basis, and projections onto them.

On cell j a field is ``sum_m c[j, m] L_m(s)`` with ``s`` the reference
coordinate of the cell. Since L_m(1) = 1 and L_m(-1) = (-1)^m, the one-sided
traces are plain (alternating) coefficient sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .basis import MAX_DEGREE, QuadratureRule, gauss_rule, legendre_deriv_table, legendre_table
from .mesh import Mesh1D
from .smooth import SmoothFunction


def default_rule(k: int) -> QuadratureRule:
    return gauss_rule(max(k + 6, 12))


@dataclass(frozen=True, eq=False)
class ModalField:
    mesh: Mesh1D
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != self.mesh.n_cells:
            raise ValueError(
                f"coefficients must have shape (N={self.mesh.n_cells}, k+1), got {c.shape}")
        if not 0 <= c.shape[1] - 1 <= MAX_DEGREE + 2:
            raise ValueError(f"unsupported degree {c.shape[1] - 1}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, mesh: Mesh1D, k: int) -> "ModalField":
        return cls(mesh, np.zeros((mesh.n_cells, k + 1)))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def n_cells(self) -> int:
        return self.coeffs.shape[0]

    def _check_compatible(self, other: "ModalField"):
        if other.mesh != self.mesh or other.degree != self.degree:
            raise ValueError("fields live on different meshes or have different degrees")

    def __add__(self, other):
        if not isinstance(other, ModalField):
            return NotImplemented
        self._check_compatible(other)
        return ModalField(self.mesh, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, ModalField):
            return NotImplemented
        self._check_compatible(other)
        return ModalField(self.mesh, self.coeffs - other.coeffs)

    def __mul__(self, alpha):
        return ModalField(self.mesh, float(alpha) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return ModalField(self.mesh, -self.coeffs)

    def eval(self, j: int, s):
        """Value on cell j at reference coordinate(s) s."""
        s = np.asarray(s, dtype=float)
        val = legendre_table(self.degree, s) @ self.coeffs[j]
        return val if val.ndim else float(val)

    def eval_deriv(self, j: int, s):
        """x-derivative on cell j: chain rule through s = (x - x_j)/hbar_j."""
        s = np.asarray(s, dtype=float)
        val = legendre_deriv_table(self.degree, s) @ self.coeffs[j] / self.mesh.half_sizes[j]
        return val if val.ndim else float(val)

    def values_at(self, s) -> np.ndarray:
        """Values at reference points ``s`` in every cell; shape (N, len(s))."""
        return self.coeffs @ legendre_table(self.degree, np.asarray(s, dtype=float)).T

    def derivs_at(self, s) -> np.ndarray:
        d = self.coeffs @ legendre_deriv_table(self.degree, np.asarray(s, dtype=float)).T
        return d / self.mesh.half_sizes[:, None]

    def downwind_traces(self) -> np.ndarray:
        """u(x_{j+1/2}^-) for every cell."""
        return self.coeffs.sum(axis=1)

    def upwind_traces(self) -> np.ndarray:
        """u(x_{j-1/2}^+) for every cell."""
        signs = (-1.0) ** np.arange(self.degree + 1)
        return self.coeffs @ signs

    def cell_averages(self) -> np.ndarray:
        return self.coeffs[:, 0].copy()

    def integral(self) -> float:
        return float(np.dot(self.mesh.cell_sizes, self.coeffs[:, 0]))

    def l2_norm_sq(self) -> float:
        """||u||_0^2 from the diagonal Legendre mass matrix."""
        m = np.arange(self.degree + 1)
        mass = self.mesh.cell_sizes[:, None] / (2 * m + 1)[None, :]
        return float(np.sum(mass * self.coeffs**2))

    def to_text(self) -> str:
        lines = [f"dgfield k={self.degree} n={self.n_cells}"]
        lines += [" ".join(f"{c:.17g}" for c in row) for row in self.coeffs]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, mesh: Mesh1D) -> "ModalField":
        rows = [ln for ln in text.splitlines() if ln.strip()]
        if not rows:
            raise ValueError("empty dgfield text")
        head = rows[0].split()
        try:
            if head[0] != "dgfield":
                raise ValueError
            meta = dict(item.split("=", 1) for item in head[1:])
            k, n = int(meta["k"]), int(meta["n"])
        except (ValueError, KeyError, IndexError):
            raise ValueError(f"bad dgfield header: {rows[0]!r}") from None
        body = [[float(tok) for tok in ln.split()] for ln in rows[1:]]
        if len(body) != n or any(len(r) != k + 1 for r in body):
            raise ValueError(f"dgfield body does not match header k={k} n={n}")
        return cls(mesh, np.array(body).reshape(n, k + 1))


def dump_field(field: ModalField, path) -> None:
    with open(path, "w") as fh:
        fh.write(field.to_text())


def load_field(path, mesh: Mesh1D) -> ModalField:
    with open(path) as fh:
        return ModalField.from_text(fh.read(), mesh)


# --- sampling helpers ------------------------------------------------------

Sampled = Union[ModalField, SmoothFunction]


def _moments(u: SmoothFunction, mesh: Mesh1D, k: int, rule: QuadratureRule) -> np.ndarray:
    """L2-projection coefficients (2m+1)/h_j * (u, L_m)_j for m <= k."""
    vals = u.eval(mesh.physical_points(rule.nodes))  # (N, q)
    table = legendre_table(k, rule.nodes)  # (q, k+1)
    m = np.arange(k + 1)
    return 0.5 * (2 * m + 1) * ((vals * rule.weights) @ table)


def l2_project(u: SmoothFunction, mesh: Mesh1D, k: int,
               rule: QuadratureRule | None = None) -> ModalField:
    rule = rule or default_rule(k)
    return ModalField(mesh, _moments(u, mesh, k, rule))


def gauss_radau_project(u: SmoothFunction, mesh: Mesh1D, k: int,
                        rule: QuadratureRule | None = None) -> ModalField:
    """P_h^- u: moments against P^{k-1} plus the exact downwind value."""
    if k < 1:
        raise ValueError("Gauss-Radau projection needs k >= 1")
    rule = rule or default_rule(k)
    c = _moments(u, mesh, k - 1, rule)
    top = u.eval(mesh.breakpoints[1:]) - c.sum(axis=1)
    return ModalField(mesh, np.column_stack([c, top]))


def radau_coefficient(u: SmoothFunction, mesh: Mesh1D, j: int, m: int,
                      rule: QuadratureRule | None = None) -> float:
    """Coefficient of (L_m - L_{m-1}) in the Radau expansion of u on cell j."""
    if m < 1:
        raise ValueError("Radau coefficients are indexed from m = 1")
    rule = rule or default_rule(m)
    x = mesh.centers[j] + mesh.half_sizes[j] * rule.nodes
    table = legendre_table(m - 1, rule.nodes)
    weight = table @ (2 * np.arange(m) + 1.0)
    integral = 0.5 * np.dot(rule.weights, u.eval(x) * weight)  # (1/h_j) int over tau_j
    return float(u.eval(mesh.breakpoints[j + 1]) - integral)


def _sample(w: Sampled, mesh: Mesh1D, s: np.ndarray) -> np.ndarray:
    if isinstance(w, ModalField):
        if w.mesh != mesh:
            raise ValueError("field lives on a different mesh")
        return w.values_at(s)
    return np.asarray(w.eval(mesh.physical_points(s)))


def _left_limits(w: Sampled, mesh: Mesh1D) -> np.ndarray:
    """w(x_{j+1/2}^-) for j = 0..N-1."""
    if isinstance(w, ModalField):
        return w.downwind_traces()
    return np.asarray(w.eval(mesh.breakpoints[1:]))


def bilinear_form_cells(w: Sampled, w_t: Sampled, v: ModalField, inflow: float | None = None,
                        rule: QuadratureRule | None = None) -> np.ndarray:
    """a_j(w, v) for every cell j.

    a_j(w,v) = (w_t, v)_j - (w, v_x)_j + w^- v^-|_{j+1/2} - w^- v^+|_{j-1/2}

    ``inflow`` is the value of w^- at the left boundary; ``None`` wraps
    around and uses the left limit at the right boundary (periodic).
    """
    mesh = v.mesh
    rule = rule or default_rule(v.degree)
    s = rule.nodes
    jac = mesh.half_sizes[:, None]
    vt_term = np.sum(_sample(w_t, mesh, s) * v.values_at(s) * rule.weights * jac, axis=1)
    # (w, v_x)_j: the Jacobians cancel
    vol_term = np.sum(_sample(w, mesh, s) * v.derivs_at(s) * rule.weights * jac, axis=1)
    left = _left_limits(w, mesh)
    upstream = np.roll(left, 1)
    upstream[0] = left[-1] if inflow is None else inflow
    return vt_term - vol_term + left * v.downwind_traces() - upstream * v.upwind_traces()


def bilinear_form(w: Sampled, w_t: Sampled, v: ModalField, inflow: float | None = None,
                  rule: QuadratureRule | None = None) -> float:
    """a(w, v) = sum_j a_j(w, v)."""
    return float(np.sum(bilinear_form_cells(w, w_t, v, inflow, rule)))
