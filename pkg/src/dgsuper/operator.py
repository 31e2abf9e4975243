"""Upwind DG discretization of u_t + u_x = 0 in modal form.

For the test function L_m on cell j the scheme reads

    h_j/(2m+1) dc_{j,m}/dt = (u_h, d/dx L_m)_j - u_h^-(x_{j+1/2}) + (-1)^m u_h^-(x_{j-1/2})

The volume term is exact: int L_n L_m' ds = 2 when n < m and m - n is odd,
and 0 otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from .field import ModalField


class BCKind(Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class BoundaryCondition:
    kind: BCKind
    g: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.kind is BCKind.DIRICHLET and self.g is None:
            raise ValueError("Dirichlet inflow needs a boundary function g(t)")

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(BCKind.PERIODIC)

    @classmethod
    def dirichlet(cls, g: Callable[[float], float]) -> "BoundaryCondition":
        return cls(BCKind.DIRICHLET, g)

    def inflow(self, downwind: np.ndarray, t: float) -> float:
        """Value entering cell 0 from the left at time t."""
        if self.kind is BCKind.PERIODIC:
            return float(downwind[-1])
        return float(self.g(t))


@lru_cache(maxsize=None)
def _volume_matrix(k: int) -> np.ndarray:
    m = np.arange(k + 1)
    diff = m[:, None] - m[None, :]
    mat = np.where((diff > 0) & (diff % 2 == 1), 2.0, 0.0)
    mat.setflags(write=False)
    return mat


def upstream_traces(state: ModalField, bc: BoundaryCondition, t: float) -> np.ndarray:
    """u_h^-(x_{j-1/2}) seen by each cell: the upstream downwind trace or the inflow."""
    down = state.downwind_traces()
    up = np.roll(down, 1)
    up[0] = bc.inflow(down, t)
    return up


def dg_rhs(state: ModalField, bc: BoundaryCondition, t: float) -> ModalField:
    """Time derivative of the DG solution."""
    c = state.coeffs
    k = state.degree
    m = np.arange(k + 1)
    down = c.sum(axis=1)
    up = upstream_traces(state, bc, t)
    rhs = c @ _volume_matrix(k).T - down[:, None] + up[:, None] * (-1.0) ** m
    return ModalField(state.mesh, rhs * (2 * m + 1) / state.mesh.cell_sizes[:, None])


def make_rhs(bc: BoundaryCondition) -> Callable[[ModalField, float], ModalField]:
    def rhs(state: ModalField, t: float) -> ModalField:
        return dg_rhs(state, bc, t)
    return rhs


def energy_rate(state: ModalField, bc: BoundaryCondition, t: float) -> float:
    """(u_ht, u_h) = 1/2 d/dt ||u_h||^2."""
    m = np.arange(state.degree + 1)
    mass = state.mesh.cell_sizes[:, None] / (2 * m + 1)
    return float(np.sum(mass * dg_rhs(state, bc, t).coeffs * state.coeffs))


def jumps(state: ModalField, bc: BoundaryCondition, t: float) -> np.ndarray:
    """[u_h]_{j-1/2} = u^+ - u^- at the left end of every cell."""
    return state.upwind_traces() - upstream_traces(state, bc, t)


def energy_identity(state: ModalField, bc: BoundaryCondition, t: float) -> float:
    """Closed form of :func:`energy_rate`.

    -1/2 sum_j [u]_{j-1/2}^2 - 1/2 (u^-_{N+1/2})^2 + 1/2 (u^-_{1/2})^2; the
    boundary terms cancel for periodic conditions.
    """
    down = state.downwind_traces()
    inflow = bc.inflow(down, t)
    return float(-0.5 * np.sum(jumps(state, bc, t) ** 2) - 0.5 * down[-1] ** 2 + 0.5 * inflow**2)
