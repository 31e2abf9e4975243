"""Benchmark problems for u_t + u_x = 0 on [0, 2pi]."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .mesh import Mesh1D, split_mesh, uniform_mesh
from .operator import BCKind, BoundaryCondition
from .smooth import SmoothFunction, exp, sin
from .timestep import StepPolicy


def _default_policy(t_end: float, k: int, n_cells: int) -> StepPolicy:
    return StepPolicy.default(t_end, k)


def _dirichlet_policy(t_end: float, k: int, n_cells: int) -> StepPolicy:
    # step counts used for this benchmark with RK4 at k = 3 and k = 4
    if k == 3:
        return StepPolicy.fixed(t_end, 10 * n_cells**2)
    if k >= 4:
        return StepPolicy.fixed(t_end, 5 * n_cells**3)
    return StepPolicy.default(t_end, k)


@dataclass(frozen=True)
class ProblemSpec:
    """Initial datum, boundary condition and final time; the exact solution is u0(x - t)."""

    name: str
    u0: SmoothFunction
    bc: BoundaryCondition
    t_end: float
    mesh_builder: Callable[[int], Mesh1D] = uniform_mesh
    policy: Callable[[float, int, int], StepPolicy] = _default_policy
    description: str = ""

    def exact(self, t: float) -> SmoothFunction:
        """x -> u(x, t)."""
        return self.u0.shifted(t)

    def exact_value(self, x, t: float):
        return self.u0.eval(np.asarray(x, dtype=float) - t)

    def exact_deriv(self, t: float) -> SmoothFunction:
        return self.exact(t).derivative(1)

    def step_policy(self, k: int, n_cells: int) -> StepPolicy:
        """Recommended RK4 step policy on an N-cell mesh."""
        return self.policy(self.t_end, k, n_cells)

    @property
    def periodic(self) -> bool:
        return self.bc.kind is BCKind.PERIODIC


def periodic_exp_sin() -> ProblemSpec:
    return ProblemSpec(
        name="example1",
        u0=SmoothFunction(lambda x: exp(sin(x)), name="exp(sin x)"),
        bc=BoundaryCondition.periodic(),
        t_end=3 * math.pi / 4,
        mesh_builder=split_mesh,
        description="u0 = exp(sin x), periodic, T = 3pi/4, two-block mesh",
    )


def dirichlet_sine() -> ProblemSpec:
    return ProblemSpec(
        name="example2",
        u0=SmoothFunction(lambda x: sin(x), name="sin x"),
        bc=BoundaryCondition.dirichlet(lambda t: -math.sin(t)),
        t_end=math.pi,
        mesh_builder=uniform_mesh,
        policy=_dirichlet_policy,
        description="u0 = sin x, inflow u(0,t) = -sin t, T = pi, uniform mesh",
    )


def builtin_problems() -> list[ProblemSpec]:
    return [periodic_exp_sin(), dirichlet_sine()]


def get_problem(name: str) -> ProblemSpec:
    aliases = {"1": "example1", "2": "example2"}
    name = aliases.get(str(name), str(name))
    for p in builtin_problems():
        if p.name == name:
            return p
    raise KeyError(f"unknown problem {name!r}; choose from example1, example2")
