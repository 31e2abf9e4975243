"""Immutable 1D meshes and the affine map to the reference cell.

Cells are indexed from 0 in code; cell ``j`` spans
``[breakpoints[j], breakpoints[j+1]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Mesh1D:
    """Cell breakpoints plus derived geometry.

    ``max_ratio`` is the declared quasi-uniformity constant: construction
    fails if ``max(h) / min(h)`` exceeds it.
    """

    breakpoints: np.ndarray
    max_ratio: float = 10.0
    cell_sizes: np.ndarray = field(init=False, repr=False)
    half_sizes: np.ndarray = field(init=False, repr=False)
    centers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.breakpoints, dtype=float)
        if x.ndim != 1 or len(x) < 2:
            raise ValueError("need at least two breakpoints")
        if not np.all(np.isfinite(x)):
            raise ValueError("breakpoints must be finite")
        h = np.diff(x)
        if np.any(h <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if h.max() / h.min() > self.max_ratio * (1 + 1e-12):
            raise ValueError(
                f"mesh ratio {h.max() / h.min():.3g} exceeds declared bound {self.max_ratio}")
        for arr in (x, h):
            arr.setflags(write=False)
        half = h / 2
        mid = 0.5 * (x[:-1] + x[1:])
        half.setflags(write=False)
        mid.setflags(write=False)
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "cell_sizes", h)
        object.__setattr__(self, "half_sizes", half)
        object.__setattr__(self, "centers", mid)

    @property
    def n_cells(self) -> int:
        return len(self.cell_sizes)

    @property
    def h_max(self) -> float:
        return float(self.cell_sizes.max())

    @property
    def h_min(self) -> float:
        return float(self.cell_sizes.min())

    @property
    def left(self) -> float:
        return float(self.breakpoints[0])

    @property
    def right(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def length(self) -> float:
        return self.right - self.left

    def physical_points(self, s) -> np.ndarray:
        """Map reference points ``s`` into every cell; shape ``(N, len(s))``."""
        s = np.asarray(s, dtype=float)
        return self.centers[:, None] + self.half_sizes[:, None] * s[None, :]

    def __eq__(self, other):
        if not isinstance(other, Mesh1D):
            return NotImplemented
        return self is other or np.array_equal(self.breakpoints, other.breakpoints)

    def __hash__(self):
        return hash(self.breakpoints.tobytes())


def interval_mesh(a: float, b: float, n_cells: int) -> Mesh1D:
    """Uniform mesh on a general interval [a, b]."""
    if n_cells < 1:
        raise ValueError(f"n_cells must be positive, got {n_cells}")
    x = np.linspace(a, b, n_cells + 1)
    x[0], x[-1] = a, b
    return Mesh1D(x, max_ratio=1.0)


def uniform_mesh(n_cells: int) -> Mesh1D:
    """N equal cells on [0, 2pi]."""
    return interval_mesh(0.0, TWO_PI, n_cells)


def split_mesh(n_cells: int) -> Mesh1D:
    """N/2 equal cells on [0, pi/2] followed by N/2 equal cells on [pi/2, 2pi].

    The two cell sizes are pi/N and 3pi/N.
    """
    if n_cells < 2 or n_cells % 2:
        raise ValueError(f"split mesh needs an even cell count >= 2, got {n_cells}")
    half = n_cells // 2
    x = np.concatenate([np.linspace(0.0, np.pi / 2, half + 1),
                        np.linspace(np.pi / 2, TWO_PI, half + 1)[1:]])
    x[0], x[-1] = 0.0, TWO_PI
    return Mesh1D(x, max_ratio=3.0)


def to_reference(mesh: Mesh1D, j: int, x, tol: float = 1e-12):
    """s = (x - x_j) / hbar_j for x inside cell j."""
    lo, hi = mesh.breakpoints[j], mesh.breakpoints[j + 1]
    xa = np.asarray(x, dtype=float)
    slack = tol * max(1.0, abs(hi))
    if np.any(xa < lo - slack) or np.any(xa > hi + slack):
        raise ValueError(f"point(s) {x} outside cell {j} = [{lo}, {hi}]")
    s = (xa - mesh.centers[j]) / mesh.half_sizes[j]
    s = np.where(xa == lo, -1.0, np.where(xa == hi, 1.0, np.clip(s, -1.0, 1.0)))
    return s if s.ndim else float(s)


def from_reference(mesh: Mesh1D, j: int, s):
    sa = np.asarray(s, dtype=float)
    if np.any(np.abs(sa) > 1.0 + 1e-14):
        raise ValueError(f"reference coordinate(s) {s} outside [-1, 1]")
    x = mesh.centers[j] + mesh.half_sizes[j] * sa
    return x if x.ndim else float(x)
