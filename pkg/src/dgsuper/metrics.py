"""Error functionals e1..e6 and refinement rates.

e1, e2  max / RMS error at the downwind points x_{j+1/2}^-
e3      error of the domain average
e4      max derivative error at interior left Radau points
e5      max value error at interior right Radau points
e6      RMS of the cell-average errors
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import gauss_rule, radau_points
from .field import ModalField
from .smooth import SmoothFunction

NOISE_FLOOR = 1e-13
N_METRICS = 6
METRIC_RULE_POINTS = 20


def downwind_errors(u_h: ModalField, exact: SmoothFunction) -> tuple[float, float]:
    err = exact.eval(u_h.mesh.breakpoints[1:]) - u_h.downwind_traces()
    return float(np.max(np.abs(err))), float(np.sqrt(np.mean(err**2)))


def _exact_cell_means(u_h: ModalField, exact: SmoothFunction) -> np.ndarray:
    rule = gauss_rule(METRIC_RULE_POINTS)
    vals = exact.eval(u_h.mesh.physical_points(rule.nodes))
    return 0.5 * vals @ rule.weights


def domain_average_error(u_h: ModalField, exact: SmoothFunction) -> float:
    mesh = u_h.mesh
    diff = (_exact_cell_means(u_h, exact) - u_h.coeffs[:, 0]) @ mesh.cell_sizes
    return float(abs(diff) / mesh.length)


def radau_errors(u_h: ModalField, exact: SmoothFunction,
                 exact_deriv: SmoothFunction | None = None) -> tuple[float, float]:
    k = u_h.degree
    if k < 1:
        raise ValueError("Radau errors need k >= 1")
    pts = radau_points(k)
    mesh = u_h.mesh
    exact_deriv = exact_deriv if exact_deriv is not None else exact.derivative(1)
    xl = mesh.physical_points(pts.left_interior)
    e4 = np.max(np.abs(exact_deriv.eval(xl) - u_h.derivs_at(pts.left_interior)))
    xr = mesh.physical_points(pts.right_interior)
    e5 = np.max(np.abs(exact.eval(xr) - u_h.values_at(pts.right_interior)))
    return float(e4), float(e5)


def cell_average_error(u_h: ModalField, exact: SmoothFunction) -> float:
    err = _exact_cell_means(u_h, exact) - u_h.coeffs[:, 0]
    return float(np.sqrt(np.mean(err**2)))


def all_errors(u_h: ModalField, exact: SmoothFunction,
               exact_deriv: SmoothFunction | None = None) -> np.ndarray:
    e1, e2 = downwind_errors(u_h, exact)
    e4, e5 = radau_errors(u_h, exact, exact_deriv)
    return np.array([e1, e2, domain_average_error(u_h, exact), e4, e5,
                     cell_average_error(u_h, exact)])


def refinement_rate(coarse: float, fine: float, floor: float = NOISE_FLOOR) -> float:
    """log2(coarse / fine), or nan when either error sits below the noise floor."""
    if coarse <= floor or fine <= floor:
        return math.nan
    return math.log2(coarse / fine)


CSV_HEADER = ["N"] + [f"e{i}" for i in range(1, 7)] + [f"r{i}" for i in range(1, 7)]


@dataclass
class ErrorReport:
    """Errors per mesh (rows ordered by N) and rates into each row from the previous one.

    ``rates[0]`` is all-nan; a rate is nan whenever either error is below
    ``floor``.
    """

    ns: list[int]
    errors: np.ndarray
    rates: np.ndarray = field(default=None)
    floor: float = NOISE_FLOOR

    def __post_init__(self):
        self.ns = [int(n) for n in self.ns]
        self.errors = np.asarray(self.errors, dtype=float).reshape(len(self.ns), N_METRICS)
        if np.any(self.errors < 0):
            raise ValueError("errors must be non-negative")
        if self.rates is None:
            self.rates = rates(self.ns, self.errors, self.floor).rates
        self.rates = np.asarray(self.rates, dtype=float).reshape(len(self.ns), N_METRICS)

    @property
    def unreliable(self) -> np.ndarray:
        """Entries below the double-precision noise floor."""
        return self.errors <= self.floor

    def column(self, i: int) -> np.ndarray:
        """Errors e_i (1-based, as in e1..e6)."""
        return self.errors[:, i - 1]

    def rate_column(self, i: int) -> np.ndarray:
        return self.rates[:, i - 1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for n, errs, rs in zip(self.ns, self.errors, self.rates):
            writer.writerow([n] + [f"{e:.17g}" for e in errs]
                            + ["" if math.isnan(r) else f"{r:.17g}" for r in rs])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, floor: float = NOISE_FLOOR) -> "ErrorReport":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        ns, errs, rs = [], [], []
        for row in reader:
            if not row:
                continue
            ns.append(int(row[0]))
            errs.append([float(v) for v in row[1:7]])
            rs.append([float(v) if v else math.nan for v in row[7:13]])
        return cls(ns, np.array(errs).reshape(-1, N_METRICS),
                   np.array(rs).reshape(-1, N_METRICS), floor)

    def to_table(self, title: str = "") -> str:
        """Aligned text table: N, then e_i and its rate for each metric."""
        head = f"{'N':>5}" + "".join(f"  {'e' + str(i):>9} {'rate':>5}" for i in range(1, 7))
        lines = [title] if title else []
        lines += [head, "-" * len(head)]
        for n, errs, rs, bad in zip(self.ns, self.errors, self.rates, self.unreliable):
            cells = []
            for e, r, flag in zip(errs, rs, bad):
                rate = "--" if math.isnan(r) else f"{r:.2f}"
                cells.append(f"  {e:9.2e}{'*' if flag else ' '}{rate:>5}")
            lines.append(f"{n:>5}" + "".join(cells))
        if self.unreliable.any():
            lines.append(f"* below the noise floor {self.floor:.0e}; excluded from rates")
        return "\n".join(lines) + "\n"


def rates(ns, errors, floor: float = NOISE_FLOOR) -> ErrorReport:
    """Attach log2 refinement rates to a sequence of doubling meshes."""
    ns = [int(n) for n in ns]
    for a, b in zip(ns[:-1], ns[1:]):
        if b != 2 * a:
            raise ValueError(f"mesh sequence must double: got {a} -> {b}")
    errors = np.asarray(errors, dtype=float).reshape(len(ns), -1)
    if errors.shape[1] != N_METRICS:
        raise ValueError(f"expected {N_METRICS} error columns, got {errors.shape[1]}")
    out = np.full(errors.shape, math.nan)
    for row in range(1, len(ns)):
        for col in range(N_METRICS):
            out[row, col] = refinement_rate(errors[row - 1, col], errors[row, col], floor)
    return ErrorReport(ns, errors, out, floor)
