"""Convergence experiments: configuration, single runs and sweeps over N."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .basis import MAX_DEGREE
from .correction import METHODS, initialize
from .field import dump_field
from .mesh import split_mesh, uniform_mesh
from .metrics import ErrorReport, all_errors, rates
from .operator import make_rhs
from .problems import ProblemSpec, get_problem
from .timestep import StepPolicy, get_tableau, integrate

log = logging.getLogger(__name__)

MESH_BUILDERS = {"uniform": uniform_mesh, "split": split_mesh}


@dataclass(frozen=True)
class ExperimentConfig:
    """One convergence study.

    ``policy`` is ``auto`` (the problem's recommendation), ``default``
    (dt = min(0.05 h_min, 0.5 h_min^ceil((2k+1)/4))), ``cfl:<coef>:<exp>``
    or ``fixed:<c>:<p>`` for n = c * N^p steps.
    """

    problem: str = "example2"
    k: int = 3
    ns: tuple[int, ...] = (8, 16, 32, 64)
    method: int = 4
    mesh: str | None = None
    tableau: str = "rk4"
    policy: str = "auto"
    out: str | None = None
    dump_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ns", tuple(int(n) for n in self.ns))
        if not self.ns:
            raise ValueError("need at least one mesh size")
        for a, b in zip(self.ns[:-1], self.ns[1:]):
            if b != 2 * a:
                raise ValueError(f"N list must double: {a} -> {b}")
        if not 1 <= self.k <= MAX_DEGREE:
            raise ValueError(f"k must lie in [1, {MAX_DEGREE}]")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {sorted(METHODS)}")
        if self.mesh is not None and self.mesh not in MESH_BUILDERS:
            raise ValueError(f"mesh must be one of {sorted(MESH_BUILDERS)}")
        object.__setattr__(self, "problem", get_problem(self.problem).name)

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        """Read flat ``key = value`` lines; ``#`` starts a comment."""
        values: dict = {}
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, val = (part.strip() for part in line.split("=", 1))
                values[key] = val
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_mapping(values)

    @classmethod
    def from_mapping(cls, values: dict) -> "ExperimentConfig":
        values = dict(values)
        kwargs: dict = {}
        for key in ("problem", "mesh", "tableau", "policy", "out", "dump_dir"):
            if key in values:
                kwargs[key] = str(values.pop(key))
        for key in ("k", "method", "workers"):
            if key in values:
                kwargs[key] = int(values.pop(key))
        nmin = values.pop("nmin", None)
        nmax = values.pop("nmax", None)
        if "ns" in values:
            raw = values.pop("ns")
            kwargs["ns"] = tuple(int(n) for n in str(raw).replace(",", " ").split()) \
                if isinstance(raw, str) else tuple(raw)
        elif nmin is not None or nmax is not None:
            lo = int(nmin) if nmin is not None else 8
            hi = int(nmax) if nmax is not None else 64
            kwargs["ns"] = doubling(lo, hi)
        if values:
            raise ValueError(f"unknown config keys: {sorted(values)}")
        return cls(**kwargs)

    def resolve_problem(self) -> ProblemSpec:
        prob = get_problem(self.problem)
        if self.mesh is not None:
            prob = replace(prob, mesh_builder=MESH_BUILDERS[self.mesh])
        return prob

    def step_policy(self, prob: ProblemSpec, n_cells: int) -> StepPolicy:
        kind, *args = self.policy.split(":")
        if kind == "auto":
            return prob.step_policy(self.k, n_cells)
        if kind == "default":
            return StepPolicy.default(prob.t_end, self.k)
        if kind == "cfl" and len(args) == 2:
            return StepPolicy.cfl(prob.t_end, float(args[0]), float(args[1]))
        if kind == "fixed" and len(args) == 2:
            return StepPolicy.fixed(prob.t_end, max(1, round(float(args[0]) * n_cells ** float(args[1]))))
        raise ValueError(f"bad step policy {self.policy!r}")


def doubling(lo: int, hi: int) -> tuple[int, ...]:
    if lo < 1 or hi < lo:
        raise ValueError(f"bad N range {lo}..{hi}")
    ns = [lo]
    while ns[-1] * 2 <= hi:
        ns.append(ns[-1] * 2)
    return tuple(ns)


def solve(config: ExperimentConfig, n_cells: int):
    """Initialize and integrate on one mesh; returns (final state, problem)."""
    prob = config.resolve_problem()
    mesh = prob.mesh_builder(n_cells)
    state0 = initialize(config.method, prob, mesh, config.k)
    policy = config.step_policy(prob, n_cells)
    result = integrate(state0, make_rhs(prob.bc), policy, get_tableau(config.tableau),
                       h_min=mesh.h_min)
    return result, prob


def run_single(config: ExperimentConfig, n_cells: int) -> np.ndarray:
    """e1..e6 at the final time on an N-cell mesh."""
    result, prob = solve(config, n_cells)
    errs = all_errors(result.state, prob.exact(prob.t_end), prob.exact_deriv(prob.t_end))
    log.info("%s k=%d method=%d N=%d steps=%d e2=%.3e", prob.name, config.k, config.method,
             n_cells, result.n_steps, errs[1])
    if config.dump_dir:
        os.makedirs(config.dump_dir, exist_ok=True)
        dump_field(result.state, Path(config.dump_dir) /
                   f"{prob.name}_k{config.k}_m{config.method}_N{n_cells}.dgfield")
    return errs


def _write_outputs(config: ExperimentConfig, report: ErrorReport) -> None:
    if not config.out:
        return
    out = Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_csv())
    out.with_suffix(".txt").write_text(report.to_table(title=describe(config)))


def describe(config: ExperimentConfig) -> str:
    return (f"{config.problem}  k={config.k}  method={config.method} ({METHODS[config.method]})  "
            f"tableau={config.tableau}  policy={config.policy}")


def run_experiment(config: ExperimentConfig) -> ErrorReport:
    """Errors and rates over ``config.ns``; CSV and table go to ``config.out`` if set.

    When a later mesh fails, the completed prefix is written before the error
    propagates.
    """
    rows: list[np.ndarray] = []
    try:
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = [pool.submit(run_single, config, n) for n in config.ns]
                for fut in futures:
                    rows.append(fut.result())
        else:
            for n in config.ns:
                rows.append(run_single(config, n))
    except Exception:
        if rows:
            _write_outputs(config, rates(config.ns[: len(rows)], rows))
        raise
    report = rates(config.ns, rows)
    _write_outputs(config, report)
    return report


def sweep(k: int, ns_by_problem: dict[str, tuple[int, ...]] | None = None, out_dir: str | None = None,
          tableau: str = "rk4", workers: int = 1) -> dict[tuple[str, int], ErrorReport]:
    """All four initializations on both benchmark problems for one degree."""
    ns_by_problem = ns_by_problem or {"example1": (8, 16, 32, 64), "example2": (4, 8, 16, 32)}
    reports = {}
    for problem, ns in ns_by_problem.items():
        for method in sorted(METHODS):
            out = None if out_dir is None else str(Path(out_dir) / f"{problem}_k{k}_m{method}.csv")
            cfg = ExperimentConfig(problem=problem, k=k, ns=ns, method=method, tableau=tableau,
                                   out=out, workers=workers)
            reports[problem, method] = run_experiment(cfg)
    if out_dir is not None:
        for problem in ns_by_problem:
            text = method_comparison_table(reports, problem, k)
            (Path(out_dir) / f"{problem}_k{k}_e1_methods.txt").write_text(text)
    return reports


def method_comparison_table(reports: dict, problem: str, k: int) -> str:
    """e1 and its rate for each initialization, side by side."""
    methods = sorted(m for (p, m) in reports if p == problem)
    ns = reports[problem, methods[0]].ns
    head = f"{'N':>5}" + "".join(f"  {'M' + str(m) + ' e1':>10} {'rate':>5}" for m in methods)
    lines = [f"{problem}  k={k}  e1 by initialization", head, "-" * len(head)]
    for row, n in enumerate(ns):
        cells = []
        for m in methods:
            rep = reports[problem, m]
            r = rep.rates[row, 0]
            cells.append(f"  {rep.errors[row, 0]:10.2e} {'--' if np.isnan(r) else f'{r:.2f}':>5}")
        lines.append(f"{n:>5}" + "".join(cells))
    return "\n".join(lines) + "\n"
