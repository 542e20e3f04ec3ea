"""Convergence and robustness experiments for the sweep solver.

``convergence_sweep`` measures the error of solves at increasing grid
sizes against a reference profile (closed form when available, else a
much finer solve restricted to shared points). ``xi_sweep`` measures
how solves under relaxed slope windows approach the unrelaxed solve as
the relaxation level drops to zero.
"""

import io
import time
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from .core import (Discretization, InfeasibleError, SpeedProfile,
                   check_admissible, default_tol, profile_error, relax)
from .paths import PathSpec, analytic_optimum, build_model
from .solver import solve


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    delta: float
    rho: float
    time_s: float


@dataclass(frozen=True)
class XiRow:
    xi: float
    gap: float


def convergence_sweep(path: PathSpec, resolutions: Sequence[int],
                      reference: str = "analytic") -> List[ConvergenceRow]:
    """Solve on uniform grids of each size and report the error per size.

    ``reference="analytic"`` compares against the closed-form optimum
    (only some instances have one). ``reference="finest"`` compares
    against a solve with 4x the largest requested interval count; every
    requested interval count must divide the finest one so reference
    values can be read off shared grid points without interpolation.
    """
    sizes = [int(n) for n in resolutions]
    if len(sizes) < 2:
        raise ValueError("need at least two grid sizes")
    if any(n2 <= n1 for n1, n2 in zip(sizes, sizes[1:])):
        raise ValueError("grid sizes must be strictly increasing")
    if sizes[0] < 2:
        raise ValueError("grid sizes must be at least 2")
    if reference not in ("analytic", "finest"):
        raise ValueError(f"unknown reference {reference!r}")

    model = build_model(path)
    fine_profile = None
    fine_intervals = None
    if reference == "finest":
        fine_intervals = 4 * (sizes[-1] - 1)
        for n in sizes:
            if fine_intervals % (n - 1) != 0:
                raise ValueError(
                    f"grid size {n} does not align with the finest "
                    f"reference ({fine_intervals} intervals): interval "
                    f"count {n - 1} must divide it")
        fine_grid = path.grid(fine_intervals + 1)
        fine_report = solve(fine_grid, model, endpoints=path.endpoints)
        if not fine_report.status.feasible:
            st = fine_report.status
            raise InfeasibleError(
                f"reference solve infeasible at index {st.index}",
                index=st.index, pass_name=st.pass_name)
        fine_profile = fine_report.profile

    rows: List[ConvergenceRow] = []
    for n in sizes:
        grid = path.grid(n)
        report = solve(grid, model, endpoints=path.endpoints)
        if not report.status.feasible:
            st = report.status
            raise InfeasibleError(
                f"infeasible at grid size n={n} (index {st.index}, "
                f"{st.pass_name} pass)", index=st.index,
                pass_name=st.pass_name)
        verdict = check_admissible(report.profile, model)
        if not verdict:
            raise RuntimeError(f"solve at n={n} not admissible: {verdict.detail}")
        if reference == "analytic":
            ref = analytic_optimum(path, grid)
        else:
            stride = fine_intervals // (n - 1)
            ref = SpeedProfile(grid, fine_profile.values[::stride],
                               "solver")
        rho = profile_error(report.profile, ref)
        rows.append(ConvergenceRow(n=n, delta=grid.delta, rho=rho,
                                   time_s=report.traversal_time))
    return rows


def write_convergence_csv(rows: Sequence[ConvergenceRow],
                          f: Union[str, io.TextIOBase]) -> None:
    own = isinstance(f, str)
    fh = open(f, "w", encoding="utf-8") if own else f
    try:
        fh.write("n,delta,rho,time_s\n")
        for r in rows:
            fh.write(f"{r.n},{r.delta:.17g},{r.rho:.17g},{r.time_s:.17g}\n")
    finally:
        if own:
            fh.close()


def xi_sweep(path: PathSpec, grid: Discretization,
             xis: Sequence[float]) -> List[XiRow]:
    """Gap between relaxed and unrelaxed solves per relaxation level.

    Levels must decrease to a final 0. Gaps are asserted non-increasing
    (within the unrelaxed default tolerance); a relaxed solve coming
    back infeasible means the solver itself is broken, since relaxation
    only widens the constraint set. Both conditions raise RuntimeError.
    """
    levels = [float(x) for x in xis]
    if not levels:
        raise ValueError("need at least one relaxation level")
    if any(x2 >= x1 for x1, x2 in zip(levels, levels[1:])):
        raise ValueError("relaxation levels must be strictly decreasing")
    if levels[-1] != 0.0:
        raise ValueError("the last relaxation level must be 0")
    if levels[0] < 0.0:
        raise ValueError("relaxation levels must be non-negative")

    model = build_model(path)
    base_report = solve(grid, model, endpoints=path.endpoints)
    if not base_report.status.feasible:
        st = base_report.status
        raise InfeasibleError(
            f"base instance infeasible at index {st.index}",
            index=st.index, pass_name=st.pass_name)
    base = base_report.profile.values

    rows: List[XiRow] = []
    for xi in levels:
        if xi == 0.0:
            rows.append(XiRow(xi=0.0, gap=0.0))
            continue
        relaxed = relax(model, xi)
        report = solve(grid, relaxed, endpoints=path.endpoints)
        if not report.status.feasible:
            raise RuntimeError(
                f"relaxed solve (xi={xi}) infeasible although the base "
                f"solve is feasible; this indicates a solver bug")
        verdict = check_admissible(report.profile, relaxed)
        if not verdict:
            raise RuntimeError(
                f"relaxed solve (xi={xi}) not admissible: {verdict.detail}")
        gap = float(np.max(np.abs(report.profile.values - base)))
        rows.append(XiRow(xi=xi, gap=gap))

    tol = default_tol(model)
    for r1, r2 in zip(rows, rows[1:]):
        if r2.gap > r1.gap + tol:
            raise RuntimeError(
                f"relaxation gaps increased from xi={r1.xi} ({r1.gap}) "
                f"to xi={r2.xi} ({r2.gap})")
    return rows


def write_xi_csv(rows: Sequence[XiRow], f: Union[str, io.TextIOBase]) -> None:
    own = isinstance(f, str)
    fh = open(f, "w", encoding="utf-8") if own else f
    try:
        fh.write("xi,gap\n")
        for r in rows:
            fh.write(f"{r.xi:.17g},{r.gap:.17g}\n")
    finally:
        if own:
            fh.close()


def measure_solve_seconds(path: PathSpec, n: int, repeats: int = 3) -> float:
    """Best wall-clock time of a solve on a uniform grid of ``n`` points."""
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    model = build_model(path)
    grid = path.grid(n)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        report = solve(grid, model, endpoints=path.endpoints)
        elapsed = time.perf_counter() - t0
        if not report.status.feasible:
            raise InfeasibleError(f"instance infeasible at n={n}")
        best = min(best, elapsed)
    return best
