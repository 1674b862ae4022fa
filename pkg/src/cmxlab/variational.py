"""Estimator energy as a function of a single-generator trial rotation:
grid scan plus derivative-free refinement of the best point.

The rotated trial is exp(i*theta*G)|base> for a phaseless generator G; the
Pauli expansion of each Hamiltonian power is computed once and reused across
the whole grid, so only the expectations change per angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularScanError
from .methods import MethodSpec, evaluate_method, parse_method
from .moments import (
    MomentTable,
    connected_moments,
    hamiltonian_powers,
    raw_moments_pauli,
)
from .pauli import PauliString, PauliSum
from .statevector import StateVector, apply_generator_rotation

GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_GRID_POINTS = 81


def default_theta_grid(points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Uniform grid over [-pi/2, pi/2]; spans a full period of the scan."""
    return np.linspace(-math.pi / 2.0, math.pi / 2.0, points)


@dataclass(frozen=True)
class ScanResult:
    """Per-angle energies with low-order moment diagnostics, plus the
    refined minimizer."""

    theta_grid: tuple[float, ...]
    energies: tuple[float, ...]
    i1: tuple[float, ...]
    i2: tuple[float, ...]
    i3: tuple[float, ...]
    singular_flags: tuple[bool, ...]
    theta_opt: float
    energy_opt: float
    moments_at_opt: MomentTable


@dataclass(frozen=True)
class DeviationReport:
    """Deviation of the scan against a reference energy, before and after
    rotation."""

    dev_at_zero: float
    dev_at_opt: float
    improvement_factor: float
    infinite_improvement: bool


def _golden_section(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of fn on [lo, hi] to width tol.

    Derivative-free on purpose: estimator curves can have kinks where the
    root ordering changes.
    """
    x1 = hi - GOLDEN_RATIO * (hi - lo)
    x2 = lo + GOLDEN_RATIO * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN_RATIO * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN_RATIO * (hi - lo)
            f2 = fn(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def energy_vs_theta(
    h: PauliSum,
    base: StateVector,
    generator: PauliString,
    method: MethodSpec | str,
    theta_grid: Sequence[float] | None = None,
    refine: bool = True,
    refine_tol: float = 1e-6,
) -> ScanResult:
    """Scan the estimator over rotation angles and refine the best point.

    Singular grid points are recorded with their flag and excluded from the
    minimum; if every point is singular the full diagnostic sweep is raised.
    """
    spec = parse_method(method) if isinstance(method, str) else method
    grid = default_theta_grid() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("theta grid must be nonempty")
    max_order = max(spec.required_max_order, 3)
    powers = hamiltonian_powers(h, max_order)

    def table_at(theta: float) -> MomentTable:
        state = apply_generator_rotation(theta, generator, base)
        table, _ = raw_moments_pauli(h, state, max_order, powers=powers)
        return connected_moments(table)

    def value_at(theta: float) -> tuple[float, MomentTable, bool]:
        table = table_at(theta)
        value = evaluate_method(spec, table)
        bad = value.singular_flag or not math.isfinite(value.energy)
        return value.energy, table, bad

    energies, i1s, i2s, i3s, flags = [], [], [], [], []
    for theta in grid:
        energy, table, bad = value_at(float(theta))
        energies.append(energy)
        i1s.append(table.connected[0])
        i2s.append(table.connected[1])
        i3s.append(table.connected[2])
        flags.append(bad)

    usable = [i for i, bad in enumerate(flags) if not bad]
    if not usable:
        raise SingularScanError(
            f"{spec} is singular at every grid point",
            diagnostics={"theta_grid": tuple(map(float, grid)), "flags": tuple(flags)},
        )
    best = min(usable, key=lambda i: energies[i])
    theta_opt, energy_opt = float(grid[best]), energies[best]

    if refine and grid.size > 1:
        lo = float(grid[max(best - 1, 0)])
        hi = float(grid[min(best + 1, grid.size - 1)])

        def objective(theta: float) -> float:
            energy, _, bad = value_at(theta)
            return math.inf if bad else energy

        theta_ref, energy_ref = _golden_section(objective, lo, hi, refine_tol)
        if energy_ref <= energy_opt:
            theta_opt, energy_opt = theta_ref, energy_ref

    return ScanResult(
        theta_grid=tuple(map(float, grid)),
        energies=tuple(energies),
        i1=tuple(i1s),
        i2=tuple(i2s),
        i3=tuple(i3s),
        singular_flags=tuple(flags),
        theta_opt=theta_opt,
        energy_opt=energy_opt,
        moments_at_opt=table_at(theta_opt),
    )


def deviation_report(scan: ScanResult, reference: float) -> DeviationReport:
    """Absolute deviations against a reference at theta = 0 and at the
    optimum; the improvement factor is flagged infinite when the optimum
    lands exactly on the reference."""
    if not math.isfinite(reference):
        raise ValueError("reference must be finite")
    zero_index = min(
        range(len(scan.theta_grid)), key=lambda i: abs(scan.theta_grid[i])
    )
    dev_zero = abs(scan.energies[zero_index] - reference)
    dev_opt = abs(scan.energy_opt - reference)
    if dev_opt == 0.0:
        return DeviationReport(dev_zero, dev_opt, math.inf, True)
    return DeviationReport(dev_zero, dev_opt, dev_zero / dev_opt, False)
