"""Peeters-Devreese-Soldatov expansion: moment linear system, polynomial
roots, and variational energy bounds.

At order n the raw moments define the symmetric Hankel system M a = -b with
M_ij = K_(2n-(i+j)) and b_i = K_(2n-i); the roots of

    P_n(x) = x^n + a_1 x^(n-1) + ... + a_n

are upper bounds to the lowest n eigenvalues reachable from the trial state.
M is a Gram matrix of Krylov vectors, so once the Krylov chain saturates it
is rank-deficient by construction; the solve must survive that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import spectral_condition, spectral_solve, symmetric_spectrum
from .errors import DegenerateRootsError, InsufficientMomentsError
from .moments import MomentTable

CONDITION_THRESHOLD = 1e10
PINV_CUTOFF = 1e-10
IMAG_ROOT_TOLERANCE = 1e-8
_NEWTON_STEPS = 3


@dataclass(frozen=True)
class PdsResult:
    """Polynomial coefficients, roots, and solve diagnostics for PDS(n).

    Roots whose imaginary part exceeds the policy tolerance (they appear
    under noisy moments) are kept in `roots` but excluded from
    `real_roots_sorted` and from the energy bounds.
    """

    order: int
    coefficients: tuple[float, ...]
    roots: tuple[complex, ...]
    real_roots_sorted: tuple[float, ...]
    ground_energy: float
    condition_number: float
    used_pseudo_inverse: bool


def _raw_values(moments: MomentTable | Sequence[float]) -> list[float]:
    if isinstance(moments, MomentTable):
        return list(moments.raw)
    values = [float(v) for v in moments]
    if not values or values[0] != 1.0:
        raise ValueError("raw moments must start with K_0 = 1")
    return values


def build_pds_system(
    moments: MomentTable | Sequence[float], order: int
) -> tuple[np.ndarray, np.ndarray]:
    """The Hankel matrix M_ij = K_(2n-(i+j)) and vector b_i = K_(2n-i)."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    raw = _raw_values(moments)
    if len(raw) < 2 * order:
        raise InsufficientMomentsError(
            f"PDS({order}) needs K_0..K_{2 * order - 1}, have K_0..K_{len(raw) - 1}"
        )
    m = np.array(
        [[raw[2 * order - (i + j)] for j in range(1, order + 1)] for i in range(1, order + 1)]
    )
    b = np.array([raw[2 * order - i] for i in range(1, order + 1)])
    return m, b


def _horner(coefficients: np.ndarray, x: complex) -> complex:
    value = x * 0.0
    for c in coefficients:
        value = value * x + complex(c)
    return value


def _polish_roots(coefficients: np.ndarray, roots: np.ndarray) -> list[complex]:
    """A few Newton steps per companion-matrix root, in extended precision."""
    degree = len(coefficients) - 1
    derivative = coefficients[:-1] * np.arange(degree, 0, -1, dtype=np.longdouble)
    polished = []
    for root in roots:
        x = np.clongdouble(root)
        for _ in range(_NEWTON_STEPS):
            slope = _horner(derivative, x)
            if abs(slope) < 1e-300:
                break
            x = x - _horner(coefficients, x) / slope
        polished.append(complex(x))
    return polished


def solve_pds(
    moments: MomentTable | Sequence[float],
    order: int,
    cond_threshold: float = CONDITION_THRESHOLD,
    pinv_cutoff: float = PINV_CUTOFF,
    imag_tol: float = IMAG_ROOT_TOLERANCE,
) -> PdsResult:
    """Solve M a = -b, root the polynomial, and apply the complex-root policy.

    The symmetric solve uses the extended-precision Jacobi spectrum.  A
    condition number beyond the threshold means the Krylov chain saturated
    below the requested order; the system is then reduced to its numerical
    rank, whose roots are the genuine nodes, and the polynomial is padded
    with roots at the mean energy K_1.  The padding is deterministic,
    shift-covariant, and always inside the node hull, unlike the arbitrary
    extra root a raw minimal-norm solve would add.
    """
    raw = _raw_values(moments)
    return _solve(raw, order, cond_threshold, pinv_cutoff, imag_tol)


def _solve(
    raw: list[float],
    order: int,
    cond_threshold: float,
    pinv_cutoff: float,
    imag_tol: float,
) -> PdsResult:
    m, b = build_pds_system(raw, order)
    w, v = symmetric_spectrum(m)
    condition = spectral_condition(w)
    used_pinv = not np.isfinite(condition) or condition > cond_threshold

    if used_pinv:
        magnitudes = np.abs(np.asarray(w, dtype=float))
        rank = int(np.sum(magnitudes > pinv_cutoff * magnitudes.max()))
        if rank < 1:
            raise DegenerateRootsError(
                f"PDS({order}) moment matrix is numerically zero",
                diagnostics={"condition_number": condition, "used_pseudo_inverse": True},
            )
        if rank < order:
            inner = _solve(raw, rank, cond_threshold, pinv_cutoff, imag_tol)
            return _pad_to_order(inner, raw, order, condition, imag_tol)
        solution = spectral_solve(w, v, -b, pinv_cutoff)
    else:
        solution = spectral_solve(w, v, -b)
    coefficients = np.concatenate([np.ones(1, dtype=np.longdouble), solution])

    companion_roots = np.roots(coefficients.astype(np.float64))
    roots = _polish_roots(coefficients, companion_roots)
    retained = sorted(
        r.real for r in roots if abs(r.imag) <= imag_tol * (1.0 + abs(r.real))
    )
    if not retained:
        raise DegenerateRootsError(
            f"PDS({order}) produced no real roots within the policy tolerance",
            diagnostics={
                "roots": tuple(roots),
                "condition_number": condition,
                "used_pseudo_inverse": used_pinv,
            },
        )
    return PdsResult(
        order=order,
        coefficients=tuple(float(c) for c in coefficients),
        roots=tuple(roots),
        real_roots_sorted=tuple(retained),
        ground_energy=retained[0],
        condition_number=condition,
        used_pseudo_inverse=used_pinv,
    )


def _pad_to_order(
    inner: PdsResult,
    raw: list[float],
    order: int,
    condition: float,
    imag_tol: float,
) -> PdsResult:
    """Lift a saturated rank-r result to the requested order by appending
    roots at the mean energy."""
    mean = raw[1]
    extra = order - inner.order
    coefficients = np.asarray(inner.coefficients, dtype=np.longdouble)
    for _ in range(extra):
        coefficients = np.convolve(
            coefficients, np.array([1.0, -mean], dtype=np.longdouble)
        )
    roots = tuple(inner.roots) + (complex(mean),) * extra
    retained = sorted(
        r.real for r in roots if abs(r.imag) <= imag_tol * (1.0 + abs(r.real))
    )
    return PdsResult(
        order=order,
        coefficients=tuple(float(c) for c in coefficients),
        roots=roots,
        real_roots_sorted=tuple(retained),
        ground_energy=retained[0],
        condition_number=condition,
        used_pseudo_inverse=True,
    )


def pds_excited_bounds(result: PdsResult) -> tuple[float, ...]:
    """Retained real roots ascending; root k bounds the k-th reachable level
    from above while the order stays within the Krylov dimension."""
    return result.real_roots_sorted
