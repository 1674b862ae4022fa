"""Connected-moments expansion solvers.

Two resummations of the Horn-Weinstein series are provided: the Cioslowski
nested form, computed through its S-table recursion, and the Knowles
generalized Pade form, computed as a moment linear system.  Both return I_1
at first order and agree at second order whenever I_3 is usable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import spectral_condition, spectral_solve, symmetric_spectrum
from .errors import InsufficientMomentsError
from .moments import MomentTable

SINGULARITY_TOLERANCE = 1e-10
KNOWLES_CONDITION_THRESHOLD = 1e8
KNOWLES_PINV_CUTOFF = 1e-10


@dataclass(frozen=True)
class CmxResult:
    """Energy of one CMX variant with its denominator diagnostics.

    energies holds the partial expansion E(1..K); on a singular denominator
    the expansion freezes at the last finite partial sum and singular_flag is
    set, so sweep outputs never carry NaN.
    """

    method: str
    order: int
    energy: float
    energies: tuple[float, ...]
    denominators: tuple[tuple[str, float], ...]
    singular_flag: bool
    condition_number: float | None = None


def _connected_values(moments: MomentTable | Sequence[float]) -> list[float]:
    if isinstance(moments, MomentTable):
        values = list(moments.connected)
        if not values:
            raise InsufficientMomentsError("moment table has no connected moments")
        return values
    return [float(v) for v in moments]


def _require(values: list[float], count: int, order: int) -> None:
    if len(values) < count:
        raise InsufficientMomentsError(
            f"order {order} needs I_1..I_{count}, have {len(values)}"
        )


def _singular_scale(values: list[float]) -> float:
    return max(1.0, max(abs(v) for v in values))


def _s_table(ivals: list[float], order: int) -> dict[tuple[int, int], float]:
    """S[k,1] = I_k; S[k,i+1] = S[k,1] S[k+2,i] - S[k+1,i]^2."""
    kmax = 2 * order - 1
    table: dict[tuple[int, int], float] = {
        (k, 1): ivals[k - 1] for k in range(2, kmax + 1)
    }
    for i in range(1, order - 1):
        for k in range(2, kmax - 2 * i + 1):
            table[(k, i + 1)] = table[(k, 1)] * table[(k + 2, i)] - table[(k + 1, i)] ** 2
    return table


def cmx_cioslowski(
    moments: MomentTable | Sequence[float],
    order: int,
    singular_tol: float = SINGULARITY_TOLERANCE,
) -> CmxResult:
    """Cioslowski CMX(K) through the S-table recursion.

    The nested expansion telescopes to

        E(K) = I_1 - sum_{m=1}^{K-1} S[2,m]^2 / (S[3,1] ... S[3,m])

    so the denominators that can poison the expansion are exactly the S[3,m].
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    ivals = _connected_values(moments)
    _require(ivals, 2 * order - 1, order)
    table = _s_table(ivals, order)

    scale = _singular_scale(ivals)
    energies = [ivals[0]]
    denominators: list[tuple[str, float]] = []
    singular = False
    denominator_product = 1.0
    for m in range(1, order):
        s3m = table[(3, m)]
        denominators.append((f"S[3,{m}]", s3m))
        if singular or abs(s3m) < singular_tol * scale:
            singular = True
            energies.append(energies[-1])
            continue
        denominator_product *= s3m
        energies.append(energies[-1] - table[(2, m)] ** 2 / denominator_product)
    return CmxResult(
        method="cioslowski",
        order=order,
        energy=energies[-1],
        energies=tuple(energies),
        denominators=tuple(denominators),
        singular_flag=singular,
    )


def cmx_closed_form(moments: MomentTable | Sequence[float], order: int) -> float:
    """Literal second/third-order closed forms; the oracle for the recursion.

    No singularity guards here: a zero I_3 raises ZeroDivisionError.  Use
    cmx_cioslowski for guarded evaluation.
    """
    ivals = _connected_values(moments)
    if order == 2:
        _require(ivals, 3, 2)
        i1, i2, i3 = ivals[:3]
        return i1 - i2**2 / i3
    if order == 3:
        _require(ivals, 5, 3)
        i1, i2, i3, i4, i5 = ivals[:5]
        return i1 - i2**2 / i3 - (1.0 / i3) * (i2 * i4 - i3**2) ** 2 / (i5 * i3 - i4**2)
    raise ValueError(f"closed forms exist for orders 2 and 3 only, got {order}")


def cmx_knowles(
    moments: MomentTable | Sequence[float],
    order: int,
    cond_threshold: float = KNOWLES_CONDITION_THRESHOLD,
    pinv_cutoff: float = KNOWLES_PINV_CUTOFF,
) -> CmxResult:
    """Knowles generalized-Pade CMX(K): E = I_1 - b^T A^-1 b with
    b_i = I_(i+1) and A_ij = I_(i+j+1) for i,j = 1..K-1.

    The solve runs on the extended-precision symmetric spectrum.  Eigenvalues
    below pinv_cutoff relative to max(1, max|I|) are truncated and flag the
    result singular; the moment scale matters because a uniformly tiny A has
    a perfect condition number yet still poisons the quadratic form.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    ivals = _connected_values(moments)
    _require(ivals, 2 * order - 1, order)
    cutoff = pinv_cutoff * _singular_scale(ivals)

    energies: list[float] = [ivals[0]]
    singular = False
    condition = None
    det = None
    for k in range(2, order + 1):
        size = k - 1
        b = np.array([ivals[i] for i in range(1, size + 1)], dtype=float)
        a = np.array(
            [[ivals[i + j] for j in range(1, size + 1)] for i in range(1, size + 1)],
            dtype=float,
        )
        w, v = symmetric_spectrum(a)
        cond = spectral_condition(w)
        rcond = pinv_cutoff if (not np.isfinite(cond) or cond > cond_threshold) else 0.0
        solution = spectral_solve(w, v, b, rcond, absolute_cutoff=cutoff)
        energies.append(float(ivals[0] - np.dot(b, np.asarray(solution, dtype=float))))
        if k == order:
            condition = cond
            det = float(np.prod(np.asarray(w, dtype=float))) if w.size else 1.0
            magnitudes = np.abs(np.asarray(w, dtype=float))
            singular = bool(
                magnitudes.min() <= max(cutoff, pinv_cutoff * magnitudes.max())
            )
    denominators = () if det is None else ((f"det(A[{order - 1}])", det),)
    return CmxResult(
        method="knowles",
        order=order,
        energy=energies[-1],
        energies=tuple(energies),
        denominators=denominators,
        singular_flag=singular,
        condition_number=condition,
    )


@dataclass(frozen=True)
class SingularityFinding:
    label: str
    value: float
    affected: str


def singularity_report(
    moments: MomentTable | Sequence[float],
    tolerance: float | None = None,
) -> tuple[SingularityFinding, ...]:
    """Near-zero denominators and the method/order each would poison.

    Feeds the CLI hint for choosing an expansion that avoids small
    denominators; automatic selection stays off.
    """
    ivals = _connected_values(moments)
    if tolerance is None:
        tolerance = SINGULARITY_TOLERANCE * _singular_scale(ivals)
    findings: list[SingularityFinding] = []
    max_order = (len(ivals) + 1) // 2
    if max_order >= 2:
        table = _s_table(ivals, max_order)
        for m in range(1, max_order):
            value = table[(3, m)]
            if abs(value) < tolerance:
                findings.append(
                    SingularityFinding(f"S[3,{m}]", value, f"cmx-cioslowski({m + 1})")
                )
    if len(ivals) >= 3 and abs(ivals[2]) < tolerance:
        findings.append(SingularityFinding("I_3", ivals[2], "cmx closed forms (2, 3)"))
    for k in range(2, max_order + 1):
        size = k - 1
        a = np.array(
            [[ivals[i + j] for j in range(1, size + 1)] for i in range(1, size + 1)],
            dtype=float,
        )
        det = float(np.linalg.det(a))
        if abs(det) < tolerance:
            findings.append(SingularityFinding(f"det(A[{size}])", det, f"cmx-knowles({k})"))
    return tuple(findings)
