"""Hamiltonian moments K_n = <Phi|H^n|Phi>, connected moments, and the
Horn-Weinstein energy series.

Two independent routes compute the raw moments: the Pauli route expands H^n
as a collected Pauli sum and measures each distinct phaseless string once
(through an expectation cache), while the dense route repeatedly applies H to
the state.  They must agree; tests enforce it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Sequence

import numpy as np

from .errors import (
    CapacityError,
    ContractViolationError,
    InsufficientMomentsError,
)
from .pauli import PauliString, PauliSum
from .statevector import (
    DENSE_QUBIT_LIMIT,
    StateVector,
    apply_pauli_sum,
    pauli_expectation,
)

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class MomentTable:
    """Raw moments K_0..K_max (K_0 = 1) and connected moments I_1..I_max."""

    raw: tuple[float, ...]
    connected: tuple[float, ...] = ()
    max_order: int = field(default=-1)

    def __post_init__(self):
        if len(self.raw) < 2 or self.raw[0] != 1.0:
            raise ValueError("raw moments must start with K_0 = 1")
        if self.max_order == -1:
            object.__setattr__(self, "max_order", len(self.raw) - 1)
        elif self.max_order != len(self.raw) - 1:
            raise ValueError("max_order inconsistent with raw length")
        if self.connected and len(self.connected) != self.max_order:
            raise ValueError("connected moments must cover I_1..I_max")

    def raw_moment(self, n: int) -> float:
        return self.raw[n]

    def connected_moment(self, k: int) -> float:
        if not self.connected:
            raise InsufficientMomentsError("connected moments not derived yet")
        return self.connected[k - 1]


class PauliExpectationCache:
    """Memoized <Phi|P|Phi> per distinct phaseless string, with counters.

    The identity string never reaches the cache; its expectation is exactly 1
    and costs no measurement.
    """

    def __init__(self):
        self.values: dict[tuple[int, int], float] = {}
        self.hits = 0
        self.misses = 0

    def expectation(self, p: PauliString, state: StateVector) -> float:
        key = (p.x_mask, p.z_mask)
        try:
            value = self.values[key]
            self.hits += 1
            return value
        except KeyError:
            self.misses += 1
            value = pauli_expectation(p, state)
            self.values[key] = value
            return value

    def __len__(self) -> int:
        return len(self.values)


def hamiltonian_powers(h: PauliSum, max_order: int) -> list[PauliSum]:
    """[H^1, ..., H^max_order] as collected Pauli sums.

    Iterated sum-times-sum products keep the term count bounded by
    min(M^l, 4**n) instead of enumerating M^l index tuples.
    """
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    powers = [h]
    for _ in range(max_order - 1):
        powers.append(powers[-1] * h)
    return powers


def _real_moment(value: complex, order: int) -> float:
    if abs(value.imag) > _IMAG_TOL * max(1.0, abs(value.real)):
        raise ContractViolationError(
            f"K_{order} has imaginary residual {value.imag:g}"
        )
    return float(value.real)


def raw_moments_pauli(
    h: PauliSum,
    state: StateVector,
    max_order: int,
    cache: PauliExpectationCache | None = None,
    powers: Sequence[PauliSum] | None = None,
    use_cache: bool = True,
) -> tuple[MomentTable, PauliExpectationCache]:
    """Raw moments via the Pauli-product expansion.

    K_l = sum over collected terms c * <Phi|P|Phi>, each distinct phaseless
    string evaluated once through the cache.  Precomputed powers can be
    passed when sweeping many states against one Hamiltonian.
    """
    if not h.is_hermitian():
        raise ContractViolationError("moments require a Hermitian sum")
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    if powers is None:
        powers = hamiltonian_powers(h, max_order)
    elif len(powers) < max_order:
        raise InsufficientMomentsError(
            f"{len(powers)} precomputed powers cannot serve order {max_order}"
        )
    if cache is None:
        cache = PauliExpectationCache()
    raw = [1.0]
    for order in range(1, max_order + 1):
        acc = 0.0 + 0.0j
        for p, c in powers[order - 1].items():
            if p.is_identity:
                acc += c
            elif use_cache:
                acc += c * cache.expectation(p, state)
            else:
                acc += c * pauli_expectation(p, state)
        raw.append(_real_moment(acc, order))
    return MomentTable(tuple(raw)), cache


def raw_moments_dense(
    h: PauliSum,
    state: StateVector,
    max_order: int,
    limit: int = DENSE_QUBIT_LIMIT,
) -> MomentTable:
    """Raw moments via |v_n> = H|v_(n-1)>; the independent oracle route."""
    if not h.is_hermitian():
        raise ContractViolationError("moments require a Hermitian sum")
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    if h.n_qubits > limit:
        raise CapacityError(f"{h.n_qubits} qubits exceeds the dense limit of {limit}")
    raw = [1.0]
    v = state
    for order in range(1, max_order + 1):
        v = apply_pauli_sum(h, v)
        val = complex(np.vdot(state.amplitudes, v.amplitudes))
        raw.append(_real_moment(val, order))
    return MomentTable(tuple(raw))


def connected_moments(table: MomentTable) -> MomentTable:
    """Fill the connected moments

        I_k = K_k - sum_{i=0}^{k-2} C(k-1, i) I_{i+1} K_{k-i-1}

    computed ascending with exact integer binomials."""
    raw = table.raw
    connected: list[float] = []
    for k in range(1, table.max_order + 1):
        value = raw[k]
        for i in range(0, k - 1):
            value -= comb(k - 1, i) * connected[i] * raw[k - i - 1]
        connected.append(value)
    return MomentTable(raw, tuple(connected))


def hw_energy_series(table: MomentTable, tau: float, order: int) -> float:
    """Truncated Horn-Weinstein series sum_{k=0}^{order} (-tau)^k/k! I_{k+1}."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not table.connected:
        raise InsufficientMomentsError("derive connected moments first")
    if order < 0 or order > len(table.connected) - 1:
        raise InsufficientMomentsError(
            f"order {order} needs I_{order + 1}, have I_1..I_{len(table.connected)}"
        )
    return float(
        sum(
            (-tau) ** k / factorial(k) * table.connected[k]
            for k in range(order + 1)
        )
    )


def truncate_hamiltonian(
    h: PauliSum,
    keep: int | None = None,
    threshold: float | None = None,
) -> PauliSum:
    """Reduced Hamiltonian with the largest-|coefficient| terms only.

    Either the `keep` largest terms (ties broken by label order; keep beyond
    the term count returns the sum unchanged) or all terms with |coefficient|
    strictly above `threshold`.
    """
    if (keep is None) == (threshold is None):
        raise ValueError("pass exactly one of keep or threshold")
    if keep is not None:
        if keep < 1:
            raise ValueError(f"keep must be >= 1, got {keep}")
        ranked = sorted(h.items(), key=lambda kv: (-abs(kv[1]), kv[0].label))
        kept = ranked[:keep]
    else:
        if threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {threshold}")
        kept = [(p, c) for p, c in h.items() if abs(c) > threshold]
    return PauliSum(h.n_qubits, kept, h.prune_threshold)


def krylov_vectors(h: PauliSum, state: StateVector, count: int) -> np.ndarray:
    """Rows H^0|Phi>, ..., H^(count-1)|Phi> as a dense array."""
    vectors = [state.amplitudes]
    v = state
    for _ in range(count - 1):
        v = apply_pauli_sum(h, v)
        vectors.append(v.amplitudes)
    return np.array(vectors)


def krylov_rank(
    h: PauliSum,
    state: StateVector,
    max_dim: int | None = None,
    tol: float = 1e-8,
) -> int:
    """Dimension of span{H^k|Phi>} via the Gram-matrix spectrum."""
    dim = 1 << h.n_qubits
    count = dim if max_dim is None else min(max_dim, dim)
    vecs = krylov_vectors(h, state, count)
    norms = np.linalg.norm(vecs, axis=1)
    norms[norms == 0.0] = 1.0
    gram = (vecs / norms[:, None]).conj() @ (vecs / norms[:, None]).T
    eigenvalues = np.linalg.eigvalsh(gram)
    return int(np.sum(eigenvalues > tol * max(eigenvalues.max(), 1.0)))


def reachable_spectrum(
    h: PauliSum,
    state: StateVector,
    tol: float = 1e-8,
) -> np.ndarray:
    """Eigenvalues of H restricted to the Krylov space of |Phi>, ascending.

    Modified Gram-Schmidt on the Krylov chain; directions with residual norm
    below tol are treated as saturated.
    """
    basis: list[np.ndarray] = []
    v = state.amplitudes
    for _ in range(1 << h.n_qubits):
        w = v.copy()
        for _pass in range(2):  # two MGS passes keep the basis orthonormal
            for b in basis:
                w = w - np.vdot(b, w) * b
        norm = np.linalg.norm(w)
        if norm < tol * max(1.0, float(np.linalg.norm(v))):
            break
        basis.append(w / norm)
        v = apply_pauli_sum(h, StateVector(h.n_qubits, basis[-1])).amplitudes
    if not basis:
        return np.array([])
    bmat = np.array(basis)
    columns = [apply_pauli_sum(h, StateVector(h.n_qubits, b)).amplitudes for b in basis]
    projected = bmat.conj() @ np.array(columns).T
    projected = (projected + projected.conj().T) / 2.0
    return np.linalg.eigvalsh(projected)
