"""Shared test oracles.

Everything here is built from literal 2x2 matrices and numpy alone, so the
dense reference route stays independent of the package implementation it
checks.  Qubit 0 is the leftmost label character and the most significant
amplitude index bit, matching the package convention.
"""

import numpy as np
import pytest

from cmxlab.pauli import PauliString, PauliSum

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def label_matrix(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label via explicit kron products."""
    out = np.array([[1.0 + 0.0j]])
    for ch in label:
        out = np.kron(out, SINGLE[ch])
    return out


def dense_of_terms(terms) -> np.ndarray:
    """Dense matrix of [(coeff, label), ...]."""
    n = len(terms[0][1])
    out = np.zeros((2**n, 2**n), dtype=complex)
    for coeff, label in terms:
        out += coeff * label_matrix(label)
    return out


def dense_of_sum(h: PauliSum) -> np.ndarray:
    """Dense matrix of a PauliSum, using only its (label, coefficient) view."""
    return dense_of_terms([(c, p.label) for p, c in h.sorted_items()])


def string_matrix(p: PauliString) -> np.ndarray:
    return (1j**p.phase_exponent) * label_matrix(p.label)


def basis_vector(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def dense_moments(h_dense: np.ndarray, phi: np.ndarray, max_order: int) -> list[float]:
    """K_0..K_max by repeated dense matrix application."""
    values = [1.0]
    v = phi.copy()
    for _ in range(max_order):
        v = h_dense @ v
        values.append(float(np.real(np.vdot(phi, v))))
    return values


def dense_reachable_spectrum(h_dense: np.ndarray, phi: np.ndarray, tol=1e-10) -> np.ndarray:
    """Eigenvalues of h restricted to the Krylov span of phi (dense route)."""
    basis = []
    v = phi.copy()
    for _ in range(h_dense.shape[0]):
        w = v.copy()
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        norm = np.linalg.norm(w)
        if norm < tol * max(1.0, np.linalg.norm(v)):
            break
        basis.append(w / norm)
        v = h_dense @ basis[-1]
    bmat = np.array(basis)
    block = bmat.conj() @ h_dense @ bmat.T
    block = (block + block.conj().T) / 2.0
    return np.linalg.eigvalsh(block)


_LABEL_CHARS = "IXYZ"


def random_label(rng: np.random.Generator, n: int) -> str:
    return "".join(_LABEL_CHARS[i] for i in rng.integers(0, 4, size=n))


def random_hermitian_sum(rng: np.random.Generator, n: int, n_terms: int) -> PauliSum:
    """Random real-coefficient sum; coefficients stay O(1) so high moments
    do not swamp float precision."""
    terms = [
        (float(rng.uniform(-1.0, 1.0)), random_label(rng, n))
        for _ in range(n_terms)
    ]
    return PauliSum.from_label_terms(terms, n_qubits=n)


def siam_caption_terms(U: float, mu: float, eps0: float, eps1: float, V: float):
    """Impurity-model terms expanded by hand, independent of models.py."""
    t = [
        (U / 4, "IIII"), (-U / 4, "ZIII"), (-U / 4, "IIZI"), (U / 4, "ZIZI"),
        ((eps0 - mu), "IIII"), (-(eps0 - mu) / 2, "ZIII"), (-(eps0 - mu) / 2, "IIZI"),
        ((eps1 - mu), "IIII"), (-(eps1 - mu) / 2, "IZII"), (-(eps1 - mu) / 2, "IIIZ"),
        (V / 2, "XXII"), (V / 2, "YYII"), (V / 2, "IIXX"), (V / 2, "IIYY"),
    ]
    return t


def h2_block_eigenvalues(g) -> tuple[float, float]:
    """Eigenvalues of the {|01>,|10>} block of the six-term two-qubit model,
    from the hand-reduced 2x2 matrix."""
    g0, g1, g2, g3, g4, g5 = g
    d1 = g0 + g1 - g2 - g3
    d2 = g0 - g1 + g2 - g3
    off = g4 + g5
    mid = (d1 + d2) / 2.0
    rad = np.sqrt(((d1 - d2) / 2.0) ** 2 + off**2)
    return (mid - rad, mid + rad)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
