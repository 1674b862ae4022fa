"""Exact group algebra of n-qubit Pauli strings and Hamiltonians as Pauli sums.

A string is stored in symplectic form: bit q of ``x_mask`` / ``z_mask`` marks
an X / Z component on qubit q, and a quartic phase exponent tracks the global
prefactor, so the operator value is

    i**phase_exponent * prod_q P(x_q, z_q)

with P(0,0)=I, P(1,0)=X, P(0,1)=Z and P(1,1)=Y.  The convention Y = i*X*Z is
used internally when multiplying; a string with phase_exponent = 0 is
Hermitian, unitary, and squares to the identity.

Labels are read left to right as qubit 0..n-1, e.g. "XIZ" puts X on qubit 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import DimensionMismatchError, HamiltonianParseError

_BITS_FROM_CHAR = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_CHAR_FROM_BITS = {v: k for k, v in _BITS_FROM_CHAR.items()}
_PHASE_PREFIX = {0: "", 1: "i*", 2: "-", 3: "-i*"}

DEFAULT_PRUNE_THRESHOLD = 1e-12


@dataclass(frozen=True, slots=True)
class PauliString:
    """A phased tensor product of single-qubit Pauli/identity operators."""

    n_qubits: int
    x_mask: int
    z_mask: int
    phase_exponent: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if not 0 <= self.x_mask <= full or not 0 <= self.z_mask <= full:
            raise ValueError("mask exceeds the qubit count")
        if self.phase_exponent not in (0, 1, 2, 3):
            object.__setattr__(self, "phase_exponent", self.phase_exponent % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str, phase_exponent: int = 0) -> "PauliString":
        """Build from a character label such as "XYIZ" (qubit 0 leftmost)."""
        x = z = 0
        for q, ch in enumerate(label):
            try:
                xq, zq = _BITS_FROM_CHAR[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}") from None
            x |= xq << q
            z |= zq << q
        return cls(len(label), x, z, phase_exponent % 4)

    @property
    def label(self) -> str:
        """Character label of the phaseless part, qubit 0 leftmost."""
        return "".join(
            _CHAR_FROM_BITS[(self.x_mask >> q & 1, self.z_mask >> q & 1)]
            for q in range(self.n_qubits)
        )

    @property
    def is_phaseless(self) -> bool:
        return self.phase_exponent == 0

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def phase(self) -> complex:
        return 1j ** self.phase_exponent

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return (self.x_mask | self.z_mask).bit_count()

    def phaseless(self) -> "PauliString":
        if self.phase_exponent == 0:
            return self
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, 0)

    def commutes_with(self, other: "PauliString") -> bool:
        """Group commutation: a*b = +-b*a with sign given by the symplectic
        inner product of the masks."""
        _check_dims(self, other)
        sign = (self.x_mask & other.z_mask).bit_count() + (self.z_mask & other.x_mask).bit_count()
        return sign % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase_exponent] + self.label


def _check_dims(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError(
            f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}"
        )


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact group product a*b as a single phased string.

    Writing each factor in X^x Z^z form costs a phase i per Y site; commuting
    the inner Z past X picks up (-1) per overlapping bit; converting back to
    the canonical Y representation refunds a phase i per Y site of the result.
    """
    _check_dims(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    exponent = (
        a.phase_exponent
        + b.phase_exponent
        + (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
        - (x & z).bit_count()
    )
    return PauliString(a.n_qubits, x, z, exponent % 4)


def reduce_product(factors: Iterable[PauliString], n_qubits: int | None = None) -> PauliString:
    """Left-fold of `multiply`, reducing a product of strings to one string.

    An empty product is the identity; pass n_qubits to fix its size.
    """
    factors = list(factors)
    if not factors:
        if n_qubits is None:
            raise ValueError("empty product needs an explicit n_qubits")
        return PauliString.identity(n_qubits)
    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    return out


class PauliSum:
    """A Hamiltonian H = sum_j h_j P_j over phaseless strings.

    Canonical map from phaseless PauliString to a complex coefficient; phases
    on input keys are folded into the coefficients, repeated keys are merged,
    and coefficients with magnitude below the prune threshold are dropped.
    Instances are immutable; arithmetic returns new sums.
    """

    __slots__ = ("n_qubits", "prune_threshold", "_terms")

    def __init__(
        self,
        n_qubits: int,
        terms: Mapping[PauliString, complex] | Iterable[tuple[PauliString, complex]] = (),
        prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    ):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        self.n_qubits = n_qubits
        self.prune_threshold = prune_threshold
        collected: dict[PauliString, complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for p, c in items:
            if p.n_qubits != n_qubits:
                raise DimensionMismatchError(
                    f"term acts on {p.n_qubits} qubits, sum on {n_qubits}"
                )
            key = p.phaseless()
            collected[key] = collected.get(key, 0.0) + complex(c) * p.phase
        self._terms = {
            p: c for p, c in collected.items() if abs(c) >= prune_threshold
        }

    @classmethod
    def from_label_terms(
        cls,
        coeff_labels: Iterable[tuple[complex, str]],
        n_qubits: int | None = None,
        prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    ) -> "PauliSum":
        pairs = []
        for c, label in coeff_labels:
            p = PauliString.from_label(label)
            if n_qubits is None:
                n_qubits = p.n_qubits
            pairs.append((p, c))
        if n_qubits is None:
            raise ValueError("empty term list needs an explicit n_qubits")
        return cls(n_qubits, pairs, prune_threshold)

    def items(self) -> Iterator[tuple[PauliString, complex]]:
        return iter(self._terms.items())

    def sorted_items(self) -> list[tuple[PauliString, complex]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].label)

    def coefficient(self, p: PauliString) -> complex:
        c = self._terms.get(p.phaseless(), 0.0)
        if p.phase_exponent and c:
            c = c * (-1j) ** p.phase_exponent
        return c

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, p: PauliString) -> bool:
        return p.phaseless() in self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError("cannot add sums on different qubit counts")
        merged = dict(self._terms)
        for p, c in other._terms.items():
            merged[p] = merged.get(p, 0.0) + c
        return PauliSum(self.n_qubits, merged, self.prune_threshold)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "PauliSum":
        return PauliSum(
            self.n_qubits,
            {p: c * factor for p, c in self._terms.items()},
            self.prune_threshold,
        )

    def __mul__(self, other: "PauliSum") -> "PauliSum":
        """Operator product with term collection.

        Cost is |A|*|B| products funneled into at most 4**n collected keys,
        which is what keeps high Hamiltonian powers affordable.
        """
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError("cannot multiply sums on different qubit counts")
        collected: dict[PauliString, complex] = {}
        for pa, ca in self._terms.items():
            for pb, cb in other._terms.items():
                q = multiply(pa, pb)
                key = q.phaseless()
                collected[key] = collected.get(key, 0.0) + ca * cb * q.phase
        return PauliSum(self.n_qubits, collected, self.prune_threshold)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        """True when every canonical coefficient is real within tol
        (relative to the largest coefficient magnitude)."""
        if not self._terms:
            return True
        scale = max(abs(c) for c in self._terms.values())
        return all(abs(c.imag) <= tol * max(1.0, scale) for c in self._terms.values())

    def coefficient_norm(self) -> float:
        """Sum of |h_j|; an upper bound on the operator norm."""
        return sum(abs(c) for c in self._terms.values())

    def __repr__(self) -> str:
        return f"PauliSum(n_qubits={self.n_qubits}, terms={len(self._terms)})"


_HEADER_RE = re.compile(r"^\s*([A-Za-z_][\w.-]*)\s*=\s*(.*?)\s*$")
_LABEL_RE = re.compile(r"^[IXYZ]+$")


def parse_pauli_sum(text: str, prune_threshold: float = DEFAULT_PRUNE_THRESHOLD) -> PauliSum:
    """Parse the Hamiltonian text format.

    Term lines are ``<real> [<imag>] <label>``; ``#`` starts a comment.
    Optional ``key = value`` header lines may precede the terms; an
    ``n_qubits`` header fixes the size (required when there are no terms).
    Repeated labels are summed.
    """
    n_qubits: int | None = None
    pairs: list[tuple[PauliString, complex]] = []
    in_header = True
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if in_header:
            m = _HEADER_RE.match(line)
            if m:
                key, value = m.group(1), m.group(2)
                if key == "n_qubits":
                    try:
                        n_qubits = int(value)
                    except ValueError:
                        raise HamiltonianParseError(
                            f"n_qubits must be an integer, got {value!r}", lineno
                        ) from None
                    if n_qubits < 1:
                        raise HamiltonianParseError("n_qubits must be positive", lineno)
                continue
            in_header = False
        fields = line.split()
        if len(fields) == 2:
            re_str, im_str, label = fields[0], "0", fields[1]
        elif len(fields) == 3:
            re_str, im_str, label = fields
        else:
            raise HamiltonianParseError(
                f"expected '<real> [<imag>] <label>', got {line!r}", lineno
            )
        if not _LABEL_RE.match(label):
            raise HamiltonianParseError(f"invalid Pauli label {label!r}", lineno)
        if n_qubits is None:
            n_qubits = len(label)
        if len(label) != n_qubits:
            raise HamiltonianParseError(
                f"label {label!r} has length {len(label)}, expected {n_qubits}", lineno
            )
        try:
            coeff = complex(float(re_str), float(im_str))
        except ValueError:
            raise HamiltonianParseError(f"bad coefficient in {line!r}", lineno) from None
        pairs.append((PauliString.from_label(label), coeff))
    if n_qubits is None:
        raise HamiltonianParseError("no terms and no n_qubits header")
    return PauliSum(n_qubits, pairs, prune_threshold)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def serialize_pauli_sum(h: PauliSum, metadata: Mapping[str, str] | None = None) -> str:
    """Canonical text form: n_qubits header, optional metadata lines, then
    one term per line sorted by label, floats at 17 significant digits."""
    lines = [f"n_qubits = {h.n_qubits}"]
    for key, value in (metadata or {}).items():
        if key == "n_qubits":
            continue
        lines.append(f"{key} = {value}")
    for p, c in h.sorted_items():
        if c.imag == 0.0:
            lines.append(f"{_fmt(c.real)} {p.label}")
        else:
            lines.append(f"{_fmt(c.real)} {_fmt(c.imag)} {p.label}")
    return "\n".join(lines) + "\n"
