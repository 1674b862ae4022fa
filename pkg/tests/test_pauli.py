"""Pauli string algebra and Hamiltonian text format."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmxlab.errors import DimensionMismatchError, HamiltonianParseError
from cmxlab.pauli import (
    PauliString,
    PauliSum,
    multiply,
    parse_pauli_sum,
    reduce_product,
    serialize_pauli_sum,
)

from conftest import dense_of_sum, random_hermitian_sum, random_label, string_matrix


def strings(max_qubits=4, phaseless=False):
    def build(n, x, z, e):
        return PauliString(n, x % (1 << n), z % (1 << n), 0 if phaseless else e)

    return st.builds(
        build,
        st.integers(1, max_qubits),
        st.integers(0, 15),
        st.integers(0, 15),
        st.integers(0, 3),
    )


def pairs(max_qubits=3):
    def build(n, x1, z1, e1, x2, z2, e2):
        m = (1 << n) - 1
        return (
            PauliString(n, x1 & m, z1 & m, e1),
            PauliString(n, x2 & m, z2 & m, e2),
        )

    return st.builds(
        build,
        st.integers(1, max_qubits),
        st.integers(0, 15), st.integers(0, 15), st.integers(0, 3),
        st.integers(0, 15), st.integers(0, 15), st.integers(0, 3),
    )


class TestMultiply:
    def test_x_times_y_is_iz(self):
        result = multiply(PauliString.from_label("X"), PauliString.from_label("Y"))
        assert result.label == "Z"
        assert result.phase_exponent == 1

    def test_xx_times_yy_is_minus_zz(self):
        result = multiply(PauliString.from_label("XX"), PauliString.from_label("YY"))
        assert result.label == "ZZ"
        assert result.phase_exponent == 2

    @given(strings(phaseless=True))
    def test_involution(self, p):
        square = multiply(p, p)
        assert square.is_identity
        assert square.phase_exponent == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            multiply(PauliString.from_label("X"), PauliString.from_label("XX"))

    @given(pairs())
    @settings(max_examples=150)
    def test_group_closure(self, pair):
        a, b = pair
        c = multiply(a, b)
        assert c.phase_exponent in (0, 1, 2, 3)
        assert c.x_mask < (1 << a.n_qubits) and c.z_mask < (1 << a.n_qubits)

    @given(pairs())
    @settings(max_examples=100)
    def test_matches_dense(self, pair):
        a, b = pair
        product = string_matrix(a) @ string_matrix(b)
        assert np.allclose(string_matrix(multiply(a, b)), product, atol=1e-12)

    @given(pairs())
    @settings(max_examples=100)
    def test_commutation_sign(self, pair):
        a, b = pair
        ab, ba = multiply(a, b), multiply(b, a)
        assert (ab.x_mask, ab.z_mask) == (ba.x_mask, ba.z_mask)
        same_phase = ab.phase_exponent == ba.phase_exponent
        assert a.commutes_with(b) == same_phase
        symplectic = (
            (a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()
        ) % 2
        assert a.commutes_with(b) == (symplectic == 0)

    def test_associativity_sample(self, rng):
        for _ in range(50):
            a, b, c = (
                PauliString.from_label(random_label(rng, 3), int(rng.integers(0, 4)))
                for _ in range(3)
            )
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


class TestReduceProduct:
    def test_triple_x(self):
        x = PauliString.from_label("X")
        assert reduce_product([x, x, x]) == x

    def test_commuting_z_cancel(self):
        zi = PauliString.from_label("ZI")
        ix = PauliString.from_label("IX")
        assert reduce_product([zi, ix, zi]) == ix

    def test_empty_is_identity(self):
        assert reduce_product([], n_qubits=3) == PauliString.identity(3)

    def test_empty_without_size(self):
        with pytest.raises(ValueError):
            reduce_product([])

    def test_random_three_factor_vs_dense(self, rng):
        for _ in range(40):
            factors = [PauliString.from_label(random_label(rng, 3)) for _ in range(3)]
            dense = string_matrix(factors[0])
            for f in factors[1:]:
                dense = dense @ string_matrix(f)
            assert np.allclose(string_matrix(reduce_product(factors)), dense, atol=1e-12)


class TestPauliString:
    def test_label_round_trip(self):
        for label in ("I", "XYZI", "ZZ", "YXIZ"):
            assert PauliString.from_label(label).label == label

    def test_phaseless_is_hermitian_unitary_dense(self, rng):
        for _ in range(20):
            p = PauliString.from_label(random_label(rng, 3))
            m = string_matrix(p)
            assert np.allclose(m, m.conj().T, atol=1e-12)
            assert np.allclose(m @ m, np.eye(8), atol=1e-12)

    def test_bad_label(self):
        with pytest.raises(ValueError):
            PauliString.from_label("XQ")

    def test_mask_bounds(self):
        with pytest.raises(ValueError):
            PauliString(1, 2, 0)


class TestPauliSum:
    def test_merge_repeated_labels(self):
        s = PauliSum.from_label_terms([(1.0, "ZI"), (2.0, "ZI")])
        assert len(s) == 1
        assert s.coefficient(PauliString.from_label("ZI")) == 3.0

    def test_prune_zero(self):
        s = PauliSum.from_label_terms([(0.0, "XX")])
        assert len(s) == 0

    def test_phased_key_folds_into_coefficient(self):
        key = PauliString.from_label("Z", phase_exponent=1)  # i*Z
        s = PauliSum(1, [(key, 2.0)])
        assert s.coefficient(PauliString.from_label("Z")) == 2.0j

    def test_is_hermitian(self):
        assert PauliSum.from_label_terms([(1.0, "XY"), (-0.5, "ZZ")]).is_hermitian()
        assert not PauliSum.from_label_terms([(1.0j, "XY")]).is_hermitian()

    def test_real_sums_have_hermitian_dense(self, rng):
        for n in (2, 3, 4):
            h = random_hermitian_sum(rng, n, 6)
            m = dense_of_sum(h)
            assert np.allclose(m, m.conj().T, atol=1e-12)

    def test_product_matches_dense(self, rng):
        for _ in range(25):
            a = random_hermitian_sum(rng, 3, 4)
            b = random_hermitian_sum(rng, 3, 4)
            assert np.allclose(dense_of_sum(a * b), dense_of_sum(a) @ dense_of_sum(b), atol=1e-10)

    def test_add_and_scale(self, rng):
        a = random_hermitian_sum(rng, 2, 3)
        b = random_hermitian_sum(rng, 2, 3)
        assert np.allclose(dense_of_sum(a + b), dense_of_sum(a) + dense_of_sum(b))
        assert np.allclose(dense_of_sum(a.scaled(-2.0)), -2.0 * dense_of_sum(a))

    def test_dimension_mismatch(self):
        a = PauliSum.from_label_terms([(1.0, "X")])
        b = PauliSum.from_label_terms([(1.0, "XX")])
        with pytest.raises(DimensionMismatchError):
            a + b


class TestTextFormat:
    def test_parse_basic(self):
        h = parse_pauli_sum("# comment\n0.5 XX\n0.25 0.0 ZI\n")
        assert len(h) == 2
        assert h.coefficient(PauliString.from_label("XX")) == 0.5

    def test_parse_merges(self):
        h = parse_pauli_sum("1.0 ZI\n2.0 ZI\n")
        assert h.coefficient(PauliString.from_label("ZI")) == 3.0

    def test_parse_prunes(self):
        assert len(parse_pauli_sum("0.0 XX\n")) == 0

    def test_parse_header(self):
        h = parse_pauli_sum("n_qubits = 3\ntitle = demo\n1.0 XIZ\n")
        assert h.n_qubits == 3

    def test_empty_sum_needs_header(self):
        assert len(parse_pauli_sum("n_qubits = 2\n")) == 0
        with pytest.raises(HamiltonianParseError):
            parse_pauli_sum("# nothing\n")

    def test_bad_label_reports_line(self):
        with pytest.raises(HamiltonianParseError) as err:
            parse_pauli_sum("1.0 XX\n2.0 XQ\n")
        assert err.value.line_number == 2

    def test_length_mismatch_reports_line(self):
        with pytest.raises(HamiltonianParseError) as err:
            parse_pauli_sum("1.0 XX\n2.0 XXX\n")
        assert err.value.line_number == 2

    def test_bad_coefficient(self):
        with pytest.raises(HamiltonianParseError):
            parse_pauli_sum("abc XX\n")

    def test_round_trip_bit_exact(self, rng):
        for _ in range(10):
            h = random_hermitian_sum(rng, 3, 5)
            text = serialize_pauli_sum(h)
            again = parse_pauli_sum(text)
            assert again == h
            assert serialize_pauli_sum(again) == text

    def test_serialize_sorted_and_formatted(self):
        h = PauliSum.from_label_terms([(0.1, "ZI"), (1.0 / 3.0, "IX")])
        text = serialize_pauli_sum(h)
        lines = text.splitlines()
        assert lines[0] == "n_qubits = 2"
        assert lines[1].endswith("IX") and lines[2].endswith("ZI")
        assert "0.33333333333333331" in lines[1]

    def test_serialize_metadata(self):
        h = PauliSum.from_label_terms([(1.0, "Z")])
        text = serialize_pauli_sum(h, metadata={"source": "demo"})
        assert "source = demo" in text
        assert parse_pauli_sum(text) == h
