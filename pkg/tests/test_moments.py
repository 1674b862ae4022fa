"""Moment engine: Pauli route vs dense route, connected recursion, series."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmxlab.errors import ContractViolationError, InsufficientMomentsError
from cmxlab.moments import (
    MomentTable,
    connected_moments,
    hamiltonian_powers,
    hw_energy_series,
    krylov_rank,
    raw_moments_dense,
    raw_moments_pauli,
    reachable_spectrum,
    truncate_hamiltonian,
)
from cmxlab.pauli import PauliString, PauliSum
from cmxlab.statevector import StateVector, basis_state

from conftest import (
    basis_vector,
    dense_moments,
    dense_of_sum,
    dense_reachable_spectrum,
    random_hermitian_sum,
    siam_caption_terms,
)


def siam_sum(v=1.0, u=8.0):
    return PauliSum.from_label_terms(siam_caption_terms(u, u / 2, 0.0, u / 2, v))


def random_state(rng, n):
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


class TestRawMomentsPauli:
    def test_eigenstate_powers(self):
        h = PauliSum.from_label_terms([(0.7, "Z")])
        table, _ = raw_moments_pauli(h, basis_state("0"), 5)
        assert table.raw == pytest.approx(tuple(0.7**l for l in range(6)), abs=1e-14)

    def test_siam_first_moments(self):
        table, _ = raw_moments_pauli(siam_sum(1.0), basis_state("0110"), 3)
        assert table.raw[1] == pytest.approx(-4.0, abs=1e-12)
        assert table.raw[2] == pytest.approx(18.0, abs=1e-12)
        assert table.raw[3] == pytest.approx(-80.0, abs=1e-12)

    @pytest.mark.parametrize("v", [0.3, 1.0, 2.5])
    def test_siam_second_moment_analytic(self, v):
        # K2 = 16 + 2 V^2 and K3 = -64 - 16 V^2 at half filling, U = 8
        table, _ = raw_moments_pauli(siam_sum(v), basis_state("0110"), 3)
        assert table.raw[2] == pytest.approx(16.0 + 2.0 * v * v, abs=1e-12)
        assert table.raw[3] == pytest.approx(-64.0 - 16.0 * v * v, abs=1e-12)

    def test_diagonal_product_needs_no_new_measurement(self):
        # K2 of a single-term Hamiltonian reduces to the identity string
        h = PauliSum.from_label_terms([(0.8, "XY")])
        table, cache = raw_moments_pauli(h, basis_state("00"), 2)
        assert table.raw[2] == pytest.approx(0.64, abs=1e-15)
        assert cache.misses == 1  # only K1 touched the state

    def test_cache_reuse_and_bound(self):
        h = siam_sum(1.0)
        table, cache = raw_moments_pauli(h, basis_state("0110"), 7)
        assert len(cache) <= 4**4
        assert cache.hits > 0
        state = basis_state("0110")
        from cmxlab.statevector import pauli_expectation

        for (x, z), value in cache.values.items():
            p = PauliString(4, x, z)
            assert value == pytest.approx(pauli_expectation(p, state), abs=1e-12)

    def test_cache_soundness(self):
        h = siam_sum(2.0)
        state = basis_state("0110")
        with_cache, _ = raw_moments_pauli(h, state, 6, use_cache=True)
        without, _ = raw_moments_pauli(h, state, 6, use_cache=False)
        assert np.allclose(with_cache.raw, without.raw, atol=1e-12)

    def test_precomputed_powers(self):
        h = siam_sum(1.0)
        powers = hamiltonian_powers(h, 5)
        table, _ = raw_moments_pauli(h, basis_state("0110"), 5, powers=powers)
        direct, _ = raw_moments_pauli(h, basis_state("0110"), 5)
        assert table.raw == direct.raw
        with pytest.raises(InsufficientMomentsError):
            raw_moments_pauli(h, basis_state("0110"), 7, powers=powers)

    def test_non_hermitian_rejected(self):
        h = PauliSum.from_label_terms([(1.0j, "X")])
        with pytest.raises(ContractViolationError):
            raw_moments_pauli(h, basis_state("0"), 2)


class TestOracleEquivalence:
    def test_random_sums_match_dense_route(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 4))
            h = random_hermitian_sum(rng, n, int(rng.integers(3, 9)))
            state = random_state(rng, n)
            via_pauli, _ = raw_moments_pauli(h, state, 7)
            via_dense = raw_moments_dense(h, state, 7)
            for kp, kd in zip(via_pauli.raw, via_dense.raw):
                assert kp == pytest.approx(kd, rel=1e-10, abs=1e-10)

    def test_dense_route_matches_kron_oracle(self, rng):
        h = random_hermitian_sum(rng, 3, 6)
        state = random_state(rng, 3)
        table = raw_moments_dense(h, state, 6)
        oracle = dense_moments(dense_of_sum(h), state.amplitudes, 6)
        assert np.allclose(table.raw, oracle, atol=1e-10)

    def test_variance_nonnegative(self, rng):
        for _ in range(20):
            h = random_hermitian_sum(rng, 3, 5)
            table = raw_moments_dense(h, random_state(rng, 3), 2)
            assert table.raw[2] >= table.raw[1] ** 2 - 1e-12

    def test_hankel_psd(self, rng):
        for _ in range(20):
            h = random_hermitian_sum(rng, 3, 6)
            table = raw_moments_dense(h, random_state(rng, 3), 6)
            hankel = np.array([[table.raw[i + j] for j in range(4)] for i in range(4)])
            assert np.linalg.eigvalsh(hankel).min() > -1e-9


class TestConnectedMoments:
    def test_base_cases(self, rng):
        h = random_hermitian_sum(rng, 2, 4)
        table = connected_moments(raw_moments_dense(h, random_state(rng, 2), 4))
        k = table.raw
        assert table.connected[0] == pytest.approx(k[1], abs=1e-12)
        assert table.connected[1] == pytest.approx(k[2] - k[1] ** 2, abs=1e-12)

    def test_third_cumulant_expansion(self, rng):
        # I3 = K3 - 3 K1 K2 + 2 K1^3
        for _ in range(10):
            h = random_hermitian_sum(rng, 3, 5)
            table = connected_moments(raw_moments_dense(h, random_state(rng, 3), 3))
            k = table.raw
            expected = k[3] - 3.0 * k[1] * k[2] + 2.0 * k[1] ** 3
            assert table.connected[2] == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_siam_values(self):
        table, _ = raw_moments_pauli(siam_sum(1.0), basis_state("0110"), 3)
        table = connected_moments(table)
        assert table.connected == pytest.approx((-4.0, 2.0, 8.0), abs=1e-12)

    def test_eigenstate_collapse(self):
        h = siam_sum(0.0)  # diagonal; |0110> is an eigenstate
        table = connected_moments(raw_moments_dense(h, basis_state("0110"), 6))
        assert table.connected[0] == pytest.approx(-4.0, abs=1e-12)
        assert max(abs(v) for v in table.connected[1:]) < 1e-9

    @given(st.floats(-2, 2))
    @settings(max_examples=50)
    def test_point_mass_moments_have_zero_cumulants(self, e):
        # moments of a point mass at E: K_l = E^l
        raw = tuple(float(e) ** l for l in range(6))
        table = connected_moments(MomentTable(raw))
        assert table.connected[0] == pytest.approx(e, abs=1e-9)
        assert max(abs(v) for v in table.connected[1:]) < 1e-9 * max(1.0, abs(e) ** 6)


class TestHwSeries:
    def test_tau_zero(self, rng):
        h = random_hermitian_sum(rng, 2, 4)
        table = connected_moments(raw_moments_dense(h, random_state(rng, 2), 5))
        for order in range(5):
            assert hw_energy_series(table, 0.0, order) == table.connected[0]

    def test_small_tau_decreases_when_i2_positive(self):
        table = connected_moments(
            raw_moments_dense(siam_sum(1.0), basis_state("0110"), 4)
        )
        assert table.connected[1] > 0
        assert hw_energy_series(table, 1e-3, 1) < table.connected[0]

    def test_eigenstate_flat(self):
        raw = tuple((-1.3) ** l for l in range(6))
        table = connected_moments(MomentTable(raw))
        for tau in (0.0, 0.5, 2.0):
            for order in range(5):
                assert hw_energy_series(table, tau, order) == pytest.approx(-1.3, abs=1e-9)

    def test_order_out_of_range(self):
        table = connected_moments(MomentTable((1.0, 0.5, 0.3)))
        with pytest.raises(InsufficientMomentsError):
            hw_energy_series(table, 0.1, 2)


class TestTruncate:
    def test_threshold_zero_identity(self):
        h = siam_sum(1.0)
        assert truncate_hamiltonian(h, threshold=0.0) == h

    def test_keep_largest(self):
        h = PauliSum.from_label_terms(
            siam_caption_terms(8.0, 4.0, 1.0, 4.0, 1.0)  # eps0 != 0 breaks the tie
        )
        kept = truncate_hamiltonian(h, keep=1)
        assert len(kept) == 1
        ((p, c),) = kept.items()
        assert p.label == "ZIZI"
        assert c == pytest.approx(2.0)

    def test_keep_beyond_count_unchanged(self):
        h = siam_sum(1.0)
        assert truncate_hamiltonian(h, keep=100) == h

    def test_truncated_moments_match_diagonal_oracle(self):
        h = siam_sum(1.0)
        diagonal = truncate_hamiltonian(h, threshold=1.0)  # drops the 0.5 hopping terms
        assert all(p.x_mask == 0 for p, _ in diagonal.items())
        table = raw_moments_dense(diagonal, basis_state("0110"), 5)
        oracle = dense_moments(dense_of_sum(diagonal), basis_vector("0110"), 5)
        assert np.allclose(table.raw, oracle, atol=1e-12)
        # the diagonal model sees the eigenstate: K_l = (-4)^l
        assert np.allclose(table.raw, [(-4.0) ** l for l in range(6)], atol=1e-10)

    def test_argument_validation(self):
        h = siam_sum(1.0)
        with pytest.raises(ValueError):
            truncate_hamiltonian(h)
        with pytest.raises(ValueError):
            truncate_hamiltonian(h, keep=2, threshold=0.5)


class TestKrylov:
    def test_siam_rank_three(self):
        assert krylov_rank(siam_sum(1.0), basis_state("0110"), max_dim=8) == 3

    def test_reachable_spectrum_matches_dense_oracle(self):
        h = siam_sum(1.0)
        ours = reachable_spectrum(h, basis_state("0110"))
        oracle = dense_reachable_spectrum(dense_of_sum(h), basis_vector("0110"))
        assert np.allclose(ours, oracle, atol=1e-8)
        assert np.allclose(
            ours, [-2 - 2 * np.sqrt(2), -4.0, -2 + 2 * np.sqrt(2)], atol=1e-8
        )


class TestMomentTableValidation:
    def test_k0_must_be_one(self):
        with pytest.raises(ValueError):
            MomentTable((0.5, 1.0))

    def test_connected_length_checked(self):
        with pytest.raises(ValueError):
            MomentTable((1.0, 2.0), connected=(2.0, 3.0))
