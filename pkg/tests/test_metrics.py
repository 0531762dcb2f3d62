"""Tests for estimation fidelity, induced fidelity, and their functional forms."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from qdecoy.attacks import (
    diagonal_attack,
    from_kraus,
    identity_attack,
    optimal_attack,
    probabilistic_attack,
    projective_attack,
    random_attack,
)
from qdecoy.choi import apply_channel, choi_of_kraus, mat_to_vec
from qdecoy.ensembles import canonical_ensemble, pairing_ensemble
from qdecoy.linalg import herm_eig, psd_check
from qdecoy.metrics import (
    banaszek_bound,
    estimation_fidelity,
    estimation_fidelity_functional,
    functional_matrices,
    induced_fidelity,
    induced_fidelity_functional,
    pound_matrix,
    spectral_quantities,
)


def _rand_diagonal_attack(n, k, rng):
    # row j = level, column r = outcome; rows normalized for completeness
    a = np.abs(rng.normal(size=(n, k))) + 0.05
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    return diagonal_attack([(r, a[:, r]) for r in range(k)])


class TestEstimationFidelity:
    def test_identity_guesses_blindly(self):
        for n in range(2, 7):
            g, table = estimation_fidelity(identity_attack(n))
            assert g == 1.0 / n
            assert_array_equal(table.guess, [0])
            assert_array_equal(table.weight, [1.0])

    def test_projective_guesses_perfectly(self):
        for n in (2, 3, 5):
            g, table = estimation_fidelity(projective_attack(n))
            assert g == 1.0
            assert_array_equal(table.guess, np.arange(n))
            assert_array_equal(table.weight, np.ones(n))

    def test_optimal_family_hits_target(self):
        for n in (2, 4):
            for target in (1.0 / n, 0.5, 0.9, 1.0):
                g, _ = estimation_fidelity(optimal_attack(n, target))
                assert_allclose(g, target, rtol=0, atol=1e-12)

    def test_probabilistic_half(self):
        g, _ = estimation_fidelity(probabilistic_attack(2, 0.5))
        assert_allclose(g, 0.75, rtol=0, atol=1e-15)

    def test_tie_break_prefers_lowest_index(self):
        # exact tie: identity diagonal is constant
        _, table = estimation_fidelity(identity_attack(3))
        assert table.guess[0] == 0
        # near tie within 1e-12: index 1 is larger but index 0 still wins
        eps = 5e-13
        m = diagonal_attack(
            [
                (0, [np.sqrt(0.3), np.sqrt(0.3 + eps)]),
                (1, [np.sqrt(0.7), np.sqrt(0.7 - eps)]),
            ]
        )
        _, table = estimation_fidelity(m)
        assert table.guess[0] == 0
        assert_allclose(table.weight[0], 0.3, rtol=0, atol=1e-15)

    def test_random_attacks_stay_in_range(self):
        for seed in range(20):
            m = random_attack(3, seed=seed)
            g, table = estimation_fidelity(m)
            assert 1.0 / 3 - 1e-12 <= g <= 1.0 + 1e-12
            assert table.guess.shape == (len(m.kraus),)
            assert np.all(table.weight >= 0)


class TestFunctionalEquivalence:
    def test_named_families(self):
        attacks = [
            identity_attack(3),
            projective_attack(3),
            optimal_attack(3, 0.5),
            probabilistic_attack(3, 0.3),
        ]
        for m in attacks:
            g_def, _ = estimation_fidelity(m)
            assert_allclose(
                estimation_fidelity_functional(m), g_def, rtol=0, atol=1e-12
            )
            f_def = induced_fidelity(m, pairing_ensemble(m.dim))
            assert_allclose(induced_fidelity_functional(m), f_def, rtol=0, atol=1e-10)

    def test_random_attacks(self):
        for seed in range(20):
            for n in (2, 3, 4):
                m = random_attack(n, seed=seed)
                g_def, _ = estimation_fidelity(m)
                assert_allclose(
                    estimation_fidelity_functional(m), g_def, rtol=0, atol=1e-12
                )
                f_def = induced_fidelity(m, pairing_ensemble(n))
                assert_allclose(
                    induced_fidelity_functional(m), f_def, rtol=0, atol=1e-10
                )


class TestInducedFidelity:
    def test_identity_preserves_decoys(self):
        for n in (2, 3, 4):
            f = induced_fidelity(identity_attack(n), pairing_ensemble(n))
            assert_allclose(f, 1.0, rtol=0, atol=1e-12)

    def test_projective_value(self):
        # messages survive projection but superposition decoys lose coherence
        for n in (2, 3, 5):
            m = projective_attack(n)
            assert_allclose(
                induced_fidelity(m, canonical_ensemble(n)), 1.0, rtol=0, atol=1e-12
            )
            f = induced_fidelity(m, pairing_ensemble(n))
            assert_allclose(f, 0.5 + 0.5 / n, rtol=0, atol=1e-12)

    def test_matches_channel_average(self):
        # independent route: send each decoy through the channel and project back
        for seed in (0, 1):
            for n in (2, 3):
                m = random_attack(n, seed=seed)
                choi = choi_of_kraus(m.ops)
                total = 0.0
                for w, ket in pairing_ensemble(n).items:
                    rho = np.outer(ket, ket.conj())
                    out = apply_channel(choi, rho)
                    total += w * float((ket.conj() @ out @ ket).real)
                f = induced_fidelity(m, pairing_ensemble(n))
                assert_allclose(f, total, rtol=0, atol=1e-12)

    def test_saturating_attack_disturbance(self):
        d = 1.0 - induced_fidelity(optimal_attack(4, 0.5), pairing_ensemble(4))
        assert_allclose(d, 0.03349364905389035, rtol=0, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            induced_fidelity(identity_attack(2), pairing_ensemble(3))


class TestFunctionalMatrices:
    def test_projector_identities(self):
        for n in (2, 3, 4):
            fm = functional_matrices(identity_attack(n))
            assert_array_equal(fm.p_rep + fm.p_nonrep, np.eye(n * n))
            assert_allclose(fm.p_rep @ fm.p_rep, fm.p_rep, rtol=0, atol=1e-15)
            assert_allclose(fm.p_beta @ fm.p_beta, fm.p_beta, rtol=0, atol=1e-15)
            assert_allclose(fm.p_beta @ fm.p_rep, fm.p_beta, rtol=0, atol=1e-15)
            assert_allclose(np.linalg.norm(fm.beta), 1.0, rtol=0, atol=1e-15)

    def test_pound_explicit_matrix(self):
        ref = np.array(
            [
                [3.0, 0.0, 0.0, 1.0],
                [0.0, 1.0, -1.0, 0.0],
                [0.0, -1.0, 1.0, 0.0],
                [1.0, 0.0, 0.0, 3.0],
            ]
        ) / 8.0
        assert_allclose(pound_matrix(2), ref, rtol=0, atol=1e-15)

    def test_pound_spectrum(self):
        for n in (2, 3, 4, 6):
            pound = pound_matrix(n)
            assert np.isrealobj(pound)
            assert_allclose(pound, pound.T, rtol=0, atol=1e-15)
            assert psd_check(pound)
            w, _ = herm_eig(pound)
            assert_allclose(w[-1], 1.0 / n, rtol=0, atol=1e-12)
            beta = functional_matrices(identity_attack(n)).beta
            assert_allclose(pound @ beta, beta / n, rtol=0, atol=1e-12)

    def test_pound_cached_and_readonly(self):
        pound = pound_matrix(3)
        assert pound_matrix(3) is pound
        with pytest.raises(ValueError):
            pound[0, 0] = 1.0

    def test_euro_trace_recovers_estimation(self):
        # pair the dense block matrix with the outcome-extended state operator
        for seed in range(5):
            m = random_attack(2, outcomes=3, seed=seed)
            fm = functional_matrices(m)
            k = len(m.kraus)
            eye = np.eye(k)
            w = np.zeros(m.dim * m.dim * k, dtype=complex)
            for i, op in enumerate(m.ops):
                w += np.kron(mat_to_vec(op), eye[i])
            g_dense = float(np.einsum("ij,ji->", fm.euro, np.outer(w, w.conj())).real)
            g_def, _ = estimation_fidelity(m)
            assert_allclose(g_dense, g_def, rtol=0, atol=1e-12)

    def test_euro_skipped_when_large(self):
        m = random_attack(8, outcomes=65, seed=1)
        fm = functional_matrices(m)
        assert fm.euro is None
        assert fm.pound.shape == (64, 64)


class TestSpectralQuantities:
    def test_projective(self):
        for n in (2, 3, 4):
            assert spectral_quantities(projective_attack(n)) == (float(n), float(n))

    def test_identity(self):
        for n in (2, 3, 4):
            g, f = spectral_quantities(identity_attack(n))
            assert g == 1.0
            assert f == float(n * n)

    def test_probabilistic_half(self):
        g, f = spectral_quantities(probabilistic_attack(2, 0.5))
        assert_allclose(g, 1.5, rtol=0, atol=1e-12)
        assert_allclose(f, 3.0, rtol=0, atol=1e-12)

    def test_optimal_two_level(self):
        g, f = spectral_quantities(optimal_attack(2, 0.9))
        assert_allclose(g, 1.8, rtol=0, atol=1e-12)
        assert_allclose(f, 3.2, rtol=0, atol=1e-12)
        assert_allclose(0.5 - f / 8.0, 0.1, rtol=0, atol=1e-12)

    def test_matches_full_metrics_on_diagonal_attacks(self):
        rng = np.random.default_rng(11)
        for n in (2, 3, 5):
            for _ in range(10):
                k = int(rng.integers(1, 7))
                m = _rand_diagonal_attack(n, k, rng)
                g, f = spectral_quantities(m)
                g_def, _ = estimation_fidelity(m)
                assert_allclose(g / n, g_def, rtol=0, atol=1e-12)
                d_def = 1.0 - induced_fidelity(m, pairing_ensemble(n))
                assert_allclose(0.5 - f / (2 * n * n), d_def, rtol=0, atol=1e-10)

    def test_rejects_off_diagonal(self):
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
        m = from_kraus([h])
        with pytest.raises(ValueError):
            spectral_quantities(m)
        with pytest.raises(ValueError):
            spectral_quantities(random_attack(2, seed=0))


class TestBanaszekBound:
    def test_endpoints(self):
        for m_out in (1, 2, 5):
            for n in (2, 3, 4):
                assert_allclose(banaszek_bound(n, m_out, n), n, rtol=0, atol=1e-12)
                assert_allclose(
                    banaszek_bound(0.0, m_out, n), (m_out - 1) * n, rtol=0, atol=1e-12
                )

    def test_identity_vector_saturates(self):
        # all-ones coefficient vector: g = 1, f = n^2, bound exact
        for n in (2, 3, 4):
            _, f = spectral_quantities(identity_attack(n))
            assert_allclose(banaszek_bound(1.0, n, n), f, rtol=0, atol=1e-12)

    def test_optimal_family_saturates(self):
        for n in (2, 3, 4):
            for target in (1.0 / n, 0.3, 0.62, 0.9, 1.0):
                if target < 1.0 / n:
                    continue
                g, f = spectral_quantities(optimal_attack(n, target))
                assert_allclose(g, n * target, rtol=0, atol=1e-12)
                assert_allclose(banaszek_bound(g, n, n), f, rtol=0, atol=1e-11)

    def test_random_diagonal_attacks_obey_bound(self):
        rng = np.random.default_rng(23)
        for _ in range(1000):
            k = int(rng.integers(1, 7))
            m = _rand_diagonal_attack(3, k, rng)
            g, f = spectral_quantities(m)
            assert f <= banaszek_bound(g, 3, 3) + 1e-9

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            banaszek_bound(-0.1, 2, 2)
        with pytest.raises(ValueError):
            banaszek_bound(2.5, 3, 2)
        with pytest.raises(ValueError):
            banaszek_bound(1.0, 0, 2)
