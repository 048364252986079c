import numpy as np
import pytest

from posmap.certifier import (
    CertificationConfig,
    Verdict,
    certify_m_positivity,
    extract_witness,
    gell_mann_basis,
    objective,
    seeded_starts,
    unitary_from_coords,
    verify_witness,
)
from posmap.errors import DimensionMismatch, NotViolating
from posmap.mapcore import apply_map, bform_from_kraus, builtin_map, canonical_decompose
from posmap.matkernel import haar_random_unitary, is_unitary, svd
from posmap.positivity import apply_extended, is_completely_positive, min_eigenvalue, projected_map
from posmap.schmidt import maximally_entangled, schmidt_decompose, schmidt_state

from conftest import random_bform

SY = np.array([[0, -1j], [1j, 0]])


def test_gell_mann_basis():
    for n in (2, 3, 4):
        G = gell_mann_basis(n)
        assert len(G) == n * n - 1
        gram = np.array([[np.trace(a @ b).real for b in G] for a in G])
        np.testing.assert_allclose(gram, 2 * np.eye(n * n - 1), atol=1e-12)
        assert all(abs(np.trace(g)) < 1e-12 and np.allclose(g, g.conj().T) for g in G)


def test_unitary_from_coords(rng):
    U = unitary_from_coords(rng.standard_normal(8), 3)
    assert is_unitary(U)
    assert abs(np.linalg.det(U) - 1) < 1e-10
    np.testing.assert_allclose(unitary_from_coords(np.zeros(3), 2), np.eye(2))


class TestSeededStarts:
    def test_reduction_first_is_identity(self):
        starts = seeded_starts(builtin_map("reduction", 2), 2, 8, seed=1)
        np.testing.assert_allclose(starts[0], np.eye(2), atol=1e-12)
        assert len(starts) == 8 and all(is_unitary(U) for U in starts)

    def test_cp_map_all_haar(self):
        B = builtin_map("identity", 2)
        starts = seeded_starts(B, 1, 5, seed=3)
        for k, U in enumerate(starts):
            np.testing.assert_array_equal(U, haar_random_unitary(2, [3, k]))

    def test_transpose_rank_one_projection(self):
        _, _, V = svd(SY)
        starts = seeded_starts(builtin_map("transpose", 2), 1, 6, seed=0)
        rows = [U[0] for U in starts[:2]]
        for k in range(2):
            v = V[:, k]
            # some seeded start puts this singular vector (transposed) in the range of P
            assert any(abs(abs(np.dot(r.conj(), v)) - 1) < 1e-12 for r in rows)

    def test_deterministic(self):
        B = random_bform(3, 4)
        a = seeded_starts(B, 2, 10, seed=9)
        b = seeded_starts(B, 2, 10, seed=9)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)

    def test_bad_m(self):
        with pytest.raises(DimensionMismatch):
            seeded_starts(builtin_map("identity", 2), 3, 4)


class TestCertify:
    def test_transpose_m2(self):
        res = certify_m_positivity(builtin_map("transpose", 2), CertificationConfig(m=2))
        assert res.verdict is Verdict.VIOLATION_FOUND
        assert res.lambda_min == pytest.approx(-0.5, abs=1e-9)
        assert abs(objective(builtin_map("transpose", 2), np.eye(2), 2) + 0.5) < 1e-12

    def test_transpose_m1(self):
        res = certify_m_positivity(builtin_map("transpose", 2), CertificationConfig(m=1, restarts=200))
        assert res.verdict is Verdict.NO_VIOLATION_FOUND
        assert res.lambda_min >= -1e-9
        assert res.restarts_used == 200

    def test_transpose_positive_by_sampling(self):
        # independent oracle: Lambda(|a><a|) = conj(a) conj(a)^T on 1e5 random vectors
        rng = np.random.default_rng(0)
        a = rng.standard_normal((100_000, 2)) + 1j * rng.standard_normal((100_000, 2))
        B = builtin_map("transpose", 2)
        outs = np.einsum("xayb,na,nb->nxy", B.tensor, a, a.conj())
        assert np.linalg.eigvalsh(outs)[:, 0].min() >= -1e-9 * np.max(np.abs(a)) ** 2

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_identity_map(self, m):
        res = certify_m_positivity(builtin_map("identity", 3), CertificationConfig(m=m, restarts=8))
        assert res.verdict is Verdict.NO_VIOLATION_FOUND
        assert res.lambda_min >= -1e-12

    def test_violation_is_reverifiable(self, rng):
        B = random_bform(3, rng)
        res = certify_m_positivity(B, CertificationConfig(m=2, restarts=16, master_seed=5))
        assert res.violated
        assert abs(objective(B, res.witness_unitary, 2) - res.lambda_min) < 1e-9
        assert res.lambda_min < -1e-9
        psi = res.witness_state
        assert psi.dims == (3, 2) and schmidt_decompose(psi).rank <= 2
        assert abs(min_eigenvalue(apply_extended(B, psi)) - res.lambda_min) < 1e-9
        assert verify_witness(B, res.witness_unitary, 2, res.lambda_min)

    def test_worker_count_invariance(self, rng):
        for B, m in [(random_bform(3, 11), 1), (builtin_map("reduction", 3), 1), (random_bform(4, 12), 2)]:
            cfg = CertificationConfig(m=m, restarts=6, max_iters=120, master_seed=21)
            r1 = certify_m_positivity(B, cfg, workers=1)
            r3 = certify_m_positivity(B, cfg, workers=3)
            assert r1.verdict == r3.verdict
            assert r1.lambda_min == r3.lambda_min
            assert r1.restarts_used == r3.restarts_used
            np.testing.assert_array_equal(r1.best_unitary, r3.best_unitary)

    def test_exact_at_full_rank(self, rng):
        for _ in range(20):
            N = int(rng.integers(2, 4))
            B = random_bform(N, rng)
            res = certify_m_positivity(B, CertificationConfig(m=N, restarts=1))
            assert res.violated == (not is_completely_positive(B))
            assert res.lambda_min == pytest.approx(min_eigenvalue(B.matrix) / N, abs=1e-12)

    def test_reduction_not_positive_at_m2_but_1_positive_n3(self):
        B = builtin_map("reduction", 3)
        assert certify_m_positivity(B, CertificationConfig(m=2, restarts=8)).violated
        assert not certify_m_positivity(B, CertificationConfig(m=1, restarts=16)).violated

    def test_m_too_large(self):
        with pytest.raises(DimensionMismatch):
            certify_m_positivity(builtin_map("identity", 2), CertificationConfig(m=3))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CertificationConfig(m=0)
        with pytest.raises(ValueError):
            CertificationConfig(m=1, restarts=0)


class TestExtractWitness:
    def test_transpose(self):
        psi = extract_witness(builtin_map("transpose", 2), np.eye(2), 2)
        np.testing.assert_allclose(psi.amplitudes, maximally_entangled(2).amplitudes, atol=1e-12)
        assert min_eigenvalue(apply_extended(builtin_map("transpose", 2), psi)) == pytest.approx(-0.5, abs=1e-9)

    def test_reduction(self):
        psi = extract_witness(builtin_map("reduction", 2), np.eye(2), 2)
        assert min_eigenvalue(apply_extended(builtin_map("reduction", 2), psi)) == pytest.approx(-0.5, abs=1e-9)

    def test_cp_map(self, rng):
        B = bform_from_kraus([(1.0, rng.standard_normal((3, 3))), (0.5, np.eye(3))])
        with pytest.raises(NotViolating):
            extract_witness(B, haar_random_unitary(3, rng), 2)


def test_v_unitary_is_unnecessary(rng):
    # the second Schmidt basis never changes the sign of lambda_min
    checked = 0
    for _ in range(100):
        N = int(rng.integers(2, 5))
        m = int(rng.integers(1, N + 1))
        B = random_bform(N, rng)
        U, V = haar_random_unitary(N, rng), haar_random_unitary(N, rng)
        s = np.full(m, m ** -0.5)
        l_plain = min_eigenvalue(apply_extended(B, schmidt_state(s, U, np.eye(N))))
        l_rot = min_eigenvalue(apply_extended(B, schmidt_state(s, U, V)))
        if abs(l_plain) > 1e-6:
            checked += 1
            assert np.sign(l_plain) == np.sign(l_rot)
            assert l_plain == pytest.approx(l_rot, abs=1e-9)
    assert checked > 50
