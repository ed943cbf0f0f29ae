import json

import numpy as np
import pytest

from entropic_frames import (
    StateVector,
    ValidationError,
    WeightedFrame,
    admissibility,
    analysis_coefficients,
    apply_unitary,
    frame_from_dict,
    frame_to_dict,
    load_frame,
    make_orthonormal_basis,
    make_parseval_frame,
    mutual_coherence,
    sample_unit_states,
    save_frame,
    validate_frame,
)

from conftest import random_unitary_matrix


def brute_force_residual(frame):
    """Independent frame-operator computation: explicit loop, max-entry deviation."""
    d = frame.dimension
    op = np.zeros((d, d), dtype=complex)
    for w, v in zip(frame.weights, frame.vectors):
        op += w * np.outer(v, v.conj())
    return np.max(np.abs(op - np.eye(d)))


class TestGenerators:
    def test_standard_basis_d2(self):
        f = make_orthonormal_basis("standard", 2)
        assert np.array_equal(f.vectors, np.eye(2))
        assert np.array_equal(f.weights, np.ones(2))

    def test_fourier_d2_is_hadamard(self):
        f = make_orthonormal_basis("fourier", 2)
        expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.allclose(f.vectors, expected, atol=1e-15)

    def test_random_unitary_d8_residual(self):
        f = make_orthonormal_basis("random_unitary", 8, 42)
        assert validate_frame(f).parseval_residual <= 1e-10
        assert brute_force_residual(f) <= 1e-10

    def test_random_unitary_seeded_reproducible(self):
        a = make_orthonormal_basis("random_unitary", 5, 11)
        b = make_orthonormal_basis("random_unitary", 5, 11)
        assert np.array_equal(a.vectors, b.vectors)

    def test_random_unitary_phase_convention(self):
        f = make_orthonormal_basis("random_unitary", 6, 3)
        # frame vectors are unitary columns; each starts real positive
        first = f.vectors[:, 0]
        assert np.all(first.real > 0)
        assert np.all(np.abs(first.imag) < 1e-14)

    def test_zero_dimension_rejected(self):
        with pytest.raises(ValidationError):
            make_orthonormal_basis("standard", 0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValidationError):
            make_orthonormal_basis("wavelet", 4)
        with pytest.raises(ValidationError):
            make_parseval_frame("wavelet", 4, 2)

    def test_mercedes_benz_geometry(self, mercedes3):
        assert np.allclose(mercedes3.norms(), np.sqrt(2 / 3), atol=1e-15)
        assert brute_force_residual(mercedes3) <= 1e-12

    def test_harmonic_flat_magnitudes(self):
        f = make_parseval_frame("harmonic", 4, 2)
        assert np.allclose(f.norms(), np.sqrt(1 / 2), atol=1e-15)
        assert validate_frame(f).parseval_residual <= 1e-12

    def test_isometry_rows_one_bounded(self):
        f = make_parseval_frame("random_isometry_rows", 6, 3, 7)
        assert np.all(f.norms() <= 1.0 + 1e-12)
        assert validate_frame(f).passed

    def test_too_few_vectors_rejected(self):
        with pytest.raises(ValidationError):
            make_parseval_frame("harmonic", 2, 3)

    def test_mercedes_wrong_dimension_rejected(self):
        with pytest.raises(ValidationError):
            make_parseval_frame("mercedes_benz", 4, 3)

    def test_mercedes_two_vectors_rejected(self):
        with pytest.raises(ValidationError):
            make_parseval_frame("mercedes_benz", 2, 2)

    @pytest.mark.parametrize("kind,n,d", [
        ("standard", 3, 3), ("fourier", 5, 5), ("random_unitary", 4, 4),
        ("harmonic", 7, 3), ("mercedes_benz", 5, 2), ("random_isometry_rows", 9, 4),
    ])
    def test_generators_trace_consistency(self, kind, n, d):
        if kind in ("standard", "fourier", "random_unitary"):
            f = make_orthonormal_basis(kind, d, 1)
        else:
            f = make_parseval_frame(kind, n, d, 1)
        assert validate_frame(f).trace_gap <= 1e-8


class TestValidateFrame:
    def test_standard_d3_clean(self, std3):
        report = validate_frame(std3, 1e-8)
        assert report.parseval_residual == 0.0
        assert report.max_norm == 1.0
        assert report.passed

    def test_mercedes_report(self, mercedes3):
        report = validate_frame(mercedes3, 1e-8)
        assert report.parseval_residual <= 1e-12
        assert report.max_norm == pytest.approx(0.816496580927726, abs=1e-12)
        assert report.passed

    def test_scaled_vector_fails(self, std3):
        vecs = std3.vectors.copy()
        vecs[0] *= 1.5
        broken = WeightedFrame(vecs, std3.weights)
        report = validate_frame(broken, 1e-8)
        assert not report.passed
        assert report.max_norm == pytest.approx(1.5)
        assert report.parseval_residual > 1e-2

    def test_unitary_invariance_of_residual(self, mercedes3):
        u = random_unitary_matrix(2, 9)
        rotated = apply_unitary(mercedes3, u)
        r0 = validate_frame(mercedes3).parseval_residual
        r1 = validate_frame(rotated).parseval_residual
        assert abs(r0 - r1) <= 1e-12


class TestFrameType:
    def test_nonpositive_weight_rejected(self):
        with pytest.raises(ValidationError):
            WeightedFrame(np.eye(2), [1.0, 0.0])

    def test_weight_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            WeightedFrame(np.eye(2), [1.0])

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            WeightedFrame([[np.nan, 0], [0, 1]], [1, 1])

    def test_vectors_read_only(self, std2):
        with pytest.raises(ValueError):
            std2.vectors[0, 0] = 5.0


class TestStateVector:
    def test_norm_enforced(self):
        with pytest.raises(ValidationError):
            StateVector(np.array([1.0, 1.0]))

    def test_normalized_constructor(self):
        s = StateVector.normalized([3.0, 4.0])
        assert np.allclose(s.entries, [0.6, 0.8])
        with pytest.raises(ValidationError):
            StateVector.normalized([0.0, 0.0])

    def test_accepted_by_operations(self, std2):
        s = StateVector.normalized([1.0, 1.0])
        coeffs = analysis_coefficients(s, std2)
        assert np.allclose(coeffs, [1 / np.sqrt(2), 1 / np.sqrt(2)])


class TestAnalysisCoefficients:
    def test_standard_basis_identity(self, std2):
        assert np.allclose(analysis_coefficients([1, 0], std2), [1, 0])

    def test_fourier_vector_detected(self, fourier2):
        h = np.ones(2) / np.sqrt(2)
        coeffs = analysis_coefficients(h, fourier2)
        assert coeffs[0] == pytest.approx(1.0, abs=1e-15)
        assert abs(coeffs[1]) == pytest.approx(0.0, abs=1e-15)

    def test_skewed_state(self, std2):
        h = np.array([np.sqrt(0.9), np.sqrt(0.1)])
        assert np.allclose(analysis_coefficients(h, std2), h)

    def test_dimension_mismatch(self, std3):
        with pytest.raises(ValidationError):
            analysis_coefficients(np.array([1.0, 0.0]), std3)

    def test_non_unit_state_rejected(self, std2):
        with pytest.raises(ValidationError):
            analysis_coefficients(np.array([1.0, 1.0]), std2)

    @pytest.mark.parametrize("d,seed", [(2, 0), (3, 1), (5, 2)])
    def test_weighted_coefficients_sum_to_one(self, d, seed):
        # Parseval identity applied at h
        for kind, n in (("harmonic", 2 * d), ("random_isometry_rows", d + 2)):
            f = make_parseval_frame(kind, n, d, seed)
            for h in sample_unit_states(d, 20, seed + 10):
                x = np.abs(analysis_coefficients(h, f)) ** 2
                assert np.sum(f.weights * x) == pytest.approx(1.0, abs=1e-10)


class TestAdmissibility:
    def test_vanishing_coefficient_flagged(self, std2):
        report = admissibility([1, 0], std2, 1e-12)
        assert not report.admissible
        assert report.offending_index == 1
        assert report.min_coeff_sq == 0.0

    def test_balanced_state(self, std2):
        report = admissibility(np.ones(2) / np.sqrt(2), std2)
        assert report.admissible
        assert report.min_coeff_sq == pytest.approx(0.5)
        assert report.offending_index is None

    def test_skewed_state(self, std2):
        h = np.array([np.sqrt(0.9), np.sqrt(0.1)])
        report = admissibility(h, std2)
        assert report.admissible
        assert report.min_coeff_sq == pytest.approx(0.1)


class TestMutualCoherence:
    def test_self_coherence_of_basis(self, std3):
        assert mutual_coherence(std3, std3) == 1.0

    def test_standard_fourier_d4(self, fourier4):
        std4 = make_orthonormal_basis("standard", 4)
        assert mutual_coherence(std4, fourier4) == pytest.approx(0.5, abs=1e-15)

    def test_mercedes_self(self, mercedes3):
        # diagonal inner product 2/3 beats the off-diagonal 1/3
        assert mutual_coherence(mercedes3, mercedes3) == pytest.approx(2 / 3, abs=1e-15)

    def test_symmetry(self, mercedes3, fourier2):
        assert mutual_coherence(mercedes3, fourier2) == mutual_coherence(fourier2, mercedes3)

    def test_unitary_invariance(self, mercedes3, fourier2):
        u = random_unitary_matrix(2, 4)
        before = mutual_coherence(mercedes3, fourier2)
        after = mutual_coherence(apply_unitary(mercedes3, u), apply_unitary(fourier2, u))
        assert after == pytest.approx(before, abs=1e-12)

    def test_dimension_mismatch(self, std2, std3):
        with pytest.raises(ValidationError):
            mutual_coherence(std2, std3)


class TestSampling:
    def test_unit_norms_and_determinism(self):
        a = sample_unit_states(4, 100, 5)
        b = sample_unit_states(4, 100, 5)
        assert np.array_equal(a, b)
        assert np.allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-14)

    def test_real_field(self):
        a = sample_unit_states(3, 10, 1, complex_field=False)
        assert np.all(a.imag == 0.0)


class TestFrameIO:
    def test_round_trip_exact(self, tmp_path):
        f = make_parseval_frame("random_isometry_rows", 5, 3, 13)
        path = tmp_path / "frame.json"
        save_frame(f, path)
        g = load_frame(path)
        assert np.array_equal(f.vectors, g.vectors)
        assert np.array_equal(f.weights, g.weights)
        assert f.label == g.label

    def test_dict_round_trip(self, mercedes3):
        g = frame_from_dict(frame_to_dict(mercedes3))
        assert np.array_equal(mercedes3.vectors, g.vectors)

    @pytest.mark.parametrize("missing", ["label", "dimension", "weights", "vectors"])
    def test_missing_field_named(self, missing, mercedes3):
        data = frame_to_dict(mercedes3)
        del data[missing]
        with pytest.raises(ValidationError, match=missing):
            frame_from_dict(data)

    def test_dimension_mismatch_named(self, mercedes3):
        data = frame_to_dict(mercedes3)
        data["dimension"] = 5
        with pytest.raises(ValidationError):
            frame_from_dict(data)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{ not json")
        with pytest.raises(ValidationError):
            load_frame(path)

    def test_non_object_rejected(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2, 3]))
        with pytest.raises(ValidationError):
            load_frame(path)


class TestApplyUnitary:
    def test_wrong_shape_rejected(self, std3):
        with pytest.raises(ValidationError):
            apply_unitary(std3, np.eye(2))

    def test_rotation_preserves_validity(self, mercedes3):
        u = random_unitary_matrix(2, 21)
        assert validate_frame(apply_unitary(mercedes3, u)).passed
