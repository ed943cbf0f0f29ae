import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entropic_frames import DomainError, PhiSpec, ValidationError, certify_phi, phi_eval


class TestPhiEval:
    def test_power_reciprocal(self):
        assert phi_eval(PhiSpec.power(1), 0.5) == 2.0

    def test_log_shift_at_one(self):
        assert phi_eval(PhiSpec.log_shift(1), 1.0) == 1.0

    def test_power_half(self):
        assert phi_eval(PhiSpec.power(0.5), 0.25) == 2.0

    def test_exp_decay(self):
        assert phi_eval(PhiSpec.exp_decay(), 0.5) == pytest.approx(np.exp(-0.5))

    @pytest.mark.parametrize("x", [0.0, -0.5, 1.0000001, 2.0])
    def test_domain_errors(self, x):
        with pytest.raises(DomainError):
            phi_eval(PhiSpec.power(1), x)

    def test_array_evaluation(self):
        x = np.array([0.25, 0.5, 1.0])
        out = phi_eval(PhiSpec.power(2), x)
        assert np.allclose(out, [16.0, 4.0, 1.0])

    def test_array_domain_error(self):
        with pytest.raises(DomainError):
            phi_eval(PhiSpec.power(1), np.array([0.5, -1.0]))

    def test_tabulated_matches_nodes(self):
        xs = np.geomspace(1e-6, 1.0, 50)
        spec = PhiSpec.tabulated(xs, 2.0 - np.log(xs))
        assert phi_eval(spec, xs[7]) == pytest.approx(2.0 - np.log(xs[7]), rel=1e-14)

    def test_tabulated_loglinear_exact_between_nodes(self):
        # a - log x is linear in log x, so interpolation reproduces it exactly
        xs = np.geomspace(1e-6, 1.0, 40)
        spec = PhiSpec.tabulated(xs, 3.0 - np.log(xs))
        x = 0.0123
        assert phi_eval(spec, x) == pytest.approx(3.0 - np.log(x), rel=1e-12)

    def test_tabulated_clamps_below_table(self):
        spec = PhiSpec.tabulated([0.1, 1.0], [5.0, 1.0])
        assert phi_eval(spec, 1e-8) == 5.0


class TestPhiSpecValidation:
    def test_power_needs_positive_exponent(self):
        with pytest.raises(ValidationError):
            PhiSpec.power(-1.0)
        with pytest.raises(ValidationError):
            PhiSpec.power(0.0)

    def test_log_shift_needs_shift_at_least_one(self):
        with pytest.raises(ValidationError):
            PhiSpec.log_shift(0.5)

    def test_tabulated_needs_sorted_grid(self):
        with pytest.raises(ValidationError):
            PhiSpec.tabulated([0.5, 0.2], [1.0, 2.0])
        with pytest.raises(ValidationError):
            PhiSpec.tabulated([0.0, 1.0], [1.0, 2.0])

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            PhiSpec("gaussian", (1.0,))

    def test_serialization_round_trip(self):
        for spec in (PhiSpec.power(2), PhiSpec.log_shift(1.5), PhiSpec.exp_decay()):
            again = PhiSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
            assert again == spec

    def test_tabulated_serialization_round_trip(self):
        xs = [0.01, 0.1, 1.0]
        spec = PhiSpec.tabulated(xs, [4.0, 2.0, 1.0])
        again = PhiSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
        assert np.array_equal(again.params[0], spec.params[0])
        assert np.array_equal(again.params[1], spec.params[1])


class TestCertifier:
    @pytest.mark.parametrize("p", [0.25, 0.5, 1.0, 2.0, 4.0])
    def test_power_family_certifies(self, p):
        cert = certify_phi(PhiSpec.power(p), 200)
        assert cert.positive and cert.decreasing and cert.submultiplicative
        assert cert.witness is None

    @pytest.mark.parametrize("a", [1.0, 1.5, 2.0])
    def test_log_shift_family_certifies(self, a):
        assert certify_phi(PhiSpec.log_shift(a), 200).certified

    def test_exp_decay_rejected_with_witness(self):
        cert = certify_phi(PhiSpec.exp_decay(), 200)
        assert cert.positive and cert.decreasing
        assert not cert.submultiplicative
        x, y, phi_xy, phi_x_phi_y = cert.witness
        # the recorded witness is a genuine violation with a large defect
        assert phi_xy == pytest.approx(np.exp(-x * y), rel=1e-12)
        assert phi_x_phi_y == pytest.approx(np.exp(-x - y), rel=1e-12)
        assert phi_xy - phi_x_phi_y >= 0.4

    def test_increasing_tabulated_rejected(self):
        spec = PhiSpec.tabulated([0.1, 1.0], [1.0, 3.0])
        cert = certify_phi(spec, 100)
        assert not cert.decreasing

    def test_log_reciprocal_fails_positivity(self):
        xs = np.geomspace(1e-9, 1.0, 64)
        spec = PhiSpec.tabulated(xs, -np.log(xs))  # vanishes at x = 1
        cert = certify_phi(spec, 100)
        assert not cert.positive

    def test_grid_size_validated(self):
        with pytest.raises(ValidationError):
            certify_phi(PhiSpec.power(1), 1)

    def test_certificate_serializes_witness(self):
        cert = certify_phi(PhiSpec.exp_decay(), 50)
        data = cert.to_dict()
        assert data["certified"] is False
        assert data["witness"]["phi_xy"] > data["witness"]["phi_x_phi_y"]


@given(
    a=st.floats(min_value=1.0, max_value=10.0),
    x=st.floats(min_value=1e-9, max_value=1.0),
    y=st.floats(min_value=1e-9, max_value=1.0),
)
def test_log_shift_defect_identity(a, x, y):
    # phi(x)phi(y) - phi(xy) = (a^2 - a) + (a - 1)(u + v) + u v >= 0
    # with u = -log x, v = -log y; both sides computed independently
    spec = PhiSpec.log_shift(a)
    lhs = phi_eval(spec, x) * phi_eval(spec, y) - (a - np.log(x) - np.log(y))
    u, v = -np.log(x), -np.log(y)
    rhs = (a * a - a) + (a - 1.0) * (u + v) + u * v
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)
    assert rhs >= 0.0


@given(
    p=st.floats(min_value=0.1, max_value=5.0),
    x=st.floats(min_value=1e-6, max_value=1.0),
    y=st.floats(min_value=1e-6, max_value=1.0),
)
def test_power_family_multiplicative(p, x, y):
    spec = PhiSpec.power(p)
    prod = phi_eval(spec, x) * phi_eval(spec, y)
    assert phi_eval(spec, min(x * y, 1.0)) == pytest.approx(prod, rel=1e-10)
