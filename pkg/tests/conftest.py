import numpy as np
import pytest

from entropic_frames import PhiSpec, make_orthonormal_basis, make_parseval_frame


@pytest.fixture
def std2():
    return make_orthonormal_basis("standard", 2)


@pytest.fixture
def std3():
    return make_orthonormal_basis("standard", 3)


@pytest.fixture
def fourier2():
    return make_orthonormal_basis("fourier", 2)


@pytest.fixture
def fourier4():
    return make_orthonormal_basis("fourier", 4)


@pytest.fixture
def mercedes3():
    return make_parseval_frame("mercedes_benz", 3, 2)


@pytest.fixture
def certified_phis():
    return [PhiSpec.power(p) for p in (0.25, 0.5, 1.0, 2.0, 4.0)] + [
        PhiSpec.log_shift(a) for a in (1.0, 1.5, 2.0)
    ]


def random_unitary_matrix(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
