import numpy as np
import pytest

from dmkr.config import ArnoldiOptions, ModelParams
from dmkr.hilbert import build_space, coherent_state, momentum_operator, phase_operator
from dmkr.liouvillian import PropagatorAction, materialize_dense
from dmkr.otoc import spectral_coefficients
from dmkr.spectral import compute_spectrum, dense_spectrum

DESK_N = 128
DESK_OPTS = ArnoldiOptions(k=12, krylov_dim=50, tol=1e-10)


def random_state(rng, N):
    G = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    rho = G @ G.conj().T
    return rho / np.trace(rho)


def random_matrix(rng, N):
    return rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))


class Setup:
    """Everything needed for OTOC work at one parameter point."""

    def __init__(self, params, strict=True):
        self.params = params
        self.action = PropagatorAction.from_params(params)
        self.space = self.action.space
        self.A = phase_operator(self.space)
        self.B = momentum_operator(self.space)
        self.rho = coherent_state(self.space, params.q0, params.p0, strict=strict)


@pytest.fixture(scope="session")
def small():
    """N=16 dense oracle setup; the coherent state overlaps the lattice edge here."""
    s = Setup(ModelParams(K=2.0, N=16, h_eff=0.031, gamma=0.2), strict=False)
    s.M = materialize_dense(s.space, s.params)
    s.full = dense_spectrum(s.M)
    s.coeffs = spectral_coefficients(s.full, s.B, s.A, s.rho)
    return s


_desk_cache = {}


@pytest.fixture(scope="session")
def desk():
    """Factory of cached N=128 setups with Arnoldi spectra, keyed by K."""

    def get(K):
        if K not in _desk_cache:
            s = Setup(ModelParams(K=K, N=DESK_N, arnoldi=DESK_OPTS))
            s.sset = compute_spectrum(s.action, DESK_OPTS, s.params.seed)
            s.coeffs = spectral_coefficients(s.sset, s.B, s.A, s.rho)
            _desk_cache[K] = s
        return _desk_cache[K]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
