import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from dmkr.config import ModelParams
from dmkr.dissipator import dissipator_superoperator, lindblad_operators
from dmkr.floquet import build_floquet, dense_unitary
from dmkr.hilbert import build_space
from dmkr.liouvillian import PropagatorAction, materialize_dense, unvec, vec
from dmkr.spectral import multiset_distance
from conftest import random_matrix, random_state


def test_vec_is_column_stacking():
    X = np.arange(6).reshape(2, 3)
    np.testing.assert_array_equal(vec(X), [0, 3, 1, 4, 2, 5])


def test_unvec_rejects_non_square():
    with pytest.raises(ValueError):
        unvec(np.zeros(10))


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_vec_round_trip_and_kron_identity(N, seed):
    r = np.random.default_rng(seed)
    A, X, B = (random_matrix(r, N) for _ in range(3))
    assert (unvec(vec(X)) == X).all()
    assert np.abs(vec(A @ X @ B) - np.kron(B.T, A) @ vec(X)).max() <= 1e-10


@pytest.mark.parametrize("K", [2.0, 8.2])
def test_dense_matches_kronecker_oracle(K):
    p = ModelParams(K=K, N=16)
    sp = build_space(16, p.h_eff)
    U = dense_unitary(build_floquet(sp, p))
    E = expm(dissipator_superoperator(lindblad_operators(sp, p.gamma)))
    # Lambda^+ = (U^T kron U^+) E^+, Lambda = E (U* kron U)
    oracle_adj = np.kron(U.T, U.conj().T) @ E.conj().T
    oracle = E @ np.kron(U.conj(), U)
    assert np.abs(materialize_dense(sp, p) - oracle_adj).max() <= 1e-10
    assert np.abs(materialize_dense(sp, p, adjoint=False) - oracle).max() <= 1e-10


def test_dense_guard():
    p = ModelParams(K=2.0, N=64)
    with pytest.raises(ValueError, match="computationally prohibitive"):
        materialize_dense(build_space(64, p.h_eff), p)


def test_trace_and_unitality_at_production_size(rng):
    p = ModelParams(K=3.7, N=256)
    act = PropagatorAction.from_params(p)
    rho = random_state(rng, 256)
    assert abs(np.trace(act.schrodinger(rho)) - 1) <= 1e-12
    eye = np.eye(256, dtype=complex)
    assert np.abs(act.heisenberg(eye) - eye).max() <= 1e-12


def test_adjoint_pairing(rng):
    act = PropagatorAction.from_params(ModelParams(K=4.2, N=32))
    for _ in range(5):
        X, Y = random_matrix(rng, 32), random_matrix(rng, 32)
        lhs = np.vdot(Y, act.schrodinger(X))
        rhs = np.vdot(act.heisenberg(Y), X)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_free_unitary_limit(rng):
    p = ModelParams(K=2.0, N=16, gamma=1.0)
    act = PropagatorAction.from_params(p)
    U = dense_unitary(act.step)
    X = random_matrix(rng, 16)
    assert np.abs(act.schrodinger(X) - U @ X @ U.conj().T).max() <= 1e-12
    M = materialize_dense(act.space, p)
    assert np.abs(np.abs(np.linalg.eigvals(M)) - 1).max() <= 1e-10


@pytest.mark.parametrize("K", [2.0, 3.7])
def test_order_of_factors_keeps_spectrum(K):
    p = ModelParams(K=K, N=12)
    sp = build_space(12, p.h_eff)
    a = np.linalg.eigvals(materialize_dense(sp, p))
    b = np.linalg.eigvals(materialize_dense(sp, p, order="dissipation_first"))
    assert multiset_distance(a, b) <= 1e-9


def test_bad_order():
    with pytest.raises(ValueError):
        PropagatorAction.from_params(ModelParams(K=1.0, N=8), order="sideways")


def test_dense_spectrum_structure(small):
    w = np.linalg.eigvals(small.M)
    assert multiset_distance(w, w.conj()) <= 1e-10
    assert np.abs(w).max() <= 1 + 1e-12
    assert np.sum(np.abs(w - 1) <= 1e-8) == 1
