import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmkr.hilbert import (
    BoundarySupportError, build_space, coherent_amplitudes, coherent_state, expectation,
    momentum_operator, phase_operator, position_expectation,
)


def test_build_space_small():
    sp = build_space(4, 0.031)
    assert list(sp.n) == [-2, -1, 0, 1]
    np.testing.assert_allclose(sp.q, [0, np.pi / 2, np.pi, 3 * np.pi / 2])


def test_build_space_production_lattice():
    sp = build_space(1024, 0.031)
    assert sp.n[0] == -512 and sp.n[-1] == 511
    assert sp.n[sp.zero_index] == 0


@pytest.mark.parametrize("N", [3, 2, 0, 7])
def test_build_space_rejects(N):
    with pytest.raises(ValueError):
        build_space(N, 0.031)


def test_build_space_rejects_hbar():
    with pytest.raises(ValueError):
        build_space(8, 0.0)


def _dft_matrix(sp):
    return np.exp(-1j * np.outer(sp.n, sp.q)) / np.sqrt(sp.N)


def test_transform_matches_explicit_dft(rng):
    sp = build_space(16, 0.1)
    x = rng.standard_normal((16, 3)) + 1j * rng.standard_normal((16, 3))
    np.testing.assert_allclose(sp.to_momentum(x), _dft_matrix(sp) @ x, atol=1e-13)


@given(st.integers(2, 64).map(lambda m: 2 * m), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_transform_round_trip(N, seed):
    sp = build_space(N, 0.031)
    r = np.random.default_rng(seed)
    x = r.standard_normal(N) + 1j * r.standard_normal(N)
    assert np.abs(sp.to_momentum(sp.to_position(x)) - x).max() <= 1e-12
    assert np.abs(sp.to_position(sp.to_momentum(x)) - x).max() <= 1e-12


def test_coherent_state_pure_and_normalized():
    sp = build_space(256, 0.031)
    rho = coherent_state(sp, np.pi, 0.0)
    assert abs(np.trace(rho) - 1) <= 1e-12
    assert abs(np.trace(rho @ rho) - 1) <= 1e-10
    assert np.abs(rho - rho.conj().T).max() <= 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-10
    assert abs(expectation(momentum_operator(sp), rho)) <= 1e-10


@pytest.mark.parametrize("q0, p0", [(np.pi, 0.0), (1.0, 0.3), (5.5, -0.4), (0.2, 0.0123)])
def test_coherent_state_centre(q0, p0):
    sp = build_space(128, 0.031)
    rho = coherent_state(sp, q0, p0)
    assert abs(position_expectation(sp, rho) - q0) <= 1e-6
    assert abs(expectation(momentum_operator(sp), rho).real - p0) <= 1e-6


def test_coherent_state_position_width():
    # position variance h/2 for the symmetric packet, checked on a fine grid
    h = 0.031
    sp = build_space(128, h)
    c = coherent_amplitudes(sp, np.pi, 0.0)
    q = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    psi = np.exp(1j * np.outer(q, sp.n)) @ c
    w = np.abs(psi) ** 2
    w /= w.sum()
    var = (w * (q - np.pi) ** 2).sum()
    assert var == pytest.approx(h / 2, rel=1e-6)


@given(st.floats(0, 2 * np.pi, exclude_max=True), st.floats(-0.5, 0.5))
@settings(max_examples=30, deadline=None)
def test_coherent_state_periodic_in_q0(q0, p0):
    sp = build_space(128, 0.031)
    a = coherent_state(sp, q0, p0)
    b = coherent_state(sp, q0 + 2 * np.pi, p0)
    assert np.abs(a - b).max() <= 1e-12


def _edge_population_by_summation(N, h, q0, p0, M=4096, images=6):
    """Edge occupancy from a periodized Gaussian in q, Fourier-projected onto the lattice."""
    q = np.linspace(0, 2 * np.pi, M, endpoint=False)
    sigma2 = h / 2
    psi = sum(np.exp(-((q - q0 + 2 * np.pi * m) ** 2) / (4 * sigma2)) for m in range(-images, images + 1))
    psi = psi * np.exp(1j * p0 / h * q)
    n = np.arange(N) - N // 2
    coef = np.exp(-1j * np.outer(n, q)) @ psi / M
    pop = np.abs(coef) ** 2
    pop /= pop.sum()
    return max(pop[0], pop[1], pop[-1])


@pytest.mark.parametrize("N", [16, 32, 64, 128])
def test_boundary_rule_matches_direct_summation(N):
    occ = _edge_population_by_summation(N, 0.031, np.pi, 0.0)
    sp = build_space(N, 0.031)
    if occ > 1e-10:
        with pytest.raises(BoundarySupportError):
            coherent_state(sp, np.pi, 0.0)
    else:
        coherent_state(sp, np.pi, 0.0)
    # and the non-strict state has the same edge occupancy
    rho = coherent_state(sp, np.pi, 0.0, strict=False)
    d = np.real(np.diag(rho))
    # the grid sum bottoms out near 1e-30 from rounding
    assert max(d[0], d[1], d[-1]) == pytest.approx(occ, rel=1e-8, abs=1e-25)


def test_boundary_rule_at_small_N_is_an_error():
    # sigma_n ~ 4 at h=0.031, so N=16 puts ~20% weight on the edge
    with pytest.raises(BoundarySupportError):
        coherent_state(build_space(16, 0.031), np.pi, 0.0)


def test_momentum_operator_small():
    sp = build_space(4, 0.5)
    P = momentum_operator(sp)
    np.testing.assert_array_equal(P, np.diag([-1.0, -0.5, 0.0, 0.5]))
    assert (P == P.conj().T).all()
    sp = build_space(64, 0.031)
    assert np.trace(momentum_operator(sp)).real == pytest.approx(0.031 * -32)


def test_phase_operator_is_cyclic_shift():
    sp = build_space(4, 0.031)
    A = phase_operator(sp)
    expected = np.array([[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    np.testing.assert_array_equal(A, expected)


def test_phase_operator_equals_position_multiplication():
    sp = build_space(32, 0.031)
    F = _dft_matrix(sp)
    via_position = F @ np.diag(np.exp(1j * sp.q)) @ F.conj().T
    assert np.abs(via_position - phase_operator(sp)).max() <= 1e-12


def test_phase_operator_unitary():
    A = phase_operator(build_space(64, 0.031))
    assert np.abs(A @ A.conj().T - np.eye(64)).max() <= 1e-12


def test_phase_momentum_commutator():
    sp = build_space(8, 0.31)
    A, P = phase_operator(sp), momentum_operator(sp)
    C = A @ P - P @ A
    wrap = sp.N - 1  # column of n = N/2 - 1
    cols = [j for j in range(sp.N) if j != wrap]
    assert np.abs(C[:, cols] + sp.h_eff * A[:, cols]).max() <= 1e-15
    assert np.abs(C[:, wrap] + sp.h_eff * A[:, wrap]).max() > 1.0
