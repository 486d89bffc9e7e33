"""Lindblad ladders toward n = 0 and their exact unit-time channel.

The jump operators are

    M1 = g * sum_{n>=0} sqrt(n+1) |n><n+1|
    M2 = g * sum_{n>=0} sqrt(n+1) |-n><-n-1|

with g**2 = -ln(gamma).  M1 acts as g times the oscillator lowering operator
on the half-lattice n >= 0 and M2 likewise on n <= 0.  The dissipator then
splits the matrix plane into three sectors:

* both indices >= 0: harmonic-oscillator amplitude damping driven by M1;
* both indices <= 0: the mirror image driven by M2;
* mixed signs: no jump feeds these entries, they only decay.

After unit time the damping parameter is exp(-g**2) = gamma and the
oscillator channel has the closed form

    rho'[n, m] = sum_k a_k[n] a_k[m] rho[n+k, m+k],
    a_k[n] = sqrt(C(n+k, k) * gamma**n * (1-gamma)**k),

so the channel is exact (no series truncation beyond the lattice, and
the lattice edge is an invariant top level of each ladder).  Cost is
O(N**3 / 12) multiply-adds per application.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from dmkr.hilbert import HilbertSpace


@dataclass(frozen=True)
class LindbladPair:
    M1: np.ndarray
    M2: np.ndarray
    g: float


def _coupling(gamma: float) -> float:
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0,1]")
    return float(np.sqrt(abs(np.log(gamma))))


def lindblad_operators(space: HilbertSpace, gamma: float) -> LindbladPair:
    """Dense M1, M2 clipped to the lattice (bidiagonal structure)."""
    g = _coupling(gamma)
    N, z = space.N, space.zero_index
    M1 = np.zeros((N, N), dtype=complex)
    M2 = np.zeros((N, N), dtype=complex)
    for n in range(N // 2 - 1):  # M1: |n><n+1|, n+1 <= N/2 - 1
        M1[z + n, z + n + 1] = g * np.sqrt(n + 1)
    for n in range(N // 2):  # M2: |-n><-n-1|, -n-1 >= -N/2
        M2[z - n, z - n - 1] = g * np.sqrt(n + 1)
    return LindbladPair(M1, M2, g)


@lru_cache(maxsize=32)
def _ladder_weights(levels: int, gamma: float) -> tuple[np.ndarray, ...]:
    """Vectors a_k (length levels - k) for k = 0..levels-1."""
    n = np.arange(levels, dtype=float)
    if gamma == 1.0:
        return (np.ones(levels),)
    out = []
    for k in range(levels):
        nn = n[: levels - k]
        log_a = 0.5 * (
            gammaln(nn + k + 1) - gammaln(nn + 1) - gammaln(k + 1)
            + nn * np.log(gamma) + k * np.log1p(-gamma)
        )
        a = np.exp(log_a)
        if not a.any():
            break
        out.append(a)
    return tuple(out)


def _damp(block: np.ndarray, weights: tuple[np.ndarray, ...]) -> np.ndarray:
    out = np.zeros_like(block)
    L = block.shape[0]
    for k, a in enumerate(weights):
        out[: L - k, : L - k] += a[:, None] * block[k:, k:] * a[None, :]
    return out


def _damp_adjoint(block: np.ndarray, weights: tuple[np.ndarray, ...]) -> np.ndarray:
    out = np.zeros_like(block)
    L = block.shape[0]
    for k, a in enumerate(weights):
        out[k:, k:] += a[:, None] * block[: L - k, : L - k] * a[None, :]
    return out


@lru_cache(maxsize=32)
def _mixed_decay(N: int, gamma: float) -> np.ndarray:
    n = np.arange(N) - N // 2
    mixed = np.sign(n)[:, None] * np.sign(n)[None, :] < 0
    decay = gamma ** (0.5 * (np.abs(n)[:, None] + np.abs(n)[None, :]))
    return np.where(mixed, decay, 0.0)


def _apply(space: HilbertSpace, gamma: float, X: np.ndarray, adjoint: bool) -> np.ndarray:
    space.check_operator(X)
    N, z = space.N, space.zero_index
    if gamma == 1.0:
        return X.copy()
    damp = _damp_adjoint if adjoint else _damp
    pos = damp(X[z:, z:], _ladder_weights(N - z, gamma))
    neg = damp(X[z::-1, z::-1], _ladder_weights(z + 1, gamma))
    out = X * _mixed_decay(N, gamma)
    out[z:, z:] = pos
    out[z::-1, z::-1] = neg
    # both sectors contain (0, 0) with its k = 0 term; count it once
    out[z, z] = pos[0, 0] + neg[0, 0] - X[z, z]
    return out


def apply_channel(space: HilbertSpace, gamma: float, rho: np.ndarray) -> np.ndarray:
    """exp(L_D)(rho): the dissipative part of the master equation for unit time."""
    return _apply(space, gamma, rho, adjoint=False)


def apply_adjoint_channel(space: HilbertSpace, gamma: float, B: np.ndarray) -> np.ndarray:
    """Hilbert-Schmidt adjoint of :func:`apply_channel` (Heisenberg picture)."""
    return _apply(space, gamma, B, adjoint=True)


def dissipator_superoperator(pair: LindbladPair) -> np.ndarray:
    """Dense generator L_D on column-stacked vec(rho), for small-N oracles.

    Built from M1, M2 with vec(A X B) = (B^T kron A) vec(X).
    """
    N = pair.M1.shape[0]
    eye = np.eye(N)
    S = np.zeros((N * N, N * N), dtype=complex)
    for M in (pair.M1, pair.M2):
        MdM = M.conj().T @ M
        S += np.kron(M.conj(), M) - 0.5 * np.kron(eye, MdM) - 0.5 * np.kron(MdM.T, eye)
    return S
