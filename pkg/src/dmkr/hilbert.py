"""Truncated momentum basis, grids, canonical operators and the initial state.

Conventions (fixed, so everything downstream is bit-reproducible):

* momentum lattice ``n_j = j - N/2`` for ``j = 0..N-1``;
* position grid ``q_j = 2*pi*j/N``;
* the unitary transform from position amplitudes to momentum amplitudes is
  ``c_n = N**-0.5 * sum_j exp(-1j*n*q_j) * psi(q_j)``, i.e. an orthonormal
  FFT followed by ``fftshift``.

Operators are stored as dense ``(N, N)`` complex arrays in the momentum
basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class BoundarySupportError(ValueError):
    """A state has non-negligible weight at the edge of the momentum lattice."""


EDGE_OCCUPANCY_TOL = 1e-10


@dataclass(frozen=True)
class HilbertSpace:
    N: int
    h_eff: float

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.N) - self.N // 2

    @property
    def q(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.N) / self.N

    @property
    def p(self) -> np.ndarray:
        return self.h_eff * self.n

    @property
    def zero_index(self) -> int:
        """Array index of the n = 0 momentum state."""
        return self.N // 2

    def to_position(self, x: np.ndarray) -> np.ndarray:
        """Momentum amplitudes -> position-grid amplitudes along axis 0."""
        return np.fft.ifft(np.fft.ifftshift(x, axes=0), axis=0, norm="ortho")

    def to_momentum(self, x: np.ndarray) -> np.ndarray:
        """Position-grid amplitudes -> momentum amplitudes along axis 0."""
        return np.fft.fftshift(np.fft.fft(x, axis=0, norm="ortho"), axes=0)

    def check_operator(self, X: np.ndarray) -> None:
        if X.shape != (self.N, self.N):
            raise ValueError(f"operator shape {X.shape} does not match N={self.N}")


def build_space(N: int, h_eff: float) -> HilbertSpace:
    if int(N) != N or N < 4 or N % 2:
        raise ValueError(f"N must be an even integer >= 4, got {N}")
    if not h_eff > 0:
        raise ValueError(f"h_eff must be positive, got {h_eff}")
    return HilbertSpace(int(N), float(h_eff))


def coherent_amplitudes(space: HilbertSpace, q0: float, p0: float) -> np.ndarray:
    """Normalized momentum amplitudes of a periodic Gaussian packet.

    Position variance is h_eff/2, so the packet is symmetric between q and
    the scaled momentum p.  Built directly on the momentum lattice, which
    is the exact Fourier series of the 2*pi-periodized Gaussian.
    """
    n = space.n
    width = space.h_eff / 2
    c = np.exp(-width * (n - p0 / space.h_eff) ** 2 - 1j * n * q0)
    return c / np.linalg.norm(c)


def edge_occupancy(space: HilbertSpace, psi: np.ndarray) -> float:
    """Largest population among the lattice edge states |n| >= N/2 - 1."""
    pop = np.abs(psi) ** 2
    return float(max(pop[0], pop[1], pop[-1]))


def coherent_state(
    space: HilbertSpace, q0: float, p0: float, strict: bool = True
) -> np.ndarray:
    """Density matrix |psi><psi| of the coherent state centred at (q0, p0).

    With ``strict`` (the default), raises :class:`BoundarySupportError`
    when the edge occupancy exceeds 1e-10: beyond that the cyclic phase
    operator and the clipped Lindblad ladders no longer represent the
    untruncated dynamics.  Small-N oracle checks pass ``strict=False``.
    """
    psi = coherent_amplitudes(space, q0, p0)
    occ = edge_occupancy(space, psi)
    if strict and occ > EDGE_OCCUPANCY_TOL:
        raise BoundarySupportError(
            f"coherent state has edge occupancy {occ:.3e} > {EDGE_OCCUPANCY_TOL:g} "
            f"at N={space.N}, h_eff={space.h_eff}"
        )
    return np.outer(psi, psi.conj())


def momentum_operator(space: HilbertSpace) -> np.ndarray:
    """Scaled momentum h_eff * n as a diagonal matrix."""
    return np.diag(space.p.astype(complex))


def phase_operator(space: HilbertSpace) -> np.ndarray:
    """exp(iQ) in the momentum basis: the cyclic shift |n> -> |n+1>.

    Multiplication by exp(i q_j) on the position grid is exactly this
    permutation under the transform convention above, so it is built as
    the permutation directly, and is exactly unitary.
    """
    return np.roll(np.eye(space.N, dtype=complex), 1, axis=0)


def named_operator(space: HilbertSpace, name: str) -> np.ndarray:
    """Operator by config name: ``"exp_iq"`` or ``"p"``."""
    if name == "exp_iq":
        return phase_operator(space)
    if name == "p":
        return momentum_operator(space)
    raise ValueError(f"unknown operator name {name!r}")


def position_expectation(space: HilbertSpace, rho: np.ndarray) -> float:
    """Circular mean position arg<exp(iQ)> in [0, 2*pi)."""
    z = np.trace(phase_operator(space) @ rho)
    return float(np.angle(z) % (2 * np.pi))


def expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    return complex(np.trace(op @ rho))
