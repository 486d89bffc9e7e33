"""One-period maps Lambda (states) and Lambda^dagger (observables).

Per period: kick, free rotation, then the dissipative channel,

    Lambda(rho)   = D(U rho U^dagger)
    Lambda^+(B)   = U^dagger D^+(B) U

Vectorization is column stacking, ``vec(X)[j*N + i] = X[i, j]``.  The dense
superoperator is defined column-by-column by applying Lambda^+ to matrix
units, rather than by a Kronecker formula, so it cannot drift from the
matrix-free action.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from dmkr import dissipator
from dmkr.config import ModelParams
from dmkr.floquet import FloquetFactors, build_floquet, conjugate
from dmkr.hilbert import HilbertSpace, build_space

DENSE_MAX_N = 48
ORDERS = ("unitary_first", "dissipation_first")


def vec(X: np.ndarray) -> np.ndarray:
    return np.asarray(X).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    N = int(round(np.sqrt(v.size)))
    if N * N != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(N, N, order="F")


@dataclass(frozen=True)
class PropagatorAction:
    """Matrix-free Lambda and Lambda^dagger for one parameter set.

    ``order="dissipation_first"`` swaps the kick and the channel inside a
    period (Lambda = U D(.) U^dagger); the spectrum is unchanged by this
    similarity, only eigenvectors move.
    """

    space: HilbertSpace
    params: ModelParams
    order: str = "unitary_first"
    step: FloquetFactors = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")
        object.__setattr__(self, "step", build_floquet(self.space, self.params))

    @classmethod
    def from_params(cls, params: ModelParams, order: str = "unitary_first") -> "PropagatorAction":
        return cls(build_space(params.N, params.h_eff), params, order)

    def schrodinger(self, rho: np.ndarray) -> np.ndarray:
        g, sp = self.params.gamma, self.space
        if self.order == "unitary_first":
            return dissipator.apply_channel(sp, g, conjugate(self.step, rho, "forward"))
        return conjugate(self.step, dissipator.apply_channel(sp, g, rho), "forward")

    def heisenberg(self, B: np.ndarray) -> np.ndarray:
        g, sp = self.params.gamma, self.space
        if self.order == "unitary_first":
            return conjugate(self.step, dissipator.apply_adjoint_channel(sp, g, B), "heisenberg")
        return dissipator.apply_adjoint_channel(sp, g, conjugate(self.step, B, "heisenberg"))

    def heisenberg_vec(self, v: np.ndarray) -> np.ndarray:
        return vec(self.heisenberg(unvec(v)))

    def schrodinger_vec(self, v: np.ndarray) -> np.ndarray:
        return vec(self.schrodinger(unvec(v)))


def apply_map(space: HilbertSpace, params: ModelParams, rho: np.ndarray) -> np.ndarray:
    return PropagatorAction(space, params).schrodinger(rho)


def apply_adjoint_map(space: HilbertSpace, params: ModelParams, B: np.ndarray) -> np.ndarray:
    return PropagatorAction(space, params).heisenberg(B)


def materialize_dense(
    space: HilbertSpace, params: ModelParams, order: str = "unitary_first",
    adjoint: bool = True,
) -> np.ndarray:
    """Dense N^2 x N^2 matrix of Lambda^dagger (or Lambda if not ``adjoint``)."""
    N = space.N
    if N > DENSE_MAX_N:
        raise ValueError(
            f"dense superoperator at N={N} is computationally prohibitive "
            f"(limit N <= {DENSE_MAX_N})"
        )
    action = PropagatorAction(space, params, order)
    f = action.heisenberg if adjoint else action.schrodinger
    out = np.empty((N * N, N * N), dtype=complex)
    E = np.zeros((N, N), dtype=complex)
    for c in range(N * N):
        i, j = c % N, c // N
        E[i, j] = 1.0
        out[:, c] = vec(f(E))
        E[i, j] = 0.0
    return out
