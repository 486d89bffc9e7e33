"""One-period unitary of the kicked rotator, kept in factored form.

In the momentum basis the step is ``U = diag(kinetic) . F . diag(kick) . F^-1``
where ``F`` maps position amplitudes to momentum amplitudes: the kick acts
first, then the free rotation.  ``U`` itself is never formed except by
:func:`dense_unitary` for small-N checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dmkr.config import ModelParams
from dmkr.hilbert import HilbertSpace


@dataclass(frozen=True)
class FloquetFactors:
    space: HilbertSpace
    kick_phase: np.ndarray
    kinetic_phase: np.ndarray

    def apply(self, Y: np.ndarray) -> np.ndarray:
        """U @ Y, column by column."""
        sp = self.space
        Z = sp.to_position(Y)
        Z *= self.kick_phase[:, None]
        return self.kinetic_phase[:, None] * sp.to_momentum(Z)

    def apply_adjoint(self, Y: np.ndarray) -> np.ndarray:
        """U^dagger @ Y, column by column."""
        sp = self.space
        Z = sp.to_position(self.kinetic_phase.conj()[:, None] * Y)
        Z *= self.kick_phase.conj()[:, None]
        return sp.to_momentum(Z)


def kick_potential(q: np.ndarray, a: float, phi: float) -> np.ndarray:
    return np.cos(q) + 0.5 * a * np.cos(2 * q + phi)


def build_floquet(space: HilbertSpace, params: ModelParams) -> FloquetFactors:
    kick = np.exp(-1j * params.k * kick_potential(space.q, params.a, params.phi))
    kinetic = np.exp(-0.5j * space.h_eff * space.n.astype(float) ** 2)
    return FloquetFactors(space, kick, kinetic)


def conjugate(step: FloquetFactors, X: np.ndarray, direction: str = "forward") -> np.ndarray:
    """``U X U^dagger`` (forward) or ``U^dagger X U`` (heisenberg).

    Uses (U M^dagger)^dagger = M U^dagger to apply the right factor with
    the same column transform, so the cost is four 2-D FFT passes.
    """
    step.space.check_operator(X)
    if direction == "forward":
        return step.apply(step.apply(X).conj().T).conj().T
    if direction == "heisenberg":
        return step.apply_adjoint(step.apply_adjoint(X).conj().T).conj().T
    raise ValueError(f"direction must be 'forward' or 'heisenberg', got {direction!r}")


def dense_unitary(step: FloquetFactors) -> np.ndarray:
    return step.apply(np.eye(step.space.N, dtype=complex))
