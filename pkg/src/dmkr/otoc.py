"""OTOC by direct Heisenberg evolution and by truncated spectral sums.

The correlator is the commutator form with B evolving and A fixed,

    C(t) = Tr([A, B(t)] [A, B(t)]^dagger rho0),   B(t) = (Lambda^dagger)^t B0.

Inserting B(t) = sum_i lambda_i^t b_i R_i with b_i = Tr(L_i^dagger B0) gives

    C(t) = sum_ij (lambda_i conj(lambda_j))^t b_i conj(b_j) d_ij,
    d_ij = Tr([A, R_i] [A, R_j]^dagger rho0),

which is evaluated here over any conjugation-closed index subset.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from dmkr.config import ModelParams
from dmkr.hilbert import HilbertSpace
from dmkr.liouvillian import PropagatorAction
from dmkr.spectral import PAIR_TOL, SpectralSet, conjugate_partners


class SubsetNotClosedWarning(UserWarning):
    pass


class UndefinedWeightsError(ValueError):
    pass


@dataclass
class OtocSeries:
    times: np.ndarray
    values: np.ndarray
    source: str = "direct"
    subset: tuple[int, ...] | None = None
    closed: bool = True


@dataclass
class SpectralCoefficients:
    b: np.ndarray  # (k,)
    d: np.ndarray  # (k, k), hermitian PSD


@dataclass
class WeightMap:
    times: list[int]
    weights: list[np.ndarray] = field(default_factory=list)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def otoc_value(A: np.ndarray, B: np.ndarray, rho: np.ndarray) -> complex:
    X = commutator(A, B)
    return complex(np.trace(X @ X.conj().T @ rho))


def evolve_heisenberg(space: HilbertSpace, params: ModelParams, B0: np.ndarray, t: int,
                      action: PropagatorAction | None = None) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be non-negative")
    space.check_operator(B0)
    action = action or PropagatorAction(space, params)
    B = B0
    for _ in range(t):
        B = action.heisenberg(B)
    return B


def otoc_direct(space: HilbertSpace, params: ModelParams, A: np.ndarray, B0: np.ndarray,
                rho0: np.ndarray, t_max: int,
                action: PropagatorAction | None = None) -> OtocSeries:
    space.check_operator(A)
    space.check_operator(rho0)
    action = action or PropagatorAction(space, params)
    values = np.empty(t_max + 1, dtype=complex)
    eye = np.eye(space.N)
    B = B0 - np.trace(B0) / space.N * eye
    for t in range(t_max + 1):
        if t:
            B = action.heisenberg(B)
            # Lambda^+(I) = I and [A, I] = 0, so dropping the trace part is
            # exact; it keeps the non-decaying steady-state component from
            # feeding rounding noise into C(t) at late times
            B -= np.trace(B) / space.N * eye
        values[t] = otoc_value(A, B, rho0)
    return OtocSeries(np.arange(t_max + 1), values, "direct")


def spectral_coefficients(sset: SpectralSet, B0: np.ndarray, A: np.ndarray,
                          rho0: np.ndarray) -> SpectralCoefficients:
    R = sset.rights
    if B0.shape != R.shape[1:] or A.shape != B0.shape or rho0.shape != B0.shape:
        raise ValueError("operator dimensions do not match the spectral set")
    b = np.einsum("iab,ab->i", sset.lefts.conj(), B0)
    X = A[None] @ R - R @ A[None]
    rX = rho0[None] @ X
    # Tr(X_i X_j^+ rho) = sum_ab X_i[a,b] conj((rho X_j)[a,b]) for hermitian rho
    d = np.einsum("iab,jab->ij", X, rX.conj())
    return SpectralCoefficients(b, d)


def close_subset(eigenvalues: np.ndarray, subset, tol: float = PAIR_TOL) -> tuple[list[int], bool]:
    """Add missing conjugate partners; returns (sorted subset, whether any were added).

    Raises if a partner is not among the available eigenvalues.
    """
    partners = conjugate_partners(eigenvalues, tol)
    out = set(int(i) for i in subset)
    for i in list(out):
        j = partners[i]
        if j < 0:
            raise ValueError(f"conjugate partner of index {i} is not available")
        out.add(int(j))
    return sorted(out), len(out) != len(set(subset))


def is_closed(eigenvalues: np.ndarray, subset, tol: float = PAIR_TOL) -> bool:
    partners = conjugate_partners(eigenvalues, tol)
    s = set(int(i) for i in subset)
    return all(partners[i] in s for i in s)


def level_indices(eigenvalues: np.ndarray, levels, tol: float = PAIR_TOL) -> list[int]:
    """Indices of eigenvalue levels, where a conjugate pair counts as one level.

    Level 0 is the unit eigenvalue, level 1 is lambda_1 together with its
    conjugate if complex, and so on, following the spectral ordering.
    """
    partners = conjugate_partners(eigenvalues, tol)
    level_of = np.full(len(eigenvalues), -1)
    lvl = 0
    for i in range(len(eigenvalues)):
        if level_of[i] >= 0:
            continue
        level_of[i] = lvl
        if partners[i] >= 0:
            level_of[partners[i]] = lvl
        lvl += 1
    wanted = set(levels)
    return [i for i in range(len(eigenvalues)) if level_of[i] in wanted]


def _terms(eigenvalues: np.ndarray, coeffs: SpectralCoefficients, idx, t: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=int)
    lt = eigenvalues[idx] ** t
    bt = lt * coeffs.b[idx]
    return bt[:, None] * bt.conj()[None, :] * coeffs.d[np.ix_(idx, idx)]


def otoc_reconstruct(eigenvalues: np.ndarray, coeffs: SpectralCoefficients, subset,
                     t: int) -> complex:
    """Partial spectral sum of C(t) over ``subset`` x ``subset``.

    Warns with :class:`SubsetNotClosedWarning` if the subset is not closed
    under complex conjugation (the result is then not guaranteed real).
    """
    if not is_closed(eigenvalues, subset):
        warnings.warn(f"subset {sorted(subset)} is not conjugation-closed",
                      SubsetNotClosedWarning, stacklevel=2)
    return complex(_terms(eigenvalues, coeffs, subset, t).sum())


def reconstruct_series(eigenvalues: np.ndarray, coeffs: SpectralCoefficients, subset,
                       t_max: int) -> OtocSeries:
    subset = sorted(int(i) for i in subset)
    closed = is_closed(eigenvalues, subset)
    if not closed:
        warnings.warn(f"subset {subset} is not conjugation-closed",
                      SubsetNotClosedWarning, stacklevel=2)
    vals = np.array([_terms(eigenvalues, coeffs, subset, t).sum() for t in range(t_max + 1)])
    return OtocSeries(np.arange(t_max + 1), vals, "reconstructed", tuple(subset), closed)


def weight_matrix(eigenvalues: np.ndarray, coeffs: SpectralCoefficients, top_k: int,
                  t: int) -> np.ndarray:
    """p_ij(t): moduli of the top_k x top_k spectral terms, normalized to sum 1."""
    if top_k > len(eigenvalues):
        raise ValueError(f"top_k={top_k} exceeds the {len(eigenvalues)} available eigenpairs")
    mag = np.abs(_terms(eigenvalues, coeffs, range(top_k), t))
    total = mag.sum()
    if not total > 0:
        raise UndefinedWeightsError(f"all spectral terms vanish at t={t}")
    return mag / total


def weight_series(eigenvalues: np.ndarray, coeffs: SpectralCoefficients, top_k: int,
                  times) -> WeightMap:
    times = [int(t) for t in times]
    return WeightMap(times, [weight_matrix(eigenvalues, coeffs, top_k, t) for t in times])


def pair_mass(weights: np.ndarray, indices) -> float:
    """Total weight on pairs (i, j) with both indices in ``indices``."""
    idx = [i for i in indices if i < weights.shape[0]]
    return float(weights[np.ix_(idx, idx)].sum())
