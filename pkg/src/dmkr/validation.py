"""Dense small-N oracle checks run by the ``validate`` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from dmkr import dissipator
from dmkr.config import ModelParams
from dmkr.hilbert import build_space, coherent_state, momentum_operator, phase_operator
from dmkr.liouvillian import PropagatorAction, materialize_dense, unvec, vec
from dmkr.otoc import otoc_direct, reconstruct_series, spectral_coefficients
from dmkr.spectral import (
    compute_spectrum, conjugate_partners, dense_spectrum, multiset_distance, spectral_order,
)

VALIDATE_MAX_N = 32


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.value:.3e} (limit {self.threshold:.1e})"


def _le(name: str, value: float, threshold: float) -> Check:
    return Check(name, float(value), threshold, bool(value <= threshold))


def random_state(rng: np.random.Generator, N: int) -> np.ndarray:
    G = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    rho = G @ G.conj().T
    return rho / np.trace(rho)


def random_matrix(rng: np.random.Generator, N: int) -> np.ndarray:
    return rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))


def run_checks(params: ModelParams, t_max: int = 50) -> list[Check]:
    N = params.N
    if N > VALIDATE_MAX_N:
        raise ValueError(f"validate needs N <= {VALIDATE_MAX_N} for the dense oracles, got N={N}")
    sp = build_space(N, params.h_eff)
    rng = np.random.default_rng(params.seed)
    checks = []

    gen = dissipator.dissipator_superoperator(dissipator.lindblad_operators(sp, params.gamma))
    E = scipy.linalg.expm(gen)
    X = random_matrix(rng, N)
    fwd = unvec(E @ vec(X))
    adj = unvec(E.conj().T @ vec(X))
    checks.append(_le("channel vs dense exponential",
                      np.abs(dissipator.apply_channel(sp, params.gamma, X) - fwd).max(), 1e-10))
    checks.append(_le("adjoint channel vs dense exponential",
                      np.abs(dissipator.apply_adjoint_channel(sp, params.gamma, X) - adj).max(), 1e-10))

    action = PropagatorAction(sp, params)
    worst = 0.0
    for _ in range(20):
        B, rho = random_matrix(rng, N), random_state(rng, N)
        lhs = np.trace(B.conj().T @ action.schrodinger(rho))
        rhs = np.trace(action.heisenberg(B).conj().T @ rho)
        worst = max(worst, abs(lhs - rhs))
    checks.append(_le("map adjointness on 20 random pairs", worst, 1e-10))
    checks.append(_le("unitality of Lambda^dagger",
                      np.abs(action.heisenberg(np.eye(N, dtype=complex)) - np.eye(N)).max(), 1e-10))
    rho = random_state(rng, N)
    checks.append(_le("trace preservation of Lambda",
                      abs(np.trace(action.schrodinger(rho)) - 1), 1e-12))

    M = materialize_dense(sp, params)
    w = np.linalg.eigvals(M)
    w = w[spectral_order(w)]
    closure = max(np.abs(w - np.conj(z)).min() for z in w)
    checks.append(_le("dense spectrum closed under conjugation", closure, 1e-10))
    checks.append(_le("dense spectral radius - 1", np.abs(w).max() - 1, 1e-10))
    n_unit = int(np.sum(np.abs(w) >= 1 - 1e-8))
    checks.append(Check("eigenvalues with modulus >= 1-1e-8 (expect 1)", n_unit, 1, n_unit == 1))

    opts = params.arnoldi
    kmax = min(opts.k, N * N - 1)
    sset = compute_spectrum(action, opts, params.seed)
    d = multiset_distance(sset.eigenvalues[:kmax], w[:kmax])
    checks.append(_le(f"Arnoldi top-{kmax} vs dense eigenvalues", d, 1e-8))
    checks.append(_le("Arnoldi biorthonormality",
                      np.abs(sset.overlaps() - np.eye(len(sset))).max(), 1e-8))
    partners = conjugate_partners(sset.eigenvalues)
    edge = np.abs(sset.eigenvalues[-1])
    bad = [i for i, j in enumerate(partners) if j < 0 and np.abs(sset.eigenvalues[i]) - edge > opts.tol]
    checks.append(Check("Arnoldi set conjugation-closed (unpaired interior values)",
                        len(bad), 0, not bad))

    full = dense_spectrum(M)
    A, B0 = phase_operator(sp), momentum_operator(sp)
    rho0 = coherent_state(sp, params.q0, params.p0, strict=False)
    coeffs = spectral_coefficients(full, B0, A, rho0)
    direct = otoc_direct(sp, params, A, B0, rho0, t_max, action)
    rec = reconstruct_series(full.eigenvalues, coeffs, range(len(full)), t_max)
    rel = np.abs(rec.values - direct.values) / np.abs(direct.values)
    checks.append(_le(f"full-spectrum reconstruction vs direct OTOC, t<={t_max} (relative)",
                      rel.max(), 1e-8))
    return checks
