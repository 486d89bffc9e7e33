"""Classical dissipative kicked-rotator map, attractor sampling and Lyapunov spectra.

Scaled variables: p_new = gamma*p + K*f(q),  q_new = (q + p_new) mod 2*pi.
The default force is the derivative of the kick potential,
f(q) = sin q + a*sin(2q + phi); ``force_variant="printed"`` drops the
amplitude a from the second harmonic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dmkr.config import ModelParams, rng_for

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class ClassicalState:
    p: float
    q: float


def _amp(params: ModelParams) -> float:
    return params.a if params.force_variant == "potential" else 1.0


def force(q, params: ModelParams):
    return np.sin(q) + _amp(params) * np.sin(2 * q + params.phi)


def force_prime(q, params: ModelParams):
    return np.cos(q) + 2 * _amp(params) * np.cos(2 * q + params.phi)


def jacobian(q: float, params: ModelParams) -> np.ndarray:
    """Tangent map in (dp, dq) coordinates; its determinant is gamma."""
    kf = params.K * force_prime(q, params)
    return np.array([[params.gamma, kf], [params.gamma, 1.0 + kf]])


def _step(p, q, params: ModelParams):
    p_new = params.gamma * p + params.K * force(q, params)
    return p_new, np.mod(q + p_new, TWO_PI)


def classical_step(state: ClassicalState, params: ModelParams) -> ClassicalState:
    p, q = _step(state.p, state.q, params)
    return ClassicalState(float(p), float(q))


def trajectory(state0: ClassicalState, params: ModelParams, steps: int,
               transient: int = 0) -> list[ClassicalState]:
    """``steps`` points of the orbit after discarding ``transient`` iterations."""
    p, q = state0.p, state0.q
    for _ in range(transient):
        p, q = _step(p, q, params)
    out = []
    for _ in range(steps):
        p, q = _step(p, q, params)
        out.append(ClassicalState(float(p), float(q)))
    return out


def random_initial_conditions(params: ModelParams, n: int, seed: int | None = None):
    """q uniform on [0, 2*pi), p uniform on [-pi, pi), from the 'classical' stream."""
    rng = rng_for(params.seed if seed is None else seed, "classical")
    q = rng.uniform(0.0, TWO_PI, n)
    p = rng.uniform(-np.pi, np.pi, n)
    return p, q


def lyapunov_spectrum_samples(params: ModelParams, n_samples: int = 16, transient: int = 1000,
                              steps: int = 10000, seed: int | None = None) -> np.ndarray:
    """Both Lyapunov exponents for each sampled orbit, shape (n_samples, 2).

    Two tangent vectors are propagated with the exact Jacobian and
    re-orthonormalized (Gram-Schmidt) every step; column 0 is the largest
    exponent.  All samples are advanced together as arrays.
    """
    p, q = random_initial_conditions(params, n_samples, seed)
    for _ in range(transient):
        p, q = _step(p, q, params)
    g = params.gamma
    # tangent vectors u, v as (dp, dq) arrays over samples
    u = np.stack([np.ones(n_samples), np.zeros(n_samples)])
    v = np.stack([np.zeros(n_samples), np.ones(n_samples)])
    s1 = np.zeros(n_samples)
    s2 = np.zeros(n_samples)
    for _ in range(steps):
        kf = params.K * force_prime(q, params)
        u = np.stack([g * u[0] + kf * u[1], g * u[0] + (1 + kf) * u[1]])
        v = np.stack([g * v[0] + kf * v[1], g * v[0] + (1 + kf) * v[1]])
        p, q = _step(p, q, params)
        nu = np.hypot(u[0], u[1])
        u = u / nu
        v = v - (u * v).sum(axis=0) * u
        nv = np.hypot(v[0], v[1])
        v = v / nv
        s1 += np.log(nu)
        s2 += np.log(nv)
    return np.stack([s1 / steps, s2 / steps], axis=1)


def lyapunov_samples(params: ModelParams, n_samples: int = 16, transient: int = 1000,
                     steps: int = 10000, seed: int | None = None) -> np.ndarray:
    return lyapunov_spectrum_samples(params, n_samples, transient, steps, seed)[:, 0]


def lyapunov_exponent(params: ModelParams, n_samples: int = 16, transient: int = 1000,
                      steps: int = 10000, seed: int | None = None) -> float:
    """Largest Lyapunov exponent averaged over seeded random initial conditions."""
    return float(lyapunov_samples(params, n_samples, transient, steps, seed).mean())
