"""Leading eigenpairs of the one-period propagator, matrix-free.

Right eigenmatrices come from a Krylov-Schur (thick-restart Arnoldi) run on
Lambda^dagger, left eigenmatrices from a second run on Lambda; the two are
paired (left eigenvalue = conjugate of right) and biorthonormalized so that
Tr(L_i^dagger R_j) = delta_ij.

Ordering everywhere: modulus descending, then phase in [0, 2*pi) ascending,
with moduli equal within ``ORDER_TOL`` treated as ties.  Conjugate pairs
therefore sit next to each other with the positive-imaginary member first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack
from scipy.optimize import linear_sum_assignment

from dmkr.config import ArnoldiOptions, rng_for
from dmkr.liouvillian import PropagatorAction, unvec, vec

ORDER_TOL = 1e-8
PAIR_TOL = 1e-6
CLUSTER_TOL = 1e-8


class ConvergenceError(RuntimeError):
    def __init__(self, msg: str, residuals: np.ndarray):
        super().__init__(msg)
        self.residuals = residuals


class SpectralError(RuntimeError):
    """Unpaired eigenvalues or a singular (defective) cluster."""


@dataclass
class SpectralSet:
    eigenvalues: np.ndarray  # (k,)
    rights: np.ndarray  # (k, N, N)
    lefts: np.ndarray  # (k, N, N)
    right_residuals: np.ndarray | None = None
    left_residuals: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def overlaps(self) -> np.ndarray:
        """Matrix G_ij = Tr(L_i^dagger R_j)."""
        return overlap_matrix(self.rights, self.lefts)

    def partner(self, i: int, tol: float = PAIR_TOL) -> int:
        return conjugate_partners(self.eigenvalues, tol)[i]


def _phase(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    zr = np.where(np.abs(z.imag) < 1e-12, z.real + 0j, z)
    return np.angle(zr) % (2 * np.pi)


def spectral_order(values: np.ndarray, tol: float = ORDER_TOL) -> np.ndarray:
    """Indices sorting ``values`` by modulus desc, then phase asc among ties."""
    values = np.asarray(values)
    mod = np.abs(values)
    idx = np.argsort(-mod, kind="stable")
    out: list[int] = []
    start = 0
    while start < len(idx):
        stop = start + 1
        while stop < len(idx) and mod[idx[stop - 1]] - mod[idx[stop]] <= tol:
            stop += 1
        block = idx[start:stop]
        out.extend(block[np.argsort(_phase(values[block]), kind="stable")])
        start = stop
    return np.array(out, dtype=int)


def conjugate_partners(values: np.ndarray, tol: float = PAIR_TOL) -> np.ndarray:
    """For each value, the index of its complex conjugate (itself if real), or -1."""
    values = np.asarray(values)
    out = np.full(len(values), -1, dtype=int)
    for i, z in enumerate(values):
        if abs(z.imag) <= tol:
            out[i] = i
            continue
        d = np.abs(values - np.conj(z))
        d[i] = np.inf
        j = int(np.argmin(d))
        if d[j] <= tol:
            out[i] = j
    return out


def _orthogonalize(V: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # classical Gram-Schmidt, applied twice
    h = V.conj().T @ w
    w = w - V @ h
    h2 = V.conj().T @ w
    w = w - V @ h2
    return w, h + h2


def krylov_schur(matvec, n: int, k: int, m: int, tol: float, max_restarts: int,
                 rng: np.random.Generator, buffer: int = 10):
    """k largest-modulus eigenpairs of a linear map given only its action.

    Returns (eigenvalues, eigenvectors as columns, residual norms), sorted
    by :func:`spectral_order`.  Residuals are true ones,
    ||A x - theta x|| with ||x|| = 1, recomputed after convergence.
    """
    if not 0 < k < m <= n:
        raise ValueError(f"need 0 < k < krylov_dim <= n, got k={k}, m={m}, n={n}")
    keep = min(k + buffer, m - 1)
    V = np.zeros((n, m + 1), dtype=complex)
    H = np.zeros((m + 1, m), dtype=complex)
    v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    V[:, 0] = v0 / np.linalg.norm(v0)
    p = 0
    est = np.full(k, np.inf)
    for _ in range(max_restarts + 1):
        for j in range(p, m):
            w, h = _orthogonalize(V[:, : j + 1], matvec(V[:, j]))
            beta = np.linalg.norm(w)
            H[: j + 1, j] = h
            if beta <= 1e-13 * max(1.0, np.abs(h).max()):
                # invariant subspace: continue with a fresh orthogonal direction
                H[j + 1, j] = 0.0
                if j + 1 < n:
                    r, _ = _orthogonalize(V[:, : j + 1], rng.standard_normal(n) + 0j)
                    V[:, j + 1] = r / np.linalg.norm(r)
                else:
                    V[:, j + 1] = 0.0
            else:
                H[j + 1, j] = beta
                V[:, j + 1] = w / beta
        Hm = H[:m, :m]
        theta, S = np.linalg.eig(Hm)
        order = spectral_order(theta)
        est = np.abs(H[m, m - 1]) * np.abs(S[m - 1, order])
        if np.all(est[:k] <= tol):
            break
        # Krylov-Schur restart onto the `keep` wanted Schur vectors
        T, Z = scipy.linalg.schur(Hm, output="complex")
        diag = np.diag(T)
        select = np.zeros(m, dtype=np.int32)
        select[spectral_order(diag)[:keep]] = 1
        T, Z = _reorder(select, T, Z)
        b = H[m, m - 1] * Z[m - 1, :keep]
        V[:, :keep] = V[:, :m] @ Z[:, :keep]
        V[:, keep] = V[:, m]
        V[:, keep + 1:] = 0.0
        H[:] = 0.0
        H[:keep, :keep] = T[:keep, :keep]
        H[keep, :keep] = b
        p = keep
    else:
        raise ConvergenceError(
            f"Arnoldi did not converge after {max_restarts} restarts; "
            f"estimated residuals {est[:k]}", est[:k])
    sel = order[:k]
    X = V[:, :m] @ S[:, sel]
    X /= np.linalg.norm(X, axis=0)
    vals = theta[sel]
    res = np.array([np.linalg.norm(matvec(X[:, i]) - vals[i] * X[:, i]) for i in range(k)])
    return vals, X, res


def _reorder(select, T, Z):
    ts, qs, _, _, _, _, info = lapack.ztrsen(select, T, Z, job="N")
    if info != 0:
        raise SpectralError(f"Schur reordering failed (ztrsen info={info})")
    return ts, qs


def _normalize_rights(vals: np.ndarray, rights: np.ndarray) -> np.ndarray:
    """Unit Frobenius norm with largest entry real positive; R = I at eigenvalue 1."""
    out = np.empty_like(rights)
    N = rights.shape[-1]
    for i, (lam, R) in enumerate(zip(vals, rights)):
        if abs(lam - 1) <= 1e-6:
            R = R * (N / np.trace(R))
            # unitality makes the identity the exact eigenmatrix; snapping
            # removes O(eps) leakage into the non-decaying b_0 d_0j terms
            if np.abs(R - np.eye(N)).max() <= 1e-6:
                R = np.eye(N, dtype=complex)
        else:
            R = R / np.linalg.norm(R)
            flat = R.reshape(-1)
            big = flat[np.argmax(np.abs(flat))]
            R = R * (abs(big) / big)
        out[i] = R
    return out


def top_eigenpairs(action: PropagatorAction, opts: ArnoldiOptions, seed: int):
    """Leading eigenvalues of Lambda^dagger with right eigenmatrices.

    Returns (eigenvalues, rights of shape (k, N, N), relative residuals).
    """
    N = action.space.N
    vals, X, res = krylov_schur(
        action.heisenberg_vec, N * N, opts.k, opts.krylov_dim, opts.tol,
        opts.max_restarts, rng_for(seed, "arnoldi_right"), opts.buffer)
    rights = np.stack([unvec(X[:, i]) for i in range(opts.k)])
    return vals, _normalize_rights(vals, rights), res


def left_eigenmatrices(action: PropagatorAction, eigenvalues: np.ndarray,
                       opts: ArnoldiOptions, seed: int, pair_tol: float = PAIR_TOL):
    """Left eigenmatrices L_i with Lambda(L_i) = conj(lambda_i) L_i.

    A few extra Ritz pairs are computed so a conjugate pair split at the
    k-th modulus by the right run can still be matched.
    """
    N = action.space.N
    k = len(eigenvalues)
    kk = min(k + 2, opts.krylov_dim - 1)
    mu, X, res = krylov_schur(
        action.schrodinger_vec, N * N, kk, opts.krylov_dim, opts.tol,
        opts.max_restarts, rng_for(seed, "arnoldi_left"), opts.buffer)
    taken = np.zeros(kk, dtype=bool)
    lefts = np.empty((k, N, N), dtype=complex)
    lres = np.empty(k)
    for i, lam in enumerate(eigenvalues):
        d = np.abs(mu - np.conj(lam))
        d[taken] = np.inf
        j = int(np.argmin(d))
        if d[j] > pair_tol:
            raise SpectralError(
                f"eigenvalue {lam} has no left partner within {pair_tol:g} "
                f"(closest distance {d[j]:.3e})")
        taken[j] = True
        lefts[i] = unvec(X[:, j])
        lres[i] = res[j]
    return lefts, lres


def overlap_matrix(rights: np.ndarray, lefts: np.ndarray) -> np.ndarray:
    return np.einsum("iab,jab->ij", lefts.conj(), rights)


def _clusters(vals: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, z in enumerate(vals):
        for grp in groups:
            if any(abs(z - vals[j]) <= tol for j in grp):
                grp.append(i)
                break
        else:
            groups.append([i])
    return groups


def biorthonormalize(rights: np.ndarray, lefts: np.ndarray, eigenvalues: np.ndarray,
                     cluster_tol: float = CLUSTER_TOL) -> SpectralSet:
    """Rescale (within clusters, recombine) the lefts so Tr(L_i^+ R_j) = delta_ij.

    Rights are left untouched.
    """
    if not len(rights) == len(lefts) == len(eigenvalues):
        raise ValueError("rights, lefts and eigenvalues must have equal length")
    G = overlap_matrix(rights, lefts)
    new = lefts.copy()
    for grp in _clusters(np.asarray(eigenvalues), cluster_tol):
        Gc = G[np.ix_(grp, grp)]
        scale = np.abs(Gc).max()
        if scale == 0 or np.linalg.cond(Gc) > 1e10:
            raise SpectralError(
                f"singular left/right pairing in cluster {grp} "
                f"(defective or unresolved degeneracy)")
        X = np.linalg.inv(Gc).conj()
        new[grp] = np.einsum("il,lab->iab", X, lefts[grp])
    return SpectralSet(np.asarray(eigenvalues).copy(), rights, new)


def compute_spectrum(action: PropagatorAction, opts: ArnoldiOptions, seed: int) -> SpectralSet:
    """Right run, left run, pairing and biorthonormalization."""
    vals, rights, rres = top_eigenpairs(action, opts, seed)
    lefts, lres = left_eigenmatrices(action, vals, opts, seed)
    out = biorthonormalize(rights, lefts, vals)
    out.right_residuals = rres
    out.left_residuals = lres
    return out


def dense_spectrum(M: np.ndarray) -> SpectralSet:
    """Full biorthonormal eigendecomposition of a dense Lambda^dagger (oracle path)."""
    w, vl, vr = scipy.linalg.eig(M, left=True, right=True)
    order = spectral_order(w)
    w, vl, vr = w[order], vl[:, order], vr[:, order]
    rights = np.stack([unvec(vr[:, i]) for i in range(len(w))])
    lefts = np.stack([unvec(vl[:, i]) for i in range(len(w))])
    return biorthonormalize(_normalize_rights(w, rights), lefts, w)


def multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest pairwise gap under the optimal one-to-one matching of two value sets."""
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())
