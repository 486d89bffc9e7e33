"""Spectrum, OTOC vs truncated reconstruction, and p_ij maps for the four K values.

    python scripts/reproduce_figures.py --N 128 --out runs/figures
    python scripts/reproduce_figures.py --N 1024 --k 100 --krylov-dim 160   # production scale, slow

Writes one directory per K holding eigs.csv, otoc.csv, rec.csv and pij.csv,
plus PNGs when matplotlib is installed.
"""

import argparse
import logging
from pathlib import Path

import numpy as np

from dmkr.config import ArnoldiOptions, ModelParams
from dmkr.driver import write_eigs, write_series, write_weights
from dmkr.hilbert import coherent_state, momentum_operator, phase_operator
from dmkr.liouvillian import PropagatorAction
from dmkr.otoc import (
    level_indices, otoc_direct, pair_mass, reconstruct_series, spectral_coefficients,
    weight_series,
)
from dmkr.spectral import compute_spectrum

log = logging.getLogger("figures")


def run(K, args):
    opts = ArnoldiOptions(k=args.k, krylov_dim=args.krylov_dim, tol=args.tol)
    params = ModelParams(K=K, N=args.N, arnoldi=opts, seed=args.seed)
    out = args.out / f"K{K:g}"
    out.mkdir(parents=True, exist_ok=True)
    action = PropagatorAction.from_params(params)
    sp = action.space
    A, B, rho = phase_operator(sp), momentum_operator(sp), coherent_state(sp, np.pi, 0.0)

    sset = compute_spectrum(action, opts, params.seed)
    coeffs = spectral_coefficients(sset, B, A, rho)
    direct = otoc_direct(sp, params, A, B, rho, args.tmax, action)
    pair = level_indices(sset.eigenvalues, [0, 1])
    rec = reconstruct_series(sset.eigenvalues, coeffs, pair, args.tmax)
    wmap = weight_series(sset.eigenvalues, coeffs, min(10, len(sset)), args.times)

    write_eigs(out / "eigs.csv", sset.eigenvalues)
    write_series(out / "otoc.csv", direct.times, direct.values)
    write_series(out / "rec.csv", rec.times, rec.values)
    write_weights(out / "pij.csv", wmap)
    lam1 = level_indices(sset.eigenvalues, [1])
    log.info("K=%g |lambda| = %s; lambda_1 mass at t=%d: %.4f", K,
             np.array2string(np.abs(sset.eigenvalues[:5]), precision=4),
             wmap.times[-1], pair_mass(wmap.weights[-1], lam1))
    return sset, direct, rec, wmap


def plot(results, out):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.info("matplotlib not installed; skipping figures")
        return
    fig, axes = plt.subplots(1, len(results), figsize=(4 * len(results), 3.4), squeeze=False)
    for ax, (K, (_, direct, rec, _)) in zip(axes[0], results.items()):
        ax.semilogy(direct.times, np.abs(direct.values), "s", mfc="none", ms=4, label="direct")
        ax.semilogy(rec.times, np.abs(rec.values), "-", label=r"$\lambda_0, \lambda_1$")
        ax.set_title(f"K = {K}")
        ax.set_xlabel("t")
    axes[0, 0].set_ylabel("C(t)")
    axes[0, 0].legend()
    fig.tight_layout()
    fig.savefig(out / "otoc.png", dpi=150)

    for K, (sset, _, _, wmap) in results.items():
        fig, axes = plt.subplots(1, len(wmap.times), figsize=(3.3 * len(wmap.times), 3))
        for ax, t, W in zip(np.atleast_1d(axes), wmap.times, wmap.weights):
            im = ax.imshow(W, cmap="Reds", origin="lower", vmin=0)
            ax.set_title(f"K = {K}, t = {t}")
            fig.colorbar(im, ax=ax, fraction=0.046)
        fig.tight_layout()
        fig.savefig(out / f"pij_K{K:g}.png", dpi=150)
        plt.close("all")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=128)
    ap.add_argument("--k", type=int, default=12)
    ap.add_argument("--krylov-dim", type=int, default=50)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--tmax", type=int, default=50)
    ap.add_argument("--times", type=int, nargs="+", default=[3, 10, 50])
    ap.add_argument("--K", type=float, nargs="+", default=[2.0, 3.7, 4.2, 8.2])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("runs/figures"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args.out.mkdir(parents=True, exist_ok=True)
    results = {K: run(K, args) for K in args.K}
    plot(results, args.out)


if __name__ == "__main__":
    main()
