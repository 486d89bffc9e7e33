"""Late-time OTOC across regimes, next to the classical Lyapunov exponent.

    python scripts/regime_contrast.py --N 512

Prints one row per K: largest Lyapunov exponent, C(50) and C(50) relative
to the regular case K=8.2.
"""

import argparse

import numpy as np

from dmkr.classical import lyapunov_exponent
from dmkr.config import ModelParams
from dmkr.hilbert import build_space, coherent_state, momentum_operator, phase_operator
from dmkr.otoc import otoc_direct


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=512)
    ap.add_argument("--tmax", type=int, default=50)
    ap.add_argument("--K", type=float, nargs="+", default=[2.0, 3.7, 4.2, 8.2])
    args = ap.parse_args()

    rows = {}
    for K in args.K:
        p = ModelParams(K=K, N=args.N)
        sp = build_space(p.N, p.h_eff)
        rho = coherent_state(sp, p.q0, p.p0)
        c = otoc_direct(sp, p, phase_operator(sp), momentum_operator(sp), rho, args.tmax)
        rows[K] = (lyapunov_exponent(p), abs(c.values[-1]))
    ref = rows.get(8.2, (None, np.nan))[1]
    print(f"{'K':>5} {'lyapunov':>10} {'C(tmax)':>12} {'C/C(8.2)':>10}")
    for K, (lam, c) in rows.items():
        print(f"{K:5.1f} {lam:10.4f} {c:12.4e} {c / ref:10.3e}")


if __name__ == "__main__":
    main()
