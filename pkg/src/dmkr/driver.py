"""Command-line driver: config in, CSV tables and a JSON manifest out.

Commands::

    dmkr spectrum     --config cfg.json --out run/
    dmkr otoc         --config cfg.json --out run/ --tmax 50
    dmkr reconstruct  --config cfg.json --out run/ --tmax 50 --subset 0,1,2,3
    dmkr weights      --config cfg.json --out run/ --top 10 --times 3,10,50
    dmkr classical    --config cfg.json --out run/ --mode lyapunov
    dmkr validate     --config cfg.json --out run/

All randomness comes from the config ``seed`` through numpy's PCG64,
with one SeedSequence spawn key per consumer (see ``config.RNG_STREAMS``).
Numeric CSV fields are written with 17 significant digits, so reruns with
the same config are bit-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import platform
import sys
import warnings
from pathlib import Path

import numpy as np
import scipy

from dmkr import __version__, classical, plots
from dmkr.config import RNG_STREAMS, ConfigError, ModelParams, parse_config
from dmkr.hilbert import build_space, coherent_state, named_operator
from dmkr.liouvillian import PropagatorAction
from dmkr.otoc import (
    close_subset, level_indices, otoc_direct, reconstruct_series, spectral_coefficients,
    weight_series,
)
from dmkr.spectral import compute_spectrum
from dmkr.validation import run_checks

log = logging.getLogger("dmkr")

COMMANDS = ("spectrum", "otoc", "reconstruct", "weights", "classical", "validate")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (int, np.integer, str)) else _fmt(v) for v in row])


def write_eigs(path: Path, eigenvalues: np.ndarray) -> None:
    write_csv(path, ["index", "re", "im", "modulus"],
              ([i, z.real, z.imag, abs(z)] for i, z in enumerate(eigenvalues)))


def write_series(path: Path, times, values) -> None:
    write_csv(path, ["t", "C_re", "C_im", "C_abs"],
              ([int(t), v.real, v.imag, abs(v)] for t, v in zip(times, values)))


def write_weights(path: Path, wmap) -> None:
    rows = []
    for t, W in zip(wmap.times, wmap.weights):
        k = W.shape[0]
        rows.extend([t, i, j, W[i, j]] for i in range(k) for j in range(k))
    write_csv(path, ["t", "i", "j", "p_ij"], rows)


def manifest(command: str, params: ModelParams, argv: list[str], **extra) -> dict:
    return {
        "command": command,
        "argv": argv,
        "params": params.to_dict(),
        "seed": params.seed,
        "prng": {"algorithm": "PCG64 (numpy)", "seeding": "SeedSequence(seed, spawn_key=(stream,))",
                 "streams": RNG_STREAMS},
        "versions": {"dmkr": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        **extra,
    }


def _operators(params: ModelParams):
    sp = build_space(params.N, params.h_eff)
    A = named_operator(sp, params.observable_a)
    B0 = named_operator(sp, params.observable_b)
    rho0 = coherent_state(sp, params.q0, params.p0)
    return sp, A, B0, rho0


def _parse_ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(x) for x in text.split(",") if x.strip()]


def execute(command: str, params: ModelParams, out: Path, *, tmax: int = 50, top: int = 10,
            times: list[int] | None = None, subset: list[int] | None = None,
            mode: str = "lyapunov", emit_plots: bool = False, samples: int = 16,
            steps: int = 10000, transient: int = 1000, argv: list[str] | None = None) -> int:
    """Run one command, writing CSVs and ``manifest.json`` into ``out``.

    Returns the process exit status (nonzero only for a failed ``validate``).
    """
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}; expected one of {COMMANDS}")
    out.mkdir(parents=True, exist_ok=True)
    extra: dict = {}
    outputs: list[str] = []
    status = 0

    if command == "classical":
        if mode == "attractor":
            p, q = classical.random_initial_conditions(params, 1)
            orbit = classical.trajectory(classical.ClassicalState(p[0], q[0]), params,
                                         steps, transient)
            write_csv(out / "attractor.csv", ["step", "q", "p"],
                      ([i, s.q, s.p] for i, s in enumerate(orbit)))
            outputs.append("attractor.csv")
        elif mode == "lyapunov":
            lam = classical.lyapunov_samples(params, samples, transient, steps)
            write_csv(out / "lyapunov.csv", ["sample", "exponent"], enumerate(lam))
            outputs.append("lyapunov.csv")
            extra["mean_exponent"] = float(lam.mean())
        else:
            raise ValueError(f"mode must be 'lyapunov' or 'attractor', got {mode!r}")
        extra.update(mode=mode, samples=samples, steps=steps, transient=transient)

    elif command == "validate":
        checks = run_checks(params, tmax)
        for c in checks:
            print(c.line())
        extra["checks"] = [vars(c) for c in checks]
        status = 0 if all(c.passed for c in checks) else 1

    elif command == "otoc":
        sp, A, B0, rho0 = _operators(params)
        series = otoc_direct(sp, params, A, B0, rho0, tmax)
        write_series(out / "otoc.csv", series.times, series.values)
        outputs.append("otoc.csv")

    else:
        sp, A, B0, rho0 = _operators(params)
        action = PropagatorAction(sp, params)
        sset = compute_spectrum(action, params.arnoldi, params.seed)
        write_eigs(out / "eigs.csv", sset.eigenvalues)
        outputs.append("eigs.csv")
        extra["max_right_residual"] = float(sset.right_residuals.max())
        extra["max_left_residual"] = float(sset.left_residuals.max())
        coeffs = spectral_coefficients(sset, B0, A, rho0)
        if command == "reconstruct":
            if subset is None:
                subset = level_indices(sset.eigenvalues, range(4))
            if max(subset) >= len(sset):
                raise ValueError(f"subset index {max(subset)} exceeds the {len(sset)} eigenpairs")
            closed, added = close_subset(sset.eigenvalues, subset)
            if added:
                log.warning("subset %s closed under conjugation -> %s", subset, closed)
            extra.update(subset_requested=subset, subset_used=closed, subset_auto_closed=added)
            rec = reconstruct_series(sset.eigenvalues, coeffs, closed, tmax)
            write_series(out / "rec.csv", rec.times, rec.values)
            outputs.append("rec.csv")
        elif command == "weights":
            times = times or [3, 10, 50]
            wmap = weight_series(sset.eigenvalues, coeffs, top, times)
            write_weights(out / "pij.csv", wmap)
            outputs.append("pij.csv")
            extra.update(top=top, times=times)

    if emit_plots:
        outputs.extend(plots.emit(out, outputs))
    doc = manifest(command, params, argv or [], outputs=outputs, tmax=tmax, **extra)
    (out / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dmkr", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", type=Path, required=True, help="JSON config file")
    ap.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    ap.add_argument("--tmax", type=int, default=50)
    ap.add_argument("--top", type=int, default=10)
    ap.add_argument("--times", default="3,10,50", help="comma-separated integer times")
    ap.add_argument("--subset", default=None, help="comma-separated eigenvalue indices")
    ap.add_argument("--mode", choices=("lyapunov", "attractor"), default="lyapunov")
    ap.add_argument("--emit-plots", action="store_true")
    ap.add_argument("--samples", type=int, default=16, help="classical initial conditions")
    ap.add_argument("--steps", type=int, default=10000, help="classical iterations")
    ap.add_argument("--transient", type=int, default=1000, help="classical discarded iterations")
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    warnings.simplefilter("default")
    try:
        params = parse_config(args.config.read_text())
    except (OSError, ConfigError) as exc:
        print(f"dmkr: config error: {exc}", file=sys.stderr)
        return 2
    try:
        return execute(args.command, params, args.out, tmax=args.tmax, top=args.top,
                       times=_parse_ints(args.times), subset=_parse_ints(args.subset),
                       mode=args.mode, emit_plots=args.emit_plots, samples=args.samples,
                       steps=args.steps, transient=args.transient, argv=argv)
    except Exception as exc:
        print(f"dmkr {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
