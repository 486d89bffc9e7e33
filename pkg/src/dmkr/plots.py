"""Self-contained matplotlib scripts that plot the CSV outputs of a run."""

from __future__ import annotations

from pathlib import Path

_HEADER = '''"""Generated by dmkr --emit-plots. Run from this directory: python {name}"""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent


def read(name):
    with open(HERE / name) as fh:
        return list(csv.DictReader(fh))

'''

_OTOC = '''
fig, ax = plt.subplots(figsize=(5, 3.5))
for name, style, label in (("otoc.csv", "s", "direct"), ("rec.csv", "o", "spectral")):
    if (HERE / name).exists():
        rows = read(name)
        t = [int(r["t"]) for r in rows]
        c = [float(r["C_abs"]) for r in rows]
        ax.semilogy(t, c, style, mfc="none" if label == "direct" else None, ms=4, label=label)
ax.set_xlabel("t")
ax.set_ylabel("C(t)")
ax.legend()
fig.tight_layout()
fig.savefig(HERE / "otoc.png", dpi=150)
'''

_PIJ = '''
rows = read("pij.csv")
times = sorted({int(r["t"]) for r in rows})
k = max(int(r["i"]) for r in rows) + 1
fig, axes = plt.subplots(1, len(times), figsize=(3.2 * len(times), 3), squeeze=False)
for ax, t in zip(axes[0], times):
    grid = [[0.0] * k for _ in range(k)]
    for r in rows:
        if int(r["t"]) == t:
            grid[int(r["i"])][int(r["j"])] = float(r["p_ij"])
    im = ax.imshow(grid, cmap="Reds", origin="lower", vmin=0)
    ax.set_title(f"t = {t}")
    ax.set_xlabel("j")
    ax.set_ylabel("i")
    fig.colorbar(im, ax=ax, fraction=0.046)
fig.tight_layout()
fig.savefig(HERE / "pij.png", dpi=150)
'''

_EIGS = '''
rows = read("eigs.csv")
fig, ax = plt.subplots(figsize=(4, 4))
ax.plot([float(r["re"]) for r in rows], [float(r["im"]) for r in rows], "o", ms=4)
th = [i * 6.283185307179586 / 200 for i in range(201)]
import math
ax.plot([math.cos(x) for x in th], [math.sin(x) for x in th], "k-", lw=0.5)
ax.set_aspect("equal")
ax.set_xlabel("Re lambda")
ax.set_ylabel("Im lambda")
fig.tight_layout()
fig.savefig(HERE / "eigs.png", dpi=150)
'''

_ATTRACTOR = '''
rows = read("attractor.csv")
fig, ax = plt.subplots(figsize=(5, 4))
ax.plot([float(r["q"]) for r in rows], [float(r["p"]) for r in rows], ",k")
ax.set_xlabel("q")
ax.set_ylabel("p")
fig.tight_layout()
fig.savefig(HERE / "attractor.png", dpi=150)
'''

_LYAP = '''
rows = read("lyapunov.csv")
fig, ax = plt.subplots(figsize=(5, 3))
ax.plot([int(r["sample"]) for r in rows], [float(r["exponent"]) for r in rows], "o")
ax.axhline(0, color="k", lw=0.5)
ax.set_xlabel("sample")
ax.set_ylabel("largest Lyapunov exponent")
fig.tight_layout()
fig.savefig(HERE / "lyapunov.png", dpi=150)
'''

_BODIES = {
    "otoc.csv": ("plot_otoc.py", _OTOC),
    "rec.csv": ("plot_otoc.py", _OTOC),
    "pij.csv": ("plot_pij.py", _PIJ),
    "eigs.csv": ("plot_eigs.py", _EIGS),
    "attractor.csv": ("plot_attractor.py", _ATTRACTOR),
    "lyapunov.csv": ("plot_lyapunov.py", _LYAP),
}


def emit(out: Path, csv_names: list[str]) -> list[str]:
    """Write one plot script per kind of CSV present; returns the script names."""
    written = []
    for name in csv_names:
        if name not in _BODIES:
            continue
        script, body = _BODIES[name]
        if script in written:
            continue
        (out / script).write_text(_HEADER.format(name=script) + body)
        written.append(script)
    return written
