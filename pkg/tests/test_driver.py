import csv
import json
import subprocess
import sys

import pytest

from dmkr.driver import COMMANDS, execute, main
from dmkr.config import ModelParams, parse_config


def _cfg(tmp_path, **kw):
    doc = {"K": 2.0, "N": 64, "seed": 1, **kw}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return path


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_otoc_rows(tmp_path):
    cfg = _cfg(tmp_path)
    assert main(["otoc", "--config", str(cfg), "--out", str(tmp_path / "o"), "--tmax", "50"]) == 0
    rows = _rows(tmp_path / "o" / "otoc.csv")
    assert len(rows) == 51 and list(rows[0]) == ["t", "C_re", "C_im", "C_abs"]
    assert float(rows[0]["C_re"]) == pytest.approx(0.031**2, abs=1e-10)


def test_spectrum_and_manifest(tmp_path):
    cfg = _cfg(tmp_path)
    out = tmp_path / "s"
    assert main(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    eigs = _rows(out / "eigs.csv")
    assert len(eigs) == 10 and float(eigs[0]["modulus"]) == pytest.approx(1.0, abs=1e-10)
    man = json.loads((out / "manifest.json").read_text())
    assert man["params"]["k"] == pytest.approx(2.0 / 0.031)
    assert man["params"]["g"] == pytest.approx(1.268636, abs=1e-6)
    assert man["seed"] == 1 and "PCG64" in man["prng"]["algorithm"]


def test_weights_rows(tmp_path):
    cfg = _cfg(tmp_path)
    out = tmp_path / "w"
    assert main(["weights", "--config", str(cfg), "--out", str(out), "--top", "6",
                 "--times", "3,10,50"]) == 0
    rows = _rows(out / "pij.csv")
    assert len(rows) == 3 * 36
    for t in (3, 10, 50):
        assert sum(float(r["p_ij"]) for r in rows if int(r["t"]) == t) == pytest.approx(1, abs=1e-12)


def test_reconstruct_closes_subset(tmp_path):
    cfg = _cfg(tmp_path)
    out = tmp_path / "r"
    assert main(["reconstruct", "--config", str(cfg), "--out", str(out), "--tmax", "20",
                 "--subset", "0,1"]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["subset_requested"] == [0, 1]
    assert set(man["subset_used"]) >= {0, 1}
    assert len(_rows(out / "rec.csv")) == 21


def test_reruns_bit_identical(tmp_path):
    cfg = _cfg(tmp_path)
    for name in ("a", "b"):
        main(["reconstruct", "--config", str(cfg), "--out", str(tmp_path / name), "--tmax", "30"])
    for f in ("eigs.csv", "rec.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_validate_small(tmp_path, capsys):
    cfg = _cfg(tmp_path, N=16)
    assert main(["validate", "--config", str(cfg), "--out", str(tmp_path / "v")]) == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out and out.count("[PASS]") >= 10


def test_validate_refuses_large(tmp_path):
    cfg = _cfg(tmp_path, N=128)
    assert main(["validate", "--config", str(cfg), "--out", str(tmp_path / "v")]) == 1


@pytest.mark.parametrize("mode, name", [("lyapunov", "lyapunov.csv"), ("attractor", "attractor.csv")])
def test_classical(tmp_path, mode, name):
    cfg = _cfg(tmp_path, K=4.2)
    out = tmp_path / mode
    assert main(["classical", "--config", str(cfg), "--out", str(out), "--mode", mode,
                 "--samples", "4", "--steps", "500", "--transient", "100"]) == 0
    rows = _rows(out / name)
    assert len(rows) == (4 if mode == "lyapunov" else 500)


def test_config_error_exit(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"K": 2.0, "gamma": 0}')
    assert main(["otoc", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 2
    assert "gamma must lie in (0,1]" in capsys.readouterr().err


def test_boundary_error_exit(tmp_path, capsys):
    cfg = _cfg(tmp_path, N=16)
    assert main(["otoc", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1
    assert "BoundarySupportError" in capsys.readouterr().err


def test_unknown_command(tmp_path):
    with pytest.raises(ValueError):
        execute("nope", ModelParams(K=1.0, N=16), tmp_path)
    assert "weights" in COMMANDS


def test_emit_plots(tmp_path):
    pytest.importorskip("matplotlib")
    cfg = _cfg(tmp_path)
    out = tmp_path / "p"
    params = parse_config(cfg.read_text())
    execute("otoc", params, out, tmax=10, emit_plots=True)
    execute("weights", params, out, top=4, times=[1, 5], emit_plots=True)
    for script in ("plot_otoc.py", "plot_pij.py", "plot_eigs.py"):
        assert (out / script).exists()
        subprocess.run([sys.executable, str(out / script)], check=True, cwd=out)
    assert (out / "otoc.png").exists() and (out / "pij.png").exists()
