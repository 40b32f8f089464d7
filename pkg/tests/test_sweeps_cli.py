import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qicd.cli import main
from qicd.photon_stats import Fixed, Rayleigh, ScenarioParams
from qicd.sweeps import (
    NonConvergenceError,
    SweepSpec,
    ValidationError,
    run_sweep,
    scenario_header_lines,
)

FIXED = ScenarioParams(n_s=0.001, n_e=20.0, reflectivity=Fixed(0.01), m=1)


def _read_rows(path):
    header, columns, rows = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line)
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return header, columns, rows


class TestSweepSpecValidation:
    def test_empty_quantities(self):
        spec = SweepSpec(FIXED, (10, 20), (), "x.csv")
        with pytest.raises(ValidationError):
            spec.validate()

    def test_non_increasing_grid(self):
        spec = SweepSpec(FIXED, (20, 10), ("ng",), "x.csv")
        with pytest.raises(ValidationError, match="strictly increasing"):
            spec.validate()

    def test_unknown_quantity(self):
        spec = SweepSpec(FIXED, (10, 20), ("nope",), "x.csv")
        with pytest.raises(ValidationError, match="unknown quantity"):
            spec.validate()

    def test_model_mismatch_messages(self):
        rayl = ScenarioParams(0.001, 20.0, Rayleigh(0.01), 1)
        spec = SweepSpec(rayl, (10, 20), ("ng", "rayleigh_lb"), "x.csv")
        with pytest.raises(ValidationError, match="'ng'"):
            spec.validate()
        spec = SweepSpec(FIXED, (10, 20), ("rayleigh_lb",), "x.csv")
        with pytest.raises(ValidationError, match="'rayleigh_lb'"):
            spec.validate()


class TestRunSweep:
    def test_kappa_zero_all_half(self, tmp_path):
        scen = ScenarioParams(0.001, 20.0, Fixed(0.0), 1)
        out = tmp_path / "zero.csv"
        spec = SweepSpec(scen, (10**6, 10**7), ("pcd_largeM", "qcb", "ci_helstrom"), str(out))
        run_sweep(spec)
        _, columns, rows = _read_rows(out)
        half = -math.log(2.0)
        for row in rows:
            for col in ("log_pcd_largeM", "log_qcb", "log_ci_helstrom"):
                assert float(row[columns.index(col)]) == pytest.approx(half, abs=1e-12)

    def test_row_ordering_and_bounds(self, tmp_path):
        out = tmp_path / "s.csv"
        spec = SweepSpec(
            FIXED, tuple(np.round(np.geomspace(1e6, 3e7, 6)).astype(int)),
            ("pcd_largeM", "ng", "qcb"), str(out),
        )
        run_sweep(spec)
        _, columns, rows = _read_rows(out)
        ms = [int(r[columns.index("m")]) for r in rows]
        assert ms == sorted(ms)
        for r in rows:
            ng = float(r[columns.index("log_ng")])
            pcd = float(r[columns.index("log_pcd_largeM")])
            qcb = float(r[columns.index("log_qcb")])
            assert ng <= pcd <= qcb
            assert pcd <= 0.0 and not math.isnan(pcd)

    def test_deterministic_across_worker_counts(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        outs = []
        for workers, name in (("1", "a.csv"), ("8", "b.csv")):
            monkeypatch.setenv("QI_CD_THREADS", workers)
            out = tmp_path / name
            spec = SweepSpec(FIXED, (10**6, 4 * 10**6, 10**7), ("pcd_largeM", "ng"), str(out))
            run_sweep(spec)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_linear_columns(self, tmp_path):
        out = tmp_path / "lin.csv"
        spec = SweepSpec(FIXED, (10**6,), ("ng",), str(out))
        run_sweep(spec, linear=True)
        _, columns, rows = _read_rows(out)
        assert "ng" in columns
        log_v = float(rows[0][columns.index("log_ng")])
        lin_v = float(rows[0][columns.index("ng")])
        assert lin_v == pytest.approx(math.exp(log_v), rel=1e-12)

    def test_header_provenance(self, tmp_path):
        out = tmp_path / "h.csv"
        spec = SweepSpec(FIXED, (10**6,), ("ng",), str(out))
        run_sweep(spec)
        header, _, _ = _read_rows(out)
        joined = "\n".join(header)
        assert "n_s=0.001" in joined
        assert "kappa=0.01" in joined
        assert any(line.startswith("# generated ") for line in header)

    def test_timestamp_pinned_by_env(self, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        lines = scenario_header_lines(FIXED)
        assert any("1970-01-01T00:00:00Z" in line for line in lines)


class TestCliFigure:
    def test_fig8_runs_and_reports_paths(self, tmp_path, capsys):
        rc = main(["figure", "fig8", "--out", str(tmp_path), "--set", "points=5"])
        assert rc == 0
        printed = capsys.readouterr().out.strip().splitlines()
        assert printed == [str(tmp_path / "fig8.csv")]
        assert (tmp_path / "fig8.csv").exists()

    def test_unknown_figure_exit_1(self, capsys):
        assert main(["figure", "nope"]) == 1
        assert "unknown figure" in capsys.readouterr().err

    def test_set_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"points": 4, "kappa": 0.02}))
        rc = main(
            [
                "figure", "fig8", "--config", str(cfg), "--out", str(tmp_path),
                "--set", "kappa=0.03",
            ]
        )
        assert rc == 0
        header, _, _ = _read_rows(tmp_path / "fig8.csv")
        assert any("kappa=0.03" in line for line in header)

    def test_bad_set_pair(self, capsys):
        assert main(["figure", "fig8", "--set", "oops"]) == 1
        assert "key=value" in capsys.readouterr().err

    def test_figure_determinism(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["figure", "fig2a", "--out", str(out), "--set", "points=4"]) == 0
        assert (a / "fig2a.csv").read_bytes() == (b / "fig2a.csv").read_bytes()


class TestCliSweep:
    def _config(self, tmp_path, **extra):
        cfg = {
            "n_s": 0.001,
            "n_e": 20.0,
            "model": "fixed",
            "kappa": 0.01,
            "m_grid": [10**6, 10**7],
            "quantities": ["ng"],
            "output": str(tmp_path / "out.csv"),
        }
        cfg.update(extra)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_sweep_runs(self, tmp_path, capsys):
        cfg = self._config(tmp_path)
        assert main(["sweep", "--config", str(cfg)]) == 0
        assert (tmp_path / "out.csv").exists()

    def test_missing_field_exit_1(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(
            json.dumps({"n_s": 0.001, "m_grid": [10], "quantities": ["ng"], "kappa": 0.01})
        )
        assert main(["sweep", "--config", str(cfg)]) == 1
        assert "n_e" in capsys.readouterr().err

    def test_malformed_json_exit_1(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{not json")
        assert main(["sweep", "--config", str(cfg)]) == 1

    def test_model_mismatch_exit_1(self, tmp_path, capsys):
        cfg = self._config(tmp_path, model="rayleigh", kappa_bar=0.01)
        assert main(["sweep", "--config", str(cfg)]) == 1
        assert "'ng'" in capsys.readouterr().err

    def test_geometric_grid_object(self, tmp_path, capsys):
        cfg = self._config(tmp_path, m_grid={"min": 1e6, "max": 1e7, "points": 4})
        assert main(["sweep", "--config", str(cfg)]) == 0
        _, columns, rows = _read_rows(tmp_path / "out.csv")
        assert len(rows) == 4

    def test_nonconvergence_exit_2(self, tmp_path, monkeypatch, capsys):
        from qicd import sweeps
        from qicd.discrimination import DiscriminationResult

        def fake_pcd_exact(params, **kw):
            return DiscriminationResult(
                -1.0, None, "helstrom", meta={"converged": False, "n_nodes": 8192}
            )

        monkeypatch.setattr(sweeps, "pcd_exact", fake_pcd_exact)
        cfg = self._config(tmp_path, quantities=["pcd_exact"])
        assert main(["sweep", "--config", str(cfg)]) == 2
        assert "converge" in capsys.readouterr().err


class TestCliSelftest:
    def test_fresh_build_passes(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert "all checks passed" in out
        assert "FAIL" not in out
        # Per-suite timing is part of the report.
        assert "checks in" in out

    def test_injected_failure_exit_nonzero(self, capsys):
        rc = main(["selftest", "--inject-failure", "numerics"])
        assert rc == 1
        out = capsys.readouterr().out
        assert "FAIL numerics." in out

    def test_unknown_suite_rejected(self, capsys):
        assert main(["selftest", "--inject-failure", "bogus"]) == 1
        assert "unknown suite" in capsys.readouterr().err


class TestConsoleScript:
    def test_entry_point_runs(self, tmp_path):
        env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")
        proc = subprocess.run(
            ["qi-cd-eval", "figure", "fig8", "--out", str(tmp_path), "--set", "points=4"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "fig8.csv").exists()
