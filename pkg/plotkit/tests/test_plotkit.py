"""plotkit tests: CSV parsing, all seven recipes, deterministic output.

Figure inputs are generated by invoking the qi-cd-eval console script on
coarse grids, so the qicd package must be installed alongside plotkit.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from plotkit import (
    PLOT_FLOOR,
    RECIPES,
    CsvFormatError,
    MissingColumnError,
    read_table,
    render,
)
from plotkit.cli import main as qi_plot_main

FIGURE_IDS = sorted(RECIPES)

# Coarse grids keep data generation to a few seconds per figure.
FAST_OVERRIDES = {
    "fig1": ["points=6"],
    "fig2a": ["points=4"],
    "fig2b": ["points=4"],
    "fig2c": ["n_s_grid=1e-4:1e-3:1e-2"],
    "fig5": ["points=4"],
    "fig7": ["points=4"],
    "fig8": ["points=4"],
}


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """One directory holding CLI-emitted CSVs for every figure."""
    out = tmp_path_factory.mktemp("figure-data")
    env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")
    for figure_id in FIGURE_IDS:
        cmd = [sys.executable, "-m", "qicd.cli", "figure", figure_id,
               "--out", str(out)]
        for item in FAST_OVERRIDES[figure_id]:
            cmd += ["--set", item]
        result = subprocess.run(cmd, capture_output=True, text=True, env=env)
        assert result.returncode == 0, result.stderr
    return out


class TestReadTable:
    def _write(self, tmp_path, text):
        path = tmp_path / "t.csv"
        path.write_text(text, encoding="utf-8")
        return path

    def test_round_trip(self, tmp_path):
        path = self._write(tmp_path, "# generator=x\n# n_s=0.001\nm,log_p\n10,-1.5\n20,-2.5\n")
        t = read_table(path)
        assert t.columns == ("m", "log_p")
        assert t.has_column("m") and not t.has_column("q")
        np.testing.assert_allclose(t.column("log_p"), [-1.5, -2.5])
        assert t.comment_value("n_s") == "0.001"
        assert t.comment_value("absent") is None

    def test_empty_cell_becomes_nan(self, tmp_path):
        t = read_table(self._write(tmp_path, "a,b\n1,\n"))
        assert np.isnan(t.column("b")[0])

    def test_missing_column_names_it_and_lists_available(self, tmp_path):
        t = read_table(self._write(tmp_path, "m,log_p\n1,2\n"))
        with pytest.raises(MissingColumnError) as exc_info:
            t.column("log_q")
        msg = str(exc_info.value)
        assert "log_q" in msg
        assert "m, log_p" in msg

    def test_comment_after_header_rejected_with_line(self, tmp_path):
        path = self._write(tmp_path, "m,log_p\n# late\n1,2\n")
        with pytest.raises(CsvFormatError, match=r":2: comment after"):
            read_table(path)

    def test_wrong_cell_count_rejected_with_line(self, tmp_path):
        path = self._write(tmp_path, "m,log_p\n1,2\n3,4,5\n")
        with pytest.raises(CsvFormatError, match=r":3: expected 2 cells, got 3"):
            read_table(path)

    def test_unparseable_cell_rejected_with_line(self, tmp_path):
        path = self._write(tmp_path, "m,log_p\n1,oops\n")
        with pytest.raises(CsvFormatError, match=r":2:"):
            read_table(path)

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(CsvFormatError, match="no header row"):
            read_table(self._write(tmp_path, ""))

    def test_header_without_data_rejected(self, tmp_path):
        with pytest.raises(CsvFormatError, match="no data rows"):
            read_table(self._write(tmp_path, "# c\nm,log_p\n"))

    def test_format_error_is_value_error(self):
        assert issubclass(CsvFormatError, ValueError)


class TestRender:
    @pytest.mark.parametrize("figure_id", FIGURE_IDS)
    def test_renders_png_and_svg(self, figure_id, data_dir, tmp_path):
        written = render(figure_id, data_dir, tmp_path)
        assert [p.name for p in written] == [f"{figure_id}.png", f"{figure_id}.svg"]
        for path in written:
            assert path.stat().st_size > 0

    @pytest.mark.parametrize("figure_id", FIGURE_IDS)
    def test_rerender_is_byte_identical(self, figure_id, data_dir, tmp_path):
        first = render(figure_id, data_dir, tmp_path / "a")
        second = render(figure_id, data_dir, tmp_path / "b")
        for p1, p2 in zip(first, second):
            assert p1.read_bytes() == p2.read_bytes(), p1.name

    def test_unknown_figure_rejected(self, data_dir, tmp_path):
        with pytest.raises(ValueError, match="unknown figure"):
            render("fig99", data_dir, tmp_path)

    def test_parse_failure_writes_nothing(self, data_dir, tmp_path):
        bad = tmp_path / "data"
        bad.mkdir()
        (bad / "fig2a.csv").write_text("m,log_p\n1,oops\n", encoding="utf-8")
        out = tmp_path / "out"
        with pytest.raises(CsvFormatError):
            render("fig2a", bad, out)
        assert not out.exists()

    def test_missing_input_file_raises(self, tmp_path):
        with pytest.raises(OSError):
            render("fig2a", tmp_path / "nowhere", tmp_path / "out")

    def test_fig5_overlay_is_optional(self, data_dir, tmp_path):
        plain = render("fig5", data_dir, tmp_path / "plain")
        overlay_dir = tmp_path / "with-overlay"
        overlay_dir.mkdir()
        for name in RECIPES["fig5"].inputs:
            (overlay_dir / name).write_bytes((data_dir / name).read_bytes())
        (overlay_dir / "fig5_overlay.csv").write_text(
            "m,log_p\n1e6,-1.0\n1e8,-3.0\n", encoding="utf-8")
        decorated = render("fig5", overlay_dir, tmp_path / "out2")
        assert decorated[1].read_bytes() != plain[1].read_bytes()

    def test_deep_values_get_clipped_legend(self, data_dir, tmp_path):
        """A series below the plot floor gains a clipping note in the legend."""
        import matplotlib.pyplot as plt

        deep_dir = tmp_path / "deep"
        deep_dir.mkdir()
        src = read_table(data_dir / "fig2a.csv")
        header = ",".join(src.columns)
        rows = []
        for row in src.data:
            cells = list(row)
            cells[src.columns.index("log_ng")] = np.log(PLOT_FLOOR) - 50.0
            rows.append(",".join(repr(float(c)) for c in cells))
        (deep_dir / "fig2a.csv").write_text(
            header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
        fig = plt.figure()
        try:
            RECIPES["fig2a"].draw(fig, {"fig2a.csv": read_table(deep_dir / "fig2a.csv")})
            labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        finally:
            plt.close(fig)
        assert any("clipped at 1e-40" in label for label in labels)
        assert sum("clipped" in label for label in labels) == 1


class TestCli:
    def test_success_prints_paths(self, data_dir, tmp_path, capsys):
        assert qi_plot_main(["fig2a", "--data", str(data_dir),
                             "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "fig2a.png" in out and "fig2a.svg" in out

    def test_unknown_figure_exits_1(self, data_dir, tmp_path, capsys):
        assert qi_plot_main(["fig99", "--data", str(data_dir),
                             "--out", str(tmp_path)]) == 1
        assert "unknown figure" in capsys.readouterr().err

    def test_missing_data_exits_1(self, tmp_path, capsys):
        assert qi_plot_main(["fig2a", "--data", str(tmp_path / "nope"),
                             "--out", str(tmp_path)]) == 1
        assert "error:" in capsys.readouterr().err

    def test_malformed_csv_exits_1_with_line(self, tmp_path, capsys):
        data = tmp_path / "d"
        data.mkdir()
        (data / "fig2a.csv").write_text("m\n1,2\n", encoding="utf-8")
        assert qi_plot_main(["fig2a", "--data", str(data),
                             "--out", str(tmp_path / "o")]) == 1
        assert ":2:" in capsys.readouterr().err

    def test_console_script_installed(self, data_dir, tmp_path):
        result = subprocess.run(
            ["qi-plot", "fig2b", "--data", str(data_dir), "--out", str(tmp_path)],
            capture_output=True, text=True)
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "fig2b.svg").exists()
