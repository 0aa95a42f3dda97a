import math
import subprocess
import sys

import pytest

figrender = pytest.importorskip("figrender")
from figrender import SchemaError, load_series, render
from figrender.render import main


def write_series(path, n_max, header="N,proportion,proportion_times_logN"):
    lines = [header]
    exceptional = 0
    for n in range(1, n_max + 1):
        # synthetic but schema-faithful series
        exceptional += n % 3 != 0
        p = exceptional / n
        lines.append(f"{n},{p:.10f},{p * math.log(n):.10f}")
    path.write_text("\n".join(lines) + "\n")


def test_load_series_roundtrip(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 500)
    rows = load_series(str(f))
    assert len(rows) == 500
    assert rows[0].N == 1 and rows[0].proportion == 1.0
    assert all(a.N < b.N for a, b in zip(rows, rows[1:]))


def test_render_produces_both_figures(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 20_000)
    outputs = render(str(f), str(tmp_path / "figs"))
    assert [p.rsplit("/", 1)[1] for p in outputs] == ["fig1.png", "fig2.png"]
    for p in outputs:
        with open(p, "rb") as fh:
            data = fh.read()
        assert len(data) > 1000
        assert data[:8] == b"\x89PNG\r\n\x1a\n"


def test_render_svg(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 100)
    outputs = render(str(f), str(tmp_path / "figs"), fmt="svg")
    assert outputs[0].endswith("fig1.svg")
    assert b"<svg" in open(outputs[0], "rb").read()


def test_render_is_reproducible(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 300)
    a = render(str(f), str(tmp_path / "a"))
    b = render(str(f), str(tmp_path / "b"))
    for pa, pb in zip(a, b):
        assert open(pa, "rb").read() == open(pb, "rb").read()


def test_empty_file_rejected(tmp_path):
    f = tmp_path / "series.csv"
    f.write_text("")
    with pytest.raises(SchemaError, match="empty"):
        load_series(str(f))


def test_header_only_rejected(tmp_path):
    f = tmp_path / "series.csv"
    f.write_text("N,proportion,proportion_times_logN\n")
    with pytest.raises(SchemaError, match="no data rows"):
        load_series(str(f))


def test_wrong_header_rejected(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 10, header="N,prop,product")
    with pytest.raises(SchemaError, match="header"):
        load_series(str(f))


def test_bad_row_reports_line_number(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 10)
    lines = f.read_text().splitlines()
    lines[5] = "5,not_a_number,0.0"
    f.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError, match="row 6"):
        load_series(str(f))


def test_nonmonotone_n_rejected(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 10)
    lines = f.read_text().splitlines()
    lines[4], lines[5] = lines[5], lines[4]
    f.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError, match="does not increase"):
        load_series(str(f))


def test_proportion_range_enforced(tmp_path):
    f = tmp_path / "series.csv"
    f.write_text("N,proportion,proportion_times_logN\n1,1.5,0.0\n")
    with pytest.raises(SchemaError, match="outside"):
        load_series(str(f))


def test_product_mismatch_rejected(tmp_path):
    f = tmp_path / "series.csv"
    f.write_text("N,proportion,proportion_times_logN\n"
                 "1,1.0000000000,0.0000000000\n"
                 "2,0.5000000000,0.9465735903\n")  # off by 0.6
    with pytest.raises(SchemaError, match="row 3"):
        load_series(str(f))


def test_cli_error_exit(tmp_path):
    f = tmp_path / "series.csv"
    f.write_text("")
    assert main([str(f), str(tmp_path / "figs")]) == 1
    assert main([str(tmp_path / "missing.csv"), str(tmp_path / "figs")]) == 1


def test_cli_success(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 200)
    assert main([str(f), str(tmp_path / "figs")]) == 0
    assert (tmp_path / "figs" / "fig1.png").exists()
    assert (tmp_path / "figs" / "fig2.png").exists()


def test_console_script_runs(tmp_path):
    f = tmp_path / "series.csv"
    write_series(f, 50)
    proc = subprocess.run([sys.executable, "-m", "figrender.render",
                           str(f), str(tmp_path / "figs"), "--svg"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert (tmp_path / "figs" / "fig2.svg").exists()
