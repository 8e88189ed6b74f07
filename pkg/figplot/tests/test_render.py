import pathlib

import matplotlib.pyplot as plt
import pytest

from figplot import SchemaError, build_figure, read_table, render
from figplot.cli import main

FIXTURE = str(pathlib.Path(__file__).parent / "data" / "sweep_r7_h3.csv")


def test_read_fixture():
    rows = read_table(FIXTURE)
    assert len(rows) == 15
    assert rows[0] == {"g": 1, "k": 4, "ks_direct": 0, "ks_forwarded": 0,
                       "ks_lrc_no_global": 0}
    # forwarding pulls ahead once the window spans more than one group
    for row in rows:
        if row["g"] >= 4:
            assert row["ks_forwarded"] > row["ks_direct"]
        else:
            assert row["ks_forwarded"] == row["ks_direct"]


def test_figure_has_three_labeled_series():
    rows = read_table(FIXTURE)
    fig = build_figure(rows)
    try:
        ax = fig.axes[0]
        assert ax.get_xlabel() == "number of groups g"
        assert ax.get_ylabel() == "secrecy dimension k_s"
        labels = [line.get_label() for line in ax.get_lines()]
        assert labels == ["direct", "forwarded", "no global repair"]
        fwd = next(l for l in ax.get_lines() if l.get_label() == "forwarded")
        assert list(fwd.get_ydata()) == [0, 4, 8, 15, 22, 29, 36, 43, 50,
                                         57, 64, 71, 78, 85, 92]
    finally:
        plt.close(fig)


def test_render_writes_png(tmp_path):
    out = tmp_path / "fig.png"
    render(FIXTURE, str(out))
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_single_row_renders(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("g,k,ks_direct,ks_forwarded,ks_lrc_no_global\n3,18,8,8,14\n")
    out = tmp_path / "one.png"
    render(str(p), str(out))
    assert out.exists()


@pytest.mark.parametrize("body,match", [
    ("", "empty file"),
    ("g,k,ks_direct,ks_forwarded,ks_lrc_no_global\n", "no data rows"),
    ("g,k,ks_direct,ks_lrc_no_global\n1,4,0,0\n", "ks_forwarded"),
    ("g,k,ks_direct,ks_forwarded,ks_lrc_no_global,bonus\n1,4,0,0,0,9\n", "bonus"),
    ("g,k,ks_direct,ks_forwarded,ks_lrc_no_global\n1,4,0,-2,0\n", "ks_forwarded"),
    ("g,k,ks_direct,ks_forwarded,ks_lrc_no_global\n1,4,0,0.5,0\n", "ks_forwarded"),
    ("g,k,ks_direct,ks_forwarded,ks_lrc_no_global\n2,4,0,0,0\n2,5,1,1,1\n",
     "strictly increasing"),
])
def test_schema_errors(tmp_path, body, match):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(SchemaError, match=match):
        read_table(str(p))


def test_cli_roundtrip(tmp_path, capsys):
    out = tmp_path / "fig.png"
    assert main([FIXTURE, str(out)]) == 0
    assert "wrote" in capsys.readouterr().out
    assert out.exists()


def test_cli_schema_failure(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("g,wrong\n1,2\n")
    assert main([str(p), str(tmp_path / "x.png")]) == 1
    assert "missing column" in capsys.readouterr().err


def test_cli_missing_input(tmp_path, capsys):
    assert main([str(tmp_path / "ghost.csv"), str(tmp_path / "x.png")]) == 1
