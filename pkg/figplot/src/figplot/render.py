"""Turn a sweep CSV into a three-series line chart.

Expected columns: g,k,ks_direct,ks_forwarded,ks_lrc_no_global with g
strictly increasing and every value a non-negative integer.  The chart
is a pure function of the CSV contents; styling is pinned so re-renders
are stable for a fixed plotting toolkit version.
"""

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

COLUMNS = ("g", "k", "ks_direct", "ks_forwarded", "ks_lrc_no_global")

# label, column, deterministic style
SERIES = (
    ("direct", "ks_direct", "tab:blue", "o"),
    ("forwarded", "ks_forwarded", "tab:orange", "s"),
    ("no global repair", "ks_lrc_no_global", "tab:green", "^"),
)


class SchemaError(ValueError):
    """The CSV does not match the sweep schema."""


def read_table(path: str) -> list[dict[str, int]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, expected header {','.join(COLUMNS)}")
        missing = [c for c in COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        extra = [c for c in reader.fieldnames if c not in COLUMNS]
        if extra:
            raise SchemaError(f"{path}: unexpected column(s) {', '.join(extra)}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            row = {}
            for col in COLUMNS:
                val = raw[col]
                if val is None or not val.strip().isdigit():
                    raise SchemaError(
                        f"{path}:{lineno}: column {col} needs a non-negative "
                        f"integer, got {val!r}")
                row[col] = int(val)
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    gs = [row["g"] for row in rows]
    if any(b <= a for a, b in zip(gs, gs[1:])):
        raise SchemaError(f"{path}: column g must be strictly increasing, got {gs}")
    return rows


def build_figure(rows: list[dict[str, int]]):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=100)
    gs = [row["g"] for row in rows]
    for label, col, color, marker in SERIES:
        ax.plot(gs, [row[col] for row in rows], label=label,
                color=color, marker=marker, markersize=4)
    ax.set_xlabel("number of groups g")
    ax.set_ylabel("secrecy dimension k_s")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def render(csv_path: str, out_path: str) -> None:
    rows = read_table(csv_path)
    fig = build_figure(rows)
    try:
        fig.savefig(out_path)
    finally:
        plt.close(fig)
