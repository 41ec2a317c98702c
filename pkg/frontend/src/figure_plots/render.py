"""Figure definitions and the CSV-to-image rendering path.

One figure per experiment id. Each figure declares the series it draws as
(column, label) pairs; a column marked optional is skipped when absent,
everything else missing raises MissingColumn. The squeezing-level figure
overlays several input CSVs (lossless and lossy runs) on one axis pair.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


class MissingColumn(Exception):
    """A required CSV column is absent."""


class EmptyInput(Exception):
    """A CSV has no data rows."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: experiment id, input table(s), output path, label map."""

    experiment: str
    csv_paths: tuple
    out_path: str
    labels: dict = field(default_factory=dict)


# series drawn for every experiment (column, legend label, required)
_BASE_SERIES = (
    ("sigma2_optimal", "Optimal smoother", True),
    ("sigma2_robust", "Robust smoother", True),
    ("csl", "CSL", False),
    ("sql", "SQL", False),
)

# experiment id -> (x label, y label, horizontal guide value or None, log-x)
FIGURES = {
    "ou-delta": ("uncertain parameter delta", "smoother error sigma^2 (rad^2)", 0.0282, False),
    "ou-mu": ("uncertainty level mu", "worst-case error sigma_w^2 (rad^2)", 0.029, False),
    "res-delta": ("uncertain parameter delta", "smoother error sigma^2 (rad^2)", None, False),
    "res-mu": ("uncertainty level mu", "worst-case error sigma_w^2 (rad^2)", None, False),
    "res-zeta": ("damping factor zeta", "worst-case error sigma_w^2 (rad^2)", None, False),
    "res-squeeze": ("measured squeezing level (dB)", "worst-case error sigma_w^2 (rad^2)", None, False),
    "res-flux": ("photon flux (1/s)", "worst-case error sigma_w^2 (rad^2)", None, True),
}


def _read_table(path) -> dict[str, list[float]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyInput(f"{path}: no header row")
        rows = list(reader)
    if not rows:
        raise EmptyInput(f"{path}: no data rows")
    columns: dict[str, list[float]] = {}
    for name in reader.fieldnames:
        if name == "error":
            continue
        values = []
        for row in rows:
            try:
                values.append(float(row[name]))
            except (TypeError, ValueError):
                values.append(math.nan)
        columns[name] = values
    return columns


def _series_suffix(path, n_paths: int) -> str:
    if n_paths < 2:
        return ""
    stem = Path(path).stem
    for marker in ("lossless", "lossy"):
        if marker in stem:
            return f" ({marker})"
    return f" ({stem})"


def build_figure(spec: FigureSpec, log_y: bool = False):
    """Assemble the matplotlib figure for a spec (no file output)."""
    if spec.experiment not in FIGURES:
        raise ValueError(f"unknown figure id {spec.experiment!r}")
    x_label, y_label, guide, log_x = FIGURES[spec.experiment]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    drawn = set()
    for path in spec.csv_paths:
        table = _read_table(path)
        if "sweep_var" not in table:
            raise MissingColumn(f"{path}: missing column 'sweep_var'")
        x = table["sweep_var"]
        suffix = _series_suffix(path, len(spec.csv_paths))
        for column, label, required in _BASE_SERIES:
            if column not in table:
                if required:
                    raise MissingColumn(f"{path}: missing column {column!r}")
                continue
            if label in ("CSL", "SQL"):
                series_label = spec.labels.get(column, label)
                if series_label in drawn:
                    continue  # same coherent baseline repeated across overlay files
            else:
                series_label = spec.labels.get(column, label + suffix)
            ax.plot(x, table[column], label=series_label)
            drawn.add(series_label)
    if guide is not None:
        ax.axhline(guide, color="0.3", linestyle=":", linewidth=1.2,
                   label=f"threshold {guide:g}")
    ax.set_xlabel(spec.labels.get("x", x_label))
    ax.set_ylabel(spec.labels.get("y", y_label))
    if log_x:
        ax.set_xscale("log")
    if log_y:
        ax.set_yscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec, log_y: bool = False) -> str:
    """Render one figure to its output path and return that path."""
    fig = build_figure(spec, log_y=log_y)
    try:
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return spec.out_path


# conventional CSV file names per experiment; the squeezing figure overlays
# whichever of its runs exist
_INPUT_NAMES = {
    "ou-delta": ("ou-delta.csv",),
    "ou-mu": ("ou-mu.csv",),
    "res-delta": ("res-delta.csv",),
    "res-mu": ("res-mu.csv",),
    "res-zeta": ("res-zeta.csv",),
    "res-squeeze": ("res-squeeze-lossless.csv", "res-squeeze-lossy.csv", "res-squeeze.csv"),
    "res-flux": ("res-flux.csv",),
}


def discover_figures(csv_dir, out_dir, fmt: str = "png") -> list[FigureSpec]:
    """Figure specs for every experiment whose CSVs exist under csv_dir."""
    csv_dir = Path(csv_dir)
    out_dir = Path(out_dir)
    specs = []
    for experiment, names in _INPUT_NAMES.items():
        paths = tuple(str(csv_dir / n) for n in names if (csv_dir / n).exists())
        if paths:
            specs.append(FigureSpec(experiment=experiment, csv_paths=paths,
                                    out_path=str(out_dir / f"{experiment}.{fmt}")))
    return specs
