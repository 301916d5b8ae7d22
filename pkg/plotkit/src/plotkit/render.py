"""Render multi-series line figures from oscnet CSV files.

Rendering is a pure function of the CSV contents: no physics is
recomputed here.  A spec names the x column and either one y column with
an optional group-by column (long format) or no y column at all, in which
case every non-x column becomes its own series (wide format).
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

MARKERS = ("o", "s", "^", "d", "v", "*", "x", "+")


class RenderError(ValueError):
    """The CSV cannot be rendered as requested."""


class MissingColumnError(RenderError):
    def __init__(self, column: str, path: str):
        super().__init__(f"column {column!r} not found in {path}")
        self.column = column


@dataclass(frozen=True)
class SeriesSpec:
    """What to plot and where to write it."""

    csv_path: str
    x: str
    y: str | None = None           # None: every other column is a series
    group_by: str | None = None
    logx: bool = False
    logy: bool = False
    out_path: str = "figure.png"
    title: str = ""
    xlabel: str | None = None
    ylabel: str | None = None


@dataclass(frozen=True)
class RenderResult:
    out_path: str
    series_count: int
    labels: tuple[str, ...]


def _check_column(frame: pd.DataFrame, column: str, path: str):
    if column not in frame.columns:
        raise MissingColumnError(column, path)


def _series_from_frame(frame: pd.DataFrame, spec: SeriesSpec):
    _check_column(frame, spec.x, spec.csv_path)
    if spec.y is None:
        value_columns = [c for c in frame.columns if c != spec.x]
        if not value_columns:
            raise RenderError(f"no value columns besides {spec.x!r} in {spec.csv_path}")
        return [(name, frame[spec.x], frame[name]) for name in value_columns]
    _check_column(frame, spec.y, spec.csv_path)
    if spec.group_by is None:
        return [(spec.y, frame[spec.x], frame[spec.y])]
    _check_column(frame, spec.group_by, spec.csv_path)
    series = []
    for label, chunk in frame.groupby(spec.group_by, sort=True):
        series.append((str(label), chunk[spec.x], chunk[spec.y]))
    return series


def render(spec: SeriesSpec) -> RenderResult:
    """Draw one figure per spec; raises before writing on bad input."""
    frame = pd.read_csv(spec.csv_path)
    if frame.empty:
        raise RenderError(f"{spec.csv_path} has no data rows")
    series = _series_from_frame(frame, spec)

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    try:
        for i, (label, xs, ys) in enumerate(series):
            ax.plot(xs, ys, label=label, marker=MARKERS[i % len(MARKERS)],
                    markersize=3.5, linewidth=1.2)
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_xlabel(spec.xlabel or spec.x)
        ax.set_ylabel(spec.ylabel or (spec.y if spec.y else "value"))
        if spec.title:
            ax.set_title(spec.title)
        ax.legend(fontsize=8)
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        fig.savefig(spec.out_path, dpi=150)
    finally:
        plt.close(fig)
    return RenderResult(out_path=spec.out_path, series_count=len(series),
                        labels=tuple(label for label, _, _ in series))


def preset_spec(name: str, csv_path: str, out_path: str) -> SeriesSpec:
    """Built-in figure presets for the oscnet CSV schemas."""
    if name == "figure2":
        return SeriesSpec(csv_path=csv_path, x="eta", y=None, logx=True,
                          out_path=out_path, xlabel="detuning ratio",
                          ylabel="transfer fidelity",
                          title="Parallel transfer fidelity vs detuning")
    if name == "figure3":
        return SeriesSpec(csv_path=csv_path, x="N", y="rate_per_T",
                          group_by="scheme", logx=True, logy=True,
                          out_path=out_path, xlabel="network nodes",
                          ylabel="distribution rate (1/T)",
                          title="Entanglement distribution rate vs size")
    raise RenderError(f"unknown preset {name!r} (expected figure2 or figure3)")


def render_preset(name: str, csv_path: str, out_path: str) -> RenderResult:
    return render(preset_spec(name, csv_path, out_path))
