"""Render rate-versus-coverage comparison figures from bound-sweep CSVs.

Reads the CSV produced by the simulator's `bounds` command and draws one
curve pair per group (achievable dashed, converse solid). Cells holding NA
mark parameter regions where no rate is proven; they become gaps in the
curve, never zeros. The input CSV is read only.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


class PlotError(Exception):
    """Unusable input table or plot specification."""


@dataclass
class PlotSpec:
    input_csv: str
    output_image: str
    group_column: str = "delta"
    x_column: str = "c"
    y_columns: Sequence[str] = field(default_factory=lambda: ["achievable", "converse"])


def _cell_to_float(cell: str) -> float:
    if cell in ("NA", ""):
        return math.nan
    return float(cell)


def load_curve_table(spec: PlotSpec) -> dict[str, list[dict[str, float]]]:
    """Group the CSV rows by the grouping column, preserving row order."""
    try:
        with open(spec.input_csv, "r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            rows = list(reader)
    except OSError as exc:
        raise PlotError(f"cannot read {spec.input_csv}: {exc}") from exc

    needed = [spec.group_column, spec.x_column, *spec.y_columns]
    missing = [column for column in needed if column not in header]
    if missing:
        raise PlotError(f"missing columns in {spec.input_csv}: {', '.join(missing)}")
    if not rows:
        raise PlotError(f"{spec.input_csv} has no data rows")

    groups: dict[str, list[dict[str, float]]] = {}
    for row in rows:
        point = {spec.x_column: _cell_to_float(row[spec.x_column])}
        for column in spec.y_columns:
            point[column] = _cell_to_float(row[column])
        groups.setdefault(row[spec.group_column], []).append(point)
    return groups


def _group_order(keys) -> list[str]:
    try:
        return sorted(keys, key=float)
    except ValueError:
        return sorted(keys)


# Solid for the first y-column would hide the usual dashed/solid pairing, so
# styles follow the column role: upper-bound style solid, others dashed.
_STYLES = {"converse": "-", "achievable": "--"}


def render_bounds_figure(spec: PlotSpec):
    """Render the figure and write it to spec.output_image.

    Returns the matplotlib Figure so callers can inspect the curves.
    """
    groups = load_curve_table(spec)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]

    for index, key in enumerate(_group_order(groups)):
        points = sorted(groups[key], key=lambda p: p[spec.x_column])
        xs = [p[spec.x_column] for p in points]
        color = colors[index % len(colors)]
        for column in spec.y_columns:
            ys = [p[column] for p in points]
            ax.plot(xs, ys,
                    linestyle=_STYLES.get(column, "--"),
                    color=color,
                    label=f"{spec.group_column}={key} {column}")

    ax.set_xlabel("coverage depth c")
    ax.set_ylabel("rate (bits/input bit)")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output_image)
    return fig


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fig-plots",
        description="Render bound-comparison curves from a sweep CSV.",
    )
    parser.add_argument("--in", dest="input_csv", required=True, help="input CSV path")
    parser.add_argument("--out", dest="output_image", required=True,
                        help="output image path (png, pdf, svg, ...)")
    parser.add_argument("--group-by", default="delta", help="grouping column")
    parser.add_argument("--x", default="c", help="x-axis column")
    parser.add_argument("--y", action="append",
                        help="y-axis column; repeat for several curves "
                             "(default: achievable and converse)")
    args = parser.parse_args(argv)
    spec = PlotSpec(
        input_csv=args.input_csv,
        output_image=args.output_image,
        group_column=args.group_by,
        x_column=args.x,
        y_columns=args.y or ["achievable", "converse"],
    )
    try:
        fig = render_bounds_figure(spec)
        plt.close(fig)
    except (PlotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
