"""Render the two proportion figures from a series.csv.

fig1: proportion of exceptional gaps among the first N, log-scaled N axis.
fig2: the same multiplied by log N, with the conjectural [2.7, 2.8] band.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass

# pin the embedded PNG timestamp so renders are byte-reproducible
os.environ.setdefault("SOURCE_DATE_EPOCH", "0")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_HEADER = ["N", "proportion", "proportion_times_logN"]
PRODUCT_TOL = 1e-6
BAND = (2.7, 2.8)

FOOTNOTE = ("Gap n = 1 (between 2 and 3) has an empty interior and is "
            "counted as exceptional.")


class SchemaError(ValueError):
    """series.csv does not conform to the expected schema."""

    def __init__(self, row: int | None, message: str):
        self.row = row
        where = "header" if row is None else f"row {row}"
        super().__init__(f"series.csv {where}: {message}")


@dataclass(frozen=True)
class SeriesRow:
    N: int
    proportion: float
    product: float


def load_series(path: str) -> list[SeriesRow]:
    """Parse and validate; raises SchemaError with the offending row number."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(None, "file is empty") from None
        if header != EXPECTED_HEADER:
            raise SchemaError(None, f"expected columns {EXPECTED_HEADER}, got {header}")
        rows: list[SeriesRow] = []
        prev_n = 0
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != 3:
                raise SchemaError(lineno, f"expected 3 fields, got {len(rec)}")
            try:
                n = int(rec[0])
                prop = float(rec[1])
                prod = float(rec[2])
            except ValueError as exc:
                raise SchemaError(lineno, str(exc)) from None
            if n <= prev_n:
                raise SchemaError(lineno, f"N = {n} does not increase (previous {prev_n})")
            if not 0.0 <= prop <= 1.0:
                raise SchemaError(lineno, f"proportion {prop} outside [0, 1]")
            if abs(prod - prop * math.log(n)) > PRODUCT_TOL:
                raise SchemaError(
                    lineno,
                    f"product column {prod} != proportion * log N = {prop * math.log(n)}")
            prev_n = n
            rows.append(SeriesRow(N=n, proportion=prop, product=prod))
    if not rows:
        raise SchemaError(None, "no data rows")
    return rows


def _style(ax, ylabel: str) -> None:
    ax.set_xlabel("N")
    ax.set_ylabel(ylabel)
    ax.set_xscale("log")
    ax.grid(True, which="both", linewidth=0.3, alpha=0.5)


def render(series_path: str, out_dir: str, fmt: str = "png") -> list[str]:
    """Write fig1 and fig2 into out_dir; returns the file paths."""
    if fmt not in ("png", "svg"):
        raise ValueError(f"format must be png or svg, got {fmt}")
    rows = load_series(series_path)
    os.makedirs(out_dir, exist_ok=True)
    ns = [r.N for r in rows]
    outputs = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, [r.proportion for r in rows], lw=0.9, color="tab:blue")
    _style(ax, "proportion of exceptional gaps")
    ax.set_title("Exceptional gaps among the first N prime gaps")
    fig.text(0.01, 0.01, FOOTNOTE, fontsize=7)
    path1 = os.path.join(out_dir, f"fig1.{fmt}")
    fig.savefig(path1, dpi=150, metadata={"Software": None} if fmt == "png" else {})
    plt.close(fig)
    outputs.append(path1)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.axhspan(*BAND, color="tab:orange", alpha=0.25,
               label=f"conjectured limit band [{BAND[0]}, {BAND[1]}]")
    ax.plot(ns, [r.product for r in rows], lw=0.9, color="tab:blue")
    _style(ax, "proportion times log N")
    ax.set_title("Exceptional-gap proportion scaled by log N")
    ax.legend(loc="lower right", fontsize=8)
    fig.text(0.01, 0.01, FOOTNOTE, fontsize=7)
    path2 = os.path.join(out_dir, f"fig2.{fmt}")
    fig.savefig(path2, dpi=150, metadata={"Software": None} if fmt == "png" else {})
    plt.close(fig)
    outputs.append(path2)
    return outputs


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="fig_render",
                                 description="Render the proportion figures from series.csv")
    ap.add_argument("series_csv")
    ap.add_argument("out_dir")
    ap.add_argument("--svg", action="store_true", help="emit SVG instead of PNG")
    args = ap.parse_args(argv)
    try:
        outputs = render(args.series_csv, args.out_dir, "svg" if args.svg else "png")
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in outputs:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
