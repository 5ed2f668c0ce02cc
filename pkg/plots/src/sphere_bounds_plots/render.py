"""Chart rendering for sphere-bounds comparison CSVs.

The CSV schema is the interface contract with the producing CLI; this module
never imports the producer.  A render is a pure function of the CSV: the
series drawn (and listed in the manifest sidecar) are exactly the value
columns that carry at least one number.
"""

import csv
import json
import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

# reproducible SVG ids; savefig additionally drops the Date metadata
plt.rcParams["svg.hashsalt"] = "sphere-bounds-plots"

EXPECTED_HEADER = [
    "ell",
    "eta",
    "t",
    "rho",
    "exact_logq_norm",
    "ub_entropy",
    "lb_entropy_max",
    "ub_kappa_closed",
    "ub_integral_gamma",
    "ub_integral_kappa",
    "lb_closed",
    "lb_closed_env",
]

KEY_COLUMNS = EXPECTED_HEADER[:4]
SERIES_COLUMNS = EXPECTED_HEADER[4:]


class SchemaError(ValueError):
    """The CSV does not match the published sweep schema."""


@dataclass(frozen=True)
class SeriesStyle:
    label: str
    line: str
    zorder: int  # exact drawn on top


STYLES = {
    "exact_logq_norm": SeriesStyle("exact", "-", 10),
    "ub_entropy": SeriesStyle("entropy upper bound", "--", 5),
    "lb_entropy_max": SeriesStyle("entropy window lower bound", "--", 4),
    "ub_kappa_closed": SeriesStyle("closed-form upper bound", "-.", 5),
    "ub_integral_gamma": SeriesStyle("integral upper bound (uniform const)", ":", 3),
    "ub_integral_kappa": SeriesStyle("integral upper bound (radius const)", ":", 3),
    "lb_closed": SeriesStyle("closed-form lower bound", "-.", 4),
    "lb_closed_env": SeriesStyle("lower-bound envelope", "-", 6),
}


@dataclass(frozen=True)
class ComparisonTable:
    """Parsed sweep CSV: key columns fully populated, value columns sparse."""

    x_rho: tuple[float, ...]
    x_ell: tuple[int, ...]
    series: dict[str, tuple[Optional[float], ...]]

    def nonempty_series(self) -> list[str]:
        return [c for c in SERIES_COLUMNS if any(v is not None for v in self.series[c])]


def _parse_cell(column: str, raw: str, line_no: int) -> Optional[float]:
    if raw == "":
        return None
    try:
        v = float(raw)
    except ValueError:
        raise SchemaError(f"line {line_no}: column {column!r} holds non-numeric {raw!r}") from None
    if math.isnan(v) or math.isinf(v):
        raise SchemaError(f"line {line_no}: column {column!r} holds non-finite {raw!r}")
    return v


def load_table(path: str) -> ComparisonTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header row") from None
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"{path}: header {header!r} does not match the sweep schema "
                f"{EXPECTED_HEADER!r}"
            )
        x_rho: list[float] = []
        x_ell: list[int] = []
        series: dict[str, list[Optional[float]]] = {c: [] for c in SERIES_COLUMNS}
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(EXPECTED_HEADER):
                raise SchemaError(
                    f"{path}: line {line_no} has {len(row)} cells, expected "
                    f"{len(EXPECTED_HEADER)}"
                )
            cells = dict(zip(EXPECTED_HEADER, row))
            for key in KEY_COLUMNS:
                if cells[key] == "":
                    raise SchemaError(f"{path}: line {line_no}: key column {key!r} is empty")
            try:
                x_ell.append(int(cells["ell"]))
            except ValueError:
                raise SchemaError(
                    f"{path}: line {line_no}: column 'ell' holds non-integer "
                    f"{cells['ell']!r}"
                ) from None
            rho = _parse_cell("rho", cells["rho"], line_no)
            assert rho is not None
            x_rho.append(rho)
            for c in SERIES_COLUMNS:
                series[c].append(_parse_cell(c, cells[c], line_no))
    if not x_rho:
        raise SchemaError(f"{path}: no data rows below the header")
    return ComparisonTable(
        x_rho=tuple(x_rho),
        x_ell=tuple(x_ell),
        series={c: tuple(v) for c, v in series.items()},
    )


def _image_format(out_path: str, image_format: Optional[str]) -> str:
    fmt = image_format
    if fmt is None:
        ext = os.path.splitext(out_path)[1].lstrip(".").lower()
        fmt = ext or "svg"
    if fmt not in ("svg", "png"):
        raise SchemaError(f"unsupported image format {fmt!r}, expected svg or png")
    return fmt


def render(
    csv_path: str,
    mode: str,
    out_path: str,
    image_format: Optional[str] = None,
) -> dict:
    """Draw one comparison chart and its manifest sidecar.

    mode "rho" plots against the normalized radius, mode "ell" against the
    block count (log-2 x axis).  Returns the manifest written next to the
    image; nothing is written when the CSV fails validation.
    """
    if mode not in ("rho", "ell"):
        raise SchemaError(f"mode must be 'rho' or 'ell', got {mode!r}")
    fmt = _image_format(out_path, image_format)
    table = load_table(csv_path)
    columns = table.nonempty_series()

    xs: Sequence[float] = table.x_rho if mode == "rho" else table.x_ell
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    try:
        for column in columns:
            style = STYLES[column]
            ys = [math.nan if v is None else v for v in table.series[column]]
            marker = "o" if mode == "ell" else None
            ax.plot(xs, ys, style.line, marker=marker, markersize=4,
                    label=style.label, zorder=style.zorder)
        if mode == "rho":
            ax.set_xlabel("normalized radius t / ell")
        else:
            ax.set_xscale("log", base=2)
            ax.set_xlabel("block count ell")
        ax.set_ylabel("normalized log_q sphere size")
        ax.legend(loc="best", fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(out_path, format=fmt, metadata={"Date": None} if fmt == "svg" else None)
    finally:
        plt.close(fig)

    manifest = {
        "source": os.path.basename(csv_path),
        "mode": mode,
        "format": fmt,
        "image": os.path.basename(out_path),
        "rows": len(xs),
        "series": columns,
    }
    manifest_path = out_path + ".manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
