"""
SVG Plot Module

Draws the CSV of a run as a single self-contained SVG file.

Key Features:
- Log-log plots of decay and scaling tables, with the least-squares line refitted from the
  CSV and its slope written into the image (data-slope attribute and label)
- Exponent-curve plots of the exponents table, with the breakpoints of the curves marked
- No file is written when the CSV is empty or lacks the needed columns

Dependencies:
- pandas: For reading the CSV
- numerics.fitting: For the refitted power law
- exponents: For the breakpoints of the exponent curves
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence, Tuple
from xml.sax.saxutils import escape, quoteattr

import numpy as np
import pandas as pd

from exponents import exponent_curves, sharp_threshold
from exponents.rational import format_rational
from numerics.fitting import fit_power_law

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 640, 480
MARGIN = 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d">
<rect x="0" y="0" width="%(width)d" height="%(height)d" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""

PLOT_COLUMNS = {
    "decay": ("R", "average"),
    "scaling": ("R", "norm"),
    "exponents": ("d", "alpha"),
}
EXPONENT_CURVES = ("beta_lower", "gamma0", "gamma_broad")


class PlotError(ValueError):
    """The CSV cannot be plotted."""


class SvgCanvas:
    """Data-space drawing on a fixed-size canvas; y grows upwards."""

    def __init__(self, x_range: Tuple[float, float], y_range: Tuple[float, float]):
        self.x_range = _padded(x_range)
        self.y_range = _padded(y_range)
        self.commands: List[str] = []

    def to_canvas(self, x: float, y: float) -> Tuple[float, float]:
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        cx = MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)
        cy = HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)
        return cx, cy

    def line(self, points: Sequence[Tuple[float, float]], color="#000000", width=1.5, extra=""):
        coords = " ".join("%.3f,%.3f" % self.to_canvas(x, y) for x, y in points)
        self.commands.append(
            '<polyline points="%s" style="fill:none;stroke:%s;stroke-width:%g"%s/>' % (coords, color, width, extra)
        )

    def circle(self, x: float, y: float, radius=3.0, color="#000000"):
        cx, cy = self.to_canvas(x, y)
        self.commands.append('<circle cx="%.3f" cy="%.3f" r="%g" style="fill:%s"/>' % (cx, cy, radius, color))

    def text(self, cx: float, cy: float, text: str, color="#333333", anchor="start", extra=""):
        self.commands.append(
            '<text x="%.3f" y="%.3f" fill="%s" font-size="12" font-family="sans-serif" text-anchor="%s"%s>%s</text>'
            % (cx, cy, color, anchor, extra, escape(text))
        )

    def vertical_marker(self, x: float, label: str):
        (y0, y1) = self.y_range
        cx, top = self.to_canvas(x, y1)
        _, bottom = self.to_canvas(x, y0)
        self.commands.append(
            '<line x1="%.3f" y1="%.3f" x2="%.3f" y2="%.3f" style="stroke:#888888;stroke-dasharray:4,3" '
            'class="breakpoint" data-alpha=%s/>' % (cx, top, cx, bottom, quoteattr(label))
        )
        self.text(cx, top - 4, label, color="#888888", anchor="middle")

    def axes(self, x_label: str, y_label: str):
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        self.line([(x0, y0), (x1, y0)], width=1)
        self.line([(x0, y0), (x0, y1)], width=1)
        for value in np.linspace(x0, x1, 5):
            cx, cy = self.to_canvas(value, y0)
            self.text(cx, cy + 16, "%.3g" % value, anchor="middle")
        for value in np.linspace(y0, y1, 5):
            cx, cy = self.to_canvas(x0, value)
            self.text(cx - 6, cy + 4, "%.3g" % value, anchor="end")
        self.text(WIDTH / 2, HEIGHT - 15, x_label, anchor="middle")
        self.text(15, HEIGHT / 2, y_label, anchor="middle", extra=' transform="rotate(-90 15 %d)"' % (HEIGHT // 2))

    def save(self, filename) -> Path:
        path = Path(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        width, height = WIDTH, HEIGHT
        with open(path, "w") as f:
            f.write(PREAMBLE % locals())
            for item in self.commands:
                f.write(item + "\n")
            f.write(POSTAMBLE)
        return path


def _padded(bounds: Tuple[float, float]) -> Tuple[float, float]:
    low, high = float(bounds[0]), float(bounds[1])
    if high == low:
        return low - 0.5, high + 0.5
    pad = 0.05 * (high - low)
    return low - pad, high + pad


def read_table(csv_path, columns: Sequence[str]) -> pd.DataFrame:
    """
    Read a CSV and check that it has rows and the given columns.

    Raises:
        PlotError: If the file is empty, has no rows or lacks a column
    """
    try:
        frame = pd.read_csv(csv_path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise PlotError(f"{csv_path} is empty")
    except FileNotFoundError:
        raise PlotError(f"{csv_path} not found")
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise PlotError(f"{csv_path} lacks columns {missing}")
    if frame.empty:
        raise PlotError(f"{csv_path} has no rows")
    return frame


def _numeric(frame: pd.DataFrame, column: str) -> np.ndarray:
    return pd.to_numeric(frame[column].replace("", np.nan), errors="coerce").to_numpy(dtype=float)


def loglog_plot(frame: pd.DataFrame, x_column: str, y_column: str, label: str, sign: float) -> Tuple[SvgCanvas, float]:
    x, y = _numeric(frame, x_column), _numeric(frame, y_column)
    keep = np.isfinite(x) & np.isfinite(y) & (x > 0) & (y > 0)
    if keep.sum() < 2:
        raise PlotError(f"need at least two positive ({x_column}, {y_column}) rows")
    x, y = x[keep], y[keep]
    fit = fit_power_law(x, y)
    log_x, log_y = np.log10(x), np.log10(y)
    fitted = np.log10(fit.predict(x))
    canvas = SvgCanvas((log_x.min(), log_x.max()), (min(log_y.min(), fitted.min()), max(log_y.max(), fitted.max())))
    canvas.axes(f"log10 {x_column}", f"log10 {y_column}")
    for a, b in zip(log_x, log_y):
        canvas.circle(a, b, color=COLORS[0])
    shown = sign * fit.slope
    canvas.line(list(zip(log_x, fitted)), color=COLORS[1], extra=' class="fit" data-slope="%.12g"' % shown)
    canvas.text(MARGIN + 10, MARGIN - 20, f"{label} = {shown:.6g}", color=COLORS[1])
    return canvas, shown


def exponent_plot(frame: pd.DataFrame) -> Tuple[SvgCanvas, List[Fraction]]:
    dims = sorted(set(frame["d"]))
    if len(dims) != 1:
        raise PlotError(f"exponent tables must hold a single dimension, found {dims}")
    d = int(dims[0])
    alpha = _numeric(frame, "alpha")
    curves: Dict[str, np.ndarray] = {c: _numeric(frame, c) for c in EXPONENT_CURVES if c in frame.columns}
    curves = {name: values for name, values in curves.items() if np.any(np.isfinite(values))}
    if not curves:
        raise PlotError(f"exponent tables need one of the columns {EXPONENT_CURVES}")
    stacked = np.concatenate([values[np.isfinite(values)] for values in curves.values()])
    canvas = SvgCanvas((alpha.min(), alpha.max()), (stacked.min(), stacked.max()))
    canvas.axes("alpha", "exponent")

    breakpoints = sorted({b for curve in exponent_curves(d).values() for b in curve.breakpoints}
                         | ({sharp_threshold(d)} if d >= 4 else set()))
    breakpoints = [b for b in breakpoints if alpha.min() < b < alpha.max()]
    for b in breakpoints:
        canvas.vertical_marker(float(b), format_rational(b))
    for index, (name, values) in enumerate(curves.items()):
        keep = np.isfinite(values)
        color = COLORS[index % len(COLORS)]
        canvas.line(list(zip(alpha[keep], values[keep])), color=color, extra=' class="curve" data-name="%s"' % name)
        canvas.text(WIDTH - MARGIN - 100, MARGIN + 16 * index, name, color=color)
    return canvas, breakpoints


def emit_plot(csv_path, plot: str, out_path) -> Dict[str, object]:
    """
    Draw a run's CSV as an SVG file.

    Args:
        csv_path: CSV written by a decay, extend-scaling or exponents run
        plot: "decay", "scaling" or "exponents"
        out_path: Destination of the SVG

    Returns:
        dict: the written path and the refitted slope (log-log plots) or the breakpoints (exponent plots)

    Raises:
        PlotError: If the CSV is empty or lacks the columns of the plot
    """
    if plot not in PLOT_COLUMNS:
        raise PlotError(f"unknown plot {plot!r}; expected one of {tuple(PLOT_COLUMNS)}")
    frame = read_table(csv_path, PLOT_COLUMNS[plot])
    info: Dict[str, object] = {"plot": plot}
    if plot == "decay":
        canvas, info["fitted_beta"] = loglog_plot(frame, "R", "average", "beta", -1.0)
    elif plot == "scaling":
        canvas, info["slope"] = loglog_plot(frame, "R", "norm", "slope", 1.0)
    else:
        canvas, info["breakpoints"] = exponent_plot(frame)
    info["path"] = canvas.save(out_path)
    logger.info("plot %s written to %s", plot, info["path"])
    return info
