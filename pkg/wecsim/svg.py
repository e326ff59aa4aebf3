"""Minimal SVG line charts for trace channels."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

WIDTH = 800
HEIGHT = 400
MARGIN_LEFT = 80
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50
N_TICKS = 5
# Polyline vertices per chart; longer series keep each bucket's min and max.
MAX_POINTS = 4000


def _envelope(t: np.ndarray, y: np.ndarray, max_points: int) -> tuple[np.ndarray, np.ndarray]:
    n = t.size
    if n <= max_points:
        return t, y
    buckets = max_points // 2
    edges = np.linspace(0, n, buckets + 1).astype(int)
    ts, ys = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        seg = y[lo:hi]
        i_min = lo + int(np.argmin(seg))
        i_max = lo + int(np.argmax(seg))
        for i in sorted((i_min, i_max)):
            ts.append(t[i])
            ys.append(y[i])
    return np.asarray(ts), np.asarray(ys)


def _range(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def line_chart(t: np.ndarray, y: np.ndarray, title: str, y_label: str) -> str:
    """
    Render one series as a standalone SVG document.

    Args:
        t: Sample times, s (monotone)
        y: Values
        title: Chart title
        y_label: Vertical axis label

    Returns:
        SVG markup
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    t0, t1 = _range(t) if t.size else (0.0, 1.0)
    y0, y1 = _range(y) if y.size else (0.0, 1.0)

    def sx(v: float) -> float:
        return MARGIN_LEFT + (v - t0) / (t1 - t0) * plot_w

    def sy(v: float) -> float:
        return MARGIN_TOP + (y1 - v) / (y1 - y0) * plot_h

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(WIDTH),
        height=str(HEIGHT),
        viewBox=f"0 0 {WIDTH} {HEIGHT}",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    title_el = ET.SubElement(
        svg, "text", x=str(WIDTH / 2), y="24", attrib={"text-anchor": "middle", "font-size": "16"}
    )
    title_el.text = title

    axes = {"stroke": "black", "stroke-width": "1"}
    ET.SubElement(
        svg, "line", x1=str(MARGIN_LEFT), y1=str(MARGIN_TOP + plot_h),
        x2=str(MARGIN_LEFT + plot_w), y2=str(MARGIN_TOP + plot_h), attrib=axes,
    )
    ET.SubElement(
        svg, "line", x1=str(MARGIN_LEFT), y1=str(MARGIN_TOP),
        x2=str(MARGIN_LEFT), y2=str(MARGIN_TOP + plot_h), attrib=axes,
    )

    small = {"font-size": "11"}
    for tick in np.linspace(t0, t1, N_TICKS):
        x = sx(tick)
        ET.SubElement(
            svg, "line", x1=f"{x:.2f}", y1=str(MARGIN_TOP + plot_h),
            x2=f"{x:.2f}", y2=str(MARGIN_TOP + plot_h + 5), attrib=axes,
        )
        label = ET.SubElement(
            svg, "text", x=f"{x:.2f}", y=str(MARGIN_TOP + plot_h + 18),
            attrib={"text-anchor": "middle", **small},
        )
        label.text = f"{tick:.3g}"
    for tick in np.linspace(y0, y1, N_TICKS):
        yy = sy(tick)
        ET.SubElement(
            svg, "line", x1=str(MARGIN_LEFT - 5), y1=f"{yy:.2f}",
            x2=str(MARGIN_LEFT), y2=f"{yy:.2f}", attrib=axes,
        )
        label = ET.SubElement(
            svg, "text", x=str(MARGIN_LEFT - 8), y=f"{yy + 4:.2f}",
            attrib={"text-anchor": "end", **small},
        )
        label.text = f"{tick:.4g}"

    x_label = ET.SubElement(
        svg, "text", x=str(MARGIN_LEFT + plot_w / 2), y=str(HEIGHT - 10),
        attrib={"text-anchor": "middle", "font-size": "12"},
    )
    x_label.text = "t [s]"
    cy = MARGIN_TOP + plot_h / 2
    y_label_el = ET.SubElement(
        svg, "text", x="16", y=f"{cy:.2f}",
        attrib={
            "text-anchor": "middle",
            "font-size": "12",
            "transform": f"rotate(-90 16 {cy:.2f})",
        },
    )
    y_label_el.text = y_label

    pt, py = _envelope(t, y, MAX_POINTS)
    points = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(pt, py))
    ET.SubElement(
        svg, "polyline", points=points, fill="none",
        attrib={"stroke": "#1f77b4", "stroke-width": "1.2"},
    )
    return ET.tostring(svg, encoding="unicode")


def write_line_chart(
    path: str | Path, t: np.ndarray, y: np.ndarray, title: str, y_label: str
) -> None:
    Path(path).write_text(line_chart(t, y, title, y_label) + "\n", encoding="utf-8")
