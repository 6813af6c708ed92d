"""Report writers shared by the command-line applications.

Every JSON document goes through :func:`dumps`, which sorts keys and uses
compact separators; identical inputs therefore give identical bytes.
"""
from __future__ import annotations

import csv
import json
import typing as t

import matplotlib as mpl
from matplotlib.figure import Figure

from .bipotent import BipotentElem, render_bipotent
from .errors import DomainError

PLOT_GID = "corner-locus"
PLOT_INCHES = 4


def dumps(obj: t.Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_json(obj: t.Any, stream: t.TextIO) -> None:
    stream.write(dumps(obj) + "\n")


def write_jsonl(records: t.Iterable[t.Any], stream: t.TextIO) -> int:
    """One document per line; returns the number of lines written."""
    count = 0
    for record in records:
        stream.write(dumps(record) + "\n")
        count += 1
    return count


def render_point(point: t.Sequence[BipotentElem]) -> str:
    """Coordinates joined by ``;``, e.g. ``-4;1/2``."""
    return ";".join(render_bipotent(x) for x in point)


def write_csv(
    points: t.Sequence[t.Sequence[BipotentElem]],
    members: t.Container[t.Sequence[BipotentElem]],
    stream: t.TextIO,
) -> None:
    """``point,member`` rows for every grid point, in grid order."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["point", "member"])
    for point in points:
        writer.writerow([render_point(point), "true" if tuple(point) in members else "false"])


def emit_svg(points: t.Sequence[t.Sequence[BipotentElem]], stream: t.TextIO) -> None:
    """Scatter plot of two-dimensional points as SVG.

    The markers are grouped under the id ``corner-locus``, one ``<use>`` per
    point. Dates and element ids are pinned so equal input gives equal bytes.
    """
    xs: list[float] = []
    ys: list[float] = []
    for point in points:
        if len(point) != 2:
            msg = f"only two-dimensional points can be plotted, got {len(point)} coordinates"
            raise DomainError(msg)
        x, y = point
        if x.value is None or y.value is None:
            msg = "points with a -inf coordinate cannot be plotted"
            raise DomainError(msg)
        xs.append(float(x.value))
        ys.append(float(y.value))

    fig = Figure(figsize=(PLOT_INCHES, PLOT_INCHES))
    ax = fig.add_subplot()
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.grid(True, linewidth=0.5, alpha=0.5)
    if xs:
        ax.plot(xs, ys, "o", markersize=4, color="black", gid=PLOT_GID)
    with mpl.rc_context({"svg.hashsalt": "supertropical", "svg.fonttype": "none"}):
        fig.savefig(stream, format="svg", metadata={"Date": None})
