"""Static SVG figures: points, grid, rich-cell shading, wedge boundaries,
and edge overlays.  Output bytes are deterministic for fixed input (fixed
svg hash salt, no timestamps)."""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection
from matplotlib.patches import Rectangle

from .decompose import Decomposition
from .grid import Cell, GridConfig, StarTriangulation, rich_cells
from .pointsets import PointSet

_HASHSALT = "planedecomp"

_POINT_COLOR = "#1a1a1a"
_GRID_COLOR = "#b9b9b9"
_RICH_COLOR = "#ffd98e"
_BOUNDARY_COLOR = "#111111"
_SUBGRAPH_COLOR = "#2a6fb0"
_HIGHLIGHT_COLOR = "#c0392b"


def _edge_collection(
    ps: PointSet, edges: Sequence[tuple[int, int]], color: str, width: float
) -> LineCollection:
    segs = [
        ((ps.points[u].x, ps.points[u].y), (ps.points[v].x, ps.points[v].y))
        for u, v in edges
    ]
    return LineCollection(segs, colors=color, linewidths=width, zorder=2)


def render_scene(
    ps: PointSet,
    out_path: str,
    *,
    grid_config: Optional[GridConfig] = None,
    cells: Optional[Sequence[Cell]] = None,
    triangulation: Optional[StarTriangulation] = None,
    decomposition: Optional[Decomposition] = None,
    subgraph_index: int = 0,
    highlight_edges: Optional[Sequence[tuple[int, int]]] = None,
) -> None:
    """Draw the requested layers into an SVG file.

    Layers, back to front: rich-cell shading, grid lines, one subgraph's
    edges, wedge boundary segments (bold), highlighted edges (bold, red),
    points.  Pass only what should appear; a bare point set renders as
    dots alone.
    """
    with matplotlib.rc_context({"svg.hashsalt": _HASHSALT}):
        fig, ax = plt.subplots(figsize=(8.0, 8.0))
        ax.set_aspect("equal")
        ax.set_axis_off()

        if grid_config is not None:
            gc = grid_config
            w = gc.cell_width
            if cells is not None:
                for c in rich_cells(cells, len(ps), gc.k):
                    x0, y0, _, _ = gc.cell_box(c.col, c.row)
                    ax.add_patch(
                        Rectangle(
                            (x0, y0), w, w,
                            facecolor=_RICH_COLOR, edgecolor="none", zorder=0,
                        )
                    )
            lo_x, lo_y = gc.origin.x, gc.origin.y
            ticks = [lo_x + i * w for i in range(gc.k + 1)]
            ax.vlines(ticks, lo_y, lo_y + gc.side, color=_GRID_COLOR,
                      linewidth=0.6, zorder=1)
            ax.hlines([lo_y + i * w for i in range(gc.k + 1)], lo_x,
                      lo_x + gc.side, color=_GRID_COLOR, linewidth=0.6, zorder=1)
            ax.set_xlim(lo_x - w * 0.2, lo_x + gc.side + w * 0.2)
            ax.set_ylim(lo_y - w * 0.2, lo_y + gc.side + w * 0.2)

        if decomposition is not None and decomposition.subgraphs:
            sg = decomposition.subgraphs[subgraph_index]
            ax.add_collection(
                _edge_collection(ps, [tuple(r) for r in sg.edges.tolist()],
                                 _SUBGRAPH_COLOR, 0.9)
            )

        if triangulation is not None:
            segs = [
                ((s.a.x, s.a.y), (s.b.x, s.b.y))
                for s in triangulation.boundary_segments
            ]
            ax.add_collection(
                LineCollection(segs, colors=_BOUNDARY_COLOR, linewidths=2.2, zorder=3)
            )

        if highlight_edges:
            ax.add_collection(
                _edge_collection(ps, list(highlight_edges), _HIGHLIGHT_COLOR, 2.0)
            )

        xs = [p.x for p in ps.points]
        ys = [p.y for p in ps.points]
        ax.scatter(xs, ys, s=7.0, color=_POINT_COLOR, zorder=4, linewidths=0)

        if grid_config is None:
            pad_x = max((max(xs) - min(xs)) * 0.04, 1.0)
            pad_y = max((max(ys) - min(ys)) * 0.04, 1.0)
            ax.set_xlim(min(xs) - pad_x, max(xs) + pad_x)
            ax.set_ylim(min(ys) - pad_y, max(ys) + pad_y)

        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
