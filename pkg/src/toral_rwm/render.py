"""Static SVG renders of sign grids."""

from __future__ import annotations

import base64
import io
from pathlib import Path

import numpy as np
from PIL import Image

from .nodal import SignGrid, nodal_segments

POSITIVE = (236, 112, 99)
NEGATIVE = (93, 173, 226)
LINE = "#1b1b1b"


def _png(grid: SignGrid, scale: int) -> bytes:
    # image column = first grid axis, image row = second axis reversed
    pos = (grid.values >= 0).T[::-1]
    img = Image.fromarray(pos.astype(np.uint8), mode="P")
    img.putpalette(list(NEGATIVE) + list(POSITIVE))
    if scale > 1:
        img = img.resize((grid.N * scale, grid.N * scale), Image.NEAREST)
    buf = io.BytesIO()
    img.save(buf, format="PNG", optimize=False)
    return buf.getvalue()


def svg_document(grid: SignGrid, scale: int = 1, lines: bool = True) -> str:
    """Two-colour raster of the signs (one block of scale x scale pixels per
    sample) with the marching-squares nodal lines on top."""
    size = grid.N * scale
    data = base64.b64encode(_png(grid, scale)).decode("ascii")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<image width="{size}" height="{size}" style="image-rendering:pixelated" href="data:image/png;base64,{data}"/>',
    ]
    if lines:
        segs = nodal_segments(grid)
        if len(segs):
            x = (segs[..., 0] + 0.5) * scale
            y = (grid.N - 0.5 - segs[..., 1]) * scale
            d = " ".join(
                f"M{x0:.2f} {y0:.2f}L{x1:.2f} {y1:.2f}" for x0, y0, x1, y1 in zip(x[:, 0], y[:, 0], x[:, 1], y[:, 1])
            )
            parts.append(f'<path d="{d}" fill="none" stroke="{LINE}" stroke-width="{max(0.5, scale / 4)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_svg(grid: SignGrid, path, scale: int = 1, lines: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg_document(grid, scale, lines))
    return path


def decode_raster(svg_text: str) -> np.ndarray:
    """The embedded sign raster as a boolean array (True = positive), for tests."""
    start = svg_text.index("base64,") + len("base64,")
    end = svg_text.index('"', start)
    img = Image.open(io.BytesIO(base64.b64decode(svg_text[start:end])))
    return np.asarray(img) == 1
