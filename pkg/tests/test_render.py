import time

import numpy as np

from toral_rwm.gaussian import RwmSpec, sample_realization
from toral_rwm.nodal import SignGrid, box_grid
from toral_rwm.render import decode_raster, render_svg, svg_document


def strip_grid(N=60, bands=6):
    x = (np.arange(N) + 0.5) / N
    return SignGrid(np.repeat(np.sin(np.pi * bands * x)[:, None], N, axis=1))


def test_six_bands():
    raster = decode_raster(svg_document(strip_grid()))
    row = raster[0].astype(int)
    assert 1 + np.count_nonzero(np.diff(row)) == 6


def test_scale_blocks():
    raster = decode_raster(svg_document(strip_grid(20), scale=3))
    assert raster.shape == (60, 60)


def test_byte_identical(tmp_path):
    g = strip_grid()
    a = render_svg(g, tmp_path / "a.svg").read_bytes()
    b = render_svg(g, tmp_path / "b.svg").read_bytes()
    assert a == b and b"<path" in a


def test_render_speed(tmp_path):
    spec = RwmSpec.equispaced(64, 60.0, 0)
    grid = box_grid(sample_realization(spec, 0), (0.0, 0.0), 1.0, 512)
    t = time.perf_counter()
    render_svg(grid, tmp_path / "rwm.svg")
    assert time.perf_counter() - t < 1.0
