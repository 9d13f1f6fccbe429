import math

import numpy as np
import pytest
from hypothesis import given, seed, strategies as st
from hypothesis.extra.numpy import arrays

from toral_rwm.arith import enumerate_lattice_points
from toral_rwm.constants import CONSTANTS
from toral_rwm.eigenfn import FourierCoefficients, ToralEigenfunction
from toral_rwm.gaussian import RwmSpec, sample_realization, substream
from toral_rwm.nodal import (
    ResolutionError,
    SignGrid,
    box_grid,
    count_components,
    count_components_bfs,
    count_in_box,
    faber_krahn_area,
    label_components,
    nodal_length,
    nodal_segments,
    pleijel_ratio,
    refine_until_stable,
    torus_grid,
)


def strips(n, N=200):
    x = (np.arange(N) + 0.5) / N
    return SignGrid(math.sqrt(2) * np.repeat(np.sin(2 * np.pi * n * x)[:, None], N, axis=1))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_strips(n):
    g = strips(n)
    assert count_components(g).count == 2 * n
    assert nodal_length(g) == pytest.approx(2 * n, rel=0.01)


@pytest.mark.parametrize("N", [50, 66, 130])
def test_checkerboard(N):
    # N = 2 mod 4 puts the four crossings at cell centres where the bilinear value is 0
    t = np.arange(N) / N
    g = SignGrid(np.cos(2 * np.pi * t)[:, None] * np.cos(2 * np.pi * t)[None, :])
    assert count_components(g).count == 4


def test_box_topology_no_wrap():
    v = np.ones((10, 10))
    v[:, 0] = -1
    v[:, -1] = -1
    assert count_components(SignGrid(v, "torus")).count == 2
    assert count_components(SignGrid(v, "box")).count == 3


grids = arrays(np.float64, st.tuples(st.integers(2, 24)).map(lambda t: (t[0], t[0])), elements=st.floats(-1, 1))


@seed(601)
@given(grids, st.sampled_from(["torus", "box"]))
def test_union_find_matches_bfs(v, topology):
    g = SignGrid(v, topology)
    assert count_components(g).count == count_components_bfs(g)


@seed(602)
@given(st.integers(0, 2**32), st.integers(0, 15), st.integers(0, 15))
def test_torus_shift_invariance(s, a, b):
    v = substream(s, 0).standard_normal((16, 16))
    base = count_components(SignGrid(v)).count
    assert count_components(SignGrid(np.roll(v, (a, b), axis=(0, 1)))).count == base


@seed(603)
@given(st.integers(0, 2**32))
def test_square_symmetries(s):
    v = substream(s, 1).standard_normal((20, 20))
    base = count_components(SignGrid(v)).count
    for t in (v.T, v[::-1], v[:, ::-1], np.rot90(v), np.rot90(v, 2), np.rot90(v, 3), v[::-1].T):
        assert count_components(SignGrid(np.ascontiguousarray(t))).count == base


@seed(604)
@given(st.integers(0, 2**32))
def test_sign_flip_invariance(s):
    # zeros are positive, so keep them out of the sample
    v = substream(s, 2).standard_normal((18, 18)) + 1e-9
    v[v == 0] = 1.0
    assert count_components(SignGrid(v)).count == count_components(SignGrid(-v)).count


def test_labels_consistent():
    v = substream(3, 0).standard_normal((30, 30))
    labels, n = label_components(SignGrid(v))
    assert labels.shape == v.shape and len(np.unique(labels)) == n


def test_segments_shape():
    segs = nodal_segments(strips(1, 40))
    assert segs.ndim == 3 and segs.shape[1:] == (2, 2)


def test_box_count_and_boundary():
    spec = RwmSpec.equispaced(64, 20.0, 1)
    rep = count_in_box(sample_realization(spec, 0), (0.0, 0.0), 1.0, 161)
    assert rep.count == rep.count_in_box + rep.boundary_touching
    assert rep.count_in_box > 0


def test_resolution_guard():
    spec = RwmSpec.equispaced(64, 20.0, 1)
    with pytest.raises(ResolutionError):
        box_grid(sample_realization(spec, 0), (0.0, 0.0), 1.0, 40)
    with pytest.raises(ResolutionError):
        refine_until_stable(ToralEigenfunction.uniform(25), m0=2)


def test_refinement_stable_on_small_energy():
    rep = refine_until_stable(ToralEigenfunction.uniform(325))
    assert rep.stable and rep.count == 98
    assert [s["count"] for s in rep.ladder][-2:] == [98, 98]


def test_sine_torus_refinement():
    lps = enumerate_lattice_points(9)
    f = ToralEigenfunction(lps, FourierCoefficients.from_mapping(lps, {(3, 0): -1j, (-3, 0): 1j}))
    rep = refine_until_stable(f, m0=6)
    assert rep.count == 6 and rep.length == pytest.approx(6, rel=0.01)


def test_torus_grid_generic_field():
    g = torus_grid(lambda a, b: np.sin(2 * np.pi * a) + 0.3, 32)
    assert count_components(g).count == 2


def test_faber_krahn_area():
    j0 = 2.404825557695773
    assert faber_krahn_area(1.0) == pytest.approx(math.pi * j0**2 / (4 * math.pi**2))


def test_pleijel_ratio_conventions():
    # strips sin(2 pi n x1): E = n^2 and 2n domains
    n = 7
    assert pleijel_ratio(n * n, 2 * n, physical=False).value == pytest.approx(8 * math.pi / n)
    r = pleijel_ratio(n * n, 2 * n)
    assert r.value == pytest.approx(2 / (math.pi * n))
    assert r.below_pleijel


def test_constants():
    assert CONSTANTS.sigma == pytest.approx(0.0624, abs=5e-5)
    assert CONSTANTS.pleijel == pytest.approx((2 / 2.404825557695773) ** 2, rel=1e-14)
    assert 0.691 <= CONSTANTS.pleijel < 0.692
    assert CONSTANTS.tangency == pytest.approx(0.225, abs=5e-4)
    assert CONSTANTS.nu_bar == pytest.approx(CONSTANTS.sigma / (4 * math.pi))
