"""Nodal domains and nodal length of sampled fields."""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ._label import label_signs
from .constants import CONSTANTS, J0_FIRST_ZERO

log = logging.getLogger(__name__)

DEGENERATE_TOL = 1e-12


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SignGrid:
    """Samples of a field on a square.

    ``torus``: values[j, l] = f(j/N, l/N) on [0, 1)^2 with wrap-around.
    ``box``: an n x n sample of a closed square of side ``side`` including its
    boundary ring.
    """

    values: np.ndarray
    topology: str = "torus"
    side: float = 1.0

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("grid must be square")
        if self.topology not in ("torus", "box"):
            raise ValueError(f"unknown topology {self.topology!r}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid contains non-finite values")

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def periodic(self) -> bool:
        return self.topology == "torus"

    @property
    def spacing(self) -> float:
        return self.side / self.N if self.periodic else self.side / (self.N - 1)


@dataclass
class NodalReport:
    count: int
    count_in_box: int | None = None
    boundary_touching: int | None = None
    length: float | None = None
    N: int | None = None
    small_components: int = 0
    stable: bool | None = None
    ladder: list = field(default_factory=list)

    @property
    def observed(self) -> int:
        """The count that estimates N_f: contained components in a box, all on the torus."""
        return self.count if self.count_in_box is None else self.count_in_box


def label_components(grid: SignGrid) -> tuple[np.ndarray, int]:
    return label_signs(grid.values, grid.periodic, DEGENERATE_TOL)


def _boundary_labels(labels: np.ndarray) -> np.ndarray:
    ring = np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])
    return np.unique(ring)


def count_components(grid: SignGrid, frequency: float | None = None) -> NodalReport:
    """Sign components under 4-connectivity with saddle cells resolved by their centre.

    For a box grid, components meeting the outer sample ring are reported as
    ``boundary_touching`` and the rest as ``count_in_box``. With ``frequency``
    given, components smaller than half the Faber-Krahn area are counted in
    ``small_components``.
    """
    labels, count = label_components(grid)
    report = NodalReport(count=int(count), N=grid.N)
    interior = np.ones(count, dtype=bool)
    if not grid.periodic:
        touching = _boundary_labels(labels)
        interior[touching] = False
        report.boundary_touching = len(touching)
        report.count_in_box = int(count - len(touching))
    if frequency:
        report.small_components = _faber_krahn_screen(labels, count, interior, grid.spacing, frequency)
    return report


def faber_krahn_area(frequency: float) -> float:
    """Least area of a nodal domain for -Laplacian eigenvalue (2 pi frequency)^2."""
    return math.pi * J0_FIRST_ZERO**2 / (2 * math.pi * frequency) ** 2


def _faber_krahn_screen(labels, count, interior, spacing, frequency, safety=0.5) -> int:
    area = np.bincount(labels.ravel(), minlength=count) * spacing**2
    small = int(np.count_nonzero(interior & (area < safety * faber_krahn_area(frequency))))
    if small:
        log.warning("%d components below the Faber-Krahn area; refine the grid", small)
    return small


def count_components_bfs(grid: SignGrid) -> int:
    """Reference count by breadth-first flood fill with the same adjacency rule."""
    v = grid.values
    n, m = v.shape
    pos = v >= 0
    per = grid.periodic

    def diagonal_links(i, j):
        # the cell with lower-left corner (i, j); yields joined diagonal pairs
        if not per and (i >= n - 1 or j >= m - 1):
            return ()
        i1, j1 = (i + 1) % n, (j + 1) % m
        a, b, c, d = pos[i, j], pos[i, j1], pos[i1, j], pos[i1, j1]
        if not (a == d and b == c and a != b):
            return ()
        corners = (v[i, j], v[i, j1], v[i1, j], v[i1, j1])
        centre = sum(corners) / 4
        if abs(centre) <= DEGENERATE_TOL * max(abs(x) for x in corners):
            return ()
        if (centre >= 0) == a:
            return (((i, j), (i1, j1)),)
        return (((i, j1), (i1, j)),)

    neighbours: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i in range(n):
        for j in range(m):
            for p, q in diagonal_links(i, j):
                neighbours.setdefault(p, []).append(q)
                neighbours.setdefault(q, []).append(p)

    seen = np.zeros((n, m), dtype=bool)
    count = 0
    for si in range(n):
        for sj in range(m):
            if seen[si, sj]:
                continue
            count += 1
            seen[si, sj] = True
            queue = deque([(si, sj)])
            while queue:
                i, j = queue.popleft()
                cand = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
                if per:
                    cand = [(a % n, b % m) for a, b in cand]
                else:
                    cand = [(a, b) for a, b in cand if 0 <= a < n and 0 <= b < m]
                cand += neighbours.get((i, j), [])
                for a, b in cand:
                    if not seen[a, b] and pos[a, b] == pos[i, j]:
                        seen[a, b] = True
                        queue.append((a, b))
    return count


# --- nodal length ----------------------------------------------------------


def nodal_segments(grid: SignGrid) -> np.ndarray:
    """Marching-squares segments of the zero set, (S, 2, 2) in grid index units.

    Crossings are linearly interpolated along cell edges; saddle cells are split
    consistently with the labeling rule.
    """
    v = grid.values
    if grid.periodic:
        v = np.pad(v, ((0, 1), (0, 1)), mode="wrap")
    v00, v01 = v[:-1, :-1], v[:-1, 1:]
    v10, v11 = v[1:, :-1], v[1:, 1:]
    p00, p01, p10, p11 = v00 >= 0, v01 >= 0, v10 >= 0, v11 >= 0
    ii, jj = np.meshgrid(np.arange(v00.shape[0], dtype=float), np.arange(v00.shape[1], dtype=float), indexing="ij")

    def frac(a, b):
        with np.errstate(divide="ignore", invalid="ignore"):
            t = a / (a - b)
        return np.clip(np.nan_to_num(t), 0.0, 1.0)

    # edges: 0 = (00, 01), 1 = (01, 11), 2 = (10, 11), 3 = (00, 10)
    flags = np.stack([p00 != p01, p01 != p11, p10 != p11, p00 != p10])
    xs = np.stack([ii, ii + frac(v01, v11), ii + 1, ii + frac(v00, v10)])
    ys = np.stack([jj + frac(v00, v01), jj + 1, jj + frac(v10, v11), jj])

    ncross = flags.sum(axis=0)
    segs = []
    two = ncross == 2
    if two.any():
        f2 = flags[:, two]
        first = np.argmax(f2, axis=0)
        second = 3 - np.argmax(f2[::-1], axis=0)
        cols = np.arange(f2.shape[1])
        X, Y = xs[:, two], ys[:, two]
        segs.append(
            np.stack(
                [np.column_stack([X[first, cols], Y[first, cols]]), np.column_stack([X[second, cols], Y[second, cols]])],
                axis=1,
            )
        )
    four = ncross == 4
    if four.any():
        X, Y = xs[:, four], ys[:, four]
        centre = 0.25 * (v00 + v01 + v10 + v11)[four]
        joined = (centre >= 0) == p00[four]
        cols = np.arange(len(centre))
        # joined 00-11 diagonal cuts off corner 01 (edges 0, 1) and corner 10 (edges 2, 3);
        # otherwise corner 00 (edges 3, 0) and corner 11 (edges 1, 2)
        for (ja, jb), (ka, kb) in (((0, 1), (3, 0)), ((2, 3), (1, 2))):
            ea = np.where(joined, ja, ka)
            eb = np.where(joined, jb, kb)
            segs.append(
                np.stack(
                    [np.column_stack([X[ea, cols], Y[ea, cols]]), np.column_stack([X[eb, cols], Y[eb, cols]])], axis=1
                )
            )
    if not segs:
        return np.empty((0, 2, 2))
    return np.concatenate(segs)


def nodal_length(grid: SignGrid) -> float:
    segs = nodal_segments(grid)
    if len(segs) == 0:
        return 0.0
    return float(np.linalg.norm(segs[:, 1] - segs[:, 0], axis=1).sum() * grid.spacing)


# --- sampling fields -------------------------------------------------------


def _sample(field_fn, y1: np.ndarray, y2: np.ndarray) -> np.ndarray:
    if hasattr(field_fn, "grid"):
        return field_fn.grid(y1, y2)
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    return np.asarray(field_fn(Y1, Y2), dtype=float)


def _frequency(field_fn, frequency):
    if frequency is None:
        frequency = getattr(field_fn, "frequency", None)
    if frequency is None:
        raise ValueError("frequency (cycles per unit length) is required for this field")
    return float(frequency)


def box_grid(field_fn, center, side: float, n: int, frequency: float | None = None) -> SignGrid:
    """n x n samples of the closed box centred at ``center``."""
    if side <= 0:
        raise ValueError("side must be positive")
    freq = _frequency(field_fn, frequency)
    spw = (n - 1) / (side * freq) if freq > 0 else math.inf
    if spw < 4:
        raise ResolutionError(f"{spw:.2f} samples per wavelength; at least 4 required")
    t = np.linspace(-0.5, 0.5, n) * side
    return SignGrid(_sample(field_fn, center[0] + t, center[1] + t), "box", side)


def count_in_box(field_fn, center, side: float, n: int, frequency: float | None = None) -> NodalReport:
    """Components contained in the open box, with those meeting its boundary ring separate."""
    grid = box_grid(field_fn, center, side, n, frequency)
    report = count_components(grid, _frequency(field_fn, frequency))
    report.length = nodal_length(grid)
    return report


def torus_grid(field_fn, N: int) -> SignGrid:
    from .eigenfn import ToralEigenfunction, synthesize_grid

    if isinstance(field_fn, ToralEigenfunction):
        return SignGrid(synthesize_grid(field_fn, N), "torus")
    t = np.arange(N) / N
    return SignGrid(_sample(field_fn, t, t), "torus")


def refine_until_stable(
    field_fn,
    frequency: float | None = None,
    m0: int = 4,
    tol: float = 0.01,
    m_max: int = 64,
    max_grid: int = 6144,
) -> NodalReport:
    """Torus count on grids of m * frequency points per side, m = m0, 2 m0, ...

    Stops once two consecutive counts agree exactly and their lengths agree to
    relative ``tol``. If m would pass ``m_max`` or the grid would pass
    ``max_grid``, the last report is returned with ``stable=False``.
    """
    if m0 < 4:
        raise ResolutionError("at least 4 samples per wavelength are required")
    freq = _frequency(field_fn, frequency)
    ladder = []
    prev = None
    m = m0
    while True:
        N = max(int(math.ceil(m * freq)), 8)
        grid = torus_grid(field_fn, N)
        rep = count_components(grid, freq)
        rep.length = nodal_length(grid)
        ladder.append({"m": m, "N": N, "count": rep.count, "length": rep.length})
        rep.ladder = list(ladder)
        if prev is not None and rep.count == prev.count and abs(rep.length - prev.length) <= tol * prev.length:
            rep.stable = True
            return rep
        prev = rep
        m *= 2
        if m > m_max or int(math.ceil(m * freq)) > max_grid:
            rep.stable = False
            log.warning("nodal count did not stabilize; ladder %s", [(s["N"], s["count"]) for s in ladder])
            return rep


@dataclass(frozen=True)
class PleijelRatio:
    value: float
    physical: bool

    @property
    def below_pleijel(self) -> bool:
        return self.value <= CONSTANTS.pleijel

    @property
    def below_tangency(self) -> bool:
        return self.value <= CONSTANTS.tangency

    @property
    def sigma_ratio(self) -> float:
        return self.value / CONSTANTS.sigma


def pleijel_ratio(E: float, count: int, physical: bool = True) -> PleijelRatio:
    """4 pi N / eigenvalue.

    With ``physical=True`` the eigenvalue is 4 pi^2 E, the Laplace eigenvalue of
    e(x . xi) on the unit torus, which is the normalization under which the
    ratio is compared with sigma and the Pleijel bound. ``physical=False``
    returns 4 pi N / E.
    """
    if E <= 0:
        raise ValueError("E must be positive")
    eig = 4 * math.pi**2 * E if physical else E
    return PleijelRatio(4 * math.pi * count / eig, physical)
