"""Angular equidistribution: discrepancy, arc partitions, spectral measures."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .arith import LatticePointSet, point_angles

log = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
# exponent in the almost-all discrepancy bound W (log E)^(-kappa + eps)
KAPPA = 0.5 * math.log(math.pi / 2)


@dataclass(frozen=True)
class DiscrepancyReport:
    delta: float
    W: int
    bound_threshold: float

    @property
    def normalized(self) -> float:
        return self.delta / self.W

    @property
    def threshold_ratio(self) -> float:
        """delta over W (log E)^(-kappa + eps); reported, never asserted."""
        return self.delta / self.bound_threshold if self.bound_threshold > 0 else math.inf


def arc_discrepancy(angles) -> float:
    """Exact sup over arcs of |W (beta - alpha)/2pi - #{angles in arc}|.

    Arcs may wrap around 0. The supremum is reached with endpoints at the
    atoms, closed (excess of atoms) or open (deficit of atoms), which reduces
    to extremes of ``i - W psi_i / 2pi`` over the sorted atoms.
    """
    psi = np.sort(np.mod(np.asarray(angles, dtype=float), TWO_PI))
    W = len(psi)
    if W == 0:
        raise ValueError("discrepancy of an empty set")
    scaled = W * psi / TWO_PI
    idx = np.arange(W)
    # first / last sorted index of each group of coincident angles
    new_group = np.r_[True, np.diff(psi) > 0]
    group = np.cumsum(new_group) - 1
    first = idx[new_group][group]
    last_of_group = np.r_[idx[new_group][1:] - 1, W - 1]
    last = last_of_group[group]
    a = idx - scaled
    excess = 1 + a.max() - a.min()
    deficit = 1 + (last - scaled).max() - (first - scaled).min()
    return float(max(excess, deficit))


def arc_discrepancy_bruteforce(angles) -> float:
    """O(W^2) reference: every pair of atom endpoints, open and closed sides."""
    psi = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    W = len(psi)
    if W == 0:
        raise ValueError("discrepancy of an empty set")
    best = 0.0
    for alpha in psi:
        rel = np.mod(psi - alpha, TWO_PI)
        for beta in psi:
            span = (beta - alpha) % TWO_PI
            closed = np.count_nonzero(rel <= span)
            # strictly inside (alpha, beta); alpha == beta means a full turn minus a point
            if span == 0:
                open_count = W - np.count_nonzero(rel == 0)
                open_span = TWO_PI
            else:
                open_count = np.count_nonzero((rel > 0) & (rel < span))
                open_span = span
            best = max(best, closed - W * span / TWO_PI, W * open_span / TWO_PI - open_count)
    return float(best)


def discrepancy(lps: LatticePointSet, eps: float = 0.0) -> DiscrepancyReport:
    """Angular discrepancy of the lattice points of E."""
    psi = point_angles(lps)
    E = lps.energy.value
    threshold = lps.W * math.log(E) ** (-KAPPA + eps) if E > 1 else math.inf
    return DiscrepancyReport(arc_discrepancy(psi), lps.W, threshold)


# --- arcs ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ArcPartition:
    """Half-open equal sectors [2 pi k/K, 2 pi (k+1)/K) of the circle of radius sqrt(E).

    ``assignment[i]`` is the arc of ``lps.points[i]``; ``representatives[k]`` is
    an index into ``lps.points`` (or -1 for an empty arc). Arcs k and
    k + K/2 are antipodal.
    """

    lps: LatticePointSet
    K: int
    R: float
    assignment: np.ndarray
    representatives: np.ndarray
    rule: str = "first"

    @property
    def counts(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.K)

    @property
    def epsilon1(self) -> float:
        return float(np.max(np.abs(self.counts / self.lps.W - 1 / self.K)))

    @property
    def scaled_representatives(self) -> np.ndarray:
        """zeta_k = (R / lambda) xi_k; rows of zeros for empty arcs."""
        out = np.zeros((self.K, 2))
        ok = self.representatives >= 0
        out[ok] = self.R / self.lps.energy.lam * self.lps.points[self.representatives[ok]]
        return out

    def antipode(self, k: int) -> int:
        return (k + self.K // 2) % self.K

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == k)


def _sector(psi: np.ndarray, K: int) -> np.ndarray:
    s = K * psi / TWO_PI
    near = np.round(s)
    s = np.where(np.abs(s - near) < 1e-9, near, s)
    return np.floor(s).astype(np.int64) % K


def partition_arcs(
    lps: LatticePointSet, K: int, R: float = 1.0, representative: str = "first"
) -> ArcPartition:
    """Assign each lattice point to one of K equal sectors.

    Sectors of the upper half-plane are computed from the angle; points of the
    lower half-plane inherit the antipodal sector of their negation, so that
    arc k + K/2 is exactly minus arc k.

    ``representative`` picks xi_k inside each arc: ``"first"`` in angle order,
    or ``"centre"``, the point nearest the sector's mid-angle (ties to the
    earlier point).
    """
    if representative not in ("first", "centre"):
        raise ValueError(f"unknown representative rule {representative!r}")
    if K < 2 or K % 2:
        raise ValueError(f"K must be an even integer >= 2, got {K}")
    if R <= 0:
        raise ValueError("R must be positive")
    if lps.W == 0:
        raise ValueError("cannot partition an empty point set")
    if K > 2 * lps.W:
        log.warning("K=%d exceeds 2W=%d: some arcs are necessarily empty", K, 2 * lps.W)
    pts = lps.points
    psi = lps.angles
    upper = (pts[:, 1] > 0) | ((pts[:, 1] == 0) & (pts[:, 0] > 0))
    assignment = np.empty(lps.W, dtype=np.int64)
    assignment[upper] = _sector(psi[upper], K)
    where = lps.index()
    for i in np.flatnonzero(~upper):
        j = where[(-int(pts[i, 0]), -int(pts[i, 1]))]
        assignment[i] = (_sector(psi[j : j + 1], K)[0] + K // 2) % K

    reps = np.full(K, -1, dtype=np.int64)
    for k in range(K // 2):
        idx = np.flatnonzero(assignment == k)
        if len(idx):
            # points are sorted by angle; idx[0] is the first of the arc
            if representative == "first":
                pick = idx[0]
            else:
                mid = (2 * k + 1) * math.pi / K
                pick = idx[np.argmin(np.abs(psi[idx] - mid))]
            reps[k] = pick
            x, y = pts[pick]
            reps[k + K // 2] = where[(-int(x), -int(y))]
    return ArcPartition(lps, K, float(R), assignment, reps, representative)


# --- spectral measures -----------------------------------------------------


@dataclass(frozen=True)
class SpectralMeasure:
    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if np.any(self.weights < 0):
            raise ValueError("negative atom weight")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("spectral measure weights must sum to 1")


def spectral_measure(coeffs) -> SpectralMeasure:
    """Atoms |a_xi|^2 at the angles of the frequencies xi."""
    pts = np.asarray(coeffs.points)
    a = np.asarray(coeffs.values)
    w = np.abs(a) ** 2
    if abs(math.fsum(w) - 1.0) > 1e-9:
        raise ValueError(f"coefficients are not normalized: sum |a|^2 = {math.fsum(w)}")
    w = w / math.fsum(w)
    ang = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), TWO_PI)
    return SpectralMeasure(ang, w)


def uniformity_gap(measure: SpectralMeasure, n_max: int) -> float:
    """max_{1 <= n <= n_max} |sum_j w_j exp(i n theta_j)|."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n = np.arange(1, n_max + 1)[:, None]
    fourier = np.exp(1j * n * measure.angles[None, :]) @ measure.weights
    return float(np.abs(fourier).max())
