"""Toral eigenfunctions f(x) = sum a_xi e(x . xi) and their local windows.

Convention: e(t) = exp(2 pi i t) on the unit torus [0, 1)^2, so
-Laplacian f = 4 pi^2 E f. Formulas elsewhere use E = |xi|^2 as the spectral
parameter; ``ToralEigenfunction.eigenvalue`` is the physical one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .arith import Energy, LatticePointSet, enumerate_lattice_points
from .equidist import ArcPartition

TWO_PI = 2 * math.pi


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Coefficients a_xi on the points of a circle (aligned with ``points``)."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        if pts.shape != (len(vals), 2):
            raise ValueError("points and values are misaligned")
        norm = math.fsum(np.abs(vals) ** 2)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"sum |a|^2 = {norm}, expected 1")
        where = {(int(x), int(y)): i for i, (x, y) in enumerate(pts)}
        for i, (x, y) in enumerate(pts):
            j = where.get((-int(x), -int(y)))
            if j is None:
                raise ValueError(f"support is not symmetric: -({x}, {y}) missing")
            if abs(vals[j] - np.conj(vals[i])) > 1e-12:
                raise ValueError("coefficients are not Hermitian: a_{-xi} != conj(a_xi)")

    @classmethod
    def uniform(cls, lps: LatticePointSet) -> FourierCoefficients:
        return cls(lps.points, np.full(lps.W, 1 / math.sqrt(lps.W), dtype=complex))

    @classmethod
    def random_phase(cls, lps: LatticePointSet, rng: np.random.Generator) -> FourierCoefficients:
        """|a_xi| = 1/sqrt(W) with random phases, a_{-xi} = conj(a_xi)."""
        vals = np.empty(lps.W, dtype=complex)
        where = lps.index()
        done = np.zeros(lps.W, dtype=bool)
        for i, (x, y) in enumerate(lps.points):
            if done[i]:
                continue
            j = where[(-int(x), -int(y))]
            phase = np.exp(1j * rng.uniform(0, TWO_PI))
            vals[i] = phase / math.sqrt(lps.W)
            vals[j] = np.conj(vals[i])
            done[i] = done[j] = True
        return cls(lps.points, vals)

    @classmethod
    def from_mapping(cls, lps: LatticePointSet, mapping: dict, normalize: bool = True) -> FourierCoefficients:
        vals = np.array([mapping.get((int(x), int(y)), 0) for x, y in lps.points], dtype=complex)
        if normalize:
            vals = vals / math.sqrt(math.fsum(np.abs(vals) ** 2))
        return cls(lps.points, vals)

    def support(self) -> np.ndarray:
        return np.abs(self.values) > 0


@dataclass(frozen=True, eq=False)
class ToralEigenfunction:
    lps: LatticePointSet
    coeffs: FourierCoefficients

    def __post_init__(self):
        if not np.array_equal(self.lps.points, self.coeffs.points):
            raise ValueError("coefficients are not indexed by the lattice points of E")

    @classmethod
    def uniform(cls, E: Energy | int) -> ToralEigenfunction:
        lps = enumerate_lattice_points(E)
        return cls(lps, FourierCoefficients.uniform(lps))

    @classmethod
    def random_phase(cls, E: Energy | int, seed: int) -> ToralEigenfunction:
        lps = enumerate_lattice_points(E)
        return cls(lps, FourierCoefficients.random_phase(lps, np.random.default_rng(seed)))

    @property
    def energy(self) -> Energy:
        return self.lps.energy

    @property
    def frequency(self) -> float:
        """Oscillations per unit length, sqrt(E)."""
        return self.lps.energy.lam

    @property
    def eigenvalue(self) -> float:
        return 4 * math.pi**2 * self.lps.energy.value

    def __call__(self, x1, x2) -> np.ndarray:
        return evaluate(self, x1, x2)


def evaluate(f: ToralEigenfunction, x1, x2, check: bool = True) -> np.ndarray:
    """f at arbitrary points (broadcast over x1, x2) by direct summation."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    shape = np.broadcast(x1, x2).shape
    p1 = np.broadcast_to(x1, shape).ravel()
    p2 = np.broadcast_to(x2, shape).ravel()
    pts = f.lps.points.astype(float)
    out = np.empty(len(p1))
    step = max(1, 2**21 // max(f.lps.W, 1))
    for s in range(0, len(p1), step):
        phase = np.outer(p1[s : s + step], pts[:, 0]) + np.outer(p2[s : s + step], pts[:, 1])
        val = np.exp(1j * TWO_PI * phase) @ f.coeffs.values
        if check and np.max(np.abs(val.imag), initial=0.0) > 1e-10:
            raise ArithmeticError("eigenfunction is not real-valued")
        out[s : s + step] = val.real
    return out.reshape(shape)


def evaluate_point(f: ToralEigenfunction, x) -> float:
    return float(evaluate(f, x[0], x[1]))


def synthesize_grid(f: ToralEigenfunction, N: int) -> np.ndarray:
    """grid[j, l] = f(j/N, l/N) by an inverse real FFT of the coefficient lattice."""
    lam = f.frequency
    if N <= 2 * lam:
        raise ValueError(f"N={N} aliases frequencies up to {lam:.3f}; need N > {2 * lam:.3f}")
    spec = np.zeros((N, N // 2 + 1), dtype=complex)
    pts = f.lps.points
    keep = pts[:, 1] >= 0
    np.add.at(spec, (pts[keep, 0] % N, pts[keep, 1]), f.coeffs.values[keep])
    return scipy.fft.irfft2(spec, s=(N, N)) * (N * N)


# --- local windows ---------------------------------------------------------


@dataclass(frozen=True)
class LocalWindow:
    """Window coefficients c_k(x) of f around x, one per arc."""

    center: np.ndarray
    R: float
    K: int
    coefficients: np.ndarray


def _check_partition(f: ToralEigenfunction, partition: ArcPartition) -> None:
    if partition.lps.energy.value != f.energy.value or not np.array_equal(
        partition.lps.points, f.lps.points
    ):
        raise ValueError("partition was built over a different set of lattice points")


def window_coefficient_matrix(f: ToralEigenfunction, xs, partition: ArcPartition) -> np.ndarray:
    """c_k(x) for many centres: shape (n, K).

    c_k(x) = sqrt(K) sum_{xi in arc k} a_xi e(xi . x); for uniform coefficients
    this is sqrt(K/W) sum e(xi . x).
    """
    _check_partition(f, partition)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    pts = f.lps.points.astype(float)
    K = partition.K
    terms = np.exp(1j * TWO_PI * (xs @ pts.T)) * f.coeffs.values  # (n, W)
    out = np.zeros((len(xs), K), dtype=complex)
    for k in range(K):
        members = partition.members(k)
        if len(members):
            out[:, k] = math.sqrt(K) * terms[:, members].sum(axis=1)
    # antipodal arcs hold negated points with conjugate coefficients
    for k in range(K // 2):
        out[:, k + K // 2] = np.conj(out[:, k])
    return out


def window_coefficients(f: ToralEigenfunction, x, partition: ArcPartition) -> LocalWindow:
    c = window_coefficient_matrix(f, np.asarray(x, dtype=float)[None, :], partition)[0]
    return LocalWindow(np.asarray(x, dtype=float), partition.R, partition.K, c)


def _window_fields(f: ToralEigenfunction, x, partition: ArcPartition, y: np.ndarray):
    """(F, grad F, phi, grad phi) on the y sample; gradients are (n, 2)."""
    lam = f.frequency
    R = partition.R
    pts = f.lps.points.astype(float)
    a = f.coeffs.values
    x = np.asarray(x, dtype=float)

    scaled = R / lam * pts  # frequencies of y -> F_x(y)
    base = a * np.exp(1j * TWO_PI * (pts @ x))
    waves = np.exp(1j * TWO_PI * (y @ scaled.T))  # (n, W)
    F = waves @ base
    gF = (waves * base) @ (1j * TWO_PI * scaled)

    K = partition.K
    c = window_coefficient_matrix(f, x[None, :], partition)[0]
    zeta = partition.scaled_representatives
    pwaves = np.exp(1j * TWO_PI * (y @ zeta.T))
    phi = pwaves @ c / math.sqrt(K)
    gphi = (pwaves * c) @ (1j * TWO_PI * zeta) / math.sqrt(K)
    return F.real, gF.real, phi.real, gphi.real


def window_sample(n: int = 64) -> np.ndarray:
    """n x n points of [-1/2, 1/2]^2 (endpoints included) as an (n*n, 2) array."""
    t = np.linspace(-0.5, 0.5, n)
    Y1, Y2 = np.meshgrid(t, t, indexing="ij")
    return np.column_stack([Y1.ravel(), Y2.ravel()])


def window_gap(f: ToralEigenfunction, x, partition: ArcPartition, s: int = 1, n: int = 64) -> float:
    """C^s distance between F_x(y) = f(x + R y / lambda) and its arc model phi_x.

    The sup norm is taken over an n x n sample of y in [-1/2, 1/2]^2 and
    derivatives are exact; for s = 1 the gradient gap (max Euclidean norm of
    the difference) is added.
    """
    if s not in (0, 1):
        raise ValueError("only s in {0, 1} is supported")
    _check_partition(f, partition)
    F, gF, phi, gphi = _window_fields(f, x, partition, window_sample(n))
    gap = float(np.max(np.abs(F - phi)))
    if s == 1:
        gap += float(np.max(np.linalg.norm(gF - gphi, axis=1)))
    return gap


def mean_window_gap(
    f: ToralEigenfunction, partition: ArcPartition, centers, s: int = 1, n: int = 64
) -> float:
    return math.fsum(window_gap(f, x, partition, s=s, n=n) for x in centers) / len(centers)
