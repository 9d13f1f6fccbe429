"""Gaussian random waves and moment / KS tests of Gaussianity.

Normalized complex Gaussians have independent real and imaginary parts of
variance 1/2, so E|g|^2 = 1 and E|g|^(2r) = r!.

Randomness: every realization is drawn from a Philox4x64 generator keyed by
(seed, sample index), so sample i is reproducible on its own and the result
of a batch does not depend on how it is split.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.stats import qmc

TWO_PI = 2 * math.pi


def substream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed % 2**64, index % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True, eq=False)
class RwmSpec:
    """Directions zeta_k (K, 2) with an antipodal pairing k -> k'."""

    directions: np.ndarray
    pairing: np.ndarray
    seed: int = 0

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        p = np.asarray(self.pairing, dtype=np.int64)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "pairing", p)
        K = len(d)
        if d.shape != (K, 2) or p.shape != (K,):
            raise ValueError("directions must be (K, 2) and pairing (K,)")
        if K == 0 or K % 2:
            raise ValueError(f"K={K} admits no fixed-point-free pairing")
        if np.any(p < 0) or np.any(p >= K) or np.any(p == np.arange(K)) or np.any(p[p] != np.arange(K)):
            raise ValueError("pairing must be a fixed-point-free involution")
        if not np.allclose(d[p], -d, atol=1e-12):
            raise ValueError("paired directions are not antipodal")

    @property
    def K(self) -> int:
        return len(self.directions)

    @property
    def frequency(self) -> float:
        return float(np.max(np.linalg.norm(self.directions, axis=1)))

    @property
    def representatives(self) -> np.ndarray:
        return np.flatnonzero(np.arange(self.K) < self.pairing)

    @classmethod
    def equispaced(cls, K: int, R: float, seed: int = 0) -> RwmSpec:
        """K directions at angles 2 pi k / K on the circle of radius R."""
        if K < 2 or K % 2:
            raise ValueError("K must be even")
        ang = TWO_PI * np.arange(K) / K
        d = R * np.column_stack([np.cos(ang), np.sin(ang)])
        # exact antipodes, independent of rounding in cos/sin
        d[K // 2 :] = -d[: K // 2]
        pairing = (np.arange(K) + K // 2) % K
        return cls(d, pairing, seed)

    @classmethod
    def toral(cls, lps, seed: int = 0) -> RwmSpec:
        """Random eigenfunction with frequencies xi in E_E (directions |xi| = lambda)."""
        where = lps.index()
        pairing = np.array([where[(-int(x), -int(y))] for x, y in lps.points])
        return cls(lps.points.astype(float), pairing, seed)


@dataclass(frozen=True, eq=False)
class GaussianRealization:
    """Phi(y) = K^(-1/2) sum g_k e(zeta_k . y) with g_k' = conj(g_k)."""

    spec: RwmSpec
    g: np.ndarray
    index: int = 0

    @property
    def frequency(self) -> float:
        return self.spec.frequency

    def __call__(self, y1, y2) -> np.ndarray:
        y1 = np.asarray(y1, dtype=float)
        y2 = np.asarray(y2, dtype=float)
        shape = np.broadcast(y1, y2).shape
        p1 = np.broadcast_to(y1, shape).ravel()
        p2 = np.broadcast_to(y2, shape).ravel()
        d = self.spec.directions
        phase = np.outer(p1, d[:, 0]) + np.outer(p2, d[:, 1])
        val = np.exp(1j * TWO_PI * phase) @ self.g / math.sqrt(self.spec.K)
        _check_real(val)
        return val.real.reshape(shape)

    def grid(self, y1, y2) -> np.ndarray:
        """Phi on the tensor grid y1 x y2 (axis 0 is y1)."""
        d = self.spec.directions
        A = np.exp(1j * TWO_PI * np.outer(np.asarray(y1, float), d[:, 0]))
        B = np.exp(1j * TWO_PI * np.outer(np.asarray(y2, float), d[:, 1]))
        val = (A * self.g) @ B.T / math.sqrt(self.spec.K)
        _check_real(val)
        return val.real


def _check_real(val: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(val.real), initial=0.0)))
    if np.max(np.abs(val.imag), initial=0.0) > 1e-10 * scale:
        raise ArithmeticError("Gaussian field is not real-valued")


def sample_coefficients(spec: RwmSpec, index: int = 0) -> np.ndarray:
    rng = substream(spec.seed, index)
    reps = spec.representatives
    z = rng.standard_normal((len(reps), 2))
    g = np.empty(spec.K, dtype=complex)
    g[reps] = (z[:, 0] + 1j * z[:, 1]) / math.sqrt(2)
    g[spec.pairing[reps]] = np.conj(g[reps])
    return g


def sample_realization(spec: RwmSpec, index: int = 0) -> GaussianRealization:
    """Realization number ``index`` of the Gaussian wave defined by ``spec``."""
    return GaussianRealization(spec, sample_coefficients(spec, index), index)


# --- moments ---------------------------------------------------------------


def gaussian_moment(r: int) -> float:
    """E|g|^(2r) = r! for a normalized complex Gaussian."""
    if not 0 <= r <= 8:
        raise ValueError("r must lie in [0, 8]")
    return float(math.factorial(r))


def gaussian_mixed_moment(r_vec, s_vec) -> float:
    """E prod g_k^r_k conj(g_k)^s_k for IID normalized complex Gaussians."""
    out = 1.0
    for r, s in zip(r_vec, s_vec):
        if r != s:
            return 0.0
        out *= math.factorial(r)
    return out


def empirical_moment(samples, r_vec, s_vec, min_samples: int = 1000) -> complex:
    """Sample mean of prod c_k^r_k conj(c_k)^s_k over rows of ``samples``."""
    c = np.atleast_2d(np.asarray(samples, dtype=complex))
    if len(c) < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {len(c)}")
    r_vec = list(r_vec) + [0] * (c.shape[1] - len(r_vec))
    s_vec = list(s_vec) + [0] * (c.shape[1] - len(s_vec))
    if sum(r_vec) + sum(s_vec) > 8:
        raise ValueError("total degree above 8")
    prod = np.ones(len(c), dtype=complex)
    for k, (r, s) in enumerate(zip(r_vec, s_vec)):
        if r or s:
            prod *= c[:, k] ** r * np.conj(c[:, k]) ** s
    return complex(prod.mean())


@dataclass(frozen=True)
class GaussianityReport:
    moment_deviation: float
    ks_distance: float
    n: int
    degenerate: bool
    moment_threshold: float
    ks_threshold: float

    @property
    def passes(self) -> bool:
        return (
            not self.degenerate
            and self.moment_deviation < self.moment_threshold
            and self.ks_distance < self.ks_threshold
        )


def max_moment_deviation(c: np.ndarray, max_degree: int = 4) -> float:
    """max over mixed moments of total degree 1..max_degree of |empirical - Gaussian|."""
    n, K = c.shape
    letters = [c[:, k] for k in range(K)] + [np.conj(c[:, k]) for k in range(K)]
    worst = 0.0
    for d in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(2 * K), d):
            prod = letters[combo[0]]
            for i in combo[1:]:
                prod = prod * letters[i]
            r = [0] * K
            s = [0] * K
            for i in combo:
                if i < K:
                    r[i] += 1
                else:
                    s[i - K] += 1
            worst = max(worst, abs(prod.mean() - gaussian_mixed_moment(r, s)))
    return worst


def max_ks_distance(c: np.ndarray) -> float:
    """Largest KS distance of Re c_k, Im c_k from N(0, 1/2)."""
    sd = math.sqrt(0.5)
    worst = 0.0
    for k in range(c.shape[1]):
        for part in (c[:, k].real, c[:, k].imag):
            worst = max(worst, stats.kstest(part, "norm", args=(0.0, sd)).statistic)
    return float(worst)


def epsilon_gaussian_stat(
    samples,
    moment_threshold: float = 0.02,
    ks_threshold: float = 0.02,
    max_degree: int = 4,
    min_samples: int = 10_000,
) -> GaussianityReport:
    """Moment and marginal-KS surrogate for the eps-Gaussian box condition.

    ``samples`` is (n, K) with one column per independent coordinate (one
    representative of each conjugate pair).
    """
    c = np.atleast_2d(np.asarray(samples, dtype=complex))
    if len(c) < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {len(c)}")
    degenerate = bool(np.any((np.ptp(c.real, axis=0) == 0) & (np.ptp(c.imag, axis=0) == 0)))
    return GaussianityReport(
        moment_deviation=max_moment_deviation(c, max_degree),
        ks_distance=max_ks_distance(c),
        n=len(c),
        degenerate=degenerate,
        moment_threshold=moment_threshold,
        ks_threshold=ks_threshold,
    )


# --- sample generators -----------------------------------------------------


def _sobol(d: int, n: int, seed: int) -> np.ndarray:
    """n scrambled Sobol points in [0, 1)^d, n rounded up to a power of two."""
    m = max(0, math.ceil(math.log2(n)))
    return qmc.Sobol(d, scramble=True, rng=np.random.default_rng(seed)).random_base2(m)


def gaussian_control_samples(K: int, n: int, seed: int, method: str = "sobol") -> np.ndarray:
    """Standard complex Gaussian vectors of length K.

    ``"sobol"`` pushes scrambled Sobol points through the normal quantile
    (n becomes the next power of two); ``"mc"`` is plain Monte Carlo.
    """
    if method == "sobol":
        u = _sobol(2 * K, n, seed)
        z = stats.norm.ppf(u) * math.sqrt(0.5)
    elif method == "mc":
        z = substream(seed, 0).standard_normal((n, 2 * K)) * math.sqrt(0.5)
    else:
        raise ValueError(f"unknown method {method!r}")
    return z[:, :K] + 1j * z[:, K:]


def torus_points(n: int, seed: int, method: str = "sobol") -> np.ndarray:
    """Points of [0, 1)^2 for averaging over the torus."""
    if method == "sobol":
        return _sobol(2, n, seed)
    if method == "mc":
        return substream(seed, 0).random((n, 2))
    raise ValueError(f"unknown method {method!r}")


def window_samples(f, partition, n: int, seed: int, method: str = "sobol") -> np.ndarray:
    """c_k(x) for x spread over the torus, independent coordinates only (k < K/2)."""
    from .eigenfn import window_coefficient_matrix

    xs = torus_points(n, seed, method)
    out = []
    for s in range(0, len(xs), 4096):
        out.append(window_coefficient_matrix(f, xs[s : s + 4096], partition)[:, : partition.K // 2])
    return np.vstack(out)


def toral_realization(lps, seed: int, index: int = 0):
    """A Gaussian random eigenfunction of energy E as a ToralEigenfunction."""
    from .eigenfn import FourierCoefficients, ToralEigenfunction

    spec = RwmSpec.toral(lps, seed)
    g = sample_coefficients(spec, index) / math.sqrt(spec.K)
    g = g / math.sqrt(math.fsum(np.abs(g) ** 2))
    return ToralEigenfunction(lps, FourierCoefficients(lps.points, g))

