"""Lattice points on circles: factorization, Gaussian prime splits, enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

_TRIAL_LIMIT = 10**6
_MAX_ENERGY = 2**63 - 1
# brute-force verification of the Gaussian-integer path is skipped above this
BRUTE_FORCE_LIMIT = 10**13


# --- integer factorization -------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    # constants walk deterministically so results are reproducible
    for c in range(1, 100):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard-Brent failed on {n}")


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split_large(d, out)
    _split_large(n // d, out)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ascending ``(prime, exponent)`` pairs.

    Trial division up to 10**6, Pollard-Brent for the cofactor.

    >>> factorize(1105)
    [(5, 1), (13, 1), (17, 1)]
    """
    n = int(n)
    if n < 1 or n > _MAX_ENERGY:
        raise ValueError(f"factorize expects 1 <= n < 2**63, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n and p <= _TRIAL_LIMIT:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        _split_large(n, out)
    return sorted(out.items())


# --- domain types ----------------------------------------------------------


@dataclass(frozen=True)
class Energy:
    """An integer energy E with its factorization; ``lam`` is sqrt(E)."""

    value: int
    factors: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, value: int) -> Energy:
        value = int(value)
        if value < 1:
            raise ValueError(f"energy must be positive, got {value}")
        return cls(value, tuple(factorize(value)))

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        if prod != self.value:
            raise ValueError("factors do not reconstruct the energy")

    @property
    def lam(self) -> float:
        return math.sqrt(self.value)

    @property
    def admissible(self) -> bool:
        """Odd with every prime factor congruent to 1 mod 4."""
        return self.value % 2 == 1 and all(p % 4 == 1 for p, _ in self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class GaussianPrimeSplit:
    """p = a^2 + b^2 with a > b >= 1, i.e. p = (a + bi)(a - bi)."""

    p: int
    a: int
    b: int

    @property
    def theta(self) -> float:
        return math.atan2(self.b, self.a)


@dataclass(frozen=True, eq=False)
class LatticePointSet:
    """Solutions of x^2 + y^2 = E, sorted by angle then lexicographically."""

    energy: Energy
    points: np.ndarray = field(repr=False)  # (W, 2) int64

    @property
    def W(self) -> int:
        return len(self.points)

    @cached_property
    def angles(self) -> np.ndarray:
        return _angles(self.points)

    def as_set(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in self.points}

    def index(self) -> dict[tuple[int, int], int]:
        return {(int(x), int(y)): i for i, (x, y) in enumerate(self.points)}

    def __eq__(self, other):
        if not isinstance(other, LatticePointSet):
            return NotImplemented
        return self.energy.value == other.energy.value and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.energy.value, self.W))


def _angles(points: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return np.empty(0)
    ang = np.arctan2(points[:, 1].astype(float), points[:, 0].astype(float))
    return np.where(ang < 0, ang + 2 * math.pi, ang)


def _sorted_points(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return np.empty((0, 2), dtype=np.int64)
    ang = _angles(pts)
    order = np.lexsort((pts[:, 1], pts[:, 0], ang))
    return pts[order]


# --- Gaussian primes -------------------------------------------------------


def sqrt_minus_one(p: int) -> int:
    """A root s of s^2 = -1 mod p for a prime p = 1 mod 4.

    Uses the first quadratic non-residue c = 2, 3, ...; then s = c^((p-1)/4).
    """
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise ArithmeticError(f"no non-residue mod {p}")


def gaussian_split(p: int) -> GaussianPrimeSplit:
    """Write a prime p = 1 (mod 4) as a^2 + b^2, a > b >= 1 (Hermite-Serret).

    >>> gaussian_split(13)
    GaussianPrimeSplit(p=13, a=3, b=2)
    """
    p = int(p)
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"{p} is not a prime congruent to 1 mod 4")
    s = sqrt_minus_one(p)
    r0, r1 = p, s
    limit = math.isqrt(p)
    while r1 > limit:
        r0, r1 = r1, r0 % r1
    a = r1
    b = math.isqrt(p - a * a)
    if a * a + b * b != p:
        raise ArithmeticError(f"descent failed for {p}")
    a, b = max(a, b), min(a, b)
    return GaussianPrimeSplit(p, a, b)


# --- enumeration -----------------------------------------------------------


def brute_force_points(E: int) -> np.ndarray:
    """All (x, y) with x^2 + y^2 = E by scanning 0 <= x <= sqrt(E)."""
    E = int(E)
    top = math.isqrt(E)
    quarter = []
    chunk = 1 << 20
    for start in range(0, top + 1, chunk):
        x = np.arange(start, min(top, start + chunk - 1) + 1, dtype=np.int64)
        rem = E - x * x
        y = np.round(np.sqrt(rem.astype(float))).astype(np.int64)
        for dy in (-1, 0, 1):
            yy = y + dy
            hit = (yy >= 0) & (yy * yy == rem)
            quarter.extend(zip(x[hit].tolist(), yy[hit].tolist()))
    pts = set()
    for x, y in quarter:
        for sx in (1, -1):
            for sy in (1, -1):
                pts.add((sx * x, sy * y))
    return _sorted_points(np.array(sorted(pts), dtype=np.int64).reshape(-1, 2))


def _gmul(u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _gpow(u: tuple[int, int], k: int) -> tuple[int, int]:
    out = (1, 0)
    for _ in range(k):
        out = _gmul(out, u)
    return out


def gaussian_product_points(E: Energy) -> np.ndarray:
    """Points of an admissible E from products of Gaussian prime powers."""
    if not E.admissible:
        raise ValueError(f"E={E.value} is not admissible")
    partial = [(1, 0)]
    for p, e in E.factors:
        sp = gaussian_split(p)
        pi, pib = (sp.a, sp.b), (sp.a, -sp.b)
        options = [_gmul(_gpow(pi, j), _gpow(pib, e - j)) for j in range(e + 1)]
        partial = [_gmul(z, o) for z in partial for o in options]
    units = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    pts = {_gmul(z, u) for z in partial for u in units}
    return _sorted_points(np.array(sorted(pts), dtype=np.int64).reshape(-1, 2))


def enumerate_lattice_points(E: Energy | int, verify: bool = True) -> LatticePointSet:
    """The set of xi in Z^2 with |xi|^2 = E.

    Admissible energies go through the Gaussian-integer construction and are
    checked against brute force when E <= BRUTE_FORCE_LIMIT; all other
    energies are enumerated by brute force.
    """
    if not isinstance(E, Energy):
        E = Energy.of(E)
    if E.admissible:
        pts = gaussian_product_points(E)
        if verify and E.value <= BRUTE_FORCE_LIMIT:
            bf = brute_force_points(E.value)
            if not np.array_equal(pts, bf):
                raise ArithmeticError(f"enumeration paths disagree for E={E.value}")
    else:
        pts = brute_force_points(E.value)
    return LatticePointSet(E, pts)


def expected_point_count(E: Energy | int) -> int:
    """4 * prod(1 + e) for admissible E."""
    if not isinstance(E, Energy):
        E = Energy.of(E)
    if not E.admissible:
        raise ValueError(f"E={E.value} is not admissible")
    return 4 * math.prod(1 + e for _, e in E.factors)


def point_angles(lps: LatticePointSet) -> np.ndarray:
    if lps.W == 0:
        raise ValueError(f"no lattice points on the circle of energy {lps.energy.value}")
    return np.sort(lps.angles)


def admissible_energies(upper: int, lower: int = 1) -> list[int]:
    """Admissible E in [lower, upper], ascending."""
    sieve = np.ones(upper + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(upper) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    bad = np.zeros(upper + 1, dtype=bool)
    bad[0::2] = True
    for q in np.flatnonzero(sieve):
        if q % 4 == 3:
            bad[q::q] = True
    ok = ~bad
    ok[0] = False
    return [int(v) for v in np.flatnonzero(ok) if v >= lower]
