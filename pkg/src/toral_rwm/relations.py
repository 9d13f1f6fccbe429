"""Vanishing sums xi_1 + ... + xi_l = 0 among lattice points on a circle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import LatticePointSet

DEFAULT_BUDGET = 10**8
MAX_ELL = 8


class BudgetExceeded(RuntimeError):
    """Raised instead of silently approximating a count."""


@dataclass(frozen=True)
class RelationQuery:
    gamma: float
    B: int

    def __post_init__(self):
        if not 0 < self.gamma < 0.5:
            raise ValueError("gamma must lie in (0, 1/2)")
        if self.B < 3:
            raise ValueError("B must be at least 3")


@dataclass(frozen=True)
class RelationCount:
    """Ordered l-tuples (repetition allowed) summing to zero."""

    ell: int
    W: int
    total_ordered: int
    nondegenerate: int
    witnesses: np.ndarray = field(default_factory=lambda: np.empty((0, 0, 2), dtype=np.int64), repr=False)

    def threshold(self, gamma: float) -> float:
        return float(self.W) ** (gamma * self.ell)


@dataclass(frozen=True)
class IndependenceReport:
    holds: bool
    gamma: float
    B: int
    counts: dict[int, RelationCount]

    def __bool__(self):
        return self.holds


def _subset_masks(ell: int) -> np.ndarray:
    """Indicator rows of the proper nonempty subsets of range(ell)."""
    rows = [[(m >> i) & 1 for i in range(ell)] for m in range(1, (1 << ell) - 1)]
    return np.array(rows, dtype=np.int64).reshape(-1, ell)


def _vanishing_subset_mask(tuples: np.ndarray, include_full: bool) -> np.ndarray:
    """For (T, l, 2) tuples: does some nonempty proper (or full) subset vanish?"""
    T, ell, _ = tuples.shape
    masks = _subset_masks(ell)
    if include_full:
        masks = np.vstack([masks, np.ones((1, ell), dtype=np.int64)])
    if len(masks) == 0:
        return np.zeros(T, dtype=bool)
    out = np.empty(T, dtype=bool)
    step = max(1, 2**22 // len(masks))
    for s in range(0, T, step):
        sums = np.einsum("ml,tlc->tmc", masks, tuples[s : s + step])
        out[s : s + step] = np.any(np.all(sums == 0, axis=2), axis=1)
    return out


def is_degenerate(tup) -> bool:
    """True iff some proper nonempty sub-sum of a vanishing tuple is zero."""
    arr = np.asarray(tup, dtype=np.int64).reshape(1, -1, 2)
    if np.any(arr.sum(axis=1) != 0):
        raise ValueError("tuple does not sum to zero")
    return bool(_vanishing_subset_mask(arr, include_full=False)[0])


def _all_tuples(W: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((W,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


def _keys(sums: np.ndarray, off: int) -> np.ndarray:
    span = 2 * off + 1
    return (sums[:, 0] + off) * span + (sums[:, 1] + off)


def vanishing_sums(
    lps: LatticePointSet,
    ell: int,
    budget: int = DEFAULT_BUDGET,
    max_witnesses: int = 16,
) -> RelationCount:
    """Count vanishing ordered ell-tuples by meet in the middle.

    Sums of the first ceil(ell/2) coordinates are joined against negated sums
    of the rest. Non-degenerate tuples cannot contain a vanishing sub-sum
    inside either half, so only halves free of one are paired up and checked.
    ``budget`` caps both the half tables and the number of paired tuples.
    """
    if not 2 <= ell <= MAX_ELL:
        raise ValueError(f"ell must be in [2, {MAX_ELL}]")
    W = lps.W
    if W == 0:
        return RelationCount(ell, 0, 0, 0)
    h = (ell + 1) // 2
    rest = ell - h
    if W**h > budget:
        raise BudgetExceeded(f"W^{h} = {W**h} half-sums exceed the budget {budget}")
    pts = lps.points
    off = ell * (math.isqrt(lps.energy.value) + 1)

    left = _all_tuples(W, h)
    right = _all_tuples(W, rest)
    lkeys = _keys(pts[left].sum(axis=1), off)
    rkeys = _keys(-pts[right].sum(axis=1), off)

    ul, cl = np.unique(lkeys, return_counts=True)
    ur, cr = np.unique(rkeys, return_counts=True)
    common, il, ir = np.intersect1d(ul, ur, assume_unique=True, return_indices=True)
    total = int(np.dot(cl[il].astype(object), cr[ir].astype(object))) if len(common) else 0

    # pruned halves for the non-degenerate count
    lok = ~_vanishing_subset_mask(pts[left], include_full=True)
    rok = ~_vanishing_subset_mask(pts[right], include_full=True) if rest > 0 else np.ones(len(right), bool)
    left, lkeys = left[lok], lkeys[lok]
    right, rkeys = right[rok], rkeys[rok]
    lo = np.argsort(lkeys, kind="stable")
    ro = np.argsort(rkeys, kind="stable")
    left, lkeys = left[lo], lkeys[lo]
    right, rkeys = right[ro], rkeys[ro]
    ul, lstart, lcnt = np.unique(lkeys, return_index=True, return_counts=True)
    ur, rstart, rcnt = np.unique(rkeys, return_index=True, return_counts=True)
    _, il, ir = np.intersect1d(ul, ur, assume_unique=True, return_indices=True)
    pairs = int(np.dot(lcnt[il].astype(np.int64), rcnt[ir].astype(np.int64))) if len(il) else 0
    if pairs > budget:
        raise BudgetExceeded(f"{pairs} candidate tuples exceed the budget {budget}")

    nondeg = 0
    witnesses = []
    for a, b in zip(il, ir):
        L = left[lstart[a] : lstart[a] + lcnt[a]]
        Rr = right[rstart[b] : rstart[b] + rcnt[b]]
        combo = np.concatenate(
            [np.repeat(L, len(Rr), axis=0), np.tile(Rr, (len(L), 1))], axis=1
        )
        tuples = pts[combo]
        good = ~_vanishing_subset_mask(tuples, include_full=False)
        nondeg += int(good.sum())
        if len(witnesses) < max_witnesses and good.any():
            witnesses.extend(tuples[good][: max_witnesses - len(witnesses)])
    wit = np.array(witnesses, dtype=np.int64).reshape(-1, ell, 2)
    return RelationCount(ell, W, total, nondeg, wit)


def vanishing_sums_bruteforce(lps: LatticePointSet, ell: int, block: int = 4) -> RelationCount:
    """Reference count by scanning all W^ell ordered tuples.

    Leading coordinates are looped over, the trailing ``block`` coordinates are
    handled as one broadcast array.
    """
    W = lps.W
    pts = lps.points
    block = min(block, ell)
    tail = _all_tuples(W, block)
    tail_sums = pts[tail].sum(axis=1)
    total = 0
    nondeg = 0
    for lead in itertools.product(range(W), repeat=ell - block):
        lead_sum = pts[list(lead)].sum(axis=0) if lead else np.zeros(2, dtype=np.int64)
        hit = np.flatnonzero(np.all(tail_sums == -lead_sum, axis=1))
        if len(hit) == 0:
            continue
        total += len(hit)
        full = np.concatenate([np.tile(np.array(lead, dtype=np.int64), (len(hit), 1)), tail[hit]], axis=1)
        nondeg += int((~_vanishing_subset_mask(pts[full], include_full=False)).sum())
    return RelationCount(ell, W, total, nondeg)


def check_independence(
    lps: LatticePointSet, query: RelationQuery, budget: int = DEFAULT_BUDGET
) -> IndependenceReport:
    """Does every length 2 < l <= B have at most W^(gamma l) non-degenerate relations?"""
    counts = {}
    for ell in range(3, query.B + 1):
        counts[ell] = vanishing_sums(lps, ell, budget=budget)
    holds = all(c.nondegenerate <= c.threshold(query.gamma) for c in counts.values())
    return IndependenceReport(holds, query.gamma, query.B, counts)


def ess_constant(m: int) -> int:
    """(4m)^(3m)."""
    return (4 * m) ** (3 * m)


def ess_bound(ell: int, r: int, W: int) -> float:
    """Natural log of exp(c(ell - 1)(2r + 1)) W, the rank-r relation bound."""
    if ell < 3 or r < 1:
        raise ValueError("need ell >= 3 and r >= 1")
    return float(ess_constant(ell - 1) * (2 * r + 1)) + math.log(W)
