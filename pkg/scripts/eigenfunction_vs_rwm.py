"""Nodal count of a deterministic eigenfunction against the random-wave constant.

    python3 scripts/eigenfunction_vs_rwm.py 105625 --random-phase 0 1 2
"""

import argparse

import numpy as np

from toral_rwm.arith import enumerate_lattice_points
from toral_rwm.constants import CONSTANTS
from toral_rwm.eigenfn import FourierCoefficients, ToralEigenfunction
from toral_rwm.nodal import pleijel_ratio, refine_until_stable

p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
p.add_argument("E", type=int, nargs="?", default=105625)
p.add_argument("--random-phase", type=int, nargs="*", default=[], metavar="SEED")
p.add_argument("--max-grid", type=int, default=6144)
args = p.parse_args()

lps = enumerate_lattice_points(args.E)
variants = [("uniform", FourierCoefficients.uniform(lps))]
for s in args.random_phase:
    rng = np.random.Generator(np.random.Philox(key=[s, args.E]))
    variants.append((f"phase seed {s}", FourierCoefficients.random_phase(lps, rng)))

print(f"E={args.E} W={lps.W} sigma={CONSTANTS.sigma:.4f}")
for name, coeffs in variants:
    rep = refine_until_stable(ToralEigenfunction(lps, coeffs), max_grid=args.max_grid)
    for rung in rep.ladder:
        r = pleijel_ratio(args.E, rung["count"]).value
        print(f"  {name:14s} N={rung['N']:5d} count={rung['count']:7d} length={rung['length']:9.3f} ratio={r:.4f}")
    print(f"  {name:14s} stable={rep.stable}")
