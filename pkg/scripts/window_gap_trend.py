"""Mean C^1 gap between the local window and its arc model as K and R vary."""

import argparse

from toral_rwm.eigenfn import ToralEigenfunction, mean_window_gap
from toral_rwm.equidist import partition_arcs
from toral_rwm.gaussian import substream

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("E", type=int, nargs="?", default=105625)
p.add_argument("--K", type=int, nargs="+", default=[4, 8, 16, 32])
p.add_argument("--R", type=float, nargs="+", default=[1.0, 2.0, 4.0])
p.add_argument("--centers", type=int, default=100)
p.add_argument("--seed", type=int, default=7)
p.add_argument("--rule", choices=["first", "centre"], default="centre")
args = p.parse_args()

f = ToralEigenfunction.uniform(args.E)
xs = substream(args.seed, 0).random((args.centers, 2))
print(f"E={args.E} W={f.lps.W} rule={args.rule}")
for R in args.R:
    prev = None
    for K in args.K:
        g = mean_window_gap(f, partition_arcs(f.lps, K, R, args.rule), xs)
        tail = f"  ratio to previous K={g / prev:.3f}" if prev else ""
        print(f"  R={R:4.1f} K={K:3d} gap={g:9.4f}{tail}")
        prev = g
