"""Gaussianity of window coefficients along E = (5*13)^j with K fixed."""

import argparse

from toral_rwm.eigenfn import ToralEigenfunction
from toral_rwm.equidist import partition_arcs
from toral_rwm.gaussian import epsilon_gaussian_stat, window_samples

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--K", type=int, default=4)
p.add_argument("--jmax", type=int, default=5)
p.add_argument("--samples", type=int, default=10_000)
p.add_argument("--seed", type=int, default=1)
args = p.parse_args()

for j in range(1, args.jmax + 1):
    f = ToralEigenfunction.uniform(65**j)
    rep = epsilon_gaussian_stat(window_samples(f, partition_arcs(f.lps, args.K), args.samples, args.seed))
    print(f"E=65^{j} W={f.lps.W:4d} moment={rep.moment_deviation:.4f} ks={rep.ks_distance:.4f} passes={rep.passes}")
