"""Monte Carlo estimate of the random-wave nodal constant.

    python3 scripts/rwm_constant.py --K 64 --R 60 --samples 40 --seed 0
"""

import argparse
import logging

from toral_rwm.constants import CONSTANTS
from toral_rwm.experiments import montecarlo_nu

p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
p.add_argument("--K", type=int, default=64)
p.add_argument("--R", type=float, default=60.0)
p.add_argument("--samples", type=int, default=40)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--spw", type=int, nargs="+", default=[8], help="samples per wavelength; several values give a resolution check")
args = p.parse_args()
logging.basicConfig(level=logging.INFO)

for spw in args.spw:
    est = montecarlo_nu(args.K, args.R, args.samples, args.seed, spw)
    lo, hi = est.interval
    print(
        f"spw={spw:3d}  estimate={est.mean:.5f} +- {est.stderr:.5f}  3se interval=[{lo:.5f}, {hi:.5f}]  "
        f"sigma={CONSTANTS.sigma:.5f}  ratio={est.mean / CONSTANTS.sigma:.3f}  "
        f"mean boundary-touching={sum(est.boundary) / len(est.boundary):.1f}"
    )
