"""Run one or more sweep configs and write CSV / JSON (and SVG) outputs.

    python3 scripts/sweep.py configs/fixed_primes.cfg configs/sampled.cfg
"""

import argparse
import logging

from toral_rwm.experiments import load_config, run_sweep, save_sweep

p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
p.add_argument("configs", nargs="+")
args = p.parse_args()
logging.basicConfig(level=logging.WARNING)

for path in args.configs:
    cfg = load_config(path)
    rows = run_sweep(cfg)
    files = save_sweep(cfg, rows)
    print(f"{path}: {len(rows)} rows -> {', '.join(map(str, files))}")
    for r in rows:
        print(f"  E={r['E']:>8} W={r['W']:>3} ratio={r['ratio']!s:.8} moment={r['moment_dev']:.4f} {r['error']}")
