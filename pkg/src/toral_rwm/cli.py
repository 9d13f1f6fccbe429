"""Command line entry point ``toral-rwm``.

Exit codes: 0 success, 2 relation budget exceeded, 3 nodal count did not
stabilize, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .arith import enumerate_lattice_points
from .eigenfn import FourierCoefficients, ToralEigenfunction, synthesize_grid
from .equidist import discrepancy
from .gaussian import RwmSpec, sample_realization
from .nodal import SignGrid, box_grid, pleijel_ratio, refine_until_stable, torus_grid
from .relations import BudgetExceeded, vanishing_sums

EXIT_OK, EXIT_BUDGET, EXIT_UNSTABLE, EXIT_IO = 0, 2, 3, 4


class CliIOError(Exception):
    pass


def read_coefficients(path, lps) -> FourierCoefficients:
    """Lines ``xi1 xi2 re im``; missing frequencies get 0; result is normalized."""
    mapping = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliIOError(f"cannot read coefficient file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'xi1 xi2 re im'")
        x, y = int(line[0]), int(line[1])
        if x * x + y * y != lps.energy.value:
            raise ValueError(f"{path}:{lineno}: ({x}, {y}) is not on the circle |xi|^2 = {lps.energy.value}")
        mapping[(x, y)] = complex(float(line[2]), float(line[3]))
    return FourierCoefficients.from_mapping(lps, mapping)


def _eigenfunction(args) -> ToralEigenfunction:
    lps = enumerate_lattice_points(args.E)
    if getattr(args, "coeffs", None):
        return ToralEigenfunction(lps, read_coefficients(args.coeffs, lps))
    if getattr(args, "random_phase", False):
        rng = np.random.Generator(np.random.Philox(key=[args.seed, args.E]))
        return ToralEigenfunction(lps, FourierCoefficients.random_phase(lps, rng))
    return ToralEigenfunction(lps, FourierCoefficients.uniform(lps))


class Output:
    """Collects files for --out and prints the summary."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.out = Path(args.out) if args.out else None
        self.files: dict[str, str | bytes] = {}

    def add(self, name: str, content) -> None:
        self.files[name] = content

    def finish(self, summary: dict, text: str) -> None:
        if self.out is not None:
            cfg = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("out", "func", "json", "verbose", "seed_given")}
            names = sorted(self.files) + [f"{self.command}.json"]
            self.files[f"{self.command}.json"] = ex.manifest(
                self.command, cfg, self.args.seed, names, {"result": summary}
            )
            try:
                self.out.mkdir(parents=True, exist_ok=True)
                for name, content in sorted(self.files.items()):
                    path = self.out / name
                    if isinstance(content, bytes):
                        path.write_bytes(content)
                    else:
                        ex.write_text(path, content)
            except OSError as exc:
                raise CliIOError(f"cannot write to {self.out}: {exc}") from exc
        if self.args.json:
            print(json.dumps(ex._jsonable(summary), sort_keys=True, indent=2))
        else:
            print(text)

    def svg(self, grid: SignGrid, name: str, scale: int = 1) -> None:
        if self.args.svg:
            from .render import svg_document

            self.add(name, svg_document(grid, scale))


# --- subcommands ------------------------------------------------------------


def cmd_points(args) -> int:
    lps = enumerate_lattice_points(args.E)
    o = Output(args, "points")
    rows = [{"xi1": int(x), "xi2": int(y), "angle": float(a)} for (x, y), a in zip(lps.points, lps.angles)]
    o.add("points.csv", ex.rows_to_csv(rows, ["xi1", "xi2", "angle"]))
    pts = " ".join(f"({x},{y})" for x, y in lps.points)
    summary = {"E": args.E, "W": lps.W, "factors": lps.energy.factors, "points": lps.points.tolist()}
    o.finish(summary, f"E={args.E} W={lps.W}\n{pts}")
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    lps = enumerate_lattice_points(args.E)
    d = discrepancy(lps)
    summary = {"E": args.E, "W": lps.W, "delta": d.delta, "delta_over_W": d.normalized, "threshold_ratio": d.threshold_ratio}
    o = Output(args, "discrepancy")
    o.finish(summary, f"E={args.E} W={lps.W} delta={d.delta:.6f} delta/W={d.normalized:.6f}")
    return EXIT_OK


def cmd_relations(args) -> int:
    lps = enumerate_lattice_points(args.E)
    o = Output(args, "relations")
    try:
        rc = vanishing_sums(lps, args.ell, budget=args.budget)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    summary = {
        "E": args.E,
        "W": lps.W,
        "ell": args.ell,
        "total_ordered": rc.total_ordered,
        "nondegenerate": rc.nondegenerate,
        "witnesses": [np.asarray(w).tolist() for w in rc.witnesses],
    }
    o.finish(summary, f"E={args.E} W={lps.W} ell={args.ell} total={rc.total_ordered} nondegenerate={rc.nondegenerate}")
    return EXIT_OK


def cmd_synth(args) -> int:
    f = _eigenfunction(args)
    N = args.N or max(8, int(math.ceil(args.spw * f.frequency)))
    vals = synthesize_grid(f, N)
    o = Output(args, "synth")
    buf = io.BytesIO()
    np.save(buf, vals)
    o.add("grid.npy", buf.getvalue())
    o.svg(SignGrid(vals, "torus"), "synth.svg")
    summary = {"E": args.E, "W": f.lps.W, "N": N, "mean_square": float(np.mean(vals**2)), "max_abs": float(np.abs(vals).max())}
    o.finish(summary, f"E={args.E} N={N} mean f^2={summary['mean_square']:.6f} max|f|={summary['max_abs']:.6f}")
    return EXIT_OK


def cmd_nodal(args) -> int:
    f = _eigenfunction(args)
    rep = refine_until_stable(f, m0=args.spw, max_grid=args.max_grid)
    ratio = pleijel_ratio(args.E, rep.count)
    o = Output(args, "nodal")
    o.add("ladder.csv", ex.rows_to_csv(rep.ladder, ["m", "N", "count", "length"]))
    if args.svg:
        o.svg(torus_grid(f, rep.N), "nodal.svg")
    summary = {
        "E": args.E,
        "W": f.lps.W,
        "count": rep.count,
        "N": rep.N,
        "length": rep.length,
        "stable": rep.stable,
        "ratio": ratio.value,
        "ratio_over_sigma": ratio.sigma_ratio,
        "ladder": rep.ladder,
    }
    o.finish(
        summary,
        f"E={args.E} count={rep.count} N={rep.N} length={rep.length:.4f} ratio={ratio.value:.5f} stable={rep.stable}",
    )
    if not rep.stable:
        print("nodal count did not stabilize under refinement", file=sys.stderr)
        return EXIT_UNSTABLE
    return EXIT_OK


def cmd_rwm(args) -> int:
    est = ex.montecarlo_nu(args.K, args.R, args.samples, args.seed, args.spw)
    o = Output(args, "rwm")
    rows = [{"index": i, "ratio": r, "boundary": b} for i, (r, b) in enumerate(zip(est.ratios, est.boundary))]
    o.add("rwm.csv", ex.rows_to_csv(rows, ["index", "ratio", "boundary"]))
    if args.svg:
        spec = RwmSpec.equispaced(args.K, args.R, args.seed)
        n = int(math.ceil(args.spw * args.R)) + 1
        o.svg(box_grid(sample_realization(spec, 0), (0.0, 0.0), 1.0, n), "rwm.svg")
    lo, hi = est.interval
    summary = {"K": args.K, "R": args.R, "samples": args.samples, "mean": est.mean, "stderr": est.stderr, "interval": [lo, hi]}
    o.finish(summary, f"K={args.K} R={args.R} samples={args.samples} estimate={est.mean:.5f} +- {est.stderr:.5f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        config = ex.load_config(args.config)
    except OSError as exc:
        raise CliIOError(f"cannot read config: {exc}") from exc
    overrides = {}
    if args.out:
        overrides["out"] = args.out
    if args.seed_given:
        overrides["seed"] = args.seed
    if args.svg:
        overrides["svg"] = True
    config = dataclasses.replace(config, **overrides)
    rows = ex.run_sweep(config)
    try:
        ex.save_sweep(config, rows)
        if config.svg:
            from .render import render_svg

            for r in rows:
                f = ex._eigenfunction(config, r["E"])
                N = max(8, int(math.ceil(8 * f.frequency)))
                render_svg(torus_grid(f, N), Path(config.out) / f"nodal_{r['E']}.svg")
    except OSError as exc:
        raise CliIOError(f"cannot write sweep output: {exc}") from exc
    if args.json:
        print(json.dumps(ex._jsonable(rows), sort_keys=True, indent=2))
    else:
        print(ex.rows_to_csv(rows, ["E", "W", "delta", "epsilon1", "nondeg_l6", "moment_dev", "nodal_count", "ratio", "error"]), end="")
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for CSV / JSON / SVG output")
    common.add_argument("--seed", type=_u64, default=0, help="master seed (unsigned 64-bit)")
    common.add_argument("--json", action="store_true", help="print results as JSON")
    common.add_argument("--svg", action="store_true", help="also write SVG renders")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="toral-rwm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("points", parents=[common], help="lattice points on the circle |xi|^2 = E")
    s.add_argument("E", type=int)
    s.set_defaults(func=cmd_points)

    s = sub.add_parser("discrepancy", parents=[common], help="angular discrepancy of the lattice points")
    s.add_argument("E", type=int)
    s.set_defaults(func=cmd_discrepancy)

    s = sub.add_parser("relations", parents=[common], help="count vanishing sums of length ell")
    s.add_argument("E", type=int)
    s.add_argument("--ell", type=int, default=6)
    s.add_argument("--budget", type=int, default=10**8)
    s.set_defaults(func=cmd_relations)

    for name, func, help_ in (
        ("synth", cmd_synth, "synthesize an eigenfunction on the torus grid"),
        ("nodal", cmd_nodal, "nodal domain count with refinement"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("E", type=int)
        s.add_argument("--coeffs", help="file with lines 'xi1 xi2 re im'")
        s.add_argument("--random-phase", action="store_true", help="equal moduli, random phases from --seed")
        s.add_argument("--spw", type=int, default=8 if name == "synth" else 4, help="samples per wavelength")
        if name == "synth":
            s.add_argument("--N", type=int, help="grid size (overrides --spw)")
        else:
            s.add_argument("--max-grid", type=int, default=6144)
        s.set_defaults(func=func)

    s = sub.add_parser("rwm", parents=[common], help="Monte Carlo for the random wave nodal constant")
    s.add_argument("--K", type=int, default=64)
    s.add_argument("--R", type=float, default=60.0)
    s.add_argument("--samples", type=int, default=40)
    s.add_argument("--spw", type=int, default=8)
    s.set_defaults(func=cmd_rwm)

    s = sub.add_parser("sweep", parents=[common], help="run an experiment sweep from a config file")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.seed_given = any(a == "--seed" or a.startswith("--seed=") for a in argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliIOError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
