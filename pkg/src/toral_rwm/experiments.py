"""Experiment drivers: random-wave Monte Carlo and energy sweeps."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .arith import Energy, admissible_energies, enumerate_lattice_points
from .eigenfn import FourierCoefficients, ToralEigenfunction
from .equidist import discrepancy, partition_arcs, spectral_measure, uniformity_gap
from .gaussian import RwmSpec, epsilon_gaussian_stat, sample_realization, window_samples
from .nodal import ResolutionError, count_in_box, pleijel_ratio, refine_until_stable
from .relations import BudgetExceeded, vanishing_sums

log = logging.getLogger(__name__)

FAMILIES = ("fixed-primes", "sampled", "general-coefficients")

SWEEP_COLUMNS = [
    "family",
    "E",
    "W",
    "rank",
    "delta",
    "delta_over_W",
    "epsilon1",
    "total_l4",
    "nondeg_l4",
    "total_l6",
    "nondeg_l6",
    "moment_dev",
    "ks",
    "gaussian_pass",
    "uniformity_gap",
    "nodal_count",
    "grid_N",
    "stable",
    "nodal_length",
    "ratio",
    "ratio_over_sigma",
    "seed",
    "config_hash",
    "error",
]


# --- random wave Monte Carlo ----------------------------------------------


@dataclass
class MonteCarloEstimate:
    mean: float
    stderr: float
    ratios: list[float]
    boundary: list[int]
    K: int
    R: float
    seed: int
    spw: int

    @property
    def interval(self) -> tuple[float, float]:
        return (self.mean - 3 * self.stderr, self.mean + 3 * self.stderr)


def montecarlo_nu(K: int, R: float, samples: int, seed: int, spw: int = 8) -> MonteCarloEstimate:
    """Mean of 4 pi N / (4 pi^2 R^2) over Gaussian waves with K equispaced directions.

    N counts nodal domains contained in the open unit box [-1/2, 1/2]^2 (the
    box holds R wavelengths per side). Sample i uses substream (seed, i).
    """
    if K < 32 or K % 2:
        raise ValueError("K must be even and at least 32")
    if R < 20:
        raise ValueError("R must be at least 20")
    if samples < 20:
        raise ValueError("at least 20 samples are required")
    spec = RwmSpec.equispaced(K, R, seed)
    n = int(math.ceil(spw * R)) + 1
    ratios, boundary = [], []
    for i in range(samples):
        rep = count_in_box(sample_realization(spec, i), (0.0, 0.0), 1.0, n)
        ratios.append(pleijel_ratio(R * R, rep.count_in_box).value)
        boundary.append(rep.boundary_touching)
    mean = math.fsum(ratios) / samples
    var = math.fsum((r - mean) ** 2 for r in ratios) / (samples - 1)
    return MonteCarloEstimate(mean, math.sqrt(var / samples), ratios, boundary, K, R, seed, spw)


# --- sweeps -----------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "fixed-primes"
    primes: tuple[int, ...] = (5, 13)
    exponents: tuple[int, ...] = (1, 2, 3)
    energies: tuple[int, ...] = ()
    count: int = 10
    max_energy: int = 100_000
    min_W: int = 8
    K: int = 4
    R: float = 2.0
    seed: int = 0
    samples: int = 10_000
    spw: int = 4
    max_grid: int = 4096
    budget: int = 10**7
    coefficients: str = "uniform"
    jobs: int = 1
    out: str = "out"
    svg: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.coefficients not in ("uniform", "random-phase"):
            raise ValueError("coefficients must be 'uniform' or 'random-phase'")

    def hash(self) -> str:
        d = dataclasses.asdict(self)
        for key in ("out", "jobs", "svg"):
            d.pop(key)
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def energy_list(self) -> list[int]:
        if self.energies:
            Es = list(self.energies)
        elif self.family == "sampled":
            pool = [E for E in admissible_energies(self.max_energy) if enumerate_lattice_points(E, verify=False).W >= self.min_W]
            rng = np.random.Generator(np.random.Philox(key=self.seed))
            Es = [int(E) for E in rng.choice(pool, size=min(self.count, len(pool)), replace=False)]
        else:
            Es = [math.prod(p**j for p in self.primes) for j in self.exponents]
        bad = [E for E in Es if not Energy.of(E).admissible]
        if bad:
            raise ValueError(f"inadmissible energies in config: {bad}")
        return sorted(set(Es))


_INT_KEYS = {"count", "max_energy", "min_W", "K", "seed", "samples", "spw", "max_grid", "budget", "jobs"}
_TUPLE_KEYS = {"primes", "exponents", "energies"}


def parse_config(text: str) -> ExperimentConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment; lists are comma separated."""
    fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
    kw = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in fields:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in _TUPLE_KEYS:
            kw[key] = tuple(int(v) for v in value.split(",") if v.strip())
        elif key in _INT_KEYS:
            kw[key] = int(value)
        elif key == "R":
            kw[key] = float(value)
        elif key == "svg":
            kw[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            kw[key] = value
    return ExperimentConfig(**kw)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def _eigenfunction(config: ExperimentConfig, E: int) -> ToralEigenfunction:
    lps = enumerate_lattice_points(E)
    if config.family == "general-coefficients" or config.coefficients == "random-phase":
        rng = np.random.Generator(np.random.Philox(key=[config.seed, E]))
        return ToralEigenfunction(lps, FourierCoefficients.random_phase(lps, rng))
    return ToralEigenfunction(lps, FourierCoefficients.uniform(lps))


def sweep_row(config: ExperimentConfig, E: int) -> dict:
    """All diagnostics for one energy; failures are recorded in ``error``."""
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(family=config.family, E=E, seed=config.seed, config_hash=config.hash())
    errors = []
    f = _eigenfunction(config, E)
    lps = f.lps
    row.update(W=lps.W, rank=lps.energy.rank)
    d = discrepancy(lps)
    row.update(delta=d.delta, delta_over_W=d.normalized)
    part = partition_arcs(lps, config.K, config.R)
    row["epsilon1"] = part.epsilon1
    for ell in (4, 6):
        try:
            rc = vanishing_sums(lps, ell, budget=config.budget)
            row[f"total_l{ell}"], row[f"nondeg_l{ell}"] = rc.total_ordered, rc.nondegenerate
        except BudgetExceeded as exc:
            errors.append(f"l={ell}: {exc}")
    g = epsilon_gaussian_stat(window_samples(f, part, config.samples, config.seed))
    row.update(moment_dev=float(g.moment_deviation), ks=g.ks_distance, gaussian_pass=g.passes)
    row["uniformity_gap"] = uniformity_gap(spectral_measure(f.coeffs), 8)
    try:
        rep = refine_until_stable(f, m0=config.spw, max_grid=config.max_grid)
        ratio = pleijel_ratio(E, rep.count)
        row.update(
            nodal_count=rep.count,
            grid_N=rep.N,
            stable=rep.stable,
            nodal_length=rep.length,
            ratio=ratio.value,
            ratio_over_sigma=ratio.sigma_ratio,
        )
        if not rep.stable:
            errors.append("nodal count unstable")
    except ResolutionError as exc:
        errors.append(str(exc))
    row["error"] = "; ".join(errors)
    return row


def run_sweep(config: ExperimentConfig) -> list[dict]:
    """One row per energy, ascending in E whatever the completion order."""
    Es = config.energy_list()
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            rows = list(pool.map(sweep_row, [config] * len(Es), Es))
    else:
        rows = [sweep_row(config, E) for E in Es]
    return sorted(rows, key=lambda r: r["E"])


# --- persistence ------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c, "")) for c in columns])
    return buf.getvalue()


def manifest(kind: str, config: dict, seed: int, files: list[str], extra: dict | None = None) -> str:
    body = {
        "kind": kind,
        "config": config,
        "seed": seed,
        "files": sorted(files),
        "versions": {"toral_rwm": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
        "rng": "numpy Philox4x64 keyed by (seed, sample index)",
    }
    if extra:
        body.update(extra)
    return json.dumps(_jsonable(body), sort_keys=True, indent=2) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else repr(float(obj))
    return obj


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def save_sweep(config: ExperimentConfig, rows: list[dict]) -> list[Path]:
    out = Path(config.out)
    csv_path = out / "sweep.csv"
    json_path = out / "manifest.json"
    write_text(csv_path, rows_to_csv(rows, SWEEP_COLUMNS))
    cfg = dataclasses.asdict(config)
    cfg.pop("out")
    write_text(
        json_path,
        manifest("sweep", cfg, config.seed, [csv_path.name], {"config_hash": config.hash(), "rows": len(rows)}),
    )
    return [csv_path, json_path]
