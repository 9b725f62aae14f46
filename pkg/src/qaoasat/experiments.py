"""Seeded batch experiments: density sweeps, critical-depth scans, search scaling.

Every row's randomness derives from (base_seed, alpha, instance index), so the
same instance ensemble is reused across depths (paired series) and output is
byte-identical across reruns and worker counts. Workers receive explicit
sub-tasks and results are collected in argument order.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .grover import depth_sweep
from .instances import generate_instance
from .objective import embed
from .optimizer import OptimConfig, OptimResult, minimize
from .simulator import Driver, Params

RNG_IDENTITY = "numpy PCG64, streams derived via numpy.random.SeedSequence"

RECORD_HEADER = "n,k,driver,p,alpha_target,m,instance_seed,energy,ground_energy,deficit,overlap,converged,evals"
AGGREGATE_HEADER = "n,k,driver,p,alpha_target,mean_deficit,sem_deficit,mean_overlap,count"
PSTAR_HEADER = "n,k,driver,alpha_target,eta_threshold,p_star,found,depths_scanned"
PSTAR_TRACE_HEADER = "n,k,driver,alpha_target,p,mean_eta"
GROVER_HEADER = "n,p_star,found"
GROVER_TRACE_HEADER = "n,p,energy"


def clauses_for_density(alpha: float, n: int) -> int:
    """Realized clause count m = round(alpha * n), ties rounding up."""
    if alpha < 0:
        raise ValueError(f"density must be nonnegative, got {alpha}")
    return int(math.floor(alpha * n + 0.5))


def instance_seed(base_seed: int, alpha: float, index: int) -> int:
    """Per-instance generator seed; alpha enters at micro resolution."""
    alpha_micro = int(math.floor(alpha * 1_000_000 + 0.5))
    ss = np.random.SeedSequence((base_seed, alpha_micro, index))
    return int(ss.generate_state(1, np.uint64)[0])


def _optimizer_seed(base_seed: int, inst_seed: int, p: int) -> int:
    ss = np.random.SeedSequence((base_seed, inst_seed, p))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepSpec:
    n: int
    k: int
    driver: Driver
    depths: tuple[int, ...]
    alphas: tuple[float, ...]
    instances_per_point: int = 100
    base_seed: int = 0
    optim: OptimConfig = field(default_factory=OptimConfig)
    eta_threshold: float = 0.95
    p_max: int = 30

    def __post_init__(self):
        object.__setattr__(self, "driver", Driver(self.driver))
        object.__setattr__(self, "depths", tuple(sorted(set(int(p) for p in self.depths))))
        object.__setattr__(self, "alphas", tuple(sorted(set(float(a) for a in self.alphas))))
        if self.instances_per_point < 1:
            raise ValueError("need at least one instance per point")
        if any(p < 0 for p in self.depths):
            raise ValueError("depths must be nonnegative")
        if any(a < 0 for a in self.alphas):
            raise ValueError("densities must be nonnegative")
        if not 0 <= self.eta_threshold <= 1:
            raise ValueError("eta threshold must be in [0, 1]")

    def to_manifest_dict(self) -> dict:
        spec = asdict(self)
        spec["driver"] = self.driver.value
        spec["optim"].pop("warm_start", None)
        return spec


@dataclass(frozen=True)
class SweepRecord:
    n: int
    k: int
    driver: str
    p: int
    alpha_target: float
    m: int
    instance_seed: int
    energy: float
    ground_energy: int
    deficit: float
    overlap: float
    converged: bool
    evals: int


@dataclass(frozen=True)
class AggregateRow:
    n: int
    k: int
    driver: str
    p: int
    alpha_target: float
    mean_deficit: float
    sem_deficit: float
    mean_overlap: float
    count: int


@dataclass(frozen=True)
class PstarRow:
    n: int
    k: int
    driver: str
    alpha_target: float
    eta_threshold: float
    p_star: Optional[int]
    mean_etas: tuple[float, ...]  # index = depth, starting at p=0


@dataclass(frozen=True)
class GroverRow:
    n: int
    p_star: Optional[int]
    energies: tuple[float, ...]  # index = depth, starting at p=0


@dataclass(frozen=True)
class GroverScaling:
    rows: tuple[GroverRow, ...]
    exponent: Optional[float]  # least-squares slope of log p* against log N
    log_intercept: Optional[float]


def _sweep_unit(args: tuple[SweepSpec, int, int]) -> list[SweepRecord]:
    spec, alpha_idx, inst_idx = args
    alpha = spec.alphas[alpha_idx]
    m = clauses_for_density(alpha, spec.n)
    iseed = instance_seed(spec.base_seed, alpha, inst_idx)
    inst = generate_instance(spec.n, m, spec.k, iseed)
    diag = embed(inst)
    rows: list[SweepRecord] = []
    warm: Optional[Params] = None
    for p in spec.depths:
        if warm is not None:
            while warm.p < p:
                warm = warm.padded()
        try:
            cfg = replace(
                spec.optim,
                seed=_optimizer_seed(spec.optim.seed, iseed, p),
                warm_start=warm,
            )
            res = minimize(diag, spec.driver, p, cfg)
            warm = res.params
            rows.append(
                SweepRecord(
                    n=spec.n,
                    k=spec.k,
                    driver=spec.driver.value,
                    p=p,
                    alpha_target=alpha,
                    m=m,
                    instance_seed=iseed,
                    energy=res.energy,
                    ground_energy=diag.ground_energy,
                    deficit=res.deficit,
                    overlap=res.overlap,
                    converged=res.converged,
                    evals=res.evals_used,
                )
            )
        except Exception:
            rows.append(
                SweepRecord(
                    n=spec.n,
                    k=spec.k,
                    driver=spec.driver.value,
                    p=p,
                    alpha_target=alpha,
                    m=m,
                    instance_seed=iseed,
                    energy=math.nan,
                    ground_energy=diag.ground_energy,
                    deficit=math.nan,
                    overlap=math.nan,
                    converged=False,
                    evals=0,
                )
            )
    return rows


def _map_units(fn, units, jobs: int):
    if jobs <= 1:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, units))


def run_density_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRecord]:
    """Optimize every (alpha, instance, depth) cell; depths are warm-started
    per instance in increasing order. Failed cells yield NaN rows."""
    units = [
        (spec, ai, ii)
        for ai in range(len(spec.alphas))
        for ii in range(spec.instances_per_point)
    ]
    records: list[SweepRecord] = []
    for rows in _map_units(_sweep_unit, units, jobs):
        records.extend(rows)
    return records


def aggregate_records(records: Sequence[SweepRecord]) -> list[AggregateRow]:
    """Mean and standard error of the deficit per (n, k, driver, p, alpha)."""
    groups: dict[tuple, list[SweepRecord]] = {}
    for rec in records:
        groups.setdefault((rec.n, rec.k, rec.driver, rec.p, rec.alpha_target), []).append(rec)
    rows = []
    for key in sorted(groups):
        recs = [r for r in groups[key] if not math.isnan(r.deficit)]
        if not recs:
            continue
        deficits = np.array([r.deficit for r in recs])
        count = len(recs)
        sem = float(deficits.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0
        rows.append(
            AggregateRow(
                n=key[0],
                k=key[1],
                driver=key[2],
                p=key[3],
                alpha_target=key[4],
                mean_deficit=float(deficits.mean()),
                sem_deficit=sem,
                mean_overlap=float(np.mean([r.overlap for r in recs])),
                count=count,
            )
        )
    return rows


def _pstar_unit(args: tuple[SweepSpec, int, int, int, Optional[np.ndarray]]) -> tuple[float, np.ndarray]:
    spec, alpha_idx, inst_idx, p, warm_vec = args
    alpha = spec.alphas[alpha_idx]
    m = clauses_for_density(alpha, spec.n)
    iseed = instance_seed(spec.base_seed, alpha, inst_idx)
    diag = embed(generate_instance(spec.n, m, spec.k, iseed))
    warm = Params.from_vector(warm_vec) if warm_vec is not None else None
    cfg = replace(spec.optim, seed=_optimizer_seed(spec.optim.seed, iseed, p), warm_start=warm)
    res = minimize(diag, spec.driver, p, cfg)
    return res.overlap, res.params.to_vector()


def run_pstar_scan(spec: SweepSpec, jobs: int = 1) -> list[PstarRow]:
    """Ensemble critical depth per density: smallest p with mean overlap >= threshold.

    Each instance is optimized independently at each depth (energy objective,
    warm-started from its own previous depth); the scan stops at the first
    depth whose ensemble-mean overlap clears the threshold, or records a
    not-found row past spec.p_max.
    """
    out: list[PstarRow] = []
    for ai in range(len(spec.alphas)):
        warms: list[Optional[np.ndarray]] = [None] * spec.instances_per_point
        etas: list[float] = []
        p_star: Optional[int] = None
        for p in range(spec.p_max + 1):
            units = [(spec, ai, ii, p, warms[ii]) for ii in range(spec.instances_per_point)]
            results = _map_units(_pstar_unit, units, jobs)
            warms = [vec for _, vec in results]
            mean_eta = float(np.mean([eta for eta, _ in results]))
            etas.append(mean_eta)
            if mean_eta >= spec.eta_threshold:
                p_star = p
                break
        out.append(
            PstarRow(
                n=spec.n,
                k=spec.k,
                driver=spec.driver.value,
                alpha_target=spec.alphas[ai],
                eta_threshold=spec.eta_threshold,
                p_star=p_star,
                mean_etas=tuple(etas),
            )
        )
    return out


def _grover_unit(args: tuple[int, float, int, OptimConfig]) -> GroverRow:
    n, energy_tol, p_max, cfg = args
    results = depth_sweep(n, p_max, cfg, stop_tol=energy_tol)
    p_star = len(results) - 1 if results[-1].energy <= energy_tol else None
    return GroverRow(n=n, p_star=p_star, energies=tuple(r.energy for r in results))


def fit_pstar_exponent(rows: Sequence[GroverRow]) -> tuple[Optional[float], Optional[float]]:
    """Least-squares fit log p* = c log N + d over rows with a found p*.

    c ~ 0.5 corresponds to the square-root search scaling p* ~ sqrt(N).
    """
    pts = [(r.n, r.p_star) for r in rows if r.p_star is not None and r.p_star > 0]
    if len(pts) < 2:
        return None, None
    log_n = np.array([math.log(2.0**n) for n, _ in pts])
    log_p = np.array([math.log(p) for _, p in pts])
    slope, intercept = np.polyfit(log_n, log_p, 1)
    return float(slope), float(intercept)


def run_grover_scaling(
    n_list: Sequence[int], energy_tol: float, p_max: int, cfg: OptimConfig, jobs: int = 1
) -> GroverScaling:
    """Depth-convergence traces and critical depth per search-space size.

    Traces come from the same warm-started sweep used by the analytic model's
    critical-depth search; the fitted exponent is reported against N = 2**n.
    """
    if not n_list:
        raise ValueError("need at least one search-space size")
    units = [(int(n), energy_tol, p_max, cfg) for n in n_list]
    rows = tuple(_map_units(_grover_unit, units, jobs))
    exponent, intercept = fit_pstar_exponent(rows)
    return GroverScaling(rows=rows, exponent=exponent, log_intercept=intercept)


# ---------------------------------------------------------------------------
# serialization


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: str, rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header.split(","))
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_records_csv(records: Sequence[SweepRecord], path: Path | str) -> None:
    _write_csv(
        Path(path),
        RECORD_HEADER,
        [
            (
                r.n, r.k, r.driver, r.p, r.alpha_target, r.m, r.instance_seed,
                r.energy, r.ground_energy, r.deficit, r.overlap, r.converged, r.evals,
            )
            for r in records
        ],
    )


def write_aggregate_csv(rows: Sequence[AggregateRow], path: Path | str) -> None:
    _write_csv(
        Path(path),
        AGGREGATE_HEADER,
        [
            (
                r.n, r.k, r.driver, r.p, r.alpha_target,
                r.mean_deficit, r.sem_deficit, r.mean_overlap, r.count,
            )
            for r in rows
        ],
    )


def write_pstar_csv(rows: Sequence[PstarRow], path: Path | str, trace_path: Path | str) -> None:
    _write_csv(
        Path(path),
        PSTAR_HEADER,
        [
            (
                r.n, r.k, r.driver, r.alpha_target, r.eta_threshold,
                r.p_star if r.p_star is not None else "", r.p_star is not None,
                len(r.mean_etas),
            )
            for r in rows
        ],
    )
    traces = []
    for r in rows:
        traces.extend(
            (r.n, r.k, r.driver, r.alpha_target, p, eta) for p, eta in enumerate(r.mean_etas)
        )
    _write_csv(Path(trace_path), PSTAR_TRACE_HEADER, traces)


def write_grover_csv(scaling: GroverScaling, path: Path | str, trace_path: Path | str) -> None:
    _write_csv(
        Path(path),
        GROVER_HEADER,
        [(r.n, r.p_star if r.p_star is not None else "", r.p_star is not None) for r in scaling.rows],
    )
    traces = []
    for r in scaling.rows:
        traces.extend((r.n, p, e) for p, e in enumerate(r.energies))
    _write_csv(Path(trace_path), GROVER_TRACE_HEADER, traces)


def _parse_bool(text: str) -> bool:
    return text.strip().lower() == "true"


def read_records_csv(path: Path | str) -> list[SweepRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RECORD_HEADER.split(","):
            raise ValueError(f"{path} does not carry the sweep-record schema")
        for row in reader:
            records.append(
                SweepRecord(
                    n=int(row["n"]),
                    k=int(row["k"]),
                    driver=row["driver"],
                    p=int(row["p"]),
                    alpha_target=float(row["alpha_target"]),
                    m=int(row["m"]),
                    instance_seed=int(row["instance_seed"]),
                    energy=float(row["energy"]),
                    ground_energy=int(row["ground_energy"]),
                    deficit=float(row["deficit"]),
                    overlap=float(row["overlap"]),
                    converged=_parse_bool(row["converged"]),
                    evals=int(row["evals"]),
                )
            )
    return records


def read_pstar_csv(path: Path | str) -> list[PstarRow]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != PSTAR_HEADER.split(","):
            raise ValueError(f"{path} does not carry the critical-depth schema")
        for row in reader:
            found = _parse_bool(row["found"])
            rows.append(
                PstarRow(
                    n=int(row["n"]),
                    k=int(row["k"]),
                    driver=row["driver"],
                    alpha_target=float(row["alpha_target"]),
                    eta_threshold=float(row["eta_threshold"]),
                    p_star=int(row["p_star"]) if found else None,
                    mean_etas=(math.nan,) * int(row["depths_scanned"]),
                )
            )
    return rows


def read_grover_csv(path: Path | str, trace_path: Path | str | None = None) -> GroverScaling:
    traces: dict[int, dict[int, float]] = {}
    if trace_path is not None:
        with open(trace_path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != GROVER_TRACE_HEADER.split(","):
                raise ValueError(f"{trace_path} does not carry the search-trace schema")
            for row in reader:
                traces.setdefault(int(row["n"]), {})[int(row["p"])] = float(row["energy"])
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != GROVER_HEADER.split(","):
            raise ValueError(f"{path} does not carry the search-scaling schema")
        for row in reader:
            n = int(row["n"])
            by_p = traces.get(n, {})
            rows.append(
                GroverRow(
                    n=n,
                    p_star=int(row["p_star"]) if _parse_bool(row["found"]) else None,
                    energies=tuple(by_p[p] for p in sorted(by_p)),
                )
            )
    exponent, intercept = fit_pstar_exponent(rows)
    return GroverScaling(rows=tuple(rows), exponent=exponent, log_intercept=intercept)


def write_manifest(path: Path | str, kind: str, payload: dict) -> None:
    doc = {
        "schema_version": 1,
        "kind": kind,
        "rng": RNG_IDENTITY,
        "package_version": __version__,
    }
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# figures


def _require_pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def emit_figures(records: Sequence[SweepRecord], out_dir: Path | str) -> list[Path]:
    """Deficit-vs-density charts, one SVG per (k, driver), series per depth.

    Points are ensemble means with standard-error bars; k=2 charts carry the
    alpha = 1 satisfiability-transition reference line. Empty input is a no-op.
    """
    if not records:
        warnings.warn("no records to plot; skipping figure emission")
        return []
    plt = _require_pyplot()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    agg = aggregate_records(records)
    paths = []
    panels = sorted({(r.n, r.k, r.driver) for r in agg})
    for n, k, driver in panels:
        fig, ax = plt.subplots(figsize=(6, 4))
        depths = sorted({r.p for r in agg if (r.n, r.k, r.driver) == (n, k, driver)})
        for p in depths:
            pts = sorted(
                (r.alpha_target, r.mean_deficit, r.sem_deficit)
                for r in agg
                if (r.n, r.k, r.driver, r.p) == (n, k, driver, p)
            )
            ax.errorbar(
                [a for a, _, _ in pts],
                [m for _, m, _ in pts],
                yerr=[s for _, _, s in pts],
                marker="s",
                capsize=2,
                label=f"p={p}",
            )
        if k == 2:
            ax.axvline(1.0, color="gray", linestyle="--", linewidth=1, label=r"$\alpha_c=1$")
        ax.set_xlabel(r"clause density $\alpha$")
        ax.set_ylabel("mean deficit f")
        ax.set_title(f"{k}-SAT, n={n}, driver={driver}")
        ax.legend()
        path = out_dir / f"deficit_vs_alpha_k{k}_{driver}.svg"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths


def emit_pstar_figures(rows: Sequence[PstarRow], out_dir: Path | str) -> list[Path]:
    """Critical depth vs density, one SVG per (k, driver); censored points open-marked."""
    if not rows:
        warnings.warn("no critical-depth rows to plot; skipping figure emission")
        return []
    plt = _require_pyplot()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for n, k, driver in sorted({(r.n, r.k, r.driver) for r in rows}):
        sel = [r for r in rows if (r.n, r.k, r.driver) == (n, k, driver)]
        fig, ax = plt.subplots(figsize=(6, 4))
        found = [(r.alpha_target, r.p_star) for r in sel if r.p_star is not None]
        censored = [(r.alpha_target, len(r.mean_etas) - 1) for r in sel if r.p_star is None]
        if found:
            ax.plot([a for a, _ in found], [p for _, p in found], "s-", label=r"$p^*$")
        if censored:
            ax.plot(
                [a for a, _ in censored],
                [p for _, p in censored],
                "s",
                mfc="none",
                label=r"$p^*$ > scanned",
            )
        if k == 2:
            ax.axvline(1.0, color="gray", linestyle="--", linewidth=1, label=r"$\alpha_c=1$")
        ax.set_xlabel(r"clause density $\alpha$")
        ax.set_ylabel(r"critical depth $p^*$")
        ax.set_title(f"{k}-SAT, n={n}, driver={driver}, $\\eta \\geq$ {sel[0].eta_threshold}")
        ax.legend()
        path = out_dir / f"pstar_vs_alpha_k{k}_{driver}.svg"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths


def emit_grover_figures(scaling: GroverScaling, out_dir: Path | str) -> list[Path]:
    """Energy-vs-depth convergence and the critical-depth scaling with fit line."""
    if not scaling.rows:
        warnings.warn("no search-scaling rows to plot; skipping figure emission")
        return []
    plt = _require_pyplot()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    fig, ax = plt.subplots(figsize=(6, 4))
    for row in scaling.rows:
        ax.semilogy(range(len(row.energies)), [max(e, 1e-16) for e in row.energies], "s-", label=f"n={row.n}")
    ax.set_xlabel("depth p")
    ax.set_ylabel("optimized energy")
    ax.set_title("search-model convergence")
    ax.legend()
    path = out_dir / "grover_energy_vs_depth.svg"
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)

    found = [(r.n, r.p_star) for r in scaling.rows if r.p_star is not None and r.p_star > 0]
    if found:
        fig, ax = plt.subplots(figsize=(6, 4))
        N = np.array([2.0**n for n, _ in found])
        ps = np.array([p for _, p in found])
        ax.loglog(N, ps, "s", label=r"$p^*$")
        if scaling.exponent is not None:
            grid = np.linspace(N.min(), N.max(), 50)
            ax.loglog(
                grid,
                np.exp(scaling.log_intercept) * grid**scaling.exponent,
                "--",
                label=f"fit $N^{{{scaling.exponent:.2f}}}$",
            )
        ax.set_xlabel("search space size N")
        ax.set_ylabel(r"critical depth $p^*$")
        ax.set_title("critical-depth scaling")
        ax.legend()
        path = out_dir / "grover_pstar_scaling.svg"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths
