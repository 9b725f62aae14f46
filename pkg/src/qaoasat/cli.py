"""Command-line surface for reproducible runs.

Exit codes: 0 success, 2 usage or configuration error, 3 statevector
resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import DimacsError, ResourceLimitError
from .experiments import (
    GROVER_HEADER,
    GROVER_TRACE_HEADER,
    PSTAR_HEADER,
    RECORD_HEADER,
    RNG_IDENTITY,
    SweepSpec,
    aggregate_records,
    clauses_for_density,
    emit_figures,
    emit_grover_figures,
    emit_pstar_figures,
    read_grover_csv,
    read_pstar_csv,
    read_records_csv,
    run_density_sweep,
    run_grover_scaling,
    run_pstar_scan,
    write_aggregate_csv,
    write_grover_csv,
    write_manifest,
    write_pstar_csv,
    write_records_csv,
)
from .instances import brute_force_min_violations, generate_instance, parse_dimacs, write_dimacs
from .objective import embed
from .optimizer import OptimConfig, minimize
from .simulator import Driver


def _parse_float_list(text: str) -> list[float]:
    """Comma list or inclusive range 'start:stop:step' (e.g. 0.25:5:0.25)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range syntax is start:stop:step, got {text!r}")
        start, stop, step = (float(v) for v in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        count = int(round((stop - start) / step))
        values = [round(start + i * step, 9) for i in range(count + 1)]
        return [v for v in values if v <= stop + 1e-12]
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _optim_config(args) -> OptimConfig:
    kwargs = {"restarts": args.restarts, "seed": args.seed}
    if getattr(args, "max_evals", None) is not None:
        kwargs["max_evals"] = args.max_evals
    return OptimConfig(**kwargs)


def _cmd_gen(args) -> int:
    if args.alpha is not None:
        m = clauses_for_density(args.alpha, args.n)
    else:
        m = args.m
    inst = generate_instance(args.n, m, args.k, args.seed, unique_clauses=args.unique_clauses)
    Path(args.out).write_text(write_dimacs(inst))
    print(f"wrote {args.out}: n={inst.n} k={inst.k} m={inst.m} alpha={float(inst.density())} seed={args.seed}")
    return 0


def _cmd_solve(args) -> int:
    inst = parse_dimacs(Path(args.cnf).read_text())
    diag = embed(inst)
    ground, _ = brute_force_min_violations(inst)
    cfg = _optim_config(args)
    res = minimize(diag, Driver(args.driver), args.p, cfg)
    report = {
        "schema_version": 1,
        "cnf": str(args.cnf),
        "n": inst.n,
        "k": inst.k,
        "m": inst.m,
        "alpha": float(inst.density()),
        "driver": args.driver,
        "p": args.p,
        "energy": res.energy,
        "ground_energy": ground,
        "deficit": res.deficit,
        "overlap": res.overlap,
        "gammas": res.params.gammas.tolist(),
        "betas": res.params.betas.tolist(),
        "converged": res.converged,
        "evals": res.evals_used,
        "restarts": cfg.restarts,
        "seed": args.seed,
        "rng": RNG_IDENTITY,
        "version": __version__,
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(f"n={inst.n} k={inst.k} m={inst.m} alpha={float(inst.density())}")
        print(f"driver={args.driver} p={args.p} restarts={cfg.restarts} seed={args.seed}")
        print(f"energy          = {res.energy:.12g}")
        print(f"ground_energy   = {ground}")
        print(f"deficit         = {res.deficit:.12g}")
        print(f"overlap         = {res.overlap:.12g}")
        print(f"converged       = {res.converged} ({res.evals_used} evaluations)")
        print(f"gammas          = {res.params.gammas.tolist()}")
        print(f"betas           = {res.params.betas.tolist()}")
    return 0


def _sweep_spec(args) -> SweepSpec:
    return SweepSpec(
        n=args.n,
        k=args.k,
        driver=Driver(args.driver),
        depths=tuple(getattr(args, "depths", ()) or ()),
        alphas=tuple(args.alphas),
        instances_per_point=args.instances,
        base_seed=args.seed,
        optim=_optim_config(args),
        eta_threshold=getattr(args, "eta", 0.95),
        p_max=getattr(args, "p_max", 30),
    )


def _cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = run_density_sweep(spec, jobs=args.jobs)
    write_records_csv(records, out / "sweep.csv")
    write_aggregate_csv(aggregate_records(records), out / "sweep_aggregate.csv")
    write_manifest(out / "sweep_manifest.json", "density_sweep", {"spec": spec.to_manifest_dict()})
    print(f"wrote {len(records)} rows to {out / 'sweep.csv'}")
    return 0


def _cmd_pstar(args) -> int:
    spec = _sweep_spec(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = run_pstar_scan(spec, jobs=args.jobs)
    write_pstar_csv(rows, out / "pstar.csv", out / "pstar_trace.csv")
    write_manifest(
        out / "pstar_manifest.json",
        "critical_depth_scan",
        {"spec": spec.to_manifest_dict(), "protocol": "energy-optimized states; overlap measured"},
    )
    for row in rows:
        shown = row.p_star if row.p_star is not None else f">{len(row.mean_etas) - 1}"
        print(f"alpha={row.alpha_target:g} p*={shown}")
    return 0


def _cmd_grover(args) -> int:
    cfg = OptimConfig(restarts=args.restarts, seed=args.seed, polish=2)
    scaling = run_grover_scaling(args.n, args.tol, args.p_max, cfg, jobs=args.jobs)
    for row in scaling.rows:
        shown = row.p_star if row.p_star is not None else f">{args.p_max}"
        print(f"n={row.n} N={2**row.n} p*={shown}")
    if scaling.exponent is not None:
        print(f"fit: p* ~ N^{scaling.exponent:.3f}")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_grover_csv(scaling, out / "grover.csv", out / "grover_trace.csv")
        write_manifest(
            out / "grover_manifest.json",
            "search_scaling",
            {
                "n_list": list(args.n),
                "energy_tol": args.tol,
                "p_max": args.p_max,
                "seed": args.seed,
                "restarts": args.restarts,
                "exponent": scaling.exponent,
            },
        )
    return 0


def _cmd_render(args) -> int:
    out = Path(args.out)
    produced: list[Path] = []
    for path in args.inputs:
        with open(path, newline="") as fh:
            header = fh.readline().strip()
        if header == RECORD_HEADER:
            produced += emit_figures(read_records_csv(path), out)
        elif header == PSTAR_HEADER:
            produced += emit_pstar_figures(read_pstar_csv(path), out)
        elif header == GROVER_HEADER:
            trace = Path(path).with_name(Path(path).stem + "_trace.csv")
            produced += emit_grover_figures(
                read_grover_csv(path, trace if trace.exists() else None), out
            )
        elif header == GROVER_TRACE_HEADER:
            print(f"{path}: pass the summary CSV; the trace file is picked up alongside it", file=sys.stderr)
            return 2
        else:
            print(f"{path}: unrecognized CSV schema", file=sys.stderr)
            return 2
    for p in produced:
        print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qaoasat",
        description="QAOA reachability-deficit experiments on random MAX-k-SAT",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random k-SAT instance as DIMACS CNF")
    gen.add_argument("--n", type=int, required=True, help="variable count")
    size = gen.add_mutually_exclusive_group(required=True)
    size.add_argument("--m", type=int, help="clause count")
    size.add_argument("--alpha", type=float, help="clause density; m = round(alpha*n)")
    gen.add_argument("--k", type=int, default=3, choices=(2, 3), help="clause width")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--unique-clauses", action="store_true", help="reject repeated clauses")
    gen.add_argument("--out", required=True, help="output CNF path")
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="optimize one instance and report energy/deficit/overlap")
    solve.add_argument("--cnf", required=True, help="DIMACS CNF path")
    solve.add_argument("--p", type=int, default=1, help="circuit depth")
    solve.add_argument("--driver", choices=[d.value for d in Driver], default="x")
    solve.add_argument("--restarts", type=int, default=20)
    solve.add_argument("--max-evals", type=int, default=None, help="evaluation budget per restart")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--json", action="store_true", help="emit a JSON report")
    solve.set_defaults(func=_cmd_solve)

    def add_sweep_args(p, with_depths: bool):
        p.add_argument("--n", type=int, default=6)
        p.add_argument("--k", type=int, default=3, choices=(2, 3))
        p.add_argument("--driver", choices=[d.value for d in Driver], default="x")
        if with_depths:
            p.add_argument("--depths", type=_parse_int_list, required=True, help="comma list, e.g. 1,2,3")
        p.add_argument("--alphas", type=_parse_float_list, required=True, help="comma list or start:stop:step")
        p.add_argument("--instances", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=20)
        p.add_argument("--max-evals", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1, help="worker processes; output independent of it")
        p.add_argument("--out-dir", required=True)

    sweep = sub.add_parser("sweep", help="deficit vs density sweep (CSV + manifest)")
    add_sweep_args(sweep, with_depths=True)
    sweep.set_defaults(func=_cmd_sweep)

    pstar = sub.add_parser("pstar", help="ensemble critical-depth scan over densities")
    add_sweep_args(pstar, with_depths=False)
    pstar.add_argument("--eta", type=float, default=0.95, help="mean-overlap threshold")
    pstar.add_argument("--p-max", type=int, dest="p_max", default=30)
    pstar.set_defaults(func=_cmd_pstar)

    grover = sub.add_parser("grover", help="analytic search model: convergence and p* scaling")
    grover.add_argument("--n", type=_parse_int_list, default=[6, 8, 10], help="comma list of qubit counts")
    grover.add_argument("--tol", type=float, default=1e-4, help="energy tolerance defining p*")
    grover.add_argument("--p-max", type=int, dest="p_max", default=60)
    grover.add_argument("--seed", type=int, default=0)
    grover.add_argument("--restarts", type=int, default=8)
    grover.add_argument("--jobs", type=int, default=1)
    grover.add_argument("--out-dir", default=None)
    grover.set_defaults(func=_cmd_grover)

    render = sub.add_parser("render", help="draw SVG figures from experiment CSVs")
    render.add_argument("--in", dest="inputs", action="append", required=True, help="CSV path (repeatable)")
    render.add_argument("--out", required=True, help="output directory for SVG files")
    render.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimacsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
