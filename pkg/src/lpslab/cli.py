"""Command line entry point ``lps-lab``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""
import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import acceptance
from . import inequalities as ineq
from .config import RunConfig, derive_seed, parse_config, with_seed
from .errors import ConfigError, LpsLabError
from .experiments import (SWEEP_COLUMNS, SweepResult, domain_sweep,
                          estimate_sup_ratio, make_potential, refinement_sweep,
                          scaling_sweep)
from .report import ReportBundle, emit_report
from .spectral import assemble, decompose

SUBCOMMANDS = ("verify", "ratio", "sweep-kappa", "sweep-domain", "sweep-refine", "kernel", "profile")


def _map_ordered(func, items, threads):
    """Apply ``func`` to ``items``; results keep the order of ``items``."""
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _summary(cfg, subcommand, **extra):
    return {"subcommand": subcommand, "seed": cfg.seed, "config": cfg.to_dict(), **extra}


def run_verify(cfg, threads=1):
    def timed(criterion):
        start = time.perf_counter()
        verdict = criterion(cfg.seed)
        return verdict, time.perf_counter() - start

    results = _map_ordered(timed, acceptance.CRITERIA, threads)
    verdicts = [v for v, _ in results]
    tables = [t for v in verdicts for t in v.tables]
    bundle = ReportBundle("verify", _summary(cfg, "verify", criteria={
        str(v.id): v.title for v in verdicts}), tables, [v.to_dict() for v in verdicts])
    bundle.timings = {v.id: dt for v, dt in results}
    bundle.lines = [v.line() for v in verdicts]
    return bundle


def run_ratio(cfg, threads=1):
    grid = cfg.make_grid()
    spec = cfg.potential_spec()
    dec = decompose(grid, make_potential(grid, spec), cfg.grid.dense_limit)
    search = cfg.search(derive_seed(cfg.seed, "ratio"))
    kind = cfg.experiment.kind
    results = _map_ordered(lambda p: estimate_sup_ratio(dec, p, kind, search),
                           cfg.experiment.p_list, threads)
    table = SweepResult("ratio", SWEEP_COLUMNS + ("family", "argmax", "iterations"))
    for res in results:
        table.rows.append(dict(experiment="ratio", kind=res.kind, p=res.p, kappa=spec.kappa,
                               R=grid.R, n=grid.n, seed=search.seed, value=res.value,
                               family=spec.family, argmax=res.argmax, iterations=res.iterations))
    return ReportBundle("ratio", _summary(cfg, "ratio"), [table])


def run_sweep_kappa(cfg, threads=1):
    search = cfg.search(derive_seed(cfg.seed, "sweep-kappa"))
    e = cfg.experiment
    grid, spec = cfg.make_grid(), cfg.potential_spec()
    parts = _map_ordered(lambda k: scaling_sweep(grid, spec, [k], e.p_list, e.kind, search),
                         e.kappa_list, threads)
    table = SweepResult("sweep-kappa", parts[0].columns)
    for part in parts:
        table.rows.extend(part.rows)
    return ReportBundle("sweep-kappa", _summary(cfg, "sweep-kappa"), [table])


def run_sweep_domain(cfg, threads=1):
    search = cfg.search(derive_seed(cfg.seed, "sweep-domain"))
    e, spec = cfg.experiment, cfg.potential_spec()
    parts = _map_ordered(lambda R: [domain_sweep(cfg.grid.dim, [R], cfg.grid.n, spec, p, e.kind, search)
                                    for p in e.p_list], e.R_list, threads)
    table = SweepResult("sweep-domain", parts[0][0].columns)
    for group in parts:
        for part in group:
            table.rows.extend(part.rows)
    return ReportBundle("sweep-domain", _summary(cfg, "sweep-domain"), [table])


def run_sweep_refine(cfg, threads=1):
    search = cfg.search(derive_seed(cfg.seed, "sweep-refine"))
    e, spec = cfg.experiment, cfg.potential_spec()
    parts = _map_ordered(lambda n: refinement_sweep(cfg.grid.dim, cfg.grid.R, [n], spec, e.p_list,
                                                    e.kind, search), e.n_list, threads)
    table = SweepResult("sweep-refine", parts[0].columns)
    for part in parts:
        table.rows.extend(part.rows)
    return ReportBundle("sweep-refine", _summary(cfg, "sweep-refine"), [table])


def run_kernel(cfg, threads=1):
    grid, spec = cfg.make_grid(), cfg.potential_spec()
    dec = decompose(grid, make_potential(grid, spec), cfg.grid.dense_limit)
    t_list = cfg.experiment.t_list or np.geomspace(10 * grid.h ** 2, grid.R ** 2 / 4, 12)
    rep = ineq.check_gaussian_36(dec, grid.center_node(), t_list)
    table = SweepResult("kernel", SWEEP_COLUMNS + ("t",))
    for t, r in zip(rep.diagnostics["t_list"], rep.diagnostics["ratio_per_t"]):
        table.rows.append(dict(experiment="kernel", kind="heat", p=None, kappa=spec.kappa,
                               R=grid.R, n=grid.n, seed=cfg.seed, value=r, t=t))
    bundle = ReportBundle("kernel", _summary(cfg, "kernel", check=rep.to_dict()), [table])
    bundle.verdicts = [{"id": "gaussian_36", "passed": bool(rep.passed)}]
    return bundle


def run_profile(cfg, threads=1):
    grid, spec = cfg.make_grid(), cfg.potential_spec()
    op = assemble(grid, make_potential(grid, spec))
    phi = ineq.solve_harmonic_profile(op)
    rep = ineq.check_harmonic_profile(op, phi)
    axes = tuple(f"x{i}" for i in range(grid.dim))
    table = SweepResult("profile", SWEEP_COLUMNS + axes)
    for x, v in zip(grid.coords, phi):
        table.rows.append(dict(experiment="profile", kind="harmonic", p=None, kappa=spec.kappa,
                               R=grid.R, n=grid.n, seed=cfg.seed, value=v,
                               **{a: c for a, c in zip(axes, x)}))
    bundle = ReportBundle("profile", _summary(cfg, "profile", check=rep.to_dict()), [table])
    bundle.verdicts = [{"id": "harmonic_profile", "passed": bool(rep.passed)}]
    return bundle


RUNNERS = {"verify": run_verify, "ratio": run_ratio, "sweep-kappa": run_sweep_kappa,
           "sweep-domain": run_sweep_domain, "sweep-refine": run_sweep_refine,
           "kernel": run_kernel, "profile": run_profile}


def run(cfg, subcommand, out_dir=None, threads=1):
    """Execute ``subcommand`` and write its report; returns the :class:`ReportBundle`."""
    if subcommand not in RUNNERS:
        raise ValueError(f"unknown subcommand {subcommand!r}")
    bundle = RUNNERS[subcommand](cfg, threads)
    emit_report(bundle, out_dir or cfg.output)
    return bundle


def build_parser():
    parser = argparse.ArgumentParser(prog="lps-lab", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="JSON configuration file (defaults apply when omitted)")
    parser.add_argument("--out", help="output directory (overrides config 'output')")
    parser.add_argument("--seed", type=int, help="master seed (overrides config 'seed')")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for independent tasks")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config) if args.config else RunConfig()
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed", "must be non-negative")
            cfg = with_seed(cfg, args.seed)
        if args.threads < 1:
            raise ConfigError("threads", "must be at least 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        bundle = run(cfg, args.subcommand, args.out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (LpsLabError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for line in bundle.lines:
        print(line)
    return 0 if bundle.passed else 1


if __name__ == "__main__":
    sys.exit(main())
