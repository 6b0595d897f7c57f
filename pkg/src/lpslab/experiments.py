"""Potential catalog, L^p ratio estimation and parameter sweeps."""
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadParams, ZeroInput
from .grid import lp_norm, make_grid
from .spectral import decompose
from .square import SquareFunctionKind, square_function

FAMILIES = ("Zero", "Constant", "GaussBump", "CompactBump", "Harmonic", "InverseSquareReg")
SWEEP_COLUMNS = ("experiment", "kind", "p", "kappa", "R", "n", "seed", "value")


@dataclass(frozen=True)
class PotentialSpec:
    """Parametric non-negative potential ``kappa * shape(x)``.

    ``sigma`` is the GaussBump width, ``r`` the CompactBump support radius
    and ``a`` the InverseSquareReg regulariser.
    """

    family: str = "Zero"
    kappa: float = 0.0
    sigma: float = 1.0
    r: float = 1.0
    a: float = 1.0

    def with_kappa(self, kappa):
        return replace(self, kappa=float(kappa))


def make_potential(grid, spec):
    """Evaluate the potential described by ``spec`` at the grid nodes."""
    if spec.family not in FAMILIES:
        raise BadParams(f"unknown potential family {spec.family!r}")
    if spec.kappa < 0:
        raise BadParams("kappa must be non-negative")
    if min(spec.sigma, spec.r, spec.a) <= 0:
        raise BadParams("sigma, r and a must be positive")
    r2 = grid.radius ** 2
    if spec.family == "Zero":
        shape = np.zeros(grid.N)
    elif spec.family == "Constant":
        shape = np.ones(grid.N)
    elif spec.family == "GaussBump":
        shape = np.exp(-r2 / spec.sigma ** 2)
    elif spec.family == "CompactBump":
        shape = np.maximum(0.0, 1.0 - r2 / spec.r ** 2) ** 3
    elif spec.family == "Harmonic":
        shape = r2
    else:
        shape = 1.0 / (r2 + spec.a ** 2)
    return spec.kappa * shape


def ratio(dec, f, p, kind):
    """``||S f||_p / ||f||_p`` for the square function ``kind``."""
    norm_f = lp_norm(dec.grid, f, p)
    if not norm_f > 0:
        raise ZeroInput("ratio is undefined for f = 0")
    return float(lp_norm(dec.grid, square_function(dec, f, kind), p) / norm_f)


@dataclass(frozen=True)
class SearchConfig:
    n_random: int = 16
    n_ascent: int = 4
    step: float = 0.5
    seed: int = 0
    n_directions: int = 8
    fd_eps: float = 1e-4
    step_floor: float = 1e-6


@dataclass
class RatioResult:
    p: float
    kind: str
    value: float
    argmax: str
    iterations: int
    history: list = field(default_factory=list)


def special_candidates(grid):
    """Seed-independent candidates: a smooth positive bump and a spike at the center."""
    width = max(4.0 * grid.h, 0.1 * grid.R)
    bump = np.exp(-grid.radius ** 2 / width ** 2)
    spike = np.zeros(grid.N)
    spike[grid.center_node()] = 1.0
    return [("bump", bump), ("delta", spike)]


def random_candidate(dec, rng):
    """Field with eigen-coefficients ``N(0, 1) / (1 + lam_k)``."""
    c = rng.standard_normal(dec.grid.N) / (1.0 + dec.eigenvalues)
    return dec.synthesize(c)


def _unit(grid, f):
    return f / lp_norm(grid, f, 2)


def ascend(dec, f, p, kind, n_ascent, rng, cfg=SearchConfig()):
    """Finite-difference ascent on ``f -> ratio(f)`` with backtracking.

    Each step estimates directional derivatives along ``cfg.n_directions``
    random nodal directions, moves along their gradient combination and
    halves the step until the ratio improves.  The step size carries over
    between iterations; the search stops once it falls below
    ``cfg.step_floor``.  The returned values are non-decreasing.
    """
    grid = dec.grid
    f = _unit(grid, f)
    best = ratio(dec, f, p, kind)
    history = [best]
    step = cfg.step
    for _ in range(n_ascent):
        dirs = rng.standard_normal((cfg.n_directions, grid.N))
        dirs /= np.array([lp_norm(grid, d, 2) for d in dirs])[:, None]
        slopes = np.array([(ratio(dec, f + cfg.fd_eps * d, p, kind) - best) / cfg.fd_eps
                           for d in dirs])
        direction = slopes @ dirs
        size = lp_norm(grid, direction, 2)
        if not size > 0:
            break
        direction /= size
        improved = False
        while step >= cfg.step_floor:
            trial = _unit(grid, f + step * direction)
            value = ratio(dec, trial, p, kind)
            if value > best:
                f, best, improved = trial, value, True
                break
            step *= 0.5
        history.append(best)
        if not improved:
            break
    return f, best, history


def estimate_sup_ratio(dec, p, kind, cfg=SearchConfig()):
    """Lower estimate of ``sup_f ||S f||_p / ||f||_p``.

    Candidates are the special fields of :func:`special_candidates` plus
    ``cfg.n_random`` random fields; each is refined by ``cfg.n_ascent``
    ascent steps.  Candidate ``i`` draws from its own generator seeded with
    ``(cfg.seed, i)``, so enlarging the candidate set or the number of steps
    never lowers the result.
    """
    kind = SquareFunctionKind.parse(kind)
    candidates = list(special_candidates(dec.grid))
    for i in range(cfg.n_random):
        rng = np.random.default_rng([cfg.seed, i])
        candidates.append((f"random-{i}", random_candidate(dec, rng)))
    best = RatioResult(p, kind.value, -np.inf, "", 0)
    for idx, (name, f) in enumerate(candidates):
        rng = np.random.default_rng([cfg.seed, idx, 1])
        _, value, history = ascend(dec, f, p, kind, cfg.n_ascent, rng, cfg)
        if value > best.value:
            best = RatioResult(p, kind.value, value, name, len(history) - 1, history)
    return best


@dataclass
class SweepResult:
    """Rows of a sweep; each row is a dict keyed by ``columns``."""

    experiment: str
    columns: tuple
    rows: list = field(default_factory=list)

    def column(self, name):
        return [row[name] for row in self.rows]


def _row(experiment, kind, p, kappa, R, n, seed, value, **extra):
    row = dict(experiment=experiment, kind=kind, p=float(p), kappa=float(kappa), R=float(R),
               n=int(n), seed=int(seed), value=float(value))
    row.update(extra)
    return row


EXTRA_COLUMNS = ("family", "dim", "h", "argmax", "iterations")


def scaling_sweep(grid, spec, kappa_list, p_list, kind, cfg=SearchConfig(),
                  experiment="sweep-kappa"):
    """Estimated sup ratio for each ``(kappa, p)`` on a fixed grid."""
    kind = SquareFunctionKind.parse(kind)
    out = SweepResult(experiment, SWEEP_COLUMNS + EXTRA_COLUMNS)
    for kappa in kappa_list:
        if kappa < 0:
            raise BadParams("kappa must be non-negative")
        dec = decompose(grid, make_potential(grid, spec.with_kappa(kappa)))
        for p in p_list:
            res = estimate_sup_ratio(dec, p, kind, cfg)
            out.rows.append(_row(experiment, kind.value, p, kappa, grid.R, grid.n, cfg.seed,
                                 res.value, family=spec.family, dim=grid.dim, h=grid.h,
                                 argmax=res.argmax, iterations=res.iterations))
    return out


def domain_sweep(dim, R_list, n, spec, p, kind, cfg=SearchConfig(), experiment="sweep-domain"):
    """Estimated sup ratio on boxes of growing half width at fixed ``n``.

    The potential keeps its physical shape parameters, so its support stays
    fixed while the box grows.
    """
    kind = SquareFunctionKind.parse(kind)
    out = SweepResult(experiment, SWEEP_COLUMNS + EXTRA_COLUMNS)
    for R in R_list:
        grid = make_grid(dim, R, n)
        dec = decompose(grid, make_potential(grid, spec))
        res = estimate_sup_ratio(dec, p, kind, cfg)
        out.rows.append(_row(experiment, kind.value, p, spec.kappa, R, n, cfg.seed, res.value,
                             family=spec.family, dim=dim, h=grid.h, argmax=res.argmax,
                             iterations=res.iterations))
    return out


def refinement_sweep(dim, R, n_list, spec, p_list, kind, cfg=SearchConfig(),
                     experiment="sweep-refine"):
    """Estimated sup ratio on a fixed box under grid refinement."""
    out = SweepResult(experiment, SWEEP_COLUMNS + EXTRA_COLUMNS)
    for n in n_list:
        part = scaling_sweep(make_grid(dim, R, n), spec, [spec.kappa], p_list, kind, cfg,
                             experiment)
        out.rows.extend(part.rows)
    return out
