"""Acceptance suite run by ``lps-lab verify``.

Each ``criterion_XX(seed)`` builds its fixed instance, measures, and returns
a :class:`Verdict`.  Instances and tolerances are constants of this module;
only the random draws depend on the seed.  The sweep criteria also return
their tables so that ``verify`` can write them out.
"""
from dataclasses import dataclass, field

import numpy as np

from . import inequalities as ineq
from .config import derive_seed
from .experiments import (PotentialSpec, SearchConfig, domain_sweep,
                          make_potential, ratio, scaling_sweep)
from .grid import make_grid
from .spectral import assemble, decompose
from .square import ALL_KINDS, SquareFunctionKind, square_function, square_function_quadrature

K = SquareFunctionKind
BASE_SPEC = PotentialSpec("CompactBump", 5.0, r=1.0)
DOMAIN_SPEC = PotentialSpec("CompactBump", 50.0, r=1.5)


@dataclass
class Verdict:
    id: int
    title: str
    passed: bool
    measured: dict
    details: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)

    def to_dict(self):
        return {"id": self.id, "title": self.title, "passed": bool(self.passed),
                "measured": ineq._plain(self.measured), "details": ineq._plain(self.details)}

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.id:2d}: {self.title}"


def _rng(seed, name):
    return np.random.default_rng(derive_seed(seed, name))


def _base_dec(n=64, R=4.0, spec=BASE_SPEC, dim=1):
    grid = make_grid(dim, R, n)
    return decompose(grid, make_potential(grid, spec))


def random_potential(grid, rng):
    """A random non-negative potential: a catalog shape plus rough noise."""
    family = ["GaussBump", "CompactBump", "Harmonic", "InverseSquareReg", "Constant"][rng.integers(5)]
    spec = PotentialSpec(family, float(rng.uniform(0, 50)), sigma=float(rng.uniform(0.3, 2)),
                         r=float(rng.uniform(0.5, 3)), a=float(rng.uniform(0.2, 2)))
    return make_potential(grid, spec) + float(rng.uniform(0, 10)) * rng.random(grid.N) ** 2


def random_nonnegative(grid, rng):
    """Non-negative field: uniform noise, a random bump, or their product."""
    bump = np.exp(-np.sum((grid.coords - rng.uniform(-1, 1, grid.dim)) ** 2, axis=1)
                  / rng.uniform(0.1, 2.0))
    pick = rng.integers(3)
    if pick == 0:
        return rng.random(grid.N)
    if pick == 1:
        return bump
    return bump * rng.random(grid.N)


PARSEVAL = {K.HORIZONTAL_SMALL_G: 0.5, K.HORIZONTAL_SMALL_H: 0.5, K.VERTICAL_G: 0.5,
            K.VERTICAL_H: 1.0 / np.sqrt(2.0)}


def criterion_01(seed):
    dec = _base_dec(n=128)
    rng = _rng(seed, "criterion-01")
    worst = {k.value: 0.0 for k in PARSEVAL}
    for _ in range(20):
        f = rng.standard_normal(dec.grid.N)
        for kind, target in PARSEVAL.items():
            r = ratio(dec, f, 2, kind)
            worst[kind.value] = max(worst[kind.value], abs(r / target - 1))
    return Verdict(1, "p = 2 Parseval constants (d=1, n=128)", max(worst.values()) <= 1e-9,
                   {"max_rel_dev": max(worst.values())}, {"per_kind": worst, "tol": 1e-9})


def criterion_02(seed):
    dec = _base_dec(n=64)
    rng = _rng(seed, "criterion-02")
    errs = {}
    for kind in ALL_KINDS:
        f = rng.standard_normal(dec.grid.N)
        S = square_function(dec, f, kind)
        Q = square_function_quadrature(dec, f, kind)
        errs[kind.value] = float(np.linalg.norm(Q - S) / np.linalg.norm(S))
    return Verdict(2, "closed form vs time quadrature, all kinds", max(errs.values()) <= 1e-6,
                   {"max_rel_l2_error": max(errs.values())}, {"per_kind": errs, "tol": 1e-6})


def criterion_03(seed):
    grid = make_grid(1, 4.0, 64)
    rng = _rng(seed, "criterion-03")
    dec0 = decompose(grid, np.zeros(grid.N))
    worst_low, worst_up, ok = 0.0, 0.0, True
    for _ in range(10):
        decV = decompose(grid, random_potential(grid, rng))
        f = random_nonnegative(grid, rng)
        rep = ineq.check_domination(decV, dec0, f, (0.01, 0.1, 1.0))
        ok &= rep.passed
        scale = np.max(f)
        worst_low = max(worst_low, rep.measured["max_negative"] / scale)
        worst_up = max(worst_up, rep.measured["max_excess"] / scale)
    return Verdict(3, "domination 0 <= e^{-tL} f <= e^{t Lap} f", ok,
                   {"max_negative_rel": worst_low, "max_excess_rel": worst_up}, {"slack": 1e-12})


def criterion_04(seed):
    dec = _base_dec(n=64)
    rng = _rng(seed, "criterion-04")
    worst, ok = -np.inf, True
    for _ in range(100):
        rep = ineq.check_GH_pointwise(dec, rng.standard_normal(dec.grid.N))
        ok &= rep.passed
        worst = max(worst, rep.measured["max_gap"] / rep.measured["max_H"])
    return Verdict(4, "pointwise G_L f <= H_L f (C = 1)", ok, {"max_rel_gap": worst}, {"tol": 1e-8})


IDENTITY_NS = (64, 128, 256)


def criterion_05(seed):
    """Self-convergence of the power-identity residual and its sign condition."""
    t, tol_sign = 0.1, 1e-8
    details, ok_all = {}, True
    max_sign = -np.inf
    for p in (1.5, 2.0):
        res = []
        for n in IDENTITY_NS:
            dec = _base_dec(n=n)
            f = np.exp(-dec.grid.radius ** 2)
            rep = ineq.check_identity_12(dec, f, p, t)
            res.append(rep.measured["sup_residual"])
            max_sign = max(max_sign, rep.measured["max_lhs"])
            ok_all &= rep.passed
        ratios = [res[0] / res[1], res[1] / res[2]]
        in_band = all(3.5 <= r <= 4.5 for r in ratios)
        ok_all &= in_band
        details[f"p={p}"] = {"sup_residuals": res, "ratios": ratios, "in_band": in_band}
    return Verdict(5, "power identity: O(h^2) residual and sign condition", ok_all,
                   {"max_lhs": max_sign}, details)


def criterion_06(seed):
    grid = make_grid(1, 4.0, 64)
    rng = _rng(seed, "criterion-06")
    ok, rows = True, []
    for _ in range(10):
        dec = decompose(grid, random_potential(grid, rng))
        f = random_nonnegative(grid, rng)
        p = float(rng.uniform(1.01, 2.0))
        _, rep = ineq.compute_J(dec, f, p)
        ok &= rep.passed
        rows.append({"p": p, **rep.measured})
    worst = max(r["integral_J"] / r["norm_p_p"] for r in rows)
    min_j = min(r["min_J"] for r in rows)
    return Verdict(6, "J budget: sum J <= ||f||_p^p, J >= 0", ok,
                   {"max_budget_fraction": worst, "min_J": min_j}, {"instances": rows})


KAPPAS = (0.0, 1.0, 10.0, 100.0)


def criterion_07(seed):
    grid = make_grid(1, 4.0, 64)
    cfg = SearchConfig(n_random=8, n_ascent=3, seed=derive_seed(seed, "criterion-07"))
    sweep = scaling_sweep(grid, BASE_SPEC, KAPPAS, (1.25, 1.5, 2.0), K.VERTICAL_H, cfg,
                          experiment="verify-sweep-kappa")
    by_p = {}
    for row in sweep.rows:
        by_p.setdefault(row["p"], []).append(row["value"])
    p2_dev = max(abs(v - 1 / np.sqrt(2)) for v in by_p[2.0])
    spreads = {str(p): max(v) / min(v) for p, v in by_p.items() if p != 2.0}
    ok = p2_dev <= 1e-8 and all(s <= 3 for s in spreads.values())
    return Verdict(7, "uniform boundedness in kappa (p <= 2)", ok,
                   {"p2_max_dev": p2_dev, **{f"spread_p={p}": s for p, s in spreads.items()}},
                   {"values": {str(p): v for p, v in by_p.items()}}, [sweep])


def criterion_08(seed):
    dec = _base_dec(n=64)
    rng = _rng(seed, "criterion-08")
    worst, ok = 0.0, True
    for _ in range(20):
        rep = ineq.check_gradient_decay_31(dec, rng.standard_normal(dec.grid.N), 2)
        ok &= rep.passed
        worst = max(worst, rep.measured["sup_ratio"])
    bound = 1 / np.sqrt(2 * np.e)
    return Verdict(8, "sqrt(t) ||grad e^{-tL} f||_2 <= ||f||_2 / sqrt(2e)", ok,
                   {"sup_ratio": worst, "bound": bound})


def criterion_09(seed):
    out, ok = {}, True
    for dim, R, n in ((1, 4.0, 64), (3, 2.0, 12)):
        grid = make_grid(dim, R, n)
        phi0 = ineq.solve_harmonic_profile(assemble(grid, np.zeros(grid.N)))
        dev = float(np.max(np.abs(phi0 - 1)))
        rep = ineq.check_harmonic_profile(assemble(grid, make_potential(grid, BASE_SPEC)))
        ok &= dev <= 1e-12 and rep.passed
        out[f"d={dim}"] = {"zero_potential_max_dev": dev, **rep.measured}
    return Verdict(9, "harmonic profile: phi = 1 for V = 0; 0 < phi <= 1", ok,
                   {k: v["zero_potential_max_dev"] for k, v in out.items()}, out)


GAUSS_GRIDS = ((1, 4.0, 32), (3, 2.0, 12))


def criterion_10(seed):
    out, ok, worst = {}, True, 0.0
    for dim, R, n in GAUSS_GRIDS:
        grid = make_grid(dim, R, n)
        t_list = np.geomspace(10 * grid.h ** 2, R * R / 4, 12)
        for spec in (PotentialSpec("Zero"), BASE_SPEC):
            dec = decompose(grid, make_potential(grid, spec))
            rep = ineq.check_gaussian_36(dec, grid.center_node(), t_list)
            ok &= rep.passed
            worst = max(worst, rep.measured["max_ratio"])
            out[f"d={dim},{spec.family}"] = rep.measured
    return Verdict(10, "heat kernel below the free Gaussian (ratio <= 1.10)", ok,
                   {"max_ratio": worst}, out)


DOMAIN_RS = (2.0, 4.0, 8.0)


def criterion_11(seed):
    cfg = SearchConfig(n_random=2, n_ascent=1, seed=derive_seed(seed, "criterion-11"))
    base = domain_sweep(3, DOMAIN_RS, 12, PotentialSpec("Zero"), 4.0, K.VERTICAL_G, cfg,
                        experiment="verify-sweep-domain")
    bump = domain_sweep(3, DOMAIN_RS, 12, DOMAIN_SPEC, 4.0, K.VERTICAL_G, cfg,
                        experiment="verify-sweep-domain")
    b = base.column("value")
    v = bump.column("value")
    stable = (max(b) - min(b)) / min(b)
    nondecreasing = all(v[i + 1] >= v[i] * (1 - 0.05) for i in range(len(v) - 1))
    growth = v[-1] / v[0]
    base.rows.extend(bump.rows)
    return Verdict(11, "domain probe d=3, p=4: baseline stable, V != 0 non-decreasing",
                   stable <= 0.10 and nondecreasing,
                   {"baseline_spread": stable, "bump_growth": growth},
                   {"baseline": b, "bump": v}, [base])


CRITERIA = (criterion_01, criterion_02, criterion_03, criterion_04, criterion_05, criterion_06,
            criterion_07, criterion_08, criterion_09, criterion_10, criterion_11)
