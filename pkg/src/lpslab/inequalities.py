"""Numerical checks of the semigroup and square-function inequalities.

Each ``check_*`` routine measures one inequality or identity on a fixed
discrete instance and returns a :class:`CheckReport`.  Checks whose constant
is not quantified (maximal function, gradient decay for p != 2, Hölder
increments) only report the measured constant and pass when it is finite.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (ExponentOutOfRange, GridMismatch, NegativeInput,
                     NonPositiveField, SolveFailure, TimeTooSmall)
from .grid import (dirac_delta, discrete_laplacian, gradient_magnitude,
                   lp_norm, nodal_gradient_product)
from .square import SquareFunctionKind, log_panels, square_function


@dataclass
class CheckReport:
    """Outcome of one check.

    ``measured`` holds the named scalars the verdict is based on;
    ``diagnostics`` holds anything else worth keeping (per-time tables,
    worst nodes).
    """

    name: str
    measured: dict
    tolerance: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed),
                "tolerance": float(self.tolerance),
                "measured": {k: _plain(v) for k, v in self.measured.items()},
                "diagnostics": {k: _plain(v) for k, v in self.diagnostics.items()}}


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def default_t_list(grid, count=24):
    """Log-spaced times spanning ``[10 h^2, 4 R^2]``."""
    return np.geomspace(10.0 * grid.h ** 2, 4.0 * grid.R ** 2, count)


def _same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatch(f"{a.grid} vs {b.grid}")


def _apply_L(dec, f):
    """``L_h f`` by the stencil (not the spectral sum)."""
    return -discrete_laplacian(dec.grid, f) + (dec.V * f.T).T


def check_domination(dec_V, dec_zero, f, t_list=(0.01, 0.1, 1.0)):
    """Entrywise ``0 <= e^{-tL} f <= e^{t Lap} f`` for non-negative ``f``."""
    _same_grid(dec_V, dec_zero)
    f = dec_V.grid.check(f)
    if np.any(f < 0):
        raise NegativeInput("domination is stated for non-negative f")
    slack = 1e-12 * np.max(np.abs(f))
    lower, upper, worst = [], [], []
    for t in t_list:
        uV = dec_V.heat(t, f)
        u0 = dec_zero.heat(t, f)
        lower.append(float(-uV.min()))
        excess = uV - u0
        upper.append(float(excess.max()))
        worst.append(int(np.argmax(excess)))
    passed = max(lower) <= slack and max(upper) <= slack
    return CheckReport("domination", {"max_negative": max(lower), "max_excess": max(upper)},
                       slack, passed,
                       {"t_list": list(t_list), "excess_per_t": upper, "worst_node": worst})


def check_GH_pointwise(dec, f):
    """Pointwise ``G_L f <= H_L f`` (comparison constant 1)."""
    G = square_function(dec, f, SquareFunctionKind.VERTICAL_G)
    H = square_function(dec, f, SquareFunctionKind.VERTICAL_H)
    gap = G - H
    scale = float(H.max())
    tol = 1e-8 * scale
    return CheckReport("G_le_H", {"max_gap": float(gap.max()), "max_H": scale}, tol,
                       bool(gap.max() <= tol), {"worst_node": int(np.argmax(gap))})


def identity_12_terms(dec, f, p, t):
    """Left side ``(d/dt + L) u^p`` and right side of the power identity at time ``t``.

    ``d/dt u^p = p u^{p-1} (-L u)`` is evaluated with the spectral ``L u``.
    Nodes where ``u <= 0`` produce NaN on the right-hand side.
    """
    u = dec.heat(t, f)
    upos = np.maximum(u, 0.0)
    Lu = dec.full_power(u)
    up = upos ** p
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = -p * upos ** (p - 1) * Lu + _apply_L(dec, up)
        grad2 = nodal_gradient_product(dec.grid, u, u)
        rhs = (1 - p) * dec.V * up - p * (p - 1) * np.where(u > 0, u, np.nan) ** (p - 2) * grad2
    return u, lhs, rhs


def check_identity_12(dec, f, p, t, window=0.5, tol=1e-8):
    """Residual of ``(d/dt + L) u^p = (1-p) V u^p - p(p-1) u^{p-2} |grad u|^2``.

    Evaluated on the inner window ``|x|_inf <= window * R``; the check passes
    when ``(d/dt + L) u^p <= tol`` there.  The residual itself is reported.
    """
    if not 1 < p <= 2:
        raise ValueError(f"p must lie in (1, 2], got {p}")
    mask = dec.grid.window_mask(window)
    u, lhs, rhs = identity_12_terms(dec, f, p, t)
    if np.any(u[mask] <= 0):
        raise NonPositiveField("u = e^{-tL} f is not strictly positive on the window")
    resid = np.abs(lhs - rhs)[mask]
    sign = float(lhs[mask].max())
    idx = np.flatnonzero(mask)
    return CheckReport("identity_12", {"sup_residual": float(resid.max()), "max_lhs": sign},
                       tol, sign <= tol,
                       {"worst_node": int(idx[np.argmax(resid)]), "p": p, "t": t, "h": dec.grid.h})


def compute_J(dec, f, p, panels=96, nodes_per_panel=8, T_factor=40.0):
    """Pointwise ``J(x) = -int_0^inf (d/dt + L) u^p dt`` and its budget check.

    The time derivative telescopes to ``f^p - u(T)^p``; the ``L u^p`` term is
    integrated in time on log-spaced Gauss-Legendre panels over
    ``[1e-12/lam_N, T_factor/lam_1]`` with the head piece taken as ``t_min f^p``.

    Returns
    -------
    J : ndarray
    report : CheckReport
        Verifies ``h^d sum J <= ||f||_p^p (1 + 1e-8)`` and
        ``min J >= -1e-8 ||f||_inf^p``.
    """
    grid = dec.grid
    f = grid.check(f)
    if np.any(f < 0):
        raise NegativeInput("J is defined for non-negative f")
    lam = dec.eigenvalues
    t_min, T = 1e-12 / lam[-1], T_factor / lam[0]
    t, w = log_panels(t_min, T, panels, nodes_per_panel)
    c = dec.coefficients(f)
    U = t_min * f ** p
    for chunk in np.array_split(np.arange(t.size), max(1, t.size // 128)):
        u = dec.synthesize(np.exp(-np.outer(lam, t[chunk])) * c[:, None])
        U = U + np.maximum(u, 0.0) ** p @ w[chunk]
    uT = np.maximum(dec.heat(T, f), 0.0)
    J = f ** p - uT ** p - _apply_L(dec, U)
    total = grid.cell_volume * J.sum()
    budget = lp_norm(grid, f, p) ** p
    fmax = np.max(np.abs(f)) ** p
    # pointwise bound on the neglected L-term beyond T
    amp = np.sqrt(np.sum(c ** 2) / grid.cell_volume)
    tail = (amp ** p) * np.exp(-p * lam[0] * T) / (p * lam[0]) * (lam[-1] + np.max(dec.V))
    passed = total <= budget * (1 + 1e-8) and J.min() >= -1e-8 * fmax
    report = CheckReport("J_budget", {"integral_J": float(total), "norm_p_p": float(budget),
                                      "min_J": float(J.min()), "budget_gap": float(budget - total)},
                         1e-8, bool(passed), {"tail_bound": float(tail), "T": float(T), "p": p})
    return J, report


def maximal_check_13(dec, f, p, t_list=None):
    """Measured constant ``||sup_t |e^{-tL} f| ||_p / ||f||_p`` over ``t_list`` and ``t = 0``."""
    f = dec.grid.check(f)
    t_list = default_t_list(dec.grid) if t_list is None else np.asarray(t_list)
    M = np.abs(f).copy()
    for t in t_list:
        M = np.maximum(M, np.abs(dec.heat(t, f)))
    ratio = lp_norm(dec.grid, M, p) / lp_norm(dec.grid, f, p)
    return CheckReport("maximal_13", {"ratio": float(ratio)}, np.inf, bool(np.isfinite(ratio)),
                       {"p": p, "n_times": int(len(t_list))})


def check_gradient_decay_31(dec, f, p, t_list=None, tol=1e-8):
    """``r(t) = sqrt(t) || |grad e^{-tL} f| ||_p / ||f||_p`` over ``t_list``.

    For ``p = 2`` the sup must not exceed ``1/sqrt(2e)``; otherwise the sup is
    only reported.
    """
    f = dec.grid.check(f)
    t_list = default_t_list(dec.grid) if t_list is None else np.asarray(t_list)
    norm_f = lp_norm(dec.grid, f, p)
    r = np.array([np.sqrt(t) * lp_norm(dec.grid, gradient_magnitude(dec.grid, dec.heat(t, f)), p)
                  for t in t_list]) / norm_f
    sup = float(r.max())
    if p == 2:
        bound = 1.0 / np.sqrt(2.0 * np.e)
        passed = sup <= bound + tol
    else:
        bound = np.inf
        passed = bool(np.isfinite(sup))
    return CheckReport("gradient_decay_31", {"sup_ratio": sup, "bound": float(bound)}, tol, passed,
                       {"t_list": t_list, "ratios": r, "worst_t": float(t_list[np.argmax(r)]), "p": p})


def interpolation_ratio(dec, f, p):
    """``|| |grad f| ||_p / (||L^{1/2} f||_p + ||L f||_p^{1/2} ||f||_p^{1/2})``."""
    g = dec.grid
    num = lp_norm(g, gradient_magnitude(g, f), p)
    den = (lp_norm(g, dec.half_power(f), p)
           + np.sqrt(lp_norm(g, dec.full_power(f), p) * lp_norm(g, f, p)))
    return float(num / den)


def check_interpolation_32(dec, f, p):
    """Interpolation ratio; asserted ``<= 1`` only for ``p = 2``."""
    rho = interpolation_ratio(dec, f, p)
    passed = rho <= 1.0 + 1e-12 if p == 2 else bool(np.isfinite(rho))
    return CheckReport("interpolation_32", {"ratio": rho}, 1e-12, passed, {"p": p})


def solve_harmonic_profile(op):
    """Discrete ``L``-harmonic extension of the boundary data 1.

    Solves ``L_h phi = b`` where ``b`` collects the Dirichlet stencil terms
    of unit boundary values, so ``phi == 1`` when ``V == 0``.
    """
    grid = op.grid
    b = grid.neg_laplacian @ np.ones(grid.N)
    try:
        phi = scipy.linalg.solve(op.matrix, b, assume_a="pos")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolveFailure(str(exc)) from exc
    resid = np.linalg.norm(op.matrix @ phi - b) / np.linalg.norm(b)
    if not resid <= 1e-10:
        raise SolveFailure(f"relative residual {resid:.3e}")
    return phi


def check_harmonic_profile(op, phi=None):
    phi = solve_harmonic_profile(op) if phi is None else phi
    b = op.grid.neg_laplacian @ np.ones(op.grid.N)
    resid = float(np.linalg.norm(op.matrix @ phi - b) / np.linalg.norm(b))
    passed = phi.min() > 0 and phi.max() <= 1 + 1e-12 and resid <= 1e-10
    return CheckReport("harmonic_profile", {"min": float(phi.min()), "max": float(phi.max()),
                                            "residual": resid}, 1e-12, bool(passed))


def heat_kernel_column(dec, y, t):
    """``k_t(., y) = e^{-tL} delta_y``."""
    return dec.heat(t, dirac_delta(dec.grid, y))


def check_gaussian_36(dec, y, t_list, tol=1.10, resolution_floor=1e-10):
    """Compare ``k_t(x, y)`` with the free Gaussian ``(4 pi t)^{-d/2} e^{-|x-y|^2/4t}``.

    The reported ratio is taken over nodes where the Gaussian exceeds
    ``resolution_floor`` times its peak (below that the spectral kernel is
    roundoff); the unrestricted maximum is reported as well.

    Raises
    ------
    TimeTooSmall
        If some ``t < 10 h^2``.
    """
    grid = dec.grid
    t_list = np.asarray(t_list, dtype=float)
    if np.any(t_list < 10.0 * grid.h ** 2 * (1 - 1e-12)):
        raise TimeTooSmall(f"times must be >= 10 h^2 = {10 * grid.h ** 2:.4g}")
    r2 = np.sum((grid.coords - grid.coords[y]) ** 2, axis=1)
    ratios, raw = [], []
    for t in t_list:
        k = heat_kernel_column(dec, y, t)
        gauss = (4 * np.pi * t) ** (-grid.dim / 2) * np.exp(-r2 / (4 * t))
        ratio = k / gauss
        keep = gauss >= resolution_floor * gauss.max()
        ratios.append(float(ratio[keep].max()))
        raw.append(float(ratio.max()))
    worst = float(max(ratios))
    return CheckReport("gaussian_36", {"max_ratio": worst, "max_ratio_unmasked": float(max(raw))},
                       tol, worst <= tol,
                       {"t_list": t_list, "ratio_per_t": ratios, "y": int(y),
                        "worst_t": float(t_list[int(np.argmax(ratios))])})


def default_pairs(grid, window=0.5):
    """All unordered node pairs ``(x, x')`` inside the inner window."""
    idx = np.flatnonzero(grid.window_mask(window))
    a, b = np.triu_indices(idx.size, k=1)
    return list(zip(idx[a].tolist(), idx[b].tolist()))


def default_holder_times(grid, count=10):
    """Log-spaced times on ``[h^2, R^2 / 8]``, before the box walls dominate the decay."""
    return np.geomspace(grid.h ** 2, grid.R ** 2 / 8.0, count)


def holder_probe_37(dec, y, t_list, pair_list, p):
    """Empirical Hölder constant of ``x -> k_t(x, y)``.

    For each time the constant is the sup over pairs of
    ``|k_t(x,y) - k_t(x',y)| / (|x - x'|^{1-d/p} t^{-1/2 - (d/2)(1 - 1/p)})``.
    The time exponent is the log-log slope of ``sup_pairs |increment| / |x-x'|^{1-d/p}``
    against ``t``; the distance exponent is the mean over times of the slope of
    the modulus ``sup_{|x-x'| <= r} |increment|`` against ``r``.
    """
    grid = dec.grid
    d = grid.dim
    if not p > d:
        raise ExponentOutOfRange(f"need p > d = {d}, got {p}")
    t_list = np.asarray(t_list, dtype=float)
    a = np.array([i for i, _ in pair_list], dtype=int)
    b = np.array([j for _, j in pair_list], dtype=int)
    dist = np.linalg.norm(grid.coords[a] - grid.coords[b], axis=1)
    moved = dist > 0
    a, b, dist = a[moved], b[moved], dist[moved]
    x_exp = 1.0 - d / p
    t_exp = -0.5 - 0.5 * d * (1.0 - 1.0 / p)
    shells, shell_of = np.unique(np.round(dist / grid.h, 6), return_inverse=True)
    per_t, sup_inc, dist_slopes = [], [], []
    for t in t_list:
        k = heat_kernel_column(dec, y, t)
        inc = np.abs(k[a] - k[b])
        if inc.size == 0:
            per_t.append(0.0)
            sup_inc.append(0.0)
            continue
        q = inc / dist ** x_exp
        sup_inc.append(float(q.max()))
        per_t.append(float(q.max() / t ** t_exp))
        top = np.zeros(shells.size)
        np.maximum.at(top, shell_of, inc)
        top = np.maximum.accumulate(top)
        ok = top > 0
        if ok.sum() >= 2:
            dist_slopes.append(np.polyfit(np.log(shells[ok] * grid.h), np.log(top[ok]), 1)[0])
    sup_inc = np.array(sup_inc)
    fit = {"dist_exponent": float(np.mean(dist_slopes)) if dist_slopes else np.nan,
           "time_exponent": np.nan}
    if t_list.size >= 2 and np.all(sup_inc > 0):
        fit["time_exponent"] = float(np.polyfit(np.log(t_list), np.log(sup_inc), 1)[0])
    constant = float(max(per_t)) if per_t else 0.0
    nonincreasing = bool(np.all(np.diff(per_t) <= 1e-12 * max(constant, 1e-300)))
    return CheckReport("holder_37", {"constant": constant, **fit,
                                     "bound_time_exponent": t_exp, "bound_dist_exponent": x_exp,
                                     "constant_nonincreasing": nonincreasing},
                       np.inf, bool(np.isfinite(constant)),
                       {"t_list": t_list, "constant_per_t": per_t, "n_pairs": int(a.size)})


def oscillation_probe(dec, g, window=0.5, t_list=None, slack=1e-10):
    """Oscillation ``max - min`` of ``e^{-tL} g`` over the inner window, per time.

    Monotone decay is only asserted when the heat matrix rows over the
    window have equal sums (to 1e-10); on a Dirichlet box this is not the
    case and the probe is report-only.
    """
    grid = dec.grid
    g = grid.check(g)
    t_list = default_t_list(grid) if t_list is None else np.asarray(t_list)
    mask = grid.window_mask(window)
    ones = np.ones(grid.N)
    osc, uniform = [], True
    for t in t_list:
        u = dec.heat(t, g)[mask]
        osc.append(float(u.max() - u.min()))
        rows = dec.heat(t, ones)[mask]
        uniform &= bool(rows.max() - rows.min() <= 1e-10)
    osc = np.array(osc)
    monotone = bool(np.all(np.diff(osc) <= slack))
    passed = monotone if uniform else True
    return CheckReport("oscillation", {"initial_osc": float(osc[0]), "final_osc": float(osc[-1]),
                                       "monotone": monotone}, slack, passed,
                       {"t_list": t_list, "osc": osc, "assertive": uniform})
