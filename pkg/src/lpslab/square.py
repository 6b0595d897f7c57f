"""Vertical and horizontal square functions of a discrete Schrödinger operator.

Five kinds are supported, each a time integral of a pointwise quadratic
quantity built from the heat or Poisson semigroup:

============================  ======================================  ==========================
kind                          squared integrand                       eigen-weight w(j, k)
============================  ======================================  ==========================
``VERTICAL_H``                ``|grad e^{-tL}f|^2 + V|e^{-tL}f|^2``   ``1/(l_j + l_k)``
``VERTICAL_G``                ``t |grad P_t f|^2 + t V |P_t f|^2``    ``1/(m_j + m_k)^2``
``GRADIENT_ONLY_G``           ``t |grad P_t f|^2``                    ``1/(m_j + m_k)^2``
``HORIZONTAL_SMALL_G``        ``t |sqrt(L) P_t f|^2``                 ``m_j m_k/(m_j + m_k)^2``
``HORIZONTAL_SMALL_H``        ``t |L e^{-tL} f|^2``                   ``l_j l_k/(l_j + l_k)^2``
============================  ======================================  ==========================

with ``P_t = exp(-t sqrt(L))``, ``l`` the eigenvalues and ``m = sqrt(l)``.

:func:`square_function` evaluates the time integral exactly in the eigenbasis;
:func:`square_function_quadrature` integrates the defining integrand numerically
and serves as an independent check.
"""
import enum

import numpy as np
from scipy.special import roots_legendre

from .errors import BadInterval, GridMismatch
from .grid import edges_to_nodes, nodal_gradient_product


class SquareFunctionKind(enum.Enum):
    VERTICAL_H = "VerticalH"
    VERTICAL_G = "VerticalG"
    GRADIENT_ONLY_G = "GradientOnlyG"
    HORIZONTAL_SMALL_G = "HorizontalSmallG"
    HORIZONTAL_SMALL_H = "HorizontalSmallH"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            return cls[str(value).upper()]

    @property
    def uses_poisson(self):
        return self in (SquareFunctionKind.VERTICAL_G, SquareFunctionKind.GRADIENT_ONLY_G,
                        SquareFunctionKind.HORIZONTAL_SMALL_G)

    @property
    def has_gradient(self):
        return self in (SquareFunctionKind.VERTICAL_H, SquareFunctionKind.VERTICAL_G,
                        SquareFunctionKind.GRADIENT_ONLY_G)

    @property
    def has_potential(self):
        return self in (SquareFunctionKind.VERTICAL_H, SquareFunctionKind.VERTICAL_G)

    def weights(self, lam):
        """Matrix ``w(lam_j, lam_k)`` of exact time integrals."""
        lam = np.asarray(lam, dtype=float)
        if self is SquareFunctionKind.VERTICAL_H:
            return 1.0 / (lam[:, None] + lam[None, :])
        mu = np.sqrt(lam)
        if self is SquareFunctionKind.HORIZONTAL_SMALL_H:
            return np.outer(lam, lam) / (lam[:, None] + lam[None, :]) ** 2
        denom = (mu[:, None] + mu[None, :]) ** 2
        if self is SquareFunctionKind.HORIZONTAL_SMALL_G:
            return np.outer(mu, mu) / denom
        return 1.0 / denom

    def diagonal_weight(self, lam):
        """``lam_k * w(k, k)`` for gradient kinds, ``w(k, k)`` otherwise.

        Summed against ``c_k^2`` this gives ``||S f||_2^2`` for every kind
        except GRADIENT_ONLY_G, for which it is an upper bound.
        """
        w = np.diag(self.weights(lam))
        return lam * w if self.has_gradient else w


ALL_KINDS = tuple(SquareFunctionKind)


def _covariance_terms(dec, coeff, weights, need_offdiag):
    """Entries of ``Y = Phi diag(c) W diag(c) Phi^T`` needed for the integrand.

    Returns the diagonal ``Y_xx`` and, per axis, ``Y_{x, x+e_axis}`` shaped
    as the grid with one less entry along that axis.
    """
    grid = dec.grid
    M = dec.eigenvectors * coeff
    B = M @ weights
    diag = np.einsum("ij,ij->i", B, M)
    offdiag = []
    if need_offdiag:
        Bg = B.reshape(grid.shape + (grid.N,))
        Mg = M.reshape(grid.shape + (grid.N,))
        for ax in range(grid.dim):
            lo = np.take(Bg, np.arange(grid.n - 1), axis=ax)
            hi = np.take(Mg, np.arange(1, grid.n), axis=ax)
            offdiag.append(np.einsum("...k,...k->...", lo, hi))
    return diag, offdiag


def _gradient_form(grid, diag, offdiag):
    """Nodal ``int |grad u|^2`` from covariance entries (same collocation as the grid)."""
    Yd = diag.reshape(grid.shape)
    total = 0.0
    for ax in range(grid.dim):
        pad = [(0, 0)] * grid.dim
        pad[ax] = (1, 1)
        d = np.pad(Yd, pad)
        o = np.pad(offdiag[ax], pad)
        a = np.take(d, np.arange(grid.n + 1), axis=ax)
        b = np.take(d, np.arange(1, grid.n + 2), axis=ax)
        edge = (a + b - 2.0 * o) / grid.h ** 2
        total = total + edges_to_nodes(edge, ax)
    return np.ravel(total)


def square_function_squared(dec, f, kind):
    """Unclamped pointwise square ``S(f)(x)^2`` (closed form)."""
    kind = SquareFunctionKind.parse(kind)
    f = dec.grid.check(f)
    if f.ndim != 1:
        raise GridMismatch("square functions take a single field")
    c = dec.coefficients(f)
    W = kind.weights(dec.eigenvalues)
    diag, offdiag = _covariance_terms(dec, c, W, kind.has_gradient)
    if not kind.has_gradient:
        return diag
    out = _gradient_form(dec.grid, diag, offdiag)
    if kind.has_potential:
        out = out + dec.V * diag
    return out


def square_function(dec, f, kind, full_output=False):
    """Pointwise square function of ``f`` evaluated in closed form.

    Parameters
    ----------
    dec : SpectralDecomposition
    f : ndarray, shape (N,)
    kind : SquareFunctionKind or str
    full_output : bool
        Also return a dict with ``max_negative``, the largest roundoff
        excursion below zero that was clamped before the square root.
    """
    sq = square_function_squared(dec, f, kind)
    neg = float(max(0.0, -sq.min()))
    S = np.sqrt(np.maximum(sq, 0.0))
    if full_output:
        return S, {"max_negative": neg}
    return S


def log_panels(t_min, T, panels, nodes_per_panel):
    """Composite Gauss-Legendre rule on log-spaced panels of ``[t_min, T]``."""
    if not 0 < t_min < T:
        raise BadInterval(f"need 0 < t_min < T, got t_min={t_min}, T={T}")
    if panels < 4:
        raise BadInterval(f"need at least 4 panels, got {panels}")
    edges = np.geomspace(t_min, T, int(panels) + 1)
    x, w = roots_legendre(int(nodes_per_panel))
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def default_interval(dec, kind):
    """Spectrum-tied oracle interval ``(t_min, T)``."""
    kind = SquareFunctionKind.parse(kind)
    lam = dec.eigenvalues
    t_min = 1e-6 / lam[-1]
    T = 20.0 / (np.sqrt(lam[0]) if kind.uses_poisson else lam[0])
    return t_min, T


def _integrand(dec, c, kind, t):
    """Squared integrand at times ``t`` (shape ``(N, len(t))``)."""
    lam = dec.eigenvalues
    rate = np.sqrt(lam) if kind.uses_poisson else lam
    decay = np.exp(-np.outer(rate, t)) * c[:, None]
    if kind is SquareFunctionKind.HORIZONTAL_SMALL_G:
        decay = decay * np.sqrt(lam)[:, None]
    elif kind is SquareFunctionKind.HORIZONTAL_SMALL_H:
        decay = decay * lam[:, None]
    u = dec.synthesize(decay)
    if kind.has_gradient:
        val = nodal_gradient_product(dec.grid, u, u)
        if kind.has_potential:
            val = val + dec.V[:, None] * u * u
    else:
        val = u * u
    if kind is not SquareFunctionKind.VERTICAL_H:
        val = val * t[None, :]
    return val


def _head_tail_bounds(dec, c, kind, t_min, T):
    """Spatially integrated bounds on the neglected (0, t_min) and (T, inf) pieces."""
    lam = dec.eigenvalues
    c2 = c * c
    if kind is SquareFunctionKind.VERTICAL_H:
        head = t_min * np.sum(c2 * lam)
        tail = 0.5 * np.sum(c2 * np.exp(-2.0 * lam * T))
        return head, tail
    rate = 2.0 * (np.sqrt(lam) if kind.uses_poisson else lam)
    amp = lam * lam if kind is SquareFunctionKind.HORIZONTAL_SMALL_H else lam
    head = 0.5 * t_min ** 2 * np.sum(c2 * amp)
    # int_T^inf t e^{-rate t} dt = e^{-rate T}(T/rate + 1/rate^2)
    tail = np.sum(c2 * amp * np.exp(-rate * T) * (T / rate + 1.0 / rate ** 2))
    return head, tail


def square_function_quadrature(dec, f, kind, t_min=None, T=None, panels=64,
                               nodes_per_panel=8, full_output=False):
    """Square function by direct time quadrature of the defining integrand.

    The integral over ``[t_min, T]`` uses composite Gauss-Legendre on
    log-spaced panels.  With ``full_output`` a dict is returned as well, with
    bounds (integrated over space, i.e. contributions to ``||S f||_2^2``) on
    the neglected head ``(0, t_min)`` and tail ``(T, inf)``.
    """
    kind = SquareFunctionKind.parse(kind)
    f = dec.grid.check(f)
    d_min, d_T = default_interval(dec, kind)
    t_min = d_min if t_min is None else t_min
    T = d_T if T is None else T
    t, w = log_panels(t_min, T, panels, nodes_per_panel)
    c = dec.coefficients(f)
    sq = np.zeros(dec.grid.N)
    for chunk in np.array_split(np.arange(t.size), max(1, t.size // 128)):
        sq += _integrand(dec, c, kind, t[chunk]) @ w[chunk]
    S = np.sqrt(np.maximum(sq, 0.0))
    if full_output:
        head, tail = _head_tail_bounds(dec, c, kind, t_min, T)
        return S, {"t_min": t_min, "T": T, "head_bound": float(head),
                   "tail_bound": float(tail), "n_nodes": int(t.size)}
    return S
