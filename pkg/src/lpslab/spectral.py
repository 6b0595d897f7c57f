"""Discrete Schrödinger operators ``L_h = -Lap_h + diag(V)`` and their functional calculus.

The operator is assembled densely and diagonalised once; every semigroup,
power or square-function evaluation downstream is a spectral sum over the
resulting eigenpairs.  Eigenvectors are normalised in the ``h^d``-weighted
inner product so that coefficients are ``c_k = <phi_k, f>``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import erfc, erfcx, roots_genlaguerre

from .errors import (BadQuadOrder, EigFailure, GridMismatch,
                     NegativePotential, NonFiniteFn, TooLarge, ZeroMode)

DENSE_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class SchrodingerOperator:
    grid: object
    V: np.ndarray
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a :class:`SchrodingerOperator`.

    Attributes
    ----------
    eigenvalues : ndarray, shape (N,)
        Ascending, all strictly positive.
    eigenvectors : ndarray, shape (N, N)
        Column ``k`` is ``phi_k`` with ``<phi_j, phi_k> = delta_jk``.
    """

    grid: object
    V: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def sqrt_eigenvalues(self):
        return np.sqrt(self.eigenvalues)

    def coefficients(self, f):
        """``c_k = <phi_k, f>``; a batch ``(N, m)`` gives ``(N, m)``."""
        f = self.grid.check(f)
        return self.grid.cell_volume * (self.eigenvectors.T @ f)

    def synthesize(self, c):
        return self.eigenvectors @ c

    def apply(self, fn, f):
        return apply_spectral_function(self, fn, f)

    def heat(self, t, f):
        """``exp(-t L) f``."""
        return self.apply(lambda lam: np.exp(-t * lam), f)

    def poisson(self, t, f):
        """``exp(-t sqrt(L)) f``."""
        return self.apply(lambda lam: np.exp(-t * np.sqrt(lam)), f)

    def half_power(self, f):
        return self.apply(np.sqrt, f)

    def full_power(self, f):
        return self.apply(lambda lam: lam, f)

    def heat_matrix(self, t):
        """Dense ``exp(-t L)`` acting on nodal values."""
        phi = self.eigenvectors
        return self.grid.cell_volume * (phi * np.exp(-t * self.eigenvalues)) @ phi.T


def assemble(grid, V):
    """Assemble the dense matrix of ``-Lap_h + diag(V)``."""
    V = np.asarray(V, dtype=float)
    if V.shape != (grid.N,):
        raise GridMismatch(f"potential of shape {V.shape} does not match N={grid.N}")
    if np.any(V < 0) or not np.all(np.isfinite(V)):
        raise NegativePotential("potential must be finite and non-negative")
    matrix = grid.neg_laplacian.toarray()
    matrix[np.diag_indices_from(matrix)] += V
    return SchrodingerOperator(grid, V.copy(), matrix)


def eigendecompose(op, dense_limit=DENSE_LIMIT):
    """Diagonalise ``op`` densely.

    Raises
    ------
    TooLarge
        If ``N`` exceeds ``dense_limit``.
    ZeroMode
        If the smallest eigenvalue is not resolved away from zero.
    EigFailure
        If LAPACK fails or the eigenpairs do not pass the residual checks.
    """
    grid = op.grid
    if grid.N > dense_limit:
        raise TooLarge(f"N={grid.N} exceeds dense limit {dense_limit}")
    try:
        lam, U = scipy.linalg.eigh(op.matrix)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigFailure(str(exc)) from exc
    if lam[0] <= 1e-12 * lam[-1]:
        raise ZeroMode(f"smallest eigenvalue {lam[0]:.3e} is not positive")
    # deterministic sign: largest-magnitude entry of each mode positive
    pivots = U[np.argmax(np.abs(U), axis=0), np.arange(U.shape[1])]
    U = U * np.sign(pivots)
    phi = U / np.sqrt(grid.cell_volume)
    dec = SpectralDecomposition(grid, op.V, lam, phi)
    resid = np.linalg.norm(op.matrix @ U - U * lam, axis=0).max()
    if resid > 1e-9 * lam[-1]:
        raise EigFailure(f"eigen-residual {resid:.3e} too large")
    return dec


def decompose(grid, V, dense_limit=DENSE_LIMIT):
    """Shorthand for ``eigendecompose(assemble(grid, V))``."""
    return eigendecompose(assemble(grid, V), dense_limit)


def apply_spectral_function(dec, fn, f):
    """Return ``sum_k fn(lam_k) <phi_k, f> phi_k``."""
    vals = np.asarray(fn(dec.eigenvalues), dtype=float)
    vals = np.broadcast_to(vals, dec.eigenvalues.shape)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteFn("spectral function is not finite on the spectrum")
    c = dec.coefficients(f)
    if c.ndim == 2:
        return dec.synthesize(vals[:, None] * c)
    return dec.synthesize(vals * c)


def subordination_rule(n_quad):
    """Nodes and weights for ``int_0^inf g(s) e^{-s} s^{-1/2} ds / sqrt(pi)``.

    The weights sum to one (the measure is a probability measure).
    """
    if int(n_quad) != n_quad or n_quad < 8:
        raise BadQuadOrder(f"n_quad must be an integer >= 8, got {n_quad}")
    s, w = roots_genlaguerre(int(n_quad), -0.5)
    return s, w / np.sqrt(np.pi)


HEAD_FLOOR = 1e-10


def log_subordination_rule(n_quad, a_min):
    """Trapezoid nodes in ``x = ln s`` on ``[s_lo, 40]`` for the same measure.

    ``a_min`` is the smallest exponent ``t^2 lam / 4`` to be integrated and
    ``s_lo = max(a_min / 40, 1e-10)``.  Returns ``(s, w, s_lo)``; the part of
    the integral below ``s_lo`` is added exactly by :func:`subordination_head`.
    """
    if int(n_quad) != n_quad or n_quad < 8:
        raise BadQuadOrder(f"n_quad must be an integer >= 8, got {n_quad}")
    s_lo = max(a_min / 40.0, HEAD_FLOOR)
    x = np.linspace(np.log(s_lo), np.log(40.0), int(n_quad))
    w = np.full(x.size, x[1] - x[0])
    w[[0, -1]] *= 0.5
    s = np.exp(x)
    return s, w * np.exp(0.5 * x - s) / np.sqrt(np.pi), s_lo


def subordination_head(a, s_lo):
    """``pi^{-1/2} int_0^{s_lo} exp(-a/s - s) s^{-1/2} ds`` in closed form (erfc)."""
    a = np.asarray(a, dtype=float)
    u, r = np.sqrt(a / s_lo), np.sqrt(s_lo)
    damp = np.exp(-a / s_lo - s_lo)
    first = np.where(u >= r, erfcx(np.maximum(u - r, 0.0)) * damp,
                     np.exp(-2.0 * np.sqrt(a)) * erfc(u - r))
    return 0.5 * (first - erfcx(u + r) * damp)


def poisson_via_subordination(dec, f, t, n_quad=40, method="log"):
    """Approximate ``exp(-t sqrt(L)) f`` as an average of heat operators.

    Uses ``exp(-t sqrt(lam)) = E[exp(-(t^2 / 4s) lam)]`` with ``s`` drawn from
    ``pi^{-1/2} e^{-s} s^{-1/2} ds``.

    Parameters
    ----------
    method : {"log", "laguerre"}
        ``"log"`` (default) is the trapezoid rule in ``ln s`` with the piece
        ``s < s_lo`` integrated exactly; ``"laguerre"`` is
        generalised Gauss-Laguerre, which converges slowly here because the
        integrand ``exp(-a/s)`` is not smooth at ``s = 0``.
    """
    if not t > 0:
        raise BadQuadOrder(f"t must be positive, got {t}")
    a = t * t * dec.eigenvalues / 4.0
    if method == "log":
        s, w, s_lo = log_subordination_rule(n_quad, a[0])
        head = subordination_head(a, s_lo)
    elif method == "laguerre":
        s, w = subordination_rule(n_quad)
        head = 0.0
    else:
        raise BadQuadOrder(f"unknown method {method!r}")
    multiplier = np.exp(-np.outer(a, 1.0 / s)) @ w + head
    c = dec.coefficients(f)
    if c.ndim == 2:
        return dec.synthesize(multiplier[:, None] * c)
    return dec.synthesize(multiplier * c)
