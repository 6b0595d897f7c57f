import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lpslab.errors import (GridMismatch, IndexOutOfRange, InvalidDim, InvalidExponent,
                           NonPositiveR, TooFewNodes)
from lpslab.grid import (dirac_delta, discrete_laplacian, inner, lp_norm, make_grid,
                         nodal_gradient_product)

grids = st.builds(make_grid, st.integers(1, 3), st.floats(0.5, 8.0), st.integers(2, 7))


def test_node_map_small():
    g = make_grid(1, 1.0, 3)
    assert g.h == 0.5
    np.testing.assert_allclose(g.axis, [-0.5, 0.0, 0.5], atol=1e-15)


def test_node_count_2d():
    g = make_grid(2, 2.0, 4)
    assert g.h == pytest.approx(0.8)
    assert g.N == 16
    assert g.coords.shape == (16, 2)


@pytest.mark.parametrize("args, exc", [((1, 1.0, 1), TooFewNodes), ((4, 1.0, 8), InvalidDim),
                                       ((0, 1.0, 8), InvalidDim), ((1, 0.0, 8), NonPositiveR),
                                       ((1, -2.0, 8), NonPositiveR)])
def test_make_grid_rejects(args, exc):
    with pytest.raises(exc):
        make_grid(*args)


def test_laplacian_of_zero():
    g = make_grid(2, 1.0, 5)
    np.testing.assert_array_equal(discrete_laplacian(g, np.zeros(g.N)), 0.0)


def test_laplacian_stencil():
    g = make_grid(1, 1.0, 3)
    np.testing.assert_allclose(discrete_laplacian(g, [0.0, 1.0, 0.0]), [4.0, -8.0, 4.0])


@pytest.mark.parametrize("n", [5, 16, 31])
def test_laplacian_sine_modes(n):
    g = make_grid(1, 2.0, n)
    i = np.arange(n)
    for k in (1, 2, n // 2, n):
        s = np.sin(k * np.pi * (i + 1) / (n + 1))
        lam = 2.0 / g.h ** 2 * (1 - np.cos(k * np.pi / (n + 1)))
        np.testing.assert_allclose(discrete_laplacian(g, s), -lam * s, atol=1e-10 * lam)


def test_laplacian_matches_sparse_matrix(rng):
    g = make_grid(3, 1.5, 5)
    f = rng.standard_normal(g.N)
    np.testing.assert_allclose(discrete_laplacian(g, f), -(g.neg_laplacian @ f), rtol=1e-13,
                               atol=1e-12)


def test_gradient_product_zero():
    g = make_grid(1, 1.0, 4)
    np.testing.assert_array_equal(nodal_gradient_product(g, np.zeros(4), np.zeros(4)), 0.0)


def test_gradient_product_three_edges():
    g = make_grid(1, 3.7, 2)
    h = g.h
    out = nodal_gradient_product(g, np.ones(2), np.ones(2))
    np.testing.assert_allclose(out, [1 / h ** 2, 1 / h ** 2])
    assert h * out.sum() == pytest.approx(2 / h)
    assert h * out.sum() == pytest.approx(inner(g, -discrete_laplacian(g, np.ones(2)), np.ones(2)))


def test_gradient_product_mismatch():
    g = make_grid(1, 1.0, 4)
    with pytest.raises(GridMismatch):
        nodal_gradient_product(g, np.ones(4), np.ones(5))


@settings(max_examples=40, deadline=None)
@given(grids, st.integers(0, 2 ** 32 - 1))
def test_summation_by_parts(g, seed):
    r = np.random.default_rng(seed)
    f, q = r.standard_normal(g.N), r.standard_normal(g.N)
    lhs = g.cell_volume * nodal_gradient_product(g, f, q).sum()
    rhs = inner(g, -discrete_laplacian(g, f), q)
    scale = g.cell_volume * np.abs(nodal_gradient_product(g, f, f)).sum()
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1e-300) + 1e-13 * abs(rhs)
    ff = g.cell_volume * nodal_gradient_product(g, f, f).sum()
    assert ff == pytest.approx(inner(g, -discrete_laplacian(g, f), f), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(grids, st.integers(0, 2 ** 32 - 1))
def test_laplacian_symmetric(g, seed):
    r = np.random.default_rng(seed)
    f, q = r.standard_normal(g.N), r.standard_normal(g.N)
    a = inner(g, discrete_laplacian(g, f), q)
    b = inner(g, f, discrete_laplacian(g, q))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12 * abs(inner(g, discrete_laplacian(g, f), f)))


def test_lp_norm_constant():
    g = make_grid(1, 1.0, 4)
    assert lp_norm(g, np.ones(4), 2) == pytest.approx(np.sqrt(4 * 0.4), rel=1e-12)
    assert lp_norm(g, np.ones(4), 2) == pytest.approx(1.264911, abs=1e-6)


@pytest.mark.parametrize("p", [1, 1.5, 2, 4, np.inf])
def test_lp_norm_zero(p):
    g = make_grid(2, 1.0, 4)
    assert lp_norm(g, np.zeros(g.N), p) == 0.0


def test_lp_norm_matches_inner(rng):
    g = make_grid(2, 3.0, 9)
    f = rng.standard_normal(g.N)
    assert lp_norm(g, f, 2) == pytest.approx(np.sqrt(inner(g, f, f)), rel=1e-14)
    assert lp_norm(g, f, np.inf) == np.max(np.abs(f))


def test_lp_norm_large_exponent_no_overflow():
    g = make_grid(1, 1.0, 8)
    f = np.full(8, 1e200)
    assert lp_norm(g, f, 8) == pytest.approx(1e200 * (8 * g.h) ** (1 / 8), rel=1e-12)


def test_lp_norm_rejects_small_p():
    g = make_grid(1, 1.0, 4)
    with pytest.raises(InvalidExponent):
        lp_norm(g, np.ones(4), 0.5)


@settings(max_examples=60, deadline=None)
@given(grids, st.floats(1.0, 6.0), st.floats(-5, 5), st.integers(0, 2 ** 32 - 1))
def test_lp_norm_is_a_norm(g, p, alpha, seed):
    r = np.random.default_rng(seed)
    f, q = r.standard_normal(g.N), r.standard_normal(g.N)
    assert lp_norm(g, f + q, p) <= (lp_norm(g, f, p) + lp_norm(g, q, p)) * (1 + 1e-12)
    assert lp_norm(g, alpha * f, p) == pytest.approx(abs(alpha) * lp_norm(g, f, p), rel=1e-12,
                                                     abs=1e-300)


def test_dirac_delta_values():
    g = make_grid(1, 1.0, 3)
    np.testing.assert_allclose(dirac_delta(g, 1), [0.0, 2.0, 0.0])


@pytest.mark.parametrize("dim, n", [(1, 7), (2, 5), (3, 4)])
def test_dirac_delta_unit_mass(dim, n):
    g = make_grid(dim, 1.3, n)
    for node in (0, g.N // 2, g.N - 1):
        assert g.cell_volume * dirac_delta(g, node).sum() == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("node", [-1, 3])
def test_dirac_delta_bad_node(node):
    with pytest.raises(IndexOutOfRange):
        dirac_delta(make_grid(1, 1.0, 3), node)


def test_window_and_center():
    g = make_grid(3, 2.0, 12)
    c = g.coords[g.center_node()]
    assert np.all(np.abs(c) <= g.h / 2 + 1e-12)
    mask = g.window_mask(0.5)
    assert mask[g.center_node()]
    assert np.all(np.max(np.abs(g.coords[mask]), axis=1) <= 1.0 + 1e-12)
