'''p = 2 constants of the five square functions, and the quadrature cross-check

Runs in a couple of seconds.
'''
import numpy as np

from lpslab import (ALL_KINDS, PotentialSpec, decompose, lp_norm, make_grid, make_potential,
                    square_function, square_function_quadrature)

grid = make_grid(1, 4.0, 128)
V = make_potential(grid, PotentialSpec("CompactBump", 5.0, r=1.0))
dec = decompose(grid, V)
print("lambda_1 = %.4f, lambda_N = %.1f" % (dec.eigenvalues[0], dec.eigenvalues[-1]))

rng = np.random.default_rng(0)
f = rng.standard_normal(grid.N)

# ||S f||_2 / ||f||_2 does not depend on f at p = 2, except for
# GradientOnlyG which drops the V term and is only bounded by 1/2
for kind in ALL_KINDS:
    S = square_function(dec, f, kind)
    print("%-18s ||Sf||/||f|| = %.12f" % (kind.value, lp_norm(grid, S, 2) / lp_norm(grid, f, 2)))

# same functions again from the defining time integrals
print()
grid = make_grid(1, 4.0, 64)
dec = decompose(grid, make_potential(grid, PotentialSpec("CompactBump", 5.0, r=1.0)))
f = rng.standard_normal(grid.N)
for kind in ALL_KINDS:
    S = square_function(dec, f, kind)
    Q, info = square_function_quadrature(dec, f, kind, full_output=True)
    err = np.linalg.norm(Q - S) / np.linalg.norm(S)
    print("%-18s rel. L2 gap %.2e  (head <= %.1e, tail <= %.1e)"
          % (kind.value, err, info["head_bound"], info["tail_bound"]))
