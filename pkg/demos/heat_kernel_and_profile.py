'''Heat kernel against the free Gaussian, and the harmonic profile of a bump

On the coarse grid the ratio k_t / Gaussian stays within a few percent of 1
from t = 10 h^2 on.  On the finer grid the lattice kernel's far tail beats
the Gaussian by an order of magnitude at t = 10 h^2 and only settles later.
'''
import numpy as np

from lpslab import PotentialSpec, assemble, decompose, make_grid, make_potential
from lpslab import inequalities as ineq

for n in (32, 64):
    grid = make_grid(1, 4.0, n)
    dec = decompose(grid, np.zeros(grid.N))
    t_list = np.geomspace(10 * grid.h ** 2, grid.R ** 2 / 4, 6)
    rep = ineq.check_gaussian_36(dec, grid.center_node(), t_list)
    print("n=%-3d" % n, " ".join("%.3f" % r for r in rep.diagnostics["ratio_per_t"]))

grid = make_grid(1, 4.0, 64)
V = make_potential(grid, PotentialSpec("CompactBump", 50.0, r=1.0))
phi = ineq.solve_harmonic_profile(assemble(grid, V))
print()
print("phi min %.4f at x=%.3f, max %.4f" % (phi.min(), grid.coords[phi.argmin(), 0], phi.max()))
for i in range(0, grid.n, 8):
    print("x=%6.3f  V=%7.3f  phi=%.5f" % (grid.coords[i, 0], V[i], phi[i]))

# the semigroup nearly fixes phi on the inner window for short times
osc = ineq.oscillation_probe(decompose(grid, V), phi, t_list=[0.01, 0.1, 1.0, 10.0])
print("window oscillation of e^{-tL} phi:", np.round(osc.diagnostics["osc"], 5))
