'''Vertical G-function at p = 4 on growing 3D boxes

With V = 0 the estimate is flat in R.  With a compact bump it creeps up as
the box grows around it (the bump stays fixed in physical units).
About a minute and a half: each box is a 1728 x 1728 eigenproblem.
'''
from lpslab import PotentialSpec, SearchConfig, domain_sweep

cfg = SearchConfig(n_random=2, n_ascent=1, seed=0)
R_list = [2.0, 4.0, 8.0]
zero = domain_sweep(3, R_list, 12, PotentialSpec("Zero"), 4.0, "VerticalG", cfg)
bump = domain_sweep(3, R_list, 12, PotentialSpec("CompactBump", 50.0, r=1.5), 4.0, "VerticalG", cfg)

print("R     h        V=0        bump")
for a, b in zip(zero.rows, bump.rows):
    print("%-5g %-8.4f %-10.6f %-10.6f" % (a["R"], a["h"], a["value"], b["value"]))
b = bump.column("value")
print("growth over R: %.3f" % (b[-1] / b[0]))
