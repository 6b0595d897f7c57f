'''Estimated ||H_L||_{p->p} as the potential is scaled up

For p <= 2 the estimates stay within a small factor of each other across
four decades of kappa; at p = 2 they are exactly 1/sqrt(2).
Takes about half a minute.
'''
import numpy as np

from lpslab import PotentialSpec, SearchConfig, make_grid, scaling_sweep

grid = make_grid(1, 4.0, 64)
spec = PotentialSpec("CompactBump", 0.0, r=1.0)
cfg = SearchConfig(n_random=8, n_ascent=3, seed=1)
kappas = [0.0, 1.0, 10.0, 100.0]
ps = [1.25, 1.5, 2.0]

sweep = scaling_sweep(grid, spec, kappas, ps, "VerticalH", cfg)

print("kappa   " + "".join("p=%-10g" % p for p in ps))
for k in kappas:
    vals = [r["value"] for r in sweep.rows if r["kappa"] == k]
    print("%-7g " % k + "".join("%-12.6f" % v for v in vals))

for p in ps:
    vals = np.array([r["value"] for r in sweep.rows if r["p"] == p])
    print("p = %-5g spread max/min = %.3f" % (p, vals.max() / vals.min()))

# which starting fields won
print(sorted(set(sweep.column("argmax"))))
