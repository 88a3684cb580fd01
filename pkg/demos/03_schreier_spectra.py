# Spectral gaps of random Schreier graphs of C2 wr S_n acting on signed points.
import numpy as np

from wreathwords.groups import builtin
from wreathwords.schreier import (ActionSpec, adjacency_mu, alon_bound, hashimoto_nu, ihara_nu,
                                  random_schreier, run_experiment, summarize, thm_bound)

C2 = builtin("cyclic2")
spec = ActionSpec("signed_points")
r = 4

print("Alon bound 2 sqrt(2r-1) = %.4f, with the k=1 correction %.4f" % (alon_bound(r), thm_bound(r, 1)))

g = random_schreier(spec, C2, 40, r, seed=3)
rep = adjacency_mu(g)
print("one graph on %d points: mu = %.4f, connected = %s" % (g.size, rep.mu, rep.connected))

# On a small graph the non-backtracking spectrum matches Ihara-Bass.
small = random_schreier(spec, C2, 6, 2, seed=3)
print("nu = %.6f  ihara = %.6f" % (hashimoto_nu(small)[0], ihara_nu(small)))

rows = run_experiment(spec, C2, [50, 100], r, 10, seed=1)
for n, s in summarize(rows).items():
    print(n, s)
mus = np.array([row["mu"] for row in rows])
print("max mu over all trials: %.4f" % mus.max())
