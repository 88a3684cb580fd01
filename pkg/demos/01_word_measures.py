# Exact word measures on wreath products, step by step.
from wreathwords.exactnum import format_rf
from wreathwords.freegrp import build_w_graph, enumerate_quotients, parse_word
from wreathwords.groups import builtin, trivial
from wreathwords.measure import expect_stable, stable_inner
from wreathwords.oracle import exact_expectation, mc_expectation
from wreathwords.stable import StableFunction, parse_stable

# Start with the commutator over the trivial group, where G wr S_n is just S_n
# and Ind(phi0) counts fixed points.
w = parse_word("[a,b]")
G = trivial()
fix = StableFunction.ind(G, 0)

# The w-graph of w for the one-part partition is a single 4-cycle.
# Its fold-closed quotients are the terms of the sum.
g = build_w_graph(w, (1,))
for q in enumerate_quotients(g):
    print(q.partition, "chi =", q.image.euler_char())

res = expect_stable(w, fix, G)
print("E[fix] =", format_rf(res.value))        # n/(n-1)
print("Laurent:", [str(c) for c in res.laurent(4).coeffs])

# Check the closed form against brute force on S_3.
print("n=3:", res.evaluate_at(3), "oracle:", exact_expectation(w, fix, G, 3))

# Now a nontrivial base group.  Over C2 the sign character twists the count.
C2 = builtin("cyclic2")
f = parse_stable("Ind(phi1)^2", C2)
res = expect_stable(parse_word("aabb"), f, C2)
print("E_aabb[Ind(sgn)^2] over C2 =", format_rf(res.value))

# At larger n, enumeration is out of reach and sampling takes over.
mc = mc_expectation(parse_word("aabb"), f, C2, 30, samples=4000, seed=7)
print("n=30 exact:", "%.3f" % res.value(30).to_complex().real, "sampled: %.3f +- %.3f" % (mc.mean_re, mc.stderr_re))

# Stable inner products do not depend on n for n large.
print("<Ind(phi0)^3, 1> =", stable_inner(StableFunction.ind(G, 0) ** 3, StableFunction.constant(G, 1)))
