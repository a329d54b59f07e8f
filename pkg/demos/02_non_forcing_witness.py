"""
Edge and triangle densities do not force quasirandomness
========================================================

A four-block kernel p + eps*M has the same edge and triangle densities as
the constant kernel p but is far from constant.  The triangle-expanded
4-cycle notices the difference.
"""

# %%
from quasicert.generators import WITNESS_SIGNS, witness_graph, witness_kernel
from quasicert.kernels import constant_deviation, kernel_triangle_operator, step_density
from quasicert.patterns import builtin_pattern, cycle_pattern, fast_density, forcing_delta

p, eps = 0.5, 0.25
W = witness_kernel(p, eps)
print(WITNESS_SIGNS)
print(W.D)

# %%
# Zero row sums and trace(M^3) = 0 make the edge and triangle densities exact.
for name in ("K2", "K3", "C4"):
    F = builtin_pattern(name)
    print(f"t({name}, W) = {step_density(F, W):.6f}   p^e = {p ** F.num_edges:.6f}")
print("cut distance to the constant:", constant_deviation(W, p))

# %%
# The triangle operator U is not constant, and t(C4, U) = t(C4tri, W) sits
# above p^12.
U = kernel_triangle_operator(W)
print(U.D * 64)
print(step_density(builtin_pattern("C4tri"), W), step_density(cycle_pattern(4), U), p ** 12)

# %%
# Finite graphs from the family: four balanced classes, exact edge counts per
# class pair.  Densities of K2 and K3 stay close to p and p^3, while the
# slack needed for the pair (K3, C4tri) stays away from zero.
for seed in range(3):
    G = witness_graph(p, eps, 400, seed=seed)
    print(seed, round(fast_density("K2", G), 4), round(fast_density("K3", G), 4),
          round(float(forcing_delta(G, p, cycle_pattern(4))), 4))
