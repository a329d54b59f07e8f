"""
Step kernels and the triangle operator
======================================

Kernels are block-constant symmetric functions.  Densities, cut norms and
the triangle operator are all computed exactly on the blocks.
"""

# %%
import numpy as np

from quasicert.generators import gnp
from quasicert.kernels import StepKernel, cut_distance_perm, cut_norm, kernel_triangle_operator, step_density
from quasicert.patterns import builtin_pattern, hom_density

rng = np.random.default_rng(0)
D = rng.random((3, 3))
K = StepKernel([0.2, 0.3, 0.5], np.triu(D) + np.triu(D, 1).T)
K2, K3, C4, C4tri = (builtin_pattern(nm) for nm in ("K2", "K3", "C4", "C4tri"))

# %%
# t(K3, K) = t(K2, U) and t(C4tri, K) = t(C4, U).
U = kernel_triangle_operator(K)
print(step_density(K3, K), step_density(K2, U))
print(step_density(C4tri, K), step_density(C4, U))

# %%
# A graph is a step kernel with n blocks of measure 1/n.
G = gnp(9, 0.5, seed=3)
print(step_density(C4, StepKernel.from_graph(G)), hom_density(C4, G))

# %%
# The cut norm is attained on unions of blocks, so 2^m x 2^m subsets suffice.
value, S, T = cut_norm(K - 0.5)
print(value, S, T)

# %%
# Densities are Lipschitz in the cut distance with constant e(F).  Block
# permutations give an upper bound on the distance.
A = StepKernel.uniform(np.triu(D) + np.triu(D, 1).T)
noise = 0.05 * rng.standard_normal((3, 3))
B = StepKernel.uniform(np.clip(A.permuted([2, 0, 1]).D + (noise + noise.T) / 2, 0, 1))
dist = cut_distance_perm(A, B)
print(dist, abs(step_density(C4, A) - step_density(C4, B)) <= 4 * dist + 1e-12)
