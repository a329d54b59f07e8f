"""
Searching for discrepancy
=========================

Edge and triangle discrepancy maximise a bilinear form over pairs of vertex
sets.  Small graphs are solved exactly by enumeration; larger ones by
alternating best responses, which give lower bounds.
"""

# %%
from quasicert.discrepancy import cauchy_schwarz_audit, clique_discrepancy, edge_discrepancy, triangle_discrepancy
from quasicert.generators import gnp, witness_graph
from quasicert.graph import SimpleGraph

# %%
# Two disjoint cliques: the best cut pairs one clique with itself.
G = SimpleGraph.disjoint_cliques([8, 8])
exact = edge_discrepancy(G, 0.5)
print(exact.value, [w.hex() for w in exact.witnesses])
print(edge_discrepancy(G, 0.5, mode="heuristic").value)

# %%
# The heuristic never beats the exact answer and usually matches it.
for seed in range(4):
    H = gnp(14, 0.5, seed=seed)
    print(seed, edge_discrepancy(H, 0.5).value, edge_discrepancy(H, 0.5, mode="heuristic").value,
          triangle_discrepancy(H, 0.5).value, triangle_discrepancy(H, 0.5, mode="heuristic").value)

# %%
# At n = 400 the random graph and the witness graph look alike in degrees,
# but the witness has a visibly larger edge discrepancy.
print(edge_discrepancy(gnp(400, 0.5, seed=0), 0.5, mode="heuristic").value)
print(edge_discrepancy(witness_graph(0.5, 0.25, 400, seed=0), 0.5, mode="heuristic").value)

# %%
# Clique discrepancy with two free sets, here for triangles.
print(clique_discrepancy(gnp(16, 0.5, seed=2), 0.5, 3, 2).value)

# %%
# Near-correct counts of K3 and C4tri bound the triangle discrepancy via
# two Cauchy-Schwarz steps.  The audit reports the normalised counts, the
# slack delta they imply and the resulting bound 8 delta^(1/4) p^3.
audit = cauchy_schwarz_audit(gnp(400, 0.5, seed=0), 0.5)
print(audit.to_json())
