from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import graphs, random_graph
from oracles import reduced_residuals_fraction
from quasicert.errors import CapacityError, DomainError
from quasicert.generators import gnp, witness_kernel
from quasicert.graph import SimpleGraph, VertexSet
from quasicert.regularity import (
    Partition,
    ReducedMatrix,
    counting_estimate_check,
    fk_decompose,
    pair_quasirandom_delta,
    reduced_density_matrix,
    reduced_matrix_falsify,
    reduced_matrix_residuals,
)


def brute_pair_delta(G, A, B):
    d = Fraction(int(G.adj[np.ix_(A, B)].sum()), len(A) * len(B))
    best = Fraction(0)
    for xs in product([0, 1], repeat=len(A)):
        X = [a for a, keep in zip(A, xs) if keep]
        cols = [int(G.adj[X, b].sum()) - d * len(X) for b in B]
        best = max(best, sum(c for c in cols if c > 0), -sum(c for c in cols if c < 0))
    return best / (len(A) * len(B))


def test_partition_validation():
    with pytest.raises(DomainError):
        Partition(4, [VertexSet.from_indices(4, [0, 1]), VertexSet.from_indices(4, [1, 2, 3])])
    with pytest.raises(DomainError):
        Partition(4, [VertexSet.from_indices(4, [0, 1])])
    with pytest.raises(DomainError):
        Partition(3, [VertexSet.from_indices(3, []), VertexSet.full(3)])
    P = Partition.from_labels([2, 2, 0, 1, 0])
    assert P.sizes() == [2, 2, 1]
    assert P.labels().tolist() == [0, 0, 1, 2, 1]
    assert P.to_json() == ["0x3", "0x14", "0x8"]


@given(graphs(min_n=2, max_n=10), st.data())
def test_pair_delta_matches_enumeration(G, data):
    verts = list(range(G.n))
    cut = data.draw(st.integers(1, G.n - 1))
    A, B = verts[:cut], verts[cut:]
    exact = pair_quasirandom_delta(G, A, B)
    assert exact == pytest.approx(float(brute_pair_delta(G, A, B)), abs=1e-12)
    assert pair_quasirandom_delta(G, A, B, mode="heuristic") <= exact + 1e-12


def test_pair_delta_guards():
    G = gnp(50, 0.5)
    with pytest.raises(CapacityError):
        pair_quasirandom_delta(G, range(25), range(25, 50))
    assert pair_quasirandom_delta(G, range(10), range(10, 50)) >= 0
    with pytest.raises(DomainError):
        pair_quasirandom_delta(G, [], [1])


def test_counting_estimate_on_random_sets(rng):
    G = gnp(60, 0.5, seed=9)
    for _ in range(10):
        perm = rng.permutation(60)
        est = counting_estimate_check(G, perm[:8], perm[8:16], perm[16:24])
        assert est.holds
        assert est.deviation <= est.allowance + 1e-9


def test_fk_splits_two_cliques():
    G = SimpleGraph.disjoint_cliques([50, 50])
    P = fk_decompose(G, 0.05)
    assert P.certified and P.t == 2
    assert sorted(c.indices() for c in P.classes) == [list(range(50)), list(range(50, 100))]
    R = reduced_density_matrix(G, P)
    np.testing.assert_allclose(R.d, [[0.98, 0.0], [0.0, 0.98]])


def test_fk_leaves_random_graph_whole():
    P = fk_decompose(gnp(200, 0.5, seed=1), 0.05)
    assert P.certified and P.t == 1 and P.steps == 0


def test_fk_is_reproducible():
    G = random_graph(np.random.default_rng(5), 80)
    a, b = fk_decompose(G, 0.02, seed=3), fk_decompose(G, 0.02, seed=3)
    assert a.to_json() == b.to_json() and a.violations == b.violations


def test_reduced_residuals_of_witness():
    D = witness_kernel(0.5, 0.25).D
    cond, concl = reduced_matrix_residuals(D, 0.5)
    # only pairs with (M^2)_ij = 0 reach 1/16; pair (0, 2) gives 5/64
    assert cond == 5 / 64 == float(reduced_residuals_fraction(D.tolist(), 0.5)[0])
    assert concl == 0.25
    assert reduced_matrix_residuals(np.full((3, 3), 0.5), 0.5) == (0.0, 0.0)
    assert reduced_matrix_residuals(np.full((3, 3), 0.75), 0.5) == (0.75 ** 3 - 0.125, 0.25)
    with pytest.raises(DomainError):
        reduced_matrix_residuals(np.full((1, 1), 0.5), 0.5)


def test_reduced_residuals_large_t_path(rng):
    d = rng.random((70, 70))
    d = np.triu(d) + np.triu(d, 1).T
    cond, concl = reduced_matrix_residuals(d, 0.4)
    small = reduced_matrix_residuals(d[:60, :60], 0.4)
    ref = reduced_residuals_fraction(d[:60, :60].tolist(), 0.4)
    assert small == pytest.approx(tuple(float(x) for x in ref), abs=1e-12)
    assert concl == pytest.approx(np.abs(d - 0.4).max())
    assert cond > 0


def test_reduced_matrix_type():
    R = ReducedMatrix([[0.5, 0.25], [0.25, 1.0]], [3, 4])
    assert R.t == 2 and R.to_json()["sizes"] == [3, 4]
    with pytest.raises(DomainError):
        ReducedMatrix([[0.5, 0.2], [0.25, 1.0]], [3, 4])


def test_falsifier():
    res = reduced_matrix_falsify(0.5, 0.25, trials=4, seed=0)
    assert res.value > 0
    assert np.abs(res.matrix - 0.5).max() >= 0.25 - 1e-12
    assert res.value == reduced_matrix_falsify(0.5, 0.25, trials=4, seed=0).value
    with pytest.raises(DomainError):
        reduced_matrix_falsify(0.5, 0.25, trials=0)
