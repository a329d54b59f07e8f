import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import graphs, random_graph
from oracles import brute_edge_discrepancy, brute_ordered_cliques, greedy_y_bilinear_max
from quasicert.errors import CapacityError, DomainError
from quasicert.generators import gnp
from quasicert.graph import SimpleGraph, triangle_weight_matrix
from quasicert.discrepancy import (
    cauchy_schwarz_audit,
    cauchy_schwarz_counts,
    clique_discrepancy,
    clique_residual,
    csi_gap,
    edge_discrepancy,
    edge_residual,
    triangle_discrepancy,
)

P_VALUES = st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0])


def test_two_cliques_exact_value():
    G = SimpleGraph.disjoint_cliques([8, 8])
    rep = edge_discrepancy(G, 0.5)
    # frozen from the double-enumeration oracle
    assert Fraction(rep.value) == Fraction(1, 8) == brute_edge_discrepancy(G.adj, Fraction(1, 2))
    assert edge_discrepancy(G, 0.5, mode="heuristic").value <= rep.value


def test_complete_graph_with_p_one():
    # e(X, Y) - |X||Y| = -|X & Y|, largest at X = Y = V
    rep = edge_discrepancy(SimpleGraph.complete(7), 1.0)
    assert rep.value == pytest.approx(1 / 7)


@given(graphs(max_n=8), P_VALUES)
def test_edge_exact_matches_oracle(G, p):
    rep = edge_discrepancy(G, p)
    assert Fraction(rep.value) == pytest.approx(brute_edge_discrepancy(G.adj, Fraction(p)), abs=1e-12)
    assert abs(edge_residual(G, p, *rep.witnesses)) / G.n ** 2 == pytest.approx(rep.value)
    assert edge_discrepancy(G, p, mode="heuristic", restarts=4).value <= rep.value + 1e-12


@given(graphs(max_n=8), P_VALUES)
def test_triangle_exact_matches_oracle(G, p):
    rep = triangle_discrepancy(G, p)
    R = triangle_weight_matrix(G) - p ** 3 * G.n
    assert rep.value == pytest.approx(greedy_y_bilinear_max(R) / G.n ** 3, abs=1e-12)
    assert triangle_discrepancy(G, p, mode="heuristic", restarts=4).value <= rep.value + 1e-12


def test_mode_guards():
    G = gnp(25, 0.5)
    with pytest.raises(CapacityError):
        edge_discrepancy(G, 0.5, mode="exact")
    assert edge_discrepancy(G, 0.5, mode="auto").mode == "heuristic"
    with pytest.raises(DomainError):
        edge_discrepancy(G, 1.5)
    with pytest.raises(DomainError):
        edge_discrepancy(G, 0.5, mode="fast")


def test_heuristic_is_seeded():
    G = gnp(60, 0.5, seed=1)
    a = edge_discrepancy(G, 0.5, mode="heuristic", seed=3)
    b = edge_discrepancy(G, 0.5, mode="heuristic", seed=3)
    assert a.to_json() == b.to_json()


def test_clique_single_set_on_k6():
    G = SimpleGraph.complete(6)
    rep = clique_discrepancy(G, 1.0, 4, 1)
    best = max(abs(brute_ordered_cliques(G.adj, 4, [X], 6) - 6 ** 3 * len(X))
               for r in range(7) for X in [list(range(r))])
    assert rep.value == pytest.approx(best / 6 ** 4)


def test_clique_free_graph_with_p_zero():
    assert clique_discrepancy(SimpleGraph.cycle(7), 0.0, 3, 2).value == 0.0
    assert clique_discrepancy(SimpleGraph.cycle(7), 0.0, 3, 3, mode="heuristic").value == 0.0


@given(graphs(min_n=2, max_n=6), P_VALUES)
def test_clique_pair_exact_matches_enumeration(G, p):
    n = G.n
    rep = clique_discrepancy(G, p, 3, 2)
    subsets = [[i for i in range(n) if s >> i & 1] for s in range(1 << n)]
    best = max(abs(brute_ordered_cliques(G.adj, 3, [X, Y], n) - Fraction(p) ** 3 * n * len(X) * len(Y))
               for X, Y in product(subsets, subsets))
    assert rep.value == pytest.approx(float(best) / n ** 3, abs=1e-12)
    assert abs(clique_residual(G, p, 3, rep.witnesses)) / n ** 3 == pytest.approx(rep.value)


def test_csi_gap_examples():
    assert csi_gap([1, 1, 1], 1.0) == (0.0, 0.0)
    assert csi_gap([2, 0], 1.0) == (1.0, 1.0)
    with pytest.raises(DomainError):
        csi_gap([1, 2], 1.0)


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=64))
def test_csi_gap_bound(xs):
    nu, dev = csi_gap(xs, math.fsum(xs) / len(xs))
    assert dev <= nu * len(xs) + 1e-9


@given(graphs(max_n=10))
def test_cauchy_schwarz_integer_inequalities(G):
    sum_t, sum_t2, sum_s2 = cauchy_schwarz_counts(G)
    assert sum_t ** 2 <= G.n * sum_t2
    assert sum_t2 ** 2 <= G.n ** 2 * sum_s2


def test_audit_on_random_graph():
    audit = cauchy_schwarz_audit(gnp(120, 0.5, seed=4), 0.5)
    assert audit.chain_holds
    assert audit.a ** 4 <= audit.b ** 2 * (1 + 1e-12) and audit.b ** 2 <= audit.c * (1 + 1e-12)
    assert audit.measured_tdisc <= audit.bound
    assert audit.to_json()["sum_t"] == str(audit.sum_t)


def test_audit_on_complete_graph():
    # K_n at p = 1 has a = (n-1)(n-2)/n^2 so delta = 1 - a
    n = 10
    audit = cauchy_schwarz_audit(SimpleGraph.complete(n), 1.0, tdisc_mode="exact")
    assert audit.delta == pytest.approx(1 - (n - 1) * (n - 2) / n ** 2)
    assert audit.measured_tdisc <= audit.bound
