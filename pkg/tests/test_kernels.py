from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_graph
from oracles import brute_bilinear_max, brute_step_density
from quasicert.errors import CapacityError, DomainError
from quasicert.generators import witness_kernel
from quasicert.kernels import (
    StepKernel,
    constant_deviation,
    cut_distance_perm,
    cut_norm,
    kernel_triangle_operator,
    step_density,
    triangle_operator_residual,
)
from quasicert.patterns import builtin_pattern, cycle_pattern, hom_density

# triangle operator of the p = 1/2, eps = 1/4 witness, by exact rational arithmetic
WITNESS_U = np.array([[15, 3, 12, 4], [3, 15, 4, 12], [12, 4, 5, 9], [4, 12, 9, 5]]) / 64
WITNESS_T_C4_U = Fraction(35089, 2 ** 27)


@st.composite
def kernels(draw, max_m=4, graphon=True):
    m = draw(st.integers(1, max_m))
    w = draw(st.lists(st.integers(1, 9), min_size=m, max_size=m))
    lo = 0.0 if graphon else -1.0
    vals = draw(st.lists(st.floats(lo, 1.0, allow_nan=False), min_size=m * m, max_size=m * m))
    D = np.array(vals).reshape(m, m)
    D = np.triu(D) + np.triu(D, 1).T
    mu = np.array(w, dtype=float)
    return StepKernel(mu / mu.sum(), D)


def test_validation():
    with pytest.raises(DomainError):
        StepKernel([0.5, 0.5], [[0, 1], [0, 0]])
    with pytest.raises(DomainError):
        StepKernel([0.5, 0.6], np.zeros((2, 2)))
    with pytest.raises(DomainError):
        StepKernel([1.0, 0.0], np.zeros((2, 2)))
    with pytest.raises(DomainError):
        StepKernel.from_json({"m": 2, "mu": [1.0], "D": [[0]]})


def test_constant_kernel():
    K = StepKernel.constant(0.3)
    for name in ("K2", "K3", "C4", "S"):
        F = builtin_pattern(name)
        assert step_density(F, K) == pytest.approx(0.3 ** F.num_edges, abs=1e-15)
    assert kernel_triangle_operator(K).D[0, 0] == pytest.approx(0.027, abs=1e-15)
    assert constant_deviation(K, 0.3) == 0.0


def test_witness_kernel_values():
    W = witness_kernel(0.5, 0.25)
    assert step_density(builtin_pattern("K2"), W) == 0.5
    assert step_density(builtin_pattern("K3"), W) == 0.125
    assert step_density(builtin_pattern("C4"), W) == 0.064453125
    U = kernel_triangle_operator(W)
    np.testing.assert_allclose(U.D, WITNESS_U, rtol=0, atol=1e-15)
    assert triangle_operator_residual(W, 0.5) == 7 / 64
    assert step_density(cycle_pattern(4), U) == pytest.approx(float(WITNESS_T_C4_U), abs=1e-16)
    assert step_density(builtin_pattern("C4tri"), W) == pytest.approx(float(WITNESS_T_C4_U), abs=1e-16)
    assert constant_deviation(W, 0.5) == 1 / 32


def test_cut_norm_of_sign_kernel():
    signs = witness_kernel(0.5, 0.25) - 0.5
    value, S, T = cut_norm(signs * 4)
    assert value == 1 / 8
    R = signs.D[np.ix_(S, T)].sum() * 4 / 16
    assert abs(R) == value


@given(kernels(graphon=False))
def test_cut_norm_matches_enumeration(K):
    R = K.mu[:, None] * K.mu[None, :] * K.D
    value, S, T = cut_norm(K)
    assert value == pytest.approx(brute_bilinear_max(R), abs=1e-12)
    assert cut_norm(K, mode="heuristic")[0] <= value + 1e-12


@given(kernels(max_m=3))
def test_step_density_matches_enumeration(K):
    for name in ("K2", "K3", "C4"):
        F = builtin_pattern(name)
        assert step_density(F, K) == pytest.approx(brute_step_density(F.edges, F.k, K.mu, K.D), abs=1e-12)


@given(kernels(max_m=5))
def test_triangle_operator_identities(K):
    U = kernel_triangle_operator(K)
    assert step_density(builtin_pattern("K3"), K) == pytest.approx(step_density(builtin_pattern("K2"), U), abs=1e-12)
    assert step_density(builtin_pattern("C4tri"), K) == pytest.approx(step_density(cycle_pattern(4), U), abs=1e-12)


def test_graph_kernel_density_equals_hom_density(rng):
    G = random_graph(rng, 9)
    K = StepKernel.from_graph(G)
    for name in ("K2", "K3", "C4"):
        F = builtin_pattern(name)
        assert step_density(F, K) == pytest.approx(hom_density(F, G), abs=1e-14)


def test_permutation_invariance(rng):
    D = rng.random((5, 5))
    K = StepKernel.uniform(np.triu(D) + np.triu(D, 1).T)
    perm = rng.permutation(5)
    assert step_density(builtin_pattern("C4"), K.permuted(perm)) == pytest.approx(step_density(builtin_pattern("C4"), K))
    assert cut_distance_perm(K, K.permuted(perm)) == pytest.approx(0.0, abs=1e-15)


def test_cut_distance_guards():
    with pytest.raises(DomainError):
        cut_distance_perm(StepKernel.constant(0.5), StepKernel.uniform(np.zeros((2, 2))))
    with pytest.raises(CapacityError):
        big = StepKernel.uniform(np.zeros((9, 9)))
        cut_distance_perm(big, big)
    with pytest.raises(CapacityError):
        step_density(builtin_pattern("M"), StepKernel.uniform(np.zeros((6, 6))))


def test_json_round_trip():
    W = witness_kernel(0.5, 0.25)
    back = StepKernel.from_json(W.to_json())
    assert np.array_equal(back.D, W.D) and np.array_equal(back.mu, W.mu)
