"""Seeded random graphs and the non-forcing witness kernel.

All generators draw from numpy's PCG64 stream (``np.random.default_rng``).
Pairs are visited as u < v in lexicographic order and consume exactly one
uniform draw each, so a (seed, parameters) pair always yields the same graph.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .graph import SimpleGraph
from .kernels import StepKernel

# rows of the zero-row-sum sign pattern used by the witness kernel
WITNESS_SIGNS = np.array(
    [
        [1, -1, 1, -1],
        [-1, 1, -1, 1],
        [1, -1, -1, 1],
        [-1, 1, 1, -1],
    ],
    dtype=np.int64,
)


def _rng(seed) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.default_rng(seed)


def _from_pair_probs(n: int, probs: np.ndarray, rng: np.random.Generator) -> SimpleGraph:
    iu, ju = np.triu_indices(n, 1)
    draws = rng.random(len(iu))
    hit = draws < probs
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[iu[hit], ju[hit]] = 1
    adj[ju[hit], iu[hit]] = 1
    return SimpleGraph(adj)


def gnp(n: int, p: float, seed: int = 0) -> SimpleGraph:
    if n < 1:
        raise DomainError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    rng = _rng(seed)
    return _from_pair_probs(n, np.full(n * (n - 1) // 2, float(p)), rng)


def check_witness_signs(M: np.ndarray = WITNESS_SIGNS) -> None:
    """Symmetric, zero row sums, trace(M^3) = 0 and non-zero."""
    if not (M == M.T).all():
        raise AssertionError("witness sign matrix is not symmetric")
    if M.sum(axis=1).any():
        raise AssertionError("witness sign matrix has a non-zero row sum")
    if np.trace(M @ M @ M) != 0:
        raise AssertionError("witness sign matrix has trace(M^3) != 0")
    if not M.any():
        raise AssertionError("witness sign matrix is zero")


def witness_kernel(p: float, eps: float) -> StepKernel:
    """Four equal blocks with value ``p + eps * M``.

    Zero row sums of M kill every term of t(K2) and t(K3) that is linear in
    eps or runs through a path, and trace(M^3) = 0 kills the cubic term, so
    both densities equal those of the constant p kernel while the kernel
    itself is far from constant.
    """
    p, eps = float(p), float(eps)
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p must lie in (0, 1], got {p}")
    if not 0.0 < eps <= min(p, 1.0 - p):
        raise DomainError(f"eps must lie in (0, min(p, 1-p)], got {eps}")
    check_witness_signs()
    D = p + eps * WITNESS_SIGNS
    if (D < 0).any() or (D > 1).any():
        raise DomainError("witness kernel leaves [0, 1]")
    return StepKernel.uniform(D)


def sample_from_kernel(K: StepKernel, n: int, seed: int = 0) -> SimpleGraph:
    """W-random graph: i.i.d. block labels by inverse CDF, then pair coins."""
    if not K.is_graphon:
        raise DomainError("sampling needs a graphon (entries in [0, 1])")
    if n < 1:
        raise DomainError("n must be positive")
    rng = _rng(seed)
    cdf = np.cumsum(K.mu)
    labels = np.minimum(np.searchsorted(cdf, rng.random(n), side="right"), K.m - 1)
    iu, ju = np.triu_indices(n, 1)
    return _from_pair_probs(n, K.D[labels[iu], labels[ju]], rng)


def block_model(sizes, P, seed: int = 0) -> SimpleGraph:
    """Stochastic block model with exact class sizes, classes laid out in order."""
    sizes = [int(s) for s in sizes]
    P = np.asarray(P, dtype=np.float64)
    if P.shape != (len(sizes), len(sizes)):
        raise DomainError(f"P has shape {P.shape} but there are {len(sizes)} classes")
    if (P != P.T).any():
        raise DomainError("P must be symmetric")
    if (P < 0).any() or (P > 1).any():
        raise DomainError("P entries must lie in [0, 1]")
    if any(s < 0 for s in sizes) or sum(sizes) < 1:
        raise DomainError("class sizes must be non-negative with a positive total")
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    rng = _rng(seed)
    iu, ju = np.triu_indices(n, 1)
    return _from_pair_probs(n, P[labels[iu], labels[ju]], rng)


def block_model_exact(sizes, P, seed: int = 0) -> SimpleGraph:
    """Block model with prescribed edge counts between every pair of classes.

    Class pair (i, j) receives exactly ``round(P[i, j] * #pairs)`` edges,
    placed uniformly at random.  Class pairs are visited in lexicographic
    order and each draws one permutation of its candidate vertex pairs.
    """
    sizes = [int(s) for s in sizes]
    P = np.asarray(P, dtype=np.float64)
    if P.shape != (len(sizes), len(sizes)):
        raise DomainError(f"P has shape {P.shape} but there are {len(sizes)} classes")
    if (P != P.T).any() or (P < 0).any() or (P > 1).any():
        raise DomainError("P must be symmetric with entries in [0, 1]")
    if any(s < 0 for s in sizes) or sum(sizes) < 1:
        raise DomainError("class sizes must be non-negative with a positive total")
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    rng = _rng(seed)
    iu, ju = np.triu_indices(n, 1)
    li, lj = labels[iu], labels[ju]
    adj = np.zeros((n, n), dtype=np.uint8)
    for i in range(len(sizes)):
        for j in range(i, len(sizes)):
            idx = np.flatnonzero((li == i) & (lj == j))
            take = idx[rng.permutation(len(idx))[: int(round(P[i, j] * len(idx)))]]
            adj[iu[take], ju[take]] = 1
            adj[ju[take], iu[take]] = 1
    return SimpleGraph(adj)


def balanced_sizes(n: int, m: int) -> list[int]:
    """Split n vertices into m classes whose sizes differ by at most one."""
    return [n // m + (1 if i < n % m else 0) for i in range(m)]


def witness_graph(p: float, eps: float, n: int, seed: int = 0) -> SimpleGraph:
    """Finite member of the non-forcing family: the witness kernel realised
    on four balanced classes with exact edge counts per class pair."""
    K = witness_kernel(p, eps)
    if n < 4:
        raise DomainError("witness graphs need n >= 4")
    return block_model_exact(balanced_sizes(n, 4), K.D, seed)
