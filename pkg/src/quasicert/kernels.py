"""Step kernels: block-constant symmetric functions on the unit square.

A kernel is a block-measure vector ``mu`` and a symmetric matrix ``D``; it
is a graphon when every entry of ``D`` lies in [0, 1].  Entries may be
negative, so differences like ``K - p`` are kernels too.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import _search
from .errors import CapacityError, DomainError
from .graph import SimpleGraph
from .patterns import Pattern, _contract

SYMMETRY_TOL = 1e-12
DENSITY_WORK_LIMIT = 10 ** 9
CUT_NORM_EXACT_MAX_M = 24
CUT_DISTANCE_MAX_M = 8


@dataclass(frozen=True)
class StepKernel:
    mu: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        mu = np.array(self.mu, dtype=np.float64).ravel()
        D = np.array(self.D, dtype=np.float64)
        if D.ndim != 2 or D.shape != (len(mu), len(mu)):
            raise DomainError(f"D has shape {D.shape}, expected {(len(mu), len(mu))}")
        if len(mu) == 0:
            raise DomainError("kernel needs at least one block")
        if (mu <= 0).any():
            raise DomainError("block measures must be positive")
        if abs(mu.sum() - 1.0) > SYMMETRY_TOL:
            raise DomainError(f"block measures sum to {mu.sum()}, not 1")
        if np.abs(D - D.T).max() > SYMMETRY_TOL:
            raise DomainError("kernel matrix must be symmetric")
        D = (D + D.T) / 2
        mu.flags.writeable = False
        D.flags.writeable = False
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "D", D)

    @property
    def m(self) -> int:
        return len(self.mu)

    @property
    def is_graphon(self) -> bool:
        return bool(((self.D >= 0) & (self.D <= 1)).all())

    @classmethod
    def constant(cls, p: float) -> "StepKernel":
        return cls([1.0], [[float(p)]])

    @classmethod
    def uniform(cls, D) -> "StepKernel":
        D = np.asarray(D, dtype=np.float64)
        return cls(np.full(D.shape[0], 1.0 / D.shape[0]), D)

    @classmethod
    def from_graph(cls, G: SimpleGraph) -> "StepKernel":
        """W_G: n blocks of measure 1/n carrying the adjacency matrix."""
        return cls.uniform(G.adj)

    def permuted(self, perm) -> "StepKernel":
        perm = np.asarray(perm)
        return StepKernel(self.mu[perm], self.D[np.ix_(perm, perm)])

    def _compatible(self, other: "StepKernel"):
        if self.m != other.m or not np.allclose(self.mu, other.mu, rtol=0, atol=SYMMETRY_TOL):
            raise DomainError("kernels must share their block structure")

    def __sub__(self, other):
        if isinstance(other, StepKernel):
            self._compatible(other)
            return StepKernel(self.mu, self.D - other.D)
        return StepKernel(self.mu, self.D - float(other))

    def __add__(self, other):
        if isinstance(other, StepKernel):
            self._compatible(other)
            return StepKernel(self.mu, self.D + other.D)
        return StepKernel(self.mu, self.D + float(other))

    def __mul__(self, c):
        return StepKernel(self.mu, self.D * float(c))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"m": self.m, "mu": self.mu.tolist(), "D": self.D.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "StepKernel":
        try:
            m, mu, D = int(obj["m"]), obj["mu"], obj["D"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"kernel JSON needs keys m, mu, D: {exc}") from None
        if len(mu) != m:
            raise DomainError(f"kernel JSON declares m={m} but mu has {len(mu)} entries")
        return cls(mu, D)


def step_density(F: Pattern, K: StepKernel) -> float:
    """t(F, K), summed over all block assignments of the pattern vertices."""
    if float(K.m) ** F.k > DENSITY_WORK_LIMIT:
        raise CapacityError(f"m^v(F) = {K.m}^{F.k} exceeds the guard {DENSITY_WORK_LIMIT}")
    return float(_contract(F, K.D[None], None, vertex_weights=K.mu[None])[0])


def cut_norm(K: StepKernel, mode: str = "exact", restarts: int = 32, seed: int = 0):
    """(||K||_cut, S, T) with S, T lists of block indices attaining it.

    The objective is bilinear in the block-membership fractions, so its
    maximum over measurable sets is attained on unions of whole blocks.
    """
    R = K.mu[:, None] * K.mu[None, :] * K.D
    if mode == "exact":
        if K.m > CUT_NORM_EXACT_MAX_M:
            raise CapacityError(f"exact cut norm supports m <= {CUT_NORM_EXACT_MAX_M}; use mode='heuristic'")
        opt = _search.maximize_exact(R)
    elif mode == "heuristic":
        opt = _search.maximize_heuristic(R, restarts=restarts, seed=seed)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    S = np.flatnonzero(opt.rows).tolist()
    T = np.flatnonzero(opt.cols).tolist()
    value = abs(float(R[np.ix_(S, T)].sum())) if S and T else 0.0
    return value, S, T


def cut_distance_perm(K1: StepKernel, K2: StepKernel) -> float:
    """min over block permutations of ||K1 - K2^pi||_cut.

    Measure-preserving maps may also split blocks, so this is an upper bound
    on the cut distance, not the distance itself.
    """
    if K1.m != K2.m:
        raise DomainError("kernels must have the same number of blocks")
    uniform = np.full(K1.m, 1.0 / K1.m)
    if not (np.allclose(K1.mu, uniform) and np.allclose(K2.mu, uniform)):
        raise DomainError("cut_distance_perm needs uniform block measures")
    if K1.m > CUT_DISTANCE_MAX_M:
        raise CapacityError(f"permutation search supports m <= {CUT_DISTANCE_MAX_M}")
    best = np.inf
    for perm in permutations(range(K1.m)):
        best = min(best, cut_norm(K1 - K2.permuted(perm))[0])
    return float(best)


def kernel_triangle_operator(K: StepKernel) -> StepKernel:
    """U(i, j) = D(i, j) * sum_k mu(k) D(i, k) D(j, k)."""
    inner = (K.D * K.mu[None, :]) @ K.D
    return StepKernel(K.mu, K.D * inner)


def triangle_operator_residual(K: StepKernel, p: float) -> float:
    """max |U(i, j) - p^3|; zero exactly when U is the constant p^3."""
    return float(np.abs(kernel_triangle_operator(K).D - float(p) ** 3).max())


def constant_deviation(K: StepKernel, p: float, mode: str = "exact") -> float:
    """||K - p||_cut; zero iff K equals p on all blocks."""
    return cut_norm(K - p, mode=mode)[0]
