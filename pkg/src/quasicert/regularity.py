"""Weak regularity partitions, pair quasirandomness and reduced matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _search
from .errors import CapacityError, DomainError, InvariantBreach
from .graph import SimpleGraph, VertexSet, as_vertex_set, edge_count_pairwise, triangle_triples

PAIR_EXACT_MAX = 20


@dataclass
class Partition:
    n: int
    classes: list[VertexSet]
    history: list[tuple[VertexSet, VertexSet]] = field(default_factory=list)
    violations: list[float] = field(default_factory=list)
    certified: bool = False

    def __post_init__(self):
        seen = 0
        for c in self.classes:
            if c.n != self.n:
                raise DomainError("partition class built for a different n")
            if c.mask == 0:
                raise DomainError("partition classes must be non-empty")
            if seen & c.mask:
                raise DomainError("partition classes overlap")
            seen |= c.mask
        if seen != (1 << self.n) - 1:
            raise DomainError("partition classes do not cover all vertices")

    @classmethod
    def from_labels(cls, labels, **kw) -> "Partition":
        labels = np.asarray(labels)
        n = len(labels)
        order = []
        for v in labels.tolist():
            if v not in order:
                order.append(v)
        classes = [VertexSet.from_indices(n, np.flatnonzero(labels == lab).tolist()) for lab in order]
        return cls(n, classes, **kw)

    @property
    def t(self) -> int:
        return len(self.classes)

    @property
    def steps(self) -> int:
        return len(self.history)

    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=np.int64)
        for i, c in enumerate(self.classes):
            lab[c.indices()] = i
        return lab

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def to_json(self) -> list[str]:
        return [c.hex() for c in self.classes]


@dataclass
class ReducedMatrix:
    d: np.ndarray
    sizes: list[int]
    counts: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DomainError("reduced matrix must be square")
        if (d != d.T).any():
            raise DomainError("reduced matrix must be symmetric")
        if (d < 0).any() or (d > 1).any():
            raise DomainError("reduced densities must lie in [0, 1]")
        self.d = d

    @property
    def t(self) -> int:
        return self.d.shape[0]

    def to_json(self) -> dict:
        return {"t": self.t, "sizes": list(self.sizes), "d": self.d.tolist()}


def _one_hot(labels: np.ndarray, t: int) -> np.ndarray:
    H = np.zeros((len(labels), t), dtype=np.float64)
    H[np.arange(len(labels)), labels] = 1.0
    return H


def pair_quasirandom_delta(G: SimpleGraph, A, B, mode: str = "exact",
                           restarts: int = 32, seed: int = 0) -> float:
    """Smallest delta with e(X, Y) = d|X||Y| +- delta|A||B| for all X in A, Y in B."""
    A = as_vertex_set(G, A)
    B = as_vertex_set(G, B)
    if not len(A) or not len(B):
        raise DomainError("pair classes must be non-empty")
    ia, ib = A.indices(), B.indices()
    sub = G.adj[np.ix_(ia, ib)].astype(np.float64)
    size = len(ia) * len(ib)
    d = Fraction(edge_count_pairwise(G, A, B), size)
    R = sub - float(d)
    if mode == "exact":
        if min(len(ia), len(ib)) > PAIR_EXACT_MAX:
            raise CapacityError(f"exact pair delta needs a side with at most {PAIR_EXACT_MAX} vertices")
        if len(ia) <= PAIR_EXACT_MAX:
            opt = _search.maximize_exact(R)
            xs, ys = opt.rows, opt.cols
        else:
            opt = _search.maximize_exact(R.T)
            xs, ys = opt.cols, opt.rows
    elif mode == "heuristic":
        opt = _search.maximize_heuristic(R, restarts=restarts, seed=seed)
        xs, ys = opt.rows, opt.cols
    else:
        raise DomainError(f"unknown mode {mode!r}")
    X = VertexSet.from_indices(G.n, [ia[i] for i in np.flatnonzero(xs)])
    Y = VertexSet.from_indices(G.n, [ib[j] for j in np.flatnonzero(ys)])
    res = edge_count_pairwise(G, X, Y) - d * len(X) * len(Y)
    return float(abs(res) / size)


@dataclass
class CountingEstimate:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    deltas: tuple[float, float, float]
    delta: float
    triangles: int
    predicted: Fraction
    deviation: float
    allowance: float
    holds: bool


def counting_estimate_check(G: SimpleGraph, A, B, C, mode: str = "exact") -> CountingEstimate:
    """Compare Delta(A, B, C) with alpha*beta*gamma|A||B||C| +- 2 delta|A||B||C|.

    alpha, beta, gamma are the densities of (B, C), (C, A), (A, B); delta is
    the second smallest of the three measured pair deltas, since two
    quasirandom pairs suffice.
    """
    A, B, C = (as_vertex_set(G, X) for X in (A, B, C))
    if not (len(A) and len(B) and len(C)):
        raise DomainError("counting check needs non-empty sets")

    def dens(X, Y):
        return Fraction(edge_count_pairwise(G, X, Y), len(X) * len(Y))

    alpha, beta, gamma = dens(B, C), dens(C, A), dens(A, B)
    deltas = (
        pair_quasirandom_delta(G, B, C, mode=mode),
        pair_quasirandom_delta(G, C, A, mode=mode),
        pair_quasirandom_delta(G, A, B, mode=mode),
    )
    delta = sorted(deltas)[1]
    vol = len(A) * len(B) * len(C)
    tri = triangle_triples(G, A, B, C)
    predicted = alpha * beta * gamma * vol
    deviation = float(abs(tri - predicted))
    allowance = 2 * delta * vol
    holds = deviation <= allowance * (1 + 1e-12) + 1e-9
    if mode == "exact" and not holds:
        raise InvariantBreach(f"triangle count deviates by {deviation} > {allowance}")
    return CountingEstimate(alpha, beta, gamma, deltas, delta, tri, predicted, deviation, allowance, holds)


def _model_residual(adj: np.ndarray, labels: np.ndarray) -> np.ndarray:
    t = int(labels.max()) + 1
    H = _one_hot(labels, t)
    E = H.T @ adj @ H
    sizes = H.sum(axis=0)
    d = E / np.outer(sizes, sizes)
    return adj - d[np.ix_(labels, labels)]


def fk_decompose(G: SimpleGraph, delta: float, max_steps: int | None = None,
                 restarts: int = 32, seed: int = 0) -> Partition:
    """Frieze-Kannan style refinement driven by a heuristic cut oracle.

    Each step searches for (S, T) whose edge count deviates from the
    partition-average model by more than ``delta n^2`` and splits every class
    along S and T.  ``certified`` means the oracle found no violation; as the
    oracle is heuristic this certificate is one-sided.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if max_steps is None:
        max_steps = math.ceil(1.0 / delta ** 2)
    n = G.n
    adj = G.adj.astype(np.float64)
    labels = np.zeros(n, dtype=np.int64)
    history, violations = [], []
    certified = False
    for step in range(max_steps + 1):
        R = _model_residual(adj, labels)
        opt = _search.maximize_heuristic(R, restarts=restarts, seed=seed + step)
        value = abs(float(opt.rows.astype(np.float64) @ R @ opt.cols.astype(np.float64)))
        violations.append(value / n ** 2)
        if value <= delta * n ** 2:
            certified = True
            break
        if step == max_steps:
            break
        key = labels * 4 + opt.rows.astype(np.int64) * 2 + opt.cols.astype(np.int64)
        _, first, inv = np.unique(key, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        new_labels = rank[inv]
        if new_labels.max() <= labels.max():
            raise InvariantBreach("a violating cut failed to refine the partition")
        labels = new_labels
        history.append((VertexSet.from_indices(n, np.flatnonzero(opt.rows).tolist()),
                        VertexSet.from_indices(n, np.flatnonzero(opt.cols).tolist())))
    return Partition.from_labels(labels, history=history, violations=violations, certified=certified)


def reduced_density_matrix(G: SimpleGraph, P: Partition) -> ReducedMatrix:
    """d_ij = e(V_i, V_j) / (|V_i||V_j|) with ordered pairs on the diagonal."""
    if P.n != G.n:
        raise DomainError("partition and graph have different vertex counts")
    H = _one_hot(P.labels(), P.t)
    counts = np.rint(H.T @ G.adj.astype(np.float64) @ H).astype(np.int64)
    sizes = np.array(P.sizes(), dtype=np.int64)
    d = counts / np.outer(sizes, sizes)
    d = (d + d.T) / 2
    return ReducedMatrix(d, sizes.tolist(), counts)


def reduced_matrix_residuals(D, p: float) -> tuple[float, float]:
    """(condition residual, conclusion residual) for a reduced matrix.

    condition: max over i != j of |d_ij sum_k d_ik d_jk - p^3 t| / t;
    conclusion: max over all i, j of |d_ij - p|.
    """
    d = D.d if isinstance(D, ReducedMatrix) else np.asarray(D, dtype=np.float64)
    t = d.shape[0]
    if t < 2:
        raise DomainError("reduced matrix residuals need t >= 2")
    if t <= 64:
        fd = [[Fraction(float(x)) for x in row] for row in d]
        fp = Fraction(float(p))
        target = fp ** 3 * t
        cond = Fraction(0)
        for i in range(t):
            for j in range(t):
                if i == j:
                    continue
                val = fd[i][j] * sum(fd[i][k] * fd[j][k] for k in range(t))
                cond = max(cond, abs(val - target))
        concl = max(abs(x - fp) for row in fd for x in row)
        return float(cond / t), float(concl)
    inner = d @ d
    dev = np.abs(d * inner - p ** 3 * t)
    np.fill_diagonal(dev, 0.0)
    return float(dev.max() / t), float(np.abs(d - p).max())


def _condition_residual_np(d: np.ndarray, p: float) -> float:
    t = d.shape[0]
    dev = np.abs(d * (d @ d) - p ** 3 * t)
    np.fill_diagonal(dev, 0.0)
    return float(dev.max() / t)


@dataclass
class FalsifyResult:
    value: float
    matrix: np.ndarray
    trial: int


def _pattern_search(d, pinned, p, eps, rng, min_step=1e-5):
    t = d.shape[0]
    coords = [(i, j) for i in range(t) for j in range(i, t)]
    best = _condition_residual_np(d, p)
    step = 0.1
    while step >= min_step:
        improved = False
        for idx in rng.permutation(len(coords)):
            i, j = coords[idx]
            for direction in (1.0, -1.0):
                old = d[i, j]
                new = min(1.0, max(0.0, old + direction * step))
                if (i, j) == pinned and abs(new - p) < eps:
                    continue
                d[i, j] = d[j, i] = new
                val = _condition_residual_np(d, p)
                if val < best:
                    best, improved = val, True
                    break
                d[i, j] = d[j, i] = old
        if not improved:
            step /= 2
    return best


def reduced_matrix_falsify(p: float, eps: float, trials: int = 16, seed: int = 0,
                           t: int = 4) -> FalsifyResult:
    """Smallest condition residual found over matrices with some |d_ij - p| >= eps.

    Each trial pins one random entry at distance ``eps`` from p (on whichever
    side fits in [0, 1]), fills the rest with p (first trial) or uniform
    draws (later trials) and runs a compass search on the condition
    residual.  The result estimates how small the condition residual must be
    before every entry is forced within eps of p.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if t < 2:
        raise DomainError("t must be >= 2")
    p, eps = float(p), float(eps)
    sides = [s for s in (p + eps, p - eps) if 0.0 <= s <= 1.0]
    if not sides:
        raise DomainError(f"no entry in [0, 1] lies at distance {eps} from {p}")
    best = None
    for trial, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rng = np.random.default_rng(child)
        if trial == 0:
            d = np.full((t, t), p)
        else:
            d = rng.random((t, t))
            d = np.triu(d) + np.triu(d, 1).T
        i, j = sorted(rng.choice(t, size=2, replace=True).tolist())
        d[i, j] = d[j, i] = sides[int(rng.integers(len(sides)))]
        val = _pattern_search(d, (i, j), p, eps, rng)
        if best is None or val < best.value:
            best = FalsifyResult(val, d.copy(), trial)
    return best
