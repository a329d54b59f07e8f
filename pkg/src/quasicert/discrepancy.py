"""Edge, triangle and clique discrepancies, plus the Cauchy-Schwarz audit.

Every discrepancy is ``max |count(X_1, ..., X_l) - expected| / n^k`` over
vertex sets.  Exact modes enumerate one set and pick the last one greedily;
heuristic modes alternate best responses and only ever report lower bounds.
Reported values are always recomputed from the witness sets with exact
integer counts, so re-evaluating a witness reproduces the value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import _search
from .errors import CapacityError, DomainError, InvariantBreach
from .graph import (
    SimpleGraph,
    VertexSet,
    _mask_indices,
    as_vertex_set,
    edge_count_pairwise,
    exact_sum,
    exact_sum_squares,
    s_matrix,
    triangle_degrees,
    triangle_triples,
    triangle_weight_matrix,
)

EDGE_EXACT_MAX_N = 24
TRIANGLE_EXACT_MAX_N = 22
CLIQUE_EXACT_MAX_N = 18
MAX_CLIQUE_TUPLES = 20_000_000
DEFAULT_RESTARTS = 32


@dataclass
class DiscrepancyReport:
    kind: str
    p: float
    value: float
    witnesses: list[VertexSet]
    mode: str
    seed: int | None = None
    restarts: int | None = None
    steps: int | None = None
    residual: Fraction | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "value": self.value,
            "mode": self.mode,
            "witnesses": [w.hex() for w in self.witnesses],
            "seed": self.seed,
        }


def _check_p(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return p


def _resolve_mode(mode: str, n: int, limit: int) -> str:
    if mode == "auto":
        return "exact" if n <= limit else "heuristic"
    if mode not in ("exact", "heuristic"):
        raise DomainError(f"mode must be exact, heuristic or auto, got {mode!r}")
    if mode == "exact" and n > limit:
        raise CapacityError(f"exact mode supports n <= {limit}, got n={n}; use heuristic mode")
    return mode


def _bool_set(n, flags) -> VertexSet:
    return VertexSet.from_indices(n, np.flatnonzero(flags).tolist())


def _optimize(R, mode, restarts, seed):
    if mode == "exact":
        return _search.maximize_exact(R)
    return _search.maximize_heuristic(R, restarts=restarts, seed=seed)


def edge_residual(G: SimpleGraph, p: float, X, Y) -> Fraction:
    """e(X, Y) - p|X||Y| as an exact rational (p taken at its binary value)."""
    X = as_vertex_set(G, X)
    Y = as_vertex_set(G, Y)
    return edge_count_pairwise(G, X, Y) - Fraction(p) * len(X) * len(Y)


def triangle_residual(G: SimpleGraph, p: float, A, B) -> Fraction:
    """Delta(A, B, V) - p^3 |A||B| n."""
    A = as_vertex_set(G, A)
    B = as_vertex_set(G, B)
    return triangle_triples(G, A, B, G.all_vertices()) - Fraction(p) ** 3 * len(A) * len(B) * G.n


def edge_discrepancy(G: SimpleGraph, p: float, mode: str = "exact",
                     restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> DiscrepancyReport:
    p = _check_p(p)
    mode = _resolve_mode(mode, G.n, EDGE_EXACT_MAX_N)
    R = G.adj.astype(np.float64) - p
    opt = _optimize(R, mode, restarts, seed)
    X, Y = _bool_set(G.n, opt.rows), _bool_set(G.n, opt.cols)
    res = edge_residual(G, p, X, Y)
    return DiscrepancyReport("edge", p, float(abs(res) / G.n ** 2), [X, Y], mode,
                             seed=seed if mode == "heuristic" else None,
                             restarts=restarts if mode == "heuristic" else None,
                             steps=opt.iterations, residual=res)


def triangle_discrepancy(G: SimpleGraph, p: float, mode: str = "exact",
                         restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> DiscrepancyReport:
    p = _check_p(p)
    mode = _resolve_mode(mode, G.n, TRIANGLE_EXACT_MAX_N)
    R = triangle_weight_matrix(G).astype(np.float64) - p ** 3 * G.n
    opt = _optimize(R, mode, restarts, seed)
    A, B = _bool_set(G.n, opt.rows), _bool_set(G.n, opt.cols)
    res = triangle_residual(G, p, A, B)
    return DiscrepancyReport("triangle", p, float(abs(res) / G.n ** 3), [A, B], mode,
                             seed=seed if mode == "heuristic" else None,
                             restarts=restarts if mode == "heuristic" else None,
                             steps=opt.iterations, residual=res)


# --- cliques ------------------------------------------------------------------

def enumerate_cliques(G: SimpleGraph, k: int) -> np.ndarray:
    """All k-cliques as sorted index rows, shape (count, k)."""
    rows = G.rows
    out = []

    def grow(clique, cand):
        if len(clique) == k:
            out.append(tuple(clique))
            return
        for v in _mask_indices(cand):
            grow(clique + [v], cand & rows[v] & ~((1 << (v + 1)) - 1))

    if k == 1:
        return np.arange(G.n, dtype=np.int64)[:, None]
    grow([], (1 << G.n) - 1)
    return np.array(out, dtype=np.int64).reshape(-1, k)


def _ordered_clique_tuples(G: SimpleGraph, k: int, l: int) -> tuple[np.ndarray, int]:
    """Ordered l-prefixes of ordered k-cliques; each row stands for (k-l)! tuples."""
    Q = enumerate_cliques(G, k)
    perms = [p for p in permutations(range(k), l)]
    if len(Q) * len(perms) > MAX_CLIQUE_TUPLES:
        raise CapacityError(f"{len(Q)} {k}-cliques give too many ordered tuples")
    if len(Q) == 0:
        return np.zeros((0, l), dtype=np.int64), math.factorial(k - l)
    tuples = Q[:, np.array(perms)].reshape(-1, l)
    return tuples, math.factorial(k - l)


def clique_tuple_count(G: SimpleGraph, k: int, sets) -> int:
    """Ordered k-tuples spanning a K_k whose i-th entry lies in sets[i]."""
    sets = [as_vertex_set(G, X) for X in sets]
    tuples, mult = _ordered_clique_tuples(G, k, len(sets))
    keep = np.ones(len(tuples), dtype=bool)
    for i, X in enumerate(sets):
        keep &= X.indicator()[tuples[:, i]].astype(bool)
    return int(keep.sum()) * mult


def clique_residual(G: SimpleGraph, p: float, k: int, sets) -> Fraction:
    sets = [as_vertex_set(G, X) for X in sets]
    expected = Fraction(p) ** math.comb(k, 2) * G.n ** (k - len(sets)) * math.prod(len(X) for X in sets)
    return clique_tuple_count(G, k, sets) - expected


def _multilinear_heuristic(tuples, mult, n, l, c, restarts, seed):
    rng = np.random.default_rng(seed)
    best = None
    steps = 0

    def objective(ind):
        keep = np.ones(len(tuples), dtype=bool)
        for i in range(l):
            keep &= ind[i][tuples[:, i]]
        return float(keep.sum()) * mult - c * math.prod(float(x.sum()) for x in ind)

    for _ in range(restarts):
        start = [rng.random(n) < 0.5 for _ in range(l)]
        for sign in (1, -1):
            ind = [s.copy() for s in start]
            prev = sign * objective(ind)
            while True:
                steps += 1
                for i in range(l):
                    keep = np.ones(len(tuples), dtype=bool)
                    for j in range(l):
                        if j != i:
                            keep &= ind[j][tuples[:, j]]
                    marg = np.bincount(tuples[keep, i], minlength=n).astype(np.float64) * mult
                    marg -= c * math.prod(float(ind[j].sum()) for j in range(l) if j != i)
                    ind[i] = sign * marg > 0
                val = sign * objective(ind)
                if val <= prev + 1e-12:
                    break
                prev = val
            if best is None or val > best[0]:
                best = (val, [x.copy() for x in ind])
    return best[1], steps


def clique_discrepancy(G: SimpleGraph, p: float, k: int, l: int, mode: str = "exact",
                       restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> DiscrepancyReport:
    """Discrepancy of ordered K_k counts over ``l`` free vertex sets.

    Positions ``l+1..k`` of the tuple range over all of V.
    """
    p = _check_p(p)
    if not 2 <= k <= 5:
        raise DomainError(f"k must lie in 2..5, got {k}")
    if not 1 <= l <= k:
        raise DomainError(f"l must lie in 1..k, got {l}")
    if mode == "exact" and l > 2:
        raise DomainError("exact clique discrepancy needs l <= 2")
    if mode == "auto" and l > 2:
        mode = "heuristic"
    mode = _resolve_mode(mode, G.n, CLIQUE_EXACT_MAX_N)
    n = G.n
    c = p ** math.comb(k, 2) * n ** (k - l)
    tuples, mult = _ordered_clique_tuples(G, k, l)
    steps = 0
    if l == 1:
        marg = np.bincount(tuples[:, 0], minlength=n).astype(np.float64) * mult - c
        pos, neg = np.maximum(marg, 0).sum(), np.maximum(-marg, 0).sum()
        sets = [marg > 0] if pos >= neg else [marg < 0]
    elif l == 2:
        M = np.zeros((n, n), dtype=np.float64)
        np.add.at(M, (tuples[:, 0], tuples[:, 1]), float(mult))
        opt = _optimize(M - c, mode, restarts, seed)
        sets, steps = [opt.rows, opt.cols], opt.iterations
    else:
        sets, steps = _multilinear_heuristic(tuples, mult, n, l, c, restarts, seed)
    witnesses = [_bool_set(n, s) for s in sets]
    res = clique_residual(G, p, k, witnesses)
    heur = mode == "heuristic"
    return DiscrepancyReport(f"clique{k},{l}", p, float(abs(res) / n ** k), witnesses, mode,
                             seed=seed if heur else None, restarts=restarts if heur else None,
                             steps=steps, residual=res)


# --- Cauchy-Schwarz machinery -------------------------------------------------

def csi_gap(xs, alpha: float) -> tuple[float, float]:
    """(nu, max prefix deviation) for a vector with mean ``alpha``.

    Whenever sum(xs) = alpha * n the prefix sums obey
    ``|sum(xs[:m]) - alpha m| <= nu * n`` for every m.
    """
    x = np.asarray(xs, dtype=np.float64).ravel()
    n = len(x)
    if n == 0:
        raise DomainError("csi_gap needs a non-empty vector")
    if abs(x.sum() - alpha * n) > 1e-9 * n * max(1.0, abs(alpha)):
        raise DomainError(f"sum(xs) = {x.sum()} differs from alpha * n = {alpha * n}")
    nu = math.sqrt(max(0.0, float(np.dot(x, x)) / n - alpha * alpha))
    prefix = np.concatenate([[0.0], np.cumsum(x)])
    dev = float(np.max(np.abs(prefix - alpha * np.arange(n + 1))))
    return nu, dev


@dataclass
class CauchySchwarzAudit:
    """Normalised K3, S and C4tri counts and the two-sets bound they imply.

    hom(K3) = a p^3 n^3, hom(S) = b p^6 n^5, hom(C4tri) = c p^12 n^8.
    """

    p: float
    n: int
    a: float
    b: float
    c: float
    delta: float
    bound: float
    measured_tdisc: float
    chain_holds: bool
    sum_t: int
    sum_t2: int
    sum_s2: int
    tdisc_report: DiscrepancyReport | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "p": self.p, "n": self.n, "a": self.a, "b": self.b, "c": self.c,
            "delta": self.delta, "bound": self.bound, "measured_tdisc": self.measured_tdisc,
            "chain_holds": self.chain_holds,
            "sum_t": str(self.sum_t), "sum_t2": str(self.sum_t2), "sum_s2": str(self.sum_s2),
        }


def cauchy_schwarz_counts(G: SimpleGraph) -> tuple[int, int, int]:
    """(sum T_x, sum T_x^2, sum S_uv^2), with both integer inequalities asserted."""
    n = G.n
    T = triangle_degrees(G)
    S = s_matrix(G)
    sum_t = exact_sum(T)
    sum_t2 = exact_sum_squares(T)
    sum_s = exact_sum(S)
    sum_s2 = exact_sum_squares(S)
    if sum_t2 != sum_s:
        raise InvariantBreach(f"sum T_x^2 = {sum_t2} but sum S_uv = {sum_s}")
    if sum_t * sum_t > n * sum_t2:
        raise InvariantBreach("(sum T_x)^2 > n sum T_x^2")
    if sum_s * sum_s > n * n * sum_s2:
        raise InvariantBreach("(sum S_uv)^2 > n^2 sum S_uv^2")
    return sum_t, sum_t2, sum_s2


def cauchy_schwarz_audit(G: SimpleGraph, p: float, restarts: int = DEFAULT_RESTARTS,
                         seed: int = 0, tdisc_mode: str = "heuristic") -> CauchySchwarzAudit:
    """Derive the smallest delta with t(K3) >= (1-delta)p^3 and t(C4tri) <= (1+delta)p^12,
    then compare the measured triangle discrepancy with 8 delta^(1/4) p^3."""
    p = _check_p(p)
    if p <= 0:
        raise DomainError("the audit needs p > 0")
    n = G.n
    sum_t, sum_t2, sum_s2 = cauchy_schwarz_counts(G)
    fp = Fraction(p)
    a = Fraction(sum_t) / (fp ** 3 * n ** 3)
    b = Fraction(sum_t2) / (fp ** 6 * n ** 5)
    c = Fraction(sum_s2) / (fp ** 12 * n ** 8)
    delta = max(1 - a, c - 1, Fraction(0))
    chain = a ** 4 <= b ** 2 <= c
    if delta <= 1:
        chain = chain and (1 - delta) ** 4 <= a ** 4 and c <= 1 + delta
    if not chain:
        raise InvariantBreach(f"Cauchy-Schwarz chain fails: a={float(a)}, b={float(b)}, c={float(c)}")
    bound = 8 * float(delta) ** 0.25 * p ** 3
    rep = triangle_discrepancy(G, p, mode=tdisc_mode, restarts=restarts, seed=seed)
    if delta <= 1 and rep.value > bound + 1e-12:
        raise InvariantBreach(f"triangle discrepancy {rep.value} exceeds the bound {bound}")
    return CauchySchwarzAudit(p, n, float(a), float(b), float(c), float(delta), bound, rep.value,
                              chain, sum_t, sum_t2, sum_s2, rep)
