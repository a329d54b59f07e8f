"""Simple graphs with packed adjacency rows and exact counting statistics.

All counts are Python integers, so identities between them can be checked
with ``==``.  Single-vertex statistics work on the packed rows
(``row[u] & row[v]`` followed by a popcount); whole-graph statistics go
through :func:`exact_matmul`, which only uses floating point when every
partial sum is guaranteed to be an integer below 2**53.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError

_FLOAT_EXACT = 2 ** 53
_INT64_SAFE = 2 ** 62


def _pack(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row.astype(np.uint8), bitorder="little").tobytes(), "little")


def _mask_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``range(n)`` stored as an integer bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"vertex set needs n >= 1, got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise DomainError(f"mask {self.mask:#x} exceeds n={self.n}")

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in indices:
            v = int(v)
            if not 0 <= v < n:
                raise DomainError(f"vertex {v} out of range for n={n}")
            mask |= 1 << v
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(n, (1 << n) - 1)

    def indices(self) -> list[int]:
        return _mask_indices(self.mask)

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        out[self.indices()] = 1
        return out

    def __iter__(self):
        return iter(self.indices())

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, v):
        return 0 <= v < self.n and bool(self.mask >> v & 1)

    def hex(self) -> str:
        return f"{self.mask:#x}"


class SimpleGraph:
    """Loop-free undirected graph on vertices ``0..n-1``.

    ``adj`` is a read-only ``uint8`` matrix; ``rows[v]`` is the
    neighbourhood of ``v`` packed into an int.
    """

    __slots__ = ("n", "adj", "rows")

    def __init__(self, adj):
        a = np.array(adj, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"adjacency must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DomainError("graph needs at least one vertex")
        if not np.isin(a, (0, 1)).all():
            raise DomainError("adjacency entries must be 0 or 1")
        if (a != a.T).any():
            raise DomainError("adjacency must be symmetric")
        if np.diagonal(a).any():
            raise DomainError("loops are not allowed")
        a = a.astype(np.uint8)
        a.flags.writeable = False
        self.n = a.shape[0]
        self.adj = a
        self.rows = tuple(_pack(r) for r in a)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        if n < 1:
            raise DomainError("graph needs at least one vertex")
        a = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            a[u, v] = a[v, u] = 1
        return cls(a)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(np.ones((n, n), dtype=np.uint8) - np.eye(n, dtype=np.uint8))

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(np.zeros((n, n), dtype=np.uint8))

    @classmethod
    def cycle(cls, n: int) -> "SimpleGraph":
        if n < 3:
            raise DomainError("cycle needs n >= 3")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def disjoint_cliques(cls, sizes: Iterable[int]) -> "SimpleGraph":
        sizes = [int(s) for s in sizes]
        labels = np.repeat(np.arange(len(sizes)), sizes)
        a = (labels[:, None] == labels[None, :]).astype(np.uint8)
        np.fill_diagonal(a, 0)
        return cls(a)

    @property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adj, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    def complement(self) -> "SimpleGraph":
        c = 1 - self.adj
        np.fill_diagonal(c, 0)
        return SimpleGraph(c)

    def relabel(self, perm) -> "SimpleGraph":
        """Graph in which old vertex ``v`` becomes ``perm[v]``."""
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise DomainError("relabel needs a permutation of range(n)")
        inv = np.argsort(perm)
        return SimpleGraph(self.adj[np.ix_(inv, inv)])

    def vertex_set(self, indices: Iterable[int]) -> VertexSet:
        return VertexSet.from_indices(self.n, indices)

    def all_vertices(self) -> VertexSet:
        return VertexSet.full(self.n)

    def __eq__(self, other):
        return isinstance(other, SimpleGraph) and self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, m={self.num_edges})"


def as_vertex_set(G: SimpleGraph, X) -> VertexSet:
    """Coerce ``X`` to a vertex set of ``G``; sets bound to another n are rejected."""
    if isinstance(X, VertexSet):
        if X.n != G.n:
            raise DomainError(f"vertex set built for n={X.n} used on a graph with n={G.n}")
        return X
    return VertexSet.from_indices(G.n, X)


def _check_vertex(G: SimpleGraph, v) -> int:
    v = int(v)
    if not 0 <= v < G.n:
        raise DomainError(f"vertex {v} out of range for n={G.n}")
    return v


# --- exact integer linear algebra -------------------------------------------

def exact_matmul(a: np.ndarray, b: np.ndarray, bound: int) -> np.ndarray:
    """Integer product ``a @ b`` where ``bound`` caps every |partial sum|.

    Uses BLAS in float64 when ``bound < 2**53`` (then every partial sum is
    an exactly representable integer), int64 below 2**62, object ints above.
    """
    if bound < _FLOAT_EXACT:
        out = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return np.rint(out).astype(np.int64)
    if bound < _INT64_SAFE:
        return np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)
    return np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)


def exact_sum(x: np.ndarray) -> int:
    if x.dtype == object:
        return int(sum(x.ravel().tolist()))
    x = np.asarray(x, dtype=np.int64)
    if x.size == 0:
        return 0
    if int(np.abs(x).max()) * x.size < _INT64_SAFE:
        return int(x.sum())
    return int(sum(x.ravel().tolist()))


def exact_sum_squares(x: np.ndarray) -> int:
    if x.dtype != object:
        x = np.asarray(x, dtype=np.int64)
        if x.size and int(np.abs(x).max()) ** 2 * x.size < _INT64_SAFE:
            return int(np.dot(x.ravel(), x.ravel()))
    return int(sum(v * v for v in (int(t) for t in x.ravel().tolist())))


def codegree_matrix(G: SimpleGraph) -> np.ndarray:
    """``C[u, v] = |N(u) & N(v)|``; the diagonal holds the degrees."""
    return exact_matmul(G.adj, G.adj, G.n)


def triangle_weight_matrix(G: SimpleGraph) -> np.ndarray:
    """``W[u, v] = adj(u, v) * codegree(u, v)``: triangles on each ordered edge."""
    return G.adj.astype(np.int64) * codegree_matrix(G)


def triangle_degrees(G: SimpleGraph) -> np.ndarray:
    """Vector of T_x over all vertices (ordered pairs closing a triangle at x)."""
    return triangle_weight_matrix(G).sum(axis=1)


def s_matrix(G: SimpleGraph) -> np.ndarray:
    """``S[u, v] = sum_x W[u, x] W[v, x]``, the two-triangle gadget counts."""
    W = triangle_weight_matrix(G)
    return exact_matmul(W, W, G.n ** 3)


# --- single-query statistics -------------------------------------------------

def edge_count_pairwise(G: SimpleGraph, X, Y) -> int:
    """Ordered-pair edge count e(X, Y); edges inside X & Y are counted twice."""
    X = as_vertex_set(G, X)
    Y = as_vertex_set(G, Y)
    rows = G.rows
    return sum((rows[x] & Y.mask).bit_count() for x in X)


def codegree(G: SimpleGraph, u, v) -> int:
    u = _check_vertex(G, u)
    v = _check_vertex(G, v)
    return (G.rows[u] & G.rows[v]).bit_count()


def triangle_degree(G: SimpleGraph, x) -> int:
    """T_x: ordered pairs (y, z) with xyz a triangle."""
    x = _check_vertex(G, x)
    rows = G.rows
    rx = rows[x]
    return sum((rx & rows[y]).bit_count() for y in _mask_indices(rx))


def s_count(G: SimpleGraph, u, v) -> int:
    """S_{u,v}: triples (x, y, z) with ux, uy, vx, vz, xy, xz all edges."""
    u = _check_vertex(G, u)
    v = _check_vertex(G, v)
    rows = G.rows
    total = 0
    for x in _mask_indices(rows[u] & rows[v]):
        total += (rows[u] & rows[x]).bit_count() * (rows[v] & rows[x]).bit_count()
    return total


def triangle_triples(G: SimpleGraph, A, B, C) -> int:
    """Labelled triangle count: triples in A x B x C spanning a triangle."""
    A = as_vertex_set(G, A)
    B = as_vertex_set(G, B)
    C = as_vertex_set(G, C)
    rows = G.rows
    total = 0
    for a in A:
        ra = rows[a]
        for b in _mask_indices(ra & B.mask):
            total += (ra & rows[b] & C.mask).bit_count()
    return total
