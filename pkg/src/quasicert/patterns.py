"""Small pattern graphs and exact homomorphism counting.

Two generic counters are provided.  The default one contracts the edge
factors of the pattern one vertex at a time (bucket elimination over a
greedy min-degree order) in exact integer arithmetic.  The backtracking
counter walks the pattern vertex by vertex, prunes candidates by AND-ing
packed adjacency rows, splits off independent components of the unassigned
part and memoises them on the images of their boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError
from .graph import (
    SimpleGraph,
    _mask_indices,
    codegree_matrix,
    exact_sum,
    exact_sum_squares,
    s_matrix,
    triangle_degrees,
    triangle_weight_matrix,
)

MAX_PATTERN_VERTICES = 20
# einsum iterates over n**|scope| * batch index tuples per elimination step
MAX_CONTRACTION_WORK = 2 * 10 ** 9
_LETTERS = "abcdefghijklmnopqrstuvwxy"
_INT64_SAFE = 2 ** 62
_WIDE_LIMIT = 2 ** 128


@dataclass(frozen=True)
class Pattern:
    k: int
    edges: tuple[tuple[int, int], ...]
    name: str | None = None
    adjacency: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.k <= MAX_PATTERN_VERTICES:
            raise CapacityError(f"pattern has {self.k} vertices; capacity is {MAX_PATTERN_VERTICES}")
        norm = []
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise DomainError(f"pattern loop at {a}")
            if not (0 <= a < self.k and 0 <= b < self.k):
                raise DomainError(f"pattern edge ({a}, {b}) out of range")
            norm.append((min(a, b), max(a, b)))
        if len(set(norm)) != len(norm):
            raise DomainError("duplicate pattern edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        adj = np.zeros((self.k, self.k), dtype=np.uint8)
        for a, b in self.edges:
            adj[a, b] = adj[b, a] = 1
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbours(self) -> list[set[int]]:
        nb = [set() for _ in range(self.k)]
        for a, b in self.edges:
            nb[a].add(b)
            nb[b].add(a)
        return nb

    def degree_sequence(self) -> list[int]:
        return sorted((int(d) for d in self.adjacency.sum(axis=1)), reverse=True)

    def relabel(self, perm) -> "Pattern":
        return Pattern(self.k, tuple((perm[a], perm[b]) for a, b in self.edges), self.name)


def complete_pattern(k: int) -> Pattern:
    return Pattern(k, tuple(combinations(range(k), 2)), f"K{k}")


def cycle_pattern(k: int) -> Pattern:
    return Pattern(k, tuple((i, (i + 1) % k) for i in range(k)), f"C{k}")


def path_pattern(k: int) -> Pattern:
    """Path on ``k`` vertices (``k - 1`` edges)."""
    return Pattern(k, tuple((i, i + 1) for i in range(k - 1)), f"P{k}")


def disjoint_union(F1: Pattern, F2: Pattern) -> Pattern:
    shift = F1.k
    edges = F1.edges + tuple((a + shift, b + shift) for a, b in F2.edges)
    return Pattern(F1.k + F2.k, edges)


def expand_triangle(F: Pattern) -> Pattern:
    """Give every edge ab of ``F`` a fresh apex joined to a and b.

    Apexes are numbered ``F.k, F.k + 1, ...`` in the order of ``F.edges``.
    """
    k = F.k + F.num_edges
    if k > MAX_PATTERN_VERTICES:
        raise CapacityError(f"triangle expansion needs {k} vertices; capacity is {MAX_PATTERN_VERTICES}")
    edges = list(F.edges)
    for i, (a, b) in enumerate(F.edges):
        x = F.k + i
        edges += [(a, x), (b, x)]
    name = f"{F.name}tri" if F.name else None
    return Pattern(k, tuple(edges), name)


def _cube_line_graph() -> Pattern:
    cube_edges = [(u, u | 1 << i) for u in range(8) for i in range(3) if not u >> i & 1]
    edges = [
        (i, j)
        for i, j in combinations(range(len(cube_edges)), 2)
        if set(cube_edges[i]) & set(cube_edges[j])
    ]
    M = Pattern(len(cube_edges), tuple(edges), "M")
    if M.k != 12 or M.num_edges != 24 or set(M.degree_sequence()) != {4}:
        raise AssertionError("line graph of the 3-cube has the wrong parameters")
    return M


def _builtin(name: str) -> Pattern:
    if name == "K2":
        return complete_pattern(2)
    if name == "K3":
        return complete_pattern(3)
    if name == "C4":
        return cycle_pattern(4)
    if name == "S":
        return Pattern(5, ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)), "S")
    if name == "M":
        return _cube_line_graph()
    if name == "C4tri":
        return expand_triangle(cycle_pattern(4))
    raise DomainError(f"unknown pattern {name!r}; expected one of {BUILTIN_NAMES}")


BUILTIN_NAMES = ("K2", "K3", "C4", "S", "M", "C4tri")


def builtin_pattern(name: str) -> Pattern:
    return _builtin(name)


# --- bucket elimination -----------------------------------------------------

def elimination_order(F: Pattern) -> list[int]:
    """Greedy min-degree order on the interaction graph, ties by index."""
    nb = F.neighbours()
    remaining = set(range(F.k))
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (len(nb[u] & remaining), u))
        live = nb[v] & remaining - {v}
        for a in live:
            nb[a] |= live - {a}
        remaining.discard(v)
        order.append(v)
    return order


def _contract(F: Pattern, weights: np.ndarray, max_weight: int | None,
              vertex_weights: np.ndarray | None = None) -> np.ndarray:
    """Sum over all maps V(F) -> [n] of the product of edge weights.

    ``weights`` has shape (batch, n, n); returns one value per batch entry.
    With ``max_weight`` given the arithmetic is exact integer (int64 when the
    result provably fits, Python ints otherwise); with ``None`` it is float64
    and ``vertex_weights`` (shape (batch, n)) may weight every pattern vertex.
    """
    batch, n, _ = weights.shape
    if max_weight is None:
        dtype = np.float64
    else:
        bound = max(max_weight, 1) ** F.num_edges * n ** F.k
        dtype = np.int64 if bound < _INT64_SAFE else object
    w = weights.astype(dtype)
    factors = [((a, b), w) for a, b in F.edges]
    if vertex_weights is not None:
        vw = np.asarray(vertex_weights, dtype=dtype)
        factors += [((v,), vw) for v in range(F.k)]
    scalars = [np.ones(batch, dtype=dtype)]
    for v in elimination_order(F):
        bucket = [f for f in factors if v in f[0]]
        factors = [f for f in factors if v not in f[0]]
        if not bucket:
            scalars.append(np.full(batch, n, dtype=dtype))
            continue
        scope = sorted(set().union(*(s for s, _ in bucket)))
        if batch * n ** len(scope) > MAX_CONTRACTION_WORK:
            raise CapacityError(
                f"contraction step over {len(scope)} pattern vertices with n={n} exceeds the work guard"
            )
        out = [u for u in scope if u != v]
        subscripts = ",".join("z" + "".join(_LETTERS[u] for u in s) for s, _ in bucket)
        subscripts += "->z" + "".join(_LETTERS[u] for u in out)
        arr = np.einsum(subscripts, *(a for _, a in bucket), optimize=False)
        if out:
            factors.append((tuple(out), arr))
        else:
            scalars.append(arr)
    result = scalars[0]
    for s in scalars[1:]:
        result = result * s
    return result


def _hom_backtrack(F: Pattern, rows: tuple[int, ...], n: int) -> int:
    nb = F.neighbours()
    full = (1 << n) - 1
    memo: dict = {}
    assign: dict[int, int] = {}

    def components(vertices: frozenset) -> list[frozenset]:
        seen, comps = set(), []
        for s in sorted(vertices):
            if s in seen:
                continue
            stack, comp = [s], {s}
            while stack:
                u = stack.pop()
                for w in nb[u]:
                    if w in vertices and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def count_all(remaining: frozenset) -> int:
        total = 1
        for comp in components(remaining):
            boundary = sorted({u for v in comp for u in nb[v] if u in assign})
            key = (comp, tuple(assign[u] for u in boundary))
            c = memo.get(key)
            if c is None:
                c = count_component(comp)
                memo[key] = c
            if c == 0:
                return 0
            total *= c
        return total

    def count_component(comp: frozenset) -> int:
        v = min(comp, key=lambda u: (-sum(1 for w in nb[u] if w in assign), u))
        cand = full
        for w in nb[v]:
            if w in assign:
                cand &= rows[assign[w]]
        if len(comp) == 1:
            return cand.bit_count()
        rest = comp - {v}
        total = 0
        for x in _mask_indices(cand):
            assign[v] = x
            total += count_all(rest)
        assign.pop(v, None)
        return total

    return count_all(frozenset(range(F.k)))


def hom_count(F: Pattern, G: SimpleGraph, method: str = "eliminate") -> int:
    """Number of (not necessarily injective) homomorphisms F -> G."""
    if method == "eliminate":
        return int(_contract(F, G.adj[None, :, :], 1)[0])
    if method == "backtrack":
        return _hom_backtrack(F, G.rows, G.n)
    raise DomainError(f"unknown method {method!r}")


def hom_count_many(F: Pattern, adjacency_stack: np.ndarray) -> list[int]:
    """hom(F, G) for a stack of adjacency matrices of equal order."""
    stack = np.asarray(adjacency_stack)
    if stack.ndim != 3:
        raise DomainError("expected an array of shape (batch, n, n)")
    return [int(v) for v in _contract(F, stack, 1)]


def hom_density_exact(F: Pattern, G: SimpleGraph) -> tuple[int, int]:
    return hom_count(F, G), G.n ** F.k


def hom_density(F: Pattern, G: SimpleGraph) -> float:
    num, den = hom_density_exact(F, G)
    return float(Fraction(num, den))


# --- specialised counters ----------------------------------------------------

FAST_NAMES = ("K2", "K3", "C4", "S", "C4tri")


def fast_numerator(name: str, G: SimpleGraph) -> tuple[int, int]:
    """(hom count, n**v(F)) through the triangle statistics T_x and S_{u,v}."""
    n = G.n
    if name == "K2":
        return 2 * G.num_edges, n ** 2
    if name == "K3":
        return exact_sum(triangle_degrees(G)), n ** 3
    if name == "C4":
        return exact_sum_squares(codegree_matrix(G)), n ** 4
    if name == "S":
        return exact_sum_squares(triangle_degrees(G)), n ** 5
    if name == "C4tri":
        return exact_sum_squares(s_matrix(G)), n ** 8
    raise DomainError(f"no fast counter for {name!r}; supported: {FAST_NAMES}")


def fast_density(name: str, G: SimpleGraph) -> float:
    num, den = fast_numerator(name, G)
    return float(Fraction(num, den))


# --- weighted graphs and the discrete triangle operator ---------------------

@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric non-negative rational weights ``numerators / denominator``."""

    numerators: np.ndarray
    denominator: int

    def __post_init__(self):
        w = np.asarray(self.numerators)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DomainError("weights must be a square matrix")
        if (w != w.T).any():
            raise DomainError("weights must be symmetric")
        if (w < 0).any():
            raise DomainError("weights must be non-negative")
        if int(self.denominator) <= 0:
            raise DomainError("denominator must be positive")

    @property
    def n(self) -> int:
        return int(np.asarray(self.numerators).shape[0])

    def weight(self, u: int, v: int) -> Fraction:
        return Fraction(int(self.numerators[u, v]), int(self.denominator))


def graph_triangle_kernel(G: SimpleGraph) -> WeightedGraph:
    """U_G: each edge weighted by its codegree over n, non-edges zero."""
    return WeightedGraph(triangle_weight_matrix(G), G.n)


def weighted_hom_numerator(F: Pattern, H: WeightedGraph) -> int:
    """Sum over maps V(F) -> V(H) of the product of edge numerators."""
    w = np.asarray(H.numerators)
    top = int(w.max()) if w.size else 0
    value = int(_contract(F, w[None, :, :], top)[0])
    if value >= _WIDE_LIMIT:
        raise CapacityError(f"weighted homomorphism numerator exceeds 128 bits ({value.bit_length()} bits)")
    return value


def weighted_hom_density(F: Pattern, H: WeightedGraph) -> Fraction:
    return Fraction(weighted_hom_numerator(F, H), int(H.denominator) ** F.num_edges * H.n ** F.k)


# --- pattern names and forcing-pair slack ------------------------------------

def pattern_from_name(name: str) -> Pattern:
    """Builtins, ``K<k>``, ``C<k>``, ``P<k>``, and any of these with a
    ``tri`` suffix for the triangle expansion."""
    if name in BUILTIN_NAMES:
        return builtin_pattern(name)
    if name.endswith("tri") and len(name) > 3:
        return expand_triangle(pattern_from_name(name[:-3]))
    kind, size = name[:1], name[1:]
    if kind in "KCP" and size.isdigit():
        k = int(size)
        if kind == "K" and k >= 1:
            return complete_pattern(k)
        if kind == "C" and k >= 3:
            return cycle_pattern(k)
        if kind == "P" and k >= 1:
            return path_pattern(k)
    raise DomainError(f"unknown pattern {name!r}")


def density_exact(F: Pattern, G: SimpleGraph) -> tuple[int, int]:
    """(hom, n**v(F)) by the fast counter when F is a builtin with one, else generically."""
    if F.name in FAST_NAMES and F == builtin_pattern(F.name):
        return fast_numerator(F.name, G)
    return hom_density_exact(F, G)


def forcing_delta(G: SimpleGraph, p: float, F: Pattern) -> Fraction:
    """Smallest delta >= 0 with t(K3, G) >= (1 - delta) p^3 and
    t(F^tri, G) <= (1 + delta) p^e(F^tri)."""
    fp = Fraction(p)
    if not 0 < fp <= 1:
        raise DomainError(f"p must lie in (0, 1], got {p}")
    Ft = expand_triangle(F)
    k3 = Fraction(*fast_numerator("K3", G))
    ft = Fraction(*density_exact(Ft, G))
    return max(1 - k3 / fp ** 3, ft / fp ** Ft.num_edges - 1, Fraction(0))
