"""Text and JSON file formats.

Edge lists: ``#`` comment lines anywhere, then a first data line ``n m``
followed by exactly ``m`` lines ``u v`` with 0-based vertices.  Patterns use
the same layout with a ``# pattern <name>`` comment.  Kernels, partitions
and reduced matrices are JSON objects.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import CapacityError, DomainError, ParseError
from .graph import SimpleGraph, VertexSet
from .kernels import StepKernel
from .patterns import Pattern
from .regularity import Partition, ReducedMatrix


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def format_edge_list(n: int, edges, comments=()) -> str:
    edges = list(edges)
    lines = [f"# {c}" for c in comments]
    lines.append(f"{n} {len(edges)}")
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> tuple[int, list[tuple[int, int]], list[str]]:
    """(n, edges, comments) with the edges exactly as listed."""
    comments, data = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        try:
            a, b = (int(tok) for tok in line.split())
        except ValueError:
            raise ParseError(f"line {lineno}: expected two integers, got {raw!r}") from None
        data.append((lineno, a, b))
    if not data:
        raise ParseError("missing the 'n m' header line")
    _, n, m = data[0]
    if n < 1 or m < 0:
        raise ParseError(f"bad header: n={n}, m={m}")
    if len(data) - 1 != m:
        raise ParseError(f"header declares {m} edges but {len(data) - 1} follow")
    edges = []
    for lineno, u, v in data[1:]:
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: vertex out of range 0..{n - 1}")
        edges.append((u, v))
    return n, edges, comments


def graph_to_text(G: SimpleGraph, comments=()) -> str:
    return format_edge_list(G.n, G.edges(), comments)


def graph_from_text(text: str) -> SimpleGraph:
    n, edges, _ = parse_edge_list(text)
    adj = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        if u == v:
            raise ParseError(f"loop at vertex {u}")
        if adj[u, v]:
            raise ParseError(f"duplicate edge {u} {v}")
        adj[u, v] = adj[v, u] = 1
    return SimpleGraph(adj)


def pattern_to_text(F: Pattern) -> str:
    return format_edge_list(F.k, F.edges, [f"pattern {F.name or 'unnamed'}"])


def pattern_from_text(text: str) -> Pattern:
    n, edges, comments = parse_edge_list(text)
    name = None
    for c in comments:
        if c.startswith("pattern "):
            name = c[len("pattern "):].strip() or None
    try:
        return Pattern(n, tuple(edges), name)
    except CapacityError:
        raise
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def kernel_to_text(K: StepKernel) -> str:
    return json.dumps(K.to_json(), indent=2) + "\n"


def kernel_from_text(text: str) -> StepKernel:
    try:
        return StepKernel.from_json(_load_json(text))
    except DomainError as exc:
        raise ParseError(f"kernel schema: {exc}") from None


def partition_to_text(P: Partition) -> str:
    return json.dumps({"n": P.n, "classes": P.to_json()}, indent=2) + "\n"


def partition_from_text(text: str) -> Partition:
    obj = _load_json(text)
    try:
        n = int(obj["n"])
        classes = [VertexSet(n, int(h, 16)) for h in obj["classes"]]
        return Partition(n, classes)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"partition schema: {exc}") from None


def reduced_to_text(R: ReducedMatrix) -> str:
    return json.dumps(R.to_json(), indent=2) + "\n"


def reduced_from_text(text: str) -> ReducedMatrix:
    obj = _load_json(text)
    try:
        R = ReducedMatrix(obj["d"], [int(s) for s in obj["sizes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"reduced matrix schema: {exc}") from None
    if R.t != int(obj.get("t", R.t)) or len(R.sizes) != R.t:
        raise ParseError("reduced matrix: t, sizes and d disagree")
    return R
