"""Maximisation of |x^T R y| over 0/1 vectors x, y.

For a fixed row set the objective is linear in the column indicator, so the
best column set for each sign is "take every column whose marginal has that
sign".  The exact search enumerates row sets in increasing bitmask order and
keeps the first strict maximum; the heuristic alternates best responses from
random starts.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

EXACT_ROW_LIMIT = 24
_LOW_BITS = 13


def thread_count() -> int:
    """Worker count from ``QUASICERT_THREADS`` (0 or unset means all cores)."""
    raw = os.environ.get("QUASICERT_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k <= 0:
        k = os.cpu_count() or 1
    return k


@dataclass
class BilinearOptimum:
    value: float
    rows: np.ndarray  # bool, selected row indices
    cols: np.ndarray  # bool, selected column indices
    sign: int
    iterations: int = 0


def _subset_bits(k: int) -> np.ndarray:
    masks = np.arange(1 << k, dtype=np.int64)
    return ((masks[:, None] >> np.arange(k)) & 1).astype(np.float64)


def _scan_block(R_lo_sums, hi_rows, lo_bits):
    """Best (value, local index, sign) over row sets ``hi | lo`` for one hi."""
    D = R_lo_sums + hi_rows
    pos = np.maximum(D, 0.0).sum(axis=1)
    neg = np.maximum(-D, 0.0).sum(axis=1)
    val = np.maximum(pos, neg)
    i = int(np.argmax(val))
    return float(val[i]), i, 1 if pos[i] >= neg[i] else -1


def maximize_exact(R: np.ndarray, workers: int | None = None) -> BilinearOptimum:
    R = np.asarray(R, dtype=np.float64)
    r, _ = R.shape
    if r > EXACT_ROW_LIMIT:
        raise CapacityError(f"exact search enumerates 2^{r} row sets; limit is {EXACT_ROW_LIMIT} rows")
    k = min(r, _LOW_BITS)
    h = r - k
    lo_sums = _subset_bits(k) @ R[:k]
    hi_part = R[k:]

    def scan(hi_range):
        best = (-1.0, 0, 0, 1)
        for hi in hi_range:
            idx = [j for j in range(h) if hi >> j & 1]
            row = hi_part[idx].sum(axis=0) if idx else 0.0
            v, i, s = _scan_block(lo_sums, row, k)
            if v > best[0]:
                best = (v, hi, i, s)
        return best

    total = 1 << h
    workers = workers or thread_count()
    if workers > 1 and total >= 2 * workers:
        step = -(-total // workers)
        chunks = [range(a, min(a + step, total)) for a in range(0, total, step)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(scan, chunks))
    else:
        results = [scan(range(total))]
    best = results[0]
    for res in results[1:]:
        if res[0] > best[0]:
            best = res
    value, hi, lo, sign = best
    mask = hi << k | lo
    rows = np.array([(mask >> j) & 1 for j in range(r)], dtype=bool)
    marg = rows.astype(np.float64) @ R
    cols = sign * marg > 0
    return BilinearOptimum(value, rows, cols, sign)


def _alternate(R, x, sign, max_iter=1000):
    prev = -np.inf
    it = 0
    while it < max_iter:
        it += 1
        y = sign * (x @ R) > 0
        x_new = sign * (R @ y.astype(np.float64)) > 0
        val = sign * float(x_new.astype(np.float64) @ R @ y.astype(np.float64))
        if val <= prev + 1e-12:
            break
        x, prev = x_new.astype(np.float64), val
    y = sign * (x @ R) > 0
    return x.astype(bool), y, sign * float(x @ R @ y.astype(np.float64)), it


def maximize_heuristic(R: np.ndarray, restarts: int = 32, seed: int = 0) -> BilinearOptimum:
    R = np.asarray(R, dtype=np.float64)
    rng = np.random.default_rng(seed)
    best = None
    steps = 0
    for _ in range(restarts):
        start = (rng.random(R.shape[0]) < 0.5).astype(np.float64)
        for sign in (1, -1):
            x, y, val, it = _alternate(R, start, sign)
            steps += it
            if best is None or val > best.value:
                best = BilinearOptimum(val, x, y, sign)
    best.iterations = steps
    return best
