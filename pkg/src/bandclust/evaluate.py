"""Planted-block benchmarks, block extraction and recovery scoring."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ConfigError
from .matrix import Arrangement, DataMatrix, _check_shapes, as_data_matrix


@dataclass(frozen=True)
class Bicluster:
    row_indices: frozenset
    col_indices: frozenset

    def __init__(self, row_indices, col_indices):
        rows = frozenset(int(i) for i in row_indices)
        cols = frozenset(int(j) for j in col_indices)
        if not rows or not cols:
            raise ValueError("a bicluster needs at least one row and one column")
        if min(rows) < 0 or min(cols) < 0:
            raise ValueError("bicluster indices must be nonnegative")
        object.__setattr__(self, "row_indices", rows)
        object.__setattr__(self, "col_indices", cols)

    @property
    def size(self) -> int:
        return len(self.row_indices) * len(self.col_indices)

    def to_dict(self) -> dict:
        return {"rows": sorted(self.row_indices), "cols": sorted(self.col_indices)}

    @classmethod
    def from_dict(cls, data: dict) -> "Bicluster":
        return cls(data["rows"], data["cols"])


@dataclass
class GroundTruth:
    blocks: List[Bicluster]
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {"blocks": [b.to_dict() for b in self.blocks], "seed": self.seed, "params": self.params}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GroundTruth":
        doc = json.loads(text)
        blocks = doc["blocks"] if isinstance(doc, dict) else doc
        if isinstance(doc, dict):
            return cls([Bicluster.from_dict(b) for b in blocks], doc.get("seed"), doc.get("params", {}))
        return cls([Bicluster.from_dict(b) for b in blocks])


def blocks_to_json(blocks) -> str:
    return json.dumps([b.to_dict() for b in blocks], indent=2, sort_keys=True) + "\n"


def chunk_sizes(total: int, k: int) -> List[int]:
    """Split ``total`` into ``k`` near-equal parts, remainder going to earlier parts."""
    base, extra = divmod(total, k)
    return [base + 1 if b < extra else base for b in range(k)]


def generate_synthetic(m: int, n: int, k: int, value_range=(1, 9), noise: float = 0.0, seed: int = 0):
    """Block-diagonal integer matrix with ``k`` planted biclusters.

    Returns ``(matrix, truth)``. With ``noise > 0`` every cell is independently
    replaced, with that probability, by a uniform draw from ``{0} | [lo, hi]``.
    """
    lo, hi = (int(v) for v in value_range)
    if k < 1 or k > min(m, n):
        raise ConfigError(f"block count must satisfy 1 <= k <= min(m, n) = {min(m, n)}, got {k}")
    if lo < 1 or hi < lo:
        raise ConfigError(f"value range must satisfy 1 <= lo <= hi, got ({lo}, {hi})")
    if not 0.0 <= noise < 1.0:
        raise ConfigError(f"noise must lie in [0, 1), got {noise}")
    rng = np.random.default_rng(seed)
    values = np.zeros((m, n), dtype=np.float64)
    row_edges = np.concatenate([[0], np.cumsum(chunk_sizes(m, k))])
    col_edges = np.concatenate([[0], np.cumsum(chunk_sizes(n, k))])
    blocks = []
    for b in range(k):
        r0, r1 = row_edges[b], row_edges[b + 1]
        c0, c1 = col_edges[b], col_edges[b + 1]
        values[r0:r1, c0:c1] = rng.integers(lo, hi + 1, size=(r1 - r0, c1 - c0))
        blocks.append(Bicluster(range(r0, r1), range(c0, c1)))
    if noise > 0:
        flip = rng.random((m, n)) < noise
        # draw index 0 -> zero, 1..hi-lo+1 -> lo..hi
        draws = rng.integers(0, hi - lo + 2, size=(m, n))
        values[flip] = np.where(draws == 0, 0, draws + lo - 1)[flip]
    params = {"m": m, "n": n, "k": k, "value_range": [lo, hi], "noise": noise}
    return DataMatrix(values), GroundTruth(blocks, seed, params)


def _claim_strays(active_lines, blocks_other, strays, blocks_own) -> list:
    # each stray joins the block holding most of its active cells, ties to the earlier block
    left = []
    for line in strays:
        hits = [int(active_lines[line, other].sum()) for other in blocks_other]
        if hits and max(hits) > 0:
            blocks_own[int(np.argmax(hits))].append(line)
        else:
            left.append(line)
    return left


def _scan(active: np.ndarray):
    """Diagonal scan over a boolean matrix; returns per-block row and column position lists."""
    m, n = active.shape
    row_any, col_any = active.any(axis=1), active.any(axis=0)
    rows_of, cols_of = [], []
    stray_rows, stray_cols = [], []
    r = c = 0
    while r < m and c < n:
        hits = np.flatnonzero(active[r, c:])
        if hits.size == 0:
            if row_any[r]:
                stray_rows.append(r)
            r += 1
            continue
        c0 = c + int(hits[0])
        stray_cols.extend(j for j in range(c, c0) if col_any[j])
        r0 = r
        rows, cols = [r], [c0]
        r1, c1 = r + 1, c0 + 1
        while True:
            if r1 < m and (not row_any[r1] or active[r1, cols].any()):
                if row_any[r1]:
                    rows.append(r1)
                r1 += 1
            elif r1 < m and not active[r1, c0:].any():
                stray_rows.append(r1)
                r1 += 1
            elif c1 < n and (not col_any[c1] or active[rows, c1].any()):
                if col_any[c1]:
                    cols.append(c1)
                c1 += 1
            elif c1 < n and not active[r0:, c1].any():
                stray_cols.append(c1)
                c1 += 1
            else:
                break
        rows_of.append(rows)
        cols_of.append(cols)
        r, c = r1, c1
    stray_rows.extend(i for i in range(r, m) if row_any[i])
    stray_cols.extend(j for j in range(c, n) if col_any[j])
    # claims can enable further claims, so repeat until nothing moves
    while stray_rows or stray_cols:
        block_rows = [list(x) for x in rows_of]
        block_cols = [list(x) for x in cols_of]
        left_r = _claim_strays(active, block_cols, stray_rows, rows_of)
        left_c = _claim_strays(active.T, block_rows, stray_cols, cols_of)
        if len(left_r) == len(stray_rows) and len(left_c) == len(stray_cols):
            break
        stray_rows, stray_cols = left_r, left_c
    # whatever is left only touches other leftovers, so it forms blocks of its own
    left_r, left_c = stray_rows, stray_cols
    if left_r and left_c:
        sub = active[np.ix_(left_r, left_c)]
        if sub.any():
            for rows, cols in zip(*_scan(sub)):
                rows_of.append([left_r[i] for i in rows])
                cols_of.append([left_c[j] for j in cols])
    return rows_of, cols_of


def extract_blocks(A_reordered, arr: Arrangement, tau: float = 0.0) -> List[Bicluster]:
    """Read diagonal blocks off a reordered matrix.

    Walks down the diagonal: a block opens at the next row with an active cell
    (``|a| > tau``) at or right of the current column, then grows one row or
    column at a time while the next line has an active cell inside the block.
    Empty lines are skipped. A line whose active cells all sit in the columns
    (rows) of earlier blocks is a stray left behind by the ordering; it is set
    aside instead of closing the block, and afterwards joins the block that
    holds most of its active cells. Strays that no block claims are scanned
    again among themselves. Positions are mapped back to original indices
    through ``arr``.
    """
    A = as_data_matrix(A_reordered)
    _check_shapes(A, arr)
    active = np.abs(A.values) > tau
    if not active.any():
        return []
    rows_of, cols_of = _scan(active)
    return [Bicluster(arr.row_perm[rows], arr.col_perm[cols]) for rows, cols in zip(rows_of, cols_of)]


def _jaccard(a: Bicluster, b: Bicluster) -> float:
    inter = len(a.row_indices & b.row_indices) * len(a.col_indices & b.col_indices)
    union = a.size + b.size - inter
    return inter / union if union else 0.0


def recovery_score(found, truth) -> float:
    """Mean over truth blocks of the best cell-level Jaccard with any found block."""
    found, truth = list(found), list(truth)
    if not truth or not found:
        return 0.0
    return float(np.mean([max(_jaccard(t, f) for f in found) for t in truth]))
